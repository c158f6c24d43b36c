use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::Rational;

/// Sparse vectors over the rationals kept in reduced row-echelon form.
///
/// Keys are arbitrary ordered coordinates (PBW monomials, exponent vectors).
#[derive(Clone, Debug)]
pub struct EchelonBasis<K: Ord + Clone> {
    // pivot key -> row with coefficient 1 at the pivot and 0 at every other pivot
    rows: BTreeMap<K, BTreeMap<K, Rational>>,
}

impl<K: Ord + Clone> Default for EchelonBasis<K> {
    fn default() -> Self {
        Self {
            rows: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> EchelonBasis<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Remainder of `v` after eliminating every pivot.
    pub fn reduce(&self, v: &BTreeMap<K, Rational>) -> BTreeMap<K, Rational> {
        let mut out = v.clone();
        for (pivot, row) in &self.rows {
            let Some(c) = out.get(pivot).cloned() else {
                continue;
            };
            for (k, r) in row {
                let e = out.entry(k.clone()).or_insert_with(Rational::zero);
                *e -= &c * r;
                if e.is_zero() {
                    out.remove(k);
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &BTreeMap<K, Rational>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v`; returns `false` if it was already in the span.
    pub fn insert(&mut self, v: &BTreeMap<K, Rational>) -> bool {
        let rem = self.reduce(v);
        let Some((pivot, c)) = rem.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = Rational::one() / c;
        let row: BTreeMap<K, Rational> = rem.into_iter().map(|(k, x)| (k, x * &inv)).collect();
        for other in self.rows.values_mut() {
            if let Some(f) = other.get(&pivot).cloned() {
                for (k, r) in &row {
                    let e = other.entry(k.clone()).or_insert_with(Rational::zero);
                    *e -= &f * r;
                    if e.is_zero() {
                        other.remove(k);
                    }
                }
            }
        }
        self.rows.insert(pivot, row);
        true
    }

    pub fn rows(&self) -> impl Iterator<Item = &BTreeMap<K, Rational>> {
        self.rows.values()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qi;

    fn v(entries: &[(u8, i64)]) -> BTreeMap<u8, Rational> {
        entries.iter().map(|&(k, c)| (k, qi(c))).collect()
    }

    #[test]
    fn rank_and_membership() {
        let mut b = EchelonBasis::new();
        assert!(b.insert(&v(&[(0, 1), (1, 2)])));
        assert!(b.insert(&v(&[(1, 1), (2, 1)])));
        assert!(!b.insert(&v(&[(0, 1), (1, 3), (2, 1)])));
        assert_eq!(b.dim(), 2);
        assert!(b.contains(&v(&[(0, 2), (1, 4)])));
        assert!(!b.contains(&v(&[(2, 1)])));
        assert!(!b.insert(&BTreeMap::new()));
    }
}
