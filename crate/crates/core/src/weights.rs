//! The two families of admissible weights `S_1^n`, `S_2^n` and the level-one
//! dominant integral weights, built by the Minkowski-sum recursion.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cartan::AffineWeight;
use crate::error::{Error, Result};
use crate::exact::{q, qi, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SetLabel {
    S1,
    S2,
    #[serde(rename = "P+1")]
    PPlus1,
}

impl fmt::Display for SetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SetLabel::S1 => "S1",
            SetLabel::S2 => "S2",
            SetLabel::PPlus1 => "P+1",
        })
    }
}

/// A deduplicated, canonically sorted set of affine weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSet {
    pub label: SetLabel,
    pub n: u32,
    pub rank: usize,
    pub members: Vec<AffineWeight>,
}

impl WeightSet {
    /// Builds a set from `Lambda`-coefficient vectors, sorted and deduplicated.
    pub fn from_members(
        label: SetLabel,
        n: u32,
        rank: usize,
        members: BTreeSet<Vec<Rational>>,
    ) -> Self {
        Self {
            label,
            n,
            rank,
            members: members.into_iter().map(AffineWeight::new).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Membership in the `Lambda` basis; the `delta` coefficient is ignored.
    pub fn contains(&self, lambda: &AffineWeight) -> bool {
        self.members.iter().any(|m| m.same_lambda(lambda))
    }

    /// `<lambda, c>` common to all members.
    pub fn level(&self) -> Rational {
        match self.label {
            SetLabel::PPlus1 => qi(1),
            _ => level_of(self.n),
        }
    }

    pub fn lambda_keys(&self) -> BTreeSet<Vec<Rational>> {
        self.members.iter().map(|m| m.coeffs.clone()).collect()
    }
}

/// `n - 3/2`.
pub fn level_of(n: u32) -> Rational {
    qi(n as i64) - q(3, 2)
}

/// `{Lambda_0, ..., Lambda_l}`.
pub fn p_plus_1(rank: usize) -> Result<WeightSet> {
    if rank < 2 {
        return Err(Error::RankTooSmall(rank));
    }
    let members = (0..=rank)
        .map(|i| AffineWeight::fundamental(rank, i).coeffs)
        .collect();
    Ok(WeightSet::from_members(SetLabel::PPlus1, 1, rank, members))
}

/// `S_i^n` for `i in {1, 2}`.
///
/// `S_1^1 = {-1/2 L0, -3/2 L0 + L1}` and
/// `S_1^{n+1} = (S_1^n + P_+^1) u {-(n+3/2) L0 + (2n+1) L1}`; `S_2` mirrors this
/// on the `L_l`, `L_{l-1}` end of the diagram.
pub fn enumerate_s(which: u8, n: u32, rank: usize) -> Result<WeightSet> {
    if rank < 2 {
        return Err(Error::RankTooSmall(rank));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let (label, end, next) = match which {
        1 => (SetLabel::S1, 0, 1),
        2 => (SetLabel::S2, rank, rank - 1),
        _ => {
            return Err(Error::InvalidParameter(format!(
                "no weight family S{which}"
            )))
        }
    };
    let exceptional = |k: u32| {
        // -(k + 1/2) L_end + (2k - 1) L_next, the weight added at level k - 3/2
        let mut w = AffineWeight::zero(rank);
        w.coeffs[end] = -(qi(k as i64) + q(1, 2));
        w.coeffs[next] = qi(2 * k as i64 - 1);
        w.coeffs
    };

    let fundamentals: Vec<AffineWeight> = (0..=rank)
        .map(|i| AffineWeight::fundamental(rank, i))
        .collect();
    let mut current: BTreeSet<Vec<Rational>> = BTreeSet::new();
    current.insert(AffineWeight::fundamental(rank, end).scale(&q(-1, 2)).coeffs);
    current.insert(exceptional(1));
    for k in 1..n {
        let mut next_set = BTreeSet::new();
        for w in &current {
            let w = AffineWeight::new(w.clone());
            for f in &fundamentals {
                next_set.insert((&w + f).coeffs);
            }
        }
        next_set.insert(exceptional(k + 1));
        current = next_set;
    }
    Ok(WeightSet::from_members(label, n, rank, current))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(c: &[(i64, i64)]) -> AffineWeight {
        AffineWeight::new(c.iter().map(|&(a, b)| q(a, b)).collect())
    }

    #[test]
    fn p_plus_one() {
        let p = p_plus_1(2).unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.members.iter().all(|m| m.level() == qi(1)));
        assert_eq!(p_plus_1(3).unwrap().len(), 4);
    }

    #[test]
    fn base_sets() {
        let s1 = enumerate_s(1, 1, 2).unwrap();
        assert_eq!(s1.members.len(), 2);
        assert!(s1.contains(&w(&[(-1, 2), (0, 1), (0, 1)])));
        assert!(s1.contains(&w(&[(-3, 2), (1, 1), (0, 1)])));
        assert!(!s1.contains(&AffineWeight::fundamental(2, 0)));

        let s2 = enumerate_s(2, 1, 2).unwrap();
        assert!(s2.contains(&w(&[(0, 1), (0, 1), (-1, 2)])));
        assert!(s2.contains(&w(&[(0, 1), (1, 1), (-3, 2)])));
        assert_eq!(s2.len(), 2);
    }

    #[test]
    fn s1_n2_hand_count() {
        let s = enumerate_s(1, 2, 2).unwrap();
        let expected = [
            w(&[(1, 2), (0, 1), (0, 1)]),
            w(&[(-1, 2), (1, 1), (0, 1)]),
            w(&[(-1, 2), (0, 1), (1, 1)]),
            w(&[(-3, 2), (2, 1), (0, 1)]),
            w(&[(-3, 2), (1, 1), (1, 1)]),
            w(&[(-5, 2), (3, 1), (0, 1)]),
        ];
        assert_eq!(s.len(), 6);
        for e in &expected {
            assert!(s.contains(e), "missing {e}");
        }
        assert!(s.members.iter().all(|m| m.level() == q(1, 2)));
    }

    #[test]
    fn families_disjoint_and_monotone() {
        for rank in 2..=4 {
            let mut prev = 0;
            for n in 1..=4 {
                let s1 = enumerate_s(1, n, rank).unwrap();
                let s2 = enumerate_s(2, n, rank).unwrap();
                assert!(s1.lambda_keys().is_disjoint(&s2.lambda_keys()));
                assert!(s1.len() >= prev);
                prev = s1.len();
                assert!(s1
                    .members
                    .iter()
                    .chain(&s2.members)
                    .all(|m| m.level() == level_of(n)));
            }
        }
    }

    #[test]
    fn four_modules_at_level_minus_half() {
        let s1 = enumerate_s(1, 1, 2).unwrap();
        let s2 = enumerate_s(2, 1, 2).unwrap();
        assert_eq!(s1.lambda_keys().union(&s2.lambda_keys()).count(), 4);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(enumerate_s(3, 1, 2).is_err());
        assert!(enumerate_s(1, 0, 2).is_err());
        assert!(enumerate_s(1, 1, 1).is_err());
    }

    #[test]
    fn members_are_admissible_with_expected_pi() {
        use crate::cartan::{build_root_system, check_admissible, pi_1, pi_2};
        for rank in 2..=3 {
            let rs = build_root_system(rank).unwrap();
            for n in 1..=3 {
                for (which, pi) in [(1, pi_1(rank)), (2, pi_2(rank))] {
                    for m in enumerate_s(which, n, rank).unwrap().members {
                        let a = check_admissible(&rs, &m, 2 * n + 2);
                        assert!(a.is_admissible(), "{m} not admissible");
                        assert_eq!(a.pi_lambda, pi, "{m}");
                    }
                }
            }
        }
    }
}
