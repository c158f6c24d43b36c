use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{fmt_q, Rational};

/// Sparse polynomial in a fixed number of commuting variables `h1, ..., hN`
/// with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The variable `h_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Self::monomial(exps, Rational::one())
    }

    pub fn monomial(exps: Vec<u32>, c: Rational) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    /// Affine-linear form `c + sum coeffs[i] h_i`.
    pub fn linear(coeffs: &[Rational], c: Rational) -> Self {
        let n = coeffs.len();
        let mut p = Self::constant(n, c);
        for (i, a) in coeffs.iter().enumerate() {
            p = &p + &Self::var(n, i).scale(a);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.nvars), |acc, _| &acc * self)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Leading term in graded-lexicographic order.
    pub fn leading_term(&self) -> Option<(&Vec<u32>, &Rational)> {
        self.terms.iter().max_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            da.cmp(&db).then_with(|| a.0.cmp(b.0))
        })
    }

    /// Divides through by the leading coefficient. The zero polynomial is
    /// returned unchanged.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            Some((_, c)) => self.scale(&(Rational::one() / c)),
            None => self.clone(),
        }
    }

    /// `Some(r)` with `self = r * other`, `r != 0`, when the two are
    /// proportional and nonzero.
    pub fn ratio_to(&self, other: &Self) -> Option<Rational> {
        if self.is_zero() || other.is_zero() || self.terms.len() != other.terms.len() {
            return None;
        }
        let (e, c) = other.leading_term()?;
        let r = self.terms.get(e)? / c;
        (other.scale(&r) == *self).then_some(r)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Rational::zero();
        for (exps, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(exps) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes `h_i -> images[i]`; all images share a target variable count.
    pub fn substitute(&self, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map_or(0, MultiPoly::nvars);
        let mut acc = MultiPoly::zero(target);
        for (exps, c) in &self.terms {
            let mut t = MultiPoly::constant(target, c.clone());
            for (img, &e) in images.iter().zip(exps) {
                if e > 0 {
                    t = &t * &img.pow(e);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// `p(h) -> p(h + shift)`.
    pub fn shift(&self, shift: &[Rational]) -> MultiPoly {
        let images: Vec<_> = shift
            .iter()
            .enumerate()
            .map(|(i, s)| {
                &MultiPoly::var(self.nvars, i) + &MultiPoly::constant(self.nvars, s.clone())
            })
            .collect();
        self.substitute(&images)
    }

    /// Serializable form: `(exponent vector, "a/b")` pairs in canonical order.
    pub fn to_pairs(&self) -> Vec<(Vec<u32>, String)> {
        self.terms
            .iter()
            .map(|(e, c)| (e.clone(), fmt_q(c)))
            .collect()
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, c) in self.terms.iter().rev() {
            let vars: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("h{}", i + 1)
                    } else {
                        format!("h{}^{}", i + 1, e)
                    }
                })
                .collect();
            let negative = *c < Rational::zero();
            let mag = if negative { -c.clone() } else { c.clone() };
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { "-" } else { "+" })?;
            }
            first = false;
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, qi};
    use proptest::prelude::*;

    fn arb_poly() -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec(((0u32..3, 0u32..3), (-9i64..9, 1i64..4)), 0..6).prop_map(|terms| {
            let mut p = MultiPoly::zero(2);
            for ((a, b), (n, d)) in terms {
                p.add_term(vec![a, b], q(n, d));
            }
            p
        })
    }

    #[test]
    fn display_and_ratio() {
        let h1 = MultiPoly::var(2, 0);
        let h2 = MultiPoly::var(2, 1);
        let p = &(&h1 * &h2) - &MultiPoly::constant(2, q(1, 2));
        assert_eq!(p.to_string(), "h1*h2 - 1/2");
        let p3 = p.scale(&qi(-3));
        assert_eq!(p3.ratio_to(&p), Some(qi(-3)));
        assert_eq!(p3.monic(), p);
        assert!(p.ratio_to(&h1).is_none());
    }

    #[test]
    fn shift_matches_eval() {
        let h1 = MultiPoly::var(2, 0);
        let h2 = MultiPoly::var(2, 1);
        let p = &(&h1 * &h1) + &h2;
        let s = p.shift(&[qi(2), q(-1, 2)]);
        assert_eq!(s.eval(&[qi(1), qi(1)]), p.eval(&[qi(3), q(1, 2)]));
    }

    proptest! {
        #[test]
        fn eval_is_ring_hom(a in arb_poly(), b in arb_poly(), x in -5i64..5, y in (-7i64..7, 1i64..3)) {
            let pt = [qi(x), q(y.0, y.1)];
            prop_assert_eq!((&a * &b).eval(&pt), a.eval(&pt) * b.eval(&pt));
            prop_assert_eq!((&a + &b).eval(&pt), a.eval(&pt) + b.eval(&pt));
        }

        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }
    }
}
