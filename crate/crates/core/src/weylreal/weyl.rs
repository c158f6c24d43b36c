//! The Weyl algebra on `a_1..a_l, a_1^*..a_l^*` with `[a_i, a_j^*] = delta_ij`,
//! stored in the ordered basis `(a^*)^p a^q` (all starred generators on the left).

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};

use crate::exact::{factorial, q, Rational};

/// A generator of the Weyl algebra; indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Osc {
    A(usize),
    AStar(usize),
}

impl Osc {
    pub fn index(self) -> usize {
        match self {
            Osc::A(i) | Osc::AStar(i) => i,
        }
    }

    pub fn is_star(self) -> bool {
        matches!(self, Osc::AStar(_))
    }

    pub fn conjugate(self) -> Osc {
        match self {
            Osc::A(i) => Osc::AStar(i),
            Osc::AStar(i) => Osc::A(i),
        }
    }
}

/// Exponents `(p, q)` of the ordered monomial `(a^*)^p a^q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylMonomial {
    pub star: Vec<u32>,
    pub plain: Vec<u32>,
}

impl WeylMonomial {
    pub fn degree(&self) -> u32 {
        self.star.iter().chain(&self.plain).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    rank: usize,
    terms: BTreeMap<WeylMonomial, Rational>,
}

impl WeylElement {
    pub fn zero(rank: usize) -> Self {
        Self {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(rank: usize, c: Rational) -> Self {
        let mut e = Self::zero(rank);
        e.add_term(
            WeylMonomial {
                star: vec![0; rank],
                plain: vec![0; rank],
            },
            c,
        );
        e
    }

    pub fn generator(rank: usize, x: Osc) -> Self {
        let mut m = WeylMonomial {
            star: vec![0; rank],
            plain: vec![0; rank],
        };
        match x {
            Osc::A(i) => m.plain[i] = 1,
            Osc::AStar(i) => m.star[i] = 1,
        }
        let mut e = Self::zero(rank);
        e.add_term(m, Rational::one());
        e
    }

    /// `:xy: = (xy + yx) / 2`.
    pub fn symmetric(rank: usize, x: Osc, y: Osc) -> Self {
        let gx = Self::generator(rank, x);
        let gy = Self::generator(rank, y);
        (&(&gx * &gy) + &(&gy * &gx)).scale(&q(1, 2))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WeylMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: WeylMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.rank);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Constant term (coefficient of the empty monomial).
    pub fn constant(&self) -> Rational {
        self.terms
            .iter()
            .find(|(m, _)| m.degree() == 0)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }
}

impl Add for &WeylElement {
    type Output = WeylElement;
    fn add(self, rhs: &WeylElement) -> WeylElement {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &WeylElement {
    type Output = WeylElement;
    fn sub(self, rhs: &WeylElement) -> WeylElement {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &WeylElement {
    type Output = WeylElement;
    fn mul(self, rhs: &WeylElement) -> WeylElement {
        assert_eq!(self.rank, rhs.rank);
        let mut out = WeylElement::zero(self.rank);
        for (left, cl) in &self.terms {
            for (right, cr) in &rhs.terms {
                // (a*)^p a^q (a*)^r a^s: reorder the middle factor a^q (a*)^r
                // one index at a time, a_i^q a_i^{*r} = sum_k C(q,k) C(r,k) k! a_i^{*(r-k)} a_i^{q-k}.
                let mut partial: Vec<(Vec<u32>, Vec<u32>, Rational)> = vec![(
                    Vec::with_capacity(self.rank),
                    Vec::with_capacity(self.rank),
                    cl * cr,
                )];
                for i in 0..self.rank {
                    let (qi_, ri) = (left.plain[i], right.star[i]);
                    let mut next = Vec::new();
                    for (st, pl, c) in &partial {
                        for k in 0..=qi_.min(ri) {
                            let w = Rational::from_integer(
                                binom_int(qi_, k) * binom_int(ri, k) * factorial(k as u64),
                            );
                            let mut st = st.clone();
                            let mut pl = pl.clone();
                            st.push(left.star[i] + ri - k);
                            pl.push(qi_ - k + right.plain[i]);
                            next.push((st, pl, c * w));
                        }
                    }
                    partial = next;
                }
                for (star, plain, c) in partial {
                    out.add_term(WeylMonomial { star, plain }, c);
                }
            }
        }
        out
    }
}

fn binom_int(n: u32, k: u32) -> num_bigint::BigInt {
    factorial(n as u64) / (factorial(k as u64) * factorial((n - k) as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qi;

    #[test]
    fn canonical_relations() {
        let a = WeylElement::generator(2, Osc::A(0));
        let b = WeylElement::generator(2, Osc::AStar(0));
        let c = WeylElement::generator(2, Osc::AStar(1));
        assert_eq!(a.commutator(&b), WeylElement::scalar(2, qi(1)));
        assert!(a.commutator(&c).is_zero());
        assert!(b.commutator(&c).is_zero());
    }

    #[test]
    fn squares_commutator() {
        // [a^2, a*^2] = 4 a* a + 2
        let a = WeylElement::generator(1, Osc::A(0));
        let b = WeylElement::generator(1, Osc::AStar(0));
        let lhs = (&a * &a).commutator(&(&b * &b));
        let expected = &(&b * &a).scale(&qi(4)) + &WeylElement::scalar(1, qi(2));
        assert_eq!(lhs, expected);
    }

    #[test]
    fn associativity_sample() {
        let a = WeylElement::generator(2, Osc::A(0));
        let b = WeylElement::generator(2, Osc::AStar(0));
        let c = WeylElement::symmetric(2, Osc::A(1), Osc::AStar(0));
        assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        assert_eq!(&(&c * &b) * &(&a * &a), &c * &(&b * &(&a * &a)));
    }
}
