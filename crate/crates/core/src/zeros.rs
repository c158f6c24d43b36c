//! Common zeros of the three rank-two polynomials `p_1, p_2, p_3`.
//!
//! The zero set `T^n` splits into an integer part `T_1^n` and a half-integer
//! part `T_2^n`. It is computed twice: by filtering the finite zero set of
//! `p_1, p_2` through `p_3`, and from the explicit parametric families.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{binom, factorial, falling_product, q, qi, serde_q, MultiPoly, Rational};
use crate::uea::{compute_p, Uea};

/// A point `(h_1, h_2)` of the plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlanePoint {
    #[serde(with = "serde_q")]
    pub h1: Rational,
    #[serde(with = "serde_q")]
    pub h2: Rational,
}

impl PlanePoint {
    pub fn new(h1: Rational, h2: Rational) -> Self {
        Self { h1, h2 }
    }

    /// Point with both coordinates given doubled.
    pub fn halves(a: i64, b: i64) -> Self {
        Self::new(q(a, 2), q(b, 2))
    }

    pub fn shifted(&self, a: i64, b: i64) -> Self {
        Self::new(&self.h1 + qi(a), &self.h2 + qi(b))
    }

    pub fn coords(&self) -> [Rational; 2] {
        [self.h1.clone(), self.h2.clone()]
    }

    pub fn is_integral(&self) -> bool {
        self.h1.is_integer() && self.h2.is_integer()
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.h1, self.h2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroSet {
    pub n: u32,
    #[serde(rename = "T1")]
    pub part1: BTreeSet<PlanePoint>,
    #[serde(rename = "T2")]
    pub part2: BTreeSet<PlanePoint>,
}

impl ZeroSet {
    pub fn contains(&self, p: &PlanePoint) -> bool {
        self.part1.contains(p) || self.part2.contains(p)
    }

    /// `1` or `2` for the component holding `p`.
    pub fn component(&self, p: &PlanePoint) -> Option<u8> {
        if self.part1.contains(p) {
            Some(1)
        } else if self.part2.contains(p) {
            Some(2)
        } else {
            None
        }
    }

    pub fn part(&self, i: u8) -> &BTreeSet<PlanePoint> {
        match i {
            1 => &self.part1,
            2 => &self.part2,
            _ => panic!("zero set has two parts"),
        }
    }
}

/// Where the polynomials come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolySource {
    ClosedForm,
    Uea,
}

fn h(i: usize) -> MultiPoly {
    MultiPoly::var(2, i)
}

/// `p_index` in its factored closed form.
pub fn closed_form_p(index: u8, n: u32) -> Result<MultiPoly> {
    let n64 = n as u64;
    let down = qi(-1);
    let up = qi(1);
    match index {
        1 => Ok(falling_product(&(&h(0) - &h(1)), 2 * n64, &down)),
        2 => {
            let start = &h(0) + &MultiPoly::constant(2, q(3, 2) - qi(n as i64));
            Ok(&falling_product(&start, n64, &up) * &falling_product(&h(1), n64, &down))
        }
        3 => {
            let s = &h(0) + &h(1);
            let mut out = MultiPoly::zero(2);
            for k in 0..=n64 {
                let c =
                    Rational::from(factorial(n64) * num_bigint::BigInt::from(4).pow(n - k as u32))
                        / Rational::from(factorial(k));
                let start = &s + &MultiPoly::constant(2, qi(1 - 2 * n as i64));
                let term =
                    &falling_product(&start, 2 * k, &up) * &falling_product(&h(1), n64 - k, &down);
                out = &out + &term.scale(&c);
            }
            Ok(out)
        }
        _ => Err(Error::InvalidParameter(format!("no polynomial p{index}"))),
    }
}

/// `[p_1, p_2, p_3]` from the chosen source.
pub fn polynomials(n: u32, source: PolySource) -> Result<[MultiPoly; 3]> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    match source {
        PolySource::ClosedForm => Ok([
            closed_form_p(1, n)?,
            closed_form_p(2, n)?,
            closed_form_p(3, n)?,
        ]),
        PolySource::Uea => {
            let uea = Uea::new(2)?;
            Ok([
                compute_p(&uea, 1, n)?,
                compute_p(&uea, 2, n)?,
                compute_p(&uea, 3, n)?,
            ])
        }
    }
}

/// Zeros of `p_1` and `p_2`: `h_1 - h_2 in {0..2n-1}` together with
/// `h_2 in {0..n-1}` or `h_1 in {-1/2..n-3/2}`.
pub fn candidate_grid(n: u32) -> Vec<PlanePoint> {
    let n = n as i64;
    let mut out = Vec::new();
    for k2 in 0..n {
        for k1 in k2..k2 + 2 * n {
            out.push(PlanePoint::new(qi(k1), qi(k2)));
        }
    }
    for i in 0..n {
        for j in 0..2 * n {
            let k1 = 2 * i - 1;
            out.push(PlanePoint::halves(k1, k1 - 2 * j));
        }
    }
    out
}

fn split(n: u32, points: impl IntoIterator<Item = PlanePoint>) -> ZeroSet {
    let (part1, part2): (BTreeSet<_>, BTreeSet<_>) =
        points.into_iter().partition(PlanePoint::is_integral);
    ZeroSet { n, part1, part2 }
}

fn vanishes_on(polys: &[MultiPoly; 3], p: &PlanePoint) -> bool {
    let pt = p.coords();
    polys.iter().all(|f| f.eval(&pt).is_zero())
}

/// Candidate grid filtered by exact evaluation of all three polynomials.
pub fn brute_force_t_with(n: u32, polys: &[MultiPoly; 3]) -> ZeroSet {
    let kept: Vec<PlanePoint> = candidate_grid(n)
        .into_par_iter()
        .filter(|p| vanishes_on(polys, p))
        .collect();
    split(n, kept)
}

pub fn brute_force_t(n: u32, source: PolySource) -> Result<ZeroSet> {
    Ok(brute_force_t_with(n, &polynomials(n, source)?))
}

/// All common zeros among the points `(a/2, b/2)` with `|a|, |b| <= 2 radius`.
pub fn scan_half_lattice(n: u32, polys: &[MultiPoly; 3], radius: i64) -> ZeroSet {
    let r = 2 * radius;
    let kept: Vec<PlanePoint> = (-r..=r)
        .into_par_iter()
        .flat_map_iter(|a| (-r..=r).map(move |b| PlanePoint::halves(a, b)))
        .filter(|p| vanishes_on(polys, p))
        .collect();
    split(n, kept)
}

/// The four parametric families of integer and half-integer zeros.
pub fn explicit_zero_set(n: u32) -> ZeroSet {
    let n = n as i64;
    let mut part1 = BTreeSet::new();
    let mut part2 = BTreeSet::new();
    for r in 0..n {
        for s in 0..n - r {
            part1.insert(PlanePoint::new(qi(s + 2 * r), qi(s)));
            part1.insert(PlanePoint::new(qi(s + 2 * r + 1), qi(s)));
        }
        // s runs over -r-1/2 .. n-2r-3/2 and -r-3/2 .. n-2r-5/2
        for i in 0..n - r {
            let s2 = -2 * r - 1 + 2 * i;
            part2.insert(PlanePoint::halves(s2 + 4 * r, s2));
            let s2 = -2 * r - 3 + 2 * i;
            part2.insert(PlanePoint::halves(s2 + 4 * r + 2, s2));
        }
    }
    ZeroSet {
        n: n as u32,
        part1,
        part2,
    }
}

/// `p_3(s + offset, s)` by direct evaluation of the closed form.
pub fn p3_on_line(n: u32, offset: i64, s: &Rational) -> Rational {
    closed_form_p(3, n)
        .expect("index 3 exists")
        .eval(&[s + qi(offset), s.clone()])
}

/// `p_3(s + 2r, s)` through its binomial-sum form
/// `4^n n! (n-r)! r! C(s, n-r) sum_k C(s-n+r+k, r) C(s-n+r+k-1/2, k)`.
pub fn tilde_p3(n: u32, r: u32, s: &Rational) -> Rational {
    assert!(r < n, "line index r must be below n");
    let (n64, r64) = (n as u64, r as u64);
    let lead = Rational::from(
        num_bigint::BigInt::from(4).pow(n) * factorial(n64) * factorial(n64 - r64) * factorial(r64),
    ) * binom(s, n64 - r64);
    let base = s - qi(n as i64) + qi(r as i64);
    let mut sum = Rational::zero();
    for k in 0..=n64 {
        let x = &base + qi(k as i64);
        sum += binom(&x, r64) * binom(&(&x - q(1, 2)), k);
    }
    lead * sum
}

/// Checks both shift recursions between the families at `n` and `n + 1`.
pub fn check_shift_recursion(n: u32) -> bool {
    check_shift_recursion_sets(&explicit_zero_set(n), &explicit_zero_set(n + 1))
}

/// Recursion check on explicit sets, so that damaged inputs can be tested.
pub fn check_shift_recursion_sets(small: &ZeroSet, big: &ZeroSet) -> bool {
    let n = small.n as i64;
    let grow = |part: &BTreeSet<PlanePoint>, seed: PlanePoint| -> BTreeSet<PlanePoint> {
        let mut out = part.clone();
        out.extend(part.iter().map(|p| p.shifted(1, 0)));
        out.extend(part.iter().map(|p| p.shifted(1, 1)));
        out.insert(seed);
        out
    };
    let one = grow(&small.part1, PlanePoint::new(qi(2 * n + 1), qi(0)));
    let two = grow(&small.part2, PlanePoint::halves(2 * n - 1, -2 * n - 3));
    one == big.part1 && two == big.part2
}

/// `s` values along `h_1 - h_2 = 2r` at which `p_3` must not vanish:
/// `s = n-r..n-1` and `s = -r-1/2-i` for `i = 1..r`.
pub fn nonvanishing_points(n: u32, r: u32) -> Vec<Rational> {
    let (n, r) = (n as i64, r as i64);
    let mut out: Vec<Rational> = (n - r..n).map(qi).collect();
    out.extend((1..=r).map(|i| q(-2 * r - 1 - 2 * i, 2)));
    out
}

/// `p_1(h) = 0` and the integer shape bound `0 <= h_2 <= h_1 <= 2n - 1 + h_2`.
pub fn in_integer_shape(n: u32, p: &PlanePoint) -> bool {
    let top = qi(2 * n as i64 - 1);
    p.h2 >= Rational::zero() && p.h1 >= p.h2 && p.h1 <= &top + &p.h2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(i64, i64)]) -> BTreeSet<PlanePoint> {
        v.iter().map(|&(a, b)| PlanePoint::halves(a, b)).collect()
    }

    #[test]
    fn level_minus_half_zero_set() {
        let t = brute_force_t(1, PolySource::ClosedForm).unwrap();
        assert_eq!(t.part1, pts(&[(0, 0), (2, 0)]));
        assert_eq!(t.part2, pts(&[(-1, -1), (-1, -3)]));
        let p3 = closed_form_p(3, 1).unwrap();
        assert!(p3.eval(&[qi(0), qi(0)]).is_zero());
        assert!(p3.eval(&[q(-1, 2), q(-3, 2)]).is_zero());
    }

    #[test]
    fn filter_is_active() {
        let [p1, p2, _] = polynomials(1, PolySource::ClosedForm).unwrap();
        let pt = [qi(0), qi(-1)];
        assert!(p1.eval(&pt).is_zero());
        assert_eq!(p2.eval(&pt), q(-1, 2));
        assert!(!brute_force_t(1, PolySource::ClosedForm)
            .unwrap()
            .contains(&PlanePoint::new(qi(0), qi(-1))));
    }

    #[test]
    fn p3_closed_form_at_n1() {
        let s = &h(0) + &h(1);
        let expected = &h(1).scale(&qi(4)) + &(&s * &(&s - &MultiPoly::one(2)));
        assert_eq!(closed_form_p(3, 1).unwrap(), expected);
    }

    #[test]
    fn families() {
        assert_eq!(
            explicit_zero_set(1),
            brute_force_t(1, PolySource::ClosedForm).unwrap()
        );
        assert!(explicit_zero_set(2)
            .part1
            .contains(&PlanePoint::new(qi(3), qi(0))));
        for n in 1..=4 {
            let z = explicit_zero_set(n);
            let size = (n * (n + 1)) as usize;
            assert_eq!(z.part1.len(), size);
            assert_eq!(z.part2.len(), size);
            assert!(z.part1.is_disjoint(&z.part2));
            assert!(z.part1.iter().all(|p| in_integer_shape(n, p)));
        }
    }

    #[test]
    fn brute_force_matches_families() {
        for n in 1..=4 {
            assert_eq!(
                brute_force_t(n, PolySource::ClosedForm).unwrap(),
                explicit_zero_set(n),
                "n = {n}"
            );
        }
    }

    #[test]
    fn wide_scan_finds_nothing_else() {
        for n in 1..=3 {
            let polys = polynomials(n, PolySource::ClosedForm).unwrap();
            assert_eq!(
                scan_half_lattice(n, &polys, 3 * n as i64 + 2),
                explicit_zero_set(n)
            );
        }
    }

    #[test]
    fn binomial_form_agrees_on_the_line() {
        assert!(tilde_p3(1, 0, &qi(0)).is_zero());
        assert!(tilde_p3(1, 0, &q(-1, 2)).is_zero());
        for n in 1..=3 {
            for r in 0..n {
                for num in -12..=12 {
                    let s = q(num, 5);
                    assert_eq!(
                        tilde_p3(n, r, &s),
                        p3_on_line(n, 2 * r as i64, &s),
                        "n={n} r={r} s={s}"
                    );
                }
            }
        }
    }

    #[test]
    fn nonvanishing_claims() {
        for n in 1..=4 {
            for r in 0..n {
                for s in nonvanishing_points(n, r) {
                    assert!(!tilde_p3(n, r, &s).is_zero(), "n={n} r={r} s={s}");
                }
            }
        }
    }

    #[test]
    fn recursions() {
        for n in 1..=3 {
            assert!(check_shift_recursion(n));
        }
        let mut big = explicit_zero_set(2);
        big.part1.remove(&PlanePoint::new(qi(3), qi(0)));
        assert!(!check_shift_recursion_sets(&explicit_zero_set(1), &big));
    }
}
