//! Root data for `C_l` and its untwisted affinization `C_l^(1)`.
//!
//! Finite roots live in the epsilon basis, affine weights in the basis of
//! fundamental weights `Lambda_0, ..., Lambda_l` (plus a `delta` coefficient),
//! and coroots as integer vectors over the simple coroots
//! `alpha_0^v, ..., alpha_l^v`. The invariant form is normalised so that the
//! highest root has squared length 2, i.e. `(eps_i | eps_j) = delta_ij / 2`.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{fmt_q, qi, serde_q, EchelonBasis, Rational};

/// A finite root in the epsilon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root(pub Vec<i64>);

impl Root {
    /// `(beta | beta)` times two, so long roots give 4 and short roots 2.
    pub fn norm2_doubled(&self) -> i64 {
        self.0.iter().map(|x| x * x).sum()
    }

    pub fn is_long(&self) -> bool {
        self.norm2_doubled() == 4
    }

    /// Positive iff the first nonzero epsilon coordinate is positive.
    pub fn is_positive(&self) -> bool {
        self.0.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
    }

    /// The coroot in the `h_1, ..., h_l` basis; integral for `C_l`.
    pub fn coroot_h(&self) -> Vec<i64> {
        let n = self.norm2_doubled();
        self.0.iter().map(|x| 2 * x / n).collect()
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &c) in self.0.iter().enumerate() {
            match c {
                0 => {}
                1 => parts.push(format!("+e{}", i + 1)),
                -1 => parts.push(format!("-e{}", i + 1)),
                c if c > 0 => parts.push(format!("+{c}e{}", i + 1)),
                c => parts.push(format!("{c}e{}", i + 1)),
            }
        }
        let s = parts.join("");
        write!(f, "{}", s.strip_prefix('+').unwrap_or(&s))
    }
}

/// The finite root system of type `C_l` with the standard simple roots
/// `e1-e2, ..., e_{l-1}-e_l, 2e_l`.
#[derive(Clone, Debug)]
pub struct FiniteRootSystem {
    rank: usize,
    roots: Vec<Root>,
}

pub fn build_root_system(rank: usize) -> Result<FiniteRootSystem> {
    if rank < 2 {
        return Err(Error::RankTooSmall(rank));
    }
    let mut roots = Vec::with_capacity(2 * rank * rank);
    for i in 0..rank {
        for j in (i + 1)..rank {
            for (si, sj) in [(1, -1), (-1, 1), (1, 1), (-1, -1)] {
                let mut v = vec![0; rank];
                v[i] = si;
                v[j] = sj;
                roots.push(Root(v));
            }
        }
        for s in [2, -2] {
            let mut v = vec![0; rank];
            v[i] = s;
            roots.push(Root(v));
        }
    }
    roots.sort();
    Ok(FiniteRootSystem { rank, roots })
}

impl FiniteRootSystem {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| r.is_positive())
    }

    pub fn simple_roots(&self) -> Vec<Root> {
        let l = self.rank;
        let mut out: Vec<Root> = (0..l - 1)
            .map(|i| {
                let mut v = vec![0; l];
                v[i] = 1;
                v[i + 1] = -1;
                Root(v)
            })
            .collect();
        let mut last = vec![0; l];
        last[l - 1] = 2;
        out.push(Root(last));
        out
    }

    pub fn highest_root(&self) -> Root {
        let mut v = vec![0; self.rank];
        v[0] = 2;
        Root(v)
    }

    /// `beta^v + m * (2 / (beta|beta)) c` over the affine simple coroots.
    pub fn affine_coroot(&self, beta: &Root, m: i64) -> Coroot {
        let c_coeff = if beta.is_long() { m } else { 2 * m };
        Coroot::from_h(&beta.coroot_h(), c_coeff)
    }
}

/// Integer combination of `alpha_0^v, ..., alpha_l^v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coroot(pub Vec<i64>);

impl Coroot {
    pub fn simple(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank + 1];
        v[i] = 1;
        Coroot(v)
    }

    /// The canonical central element `c = alpha_0^v + ... + alpha_l^v`.
    pub fn central(rank: usize) -> Self {
        Coroot(vec![1; rank + 1])
    }

    /// `h_i` (1-based), which equals `alpha_i^v + ... + alpha_l^v`.
    pub fn h(rank: usize, i: usize) -> Self {
        assert!((1..=rank).contains(&i));
        let mut v = vec![0; rank + 1];
        for x in v.iter_mut().skip(i) {
            *x = 1;
        }
        Coroot(v)
    }

    /// From coordinates over `h_1..h_l` plus a multiple of `c`.
    pub fn from_h(h: &[i64], c_coeff: i64) -> Self {
        let mut v = vec![c_coeff; h.len() + 1];
        let mut running = 0;
        for (i, x) in h.iter().enumerate() {
            running += x;
            v[i + 1] += running;
        }
        Coroot(v)
    }

    pub fn scaled(&self, k: i64) -> Self {
        Coroot(self.0.iter().map(|x| x * k).collect())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }
}

impl Add for &Coroot {
    type Output = Coroot;
    fn add(self, rhs: &Coroot) -> Coroot {
        Coroot(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Coroot {
    type Output = Coroot;
    fn sub(self, rhs: &Coroot) -> Coroot {
        Coroot(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for Coroot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                if c == 1 {
                    format!("a{i}v")
                } else {
                    format!("{c}*a{i}v")
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `{2 alpha_0^v + alpha_1^v, alpha_1^v, ..., alpha_l^v}`.
pub fn pi_1(rank: usize) -> BTreeSet<Coroot> {
    let mut out: BTreeSet<Coroot> = (1..=rank).map(|i| Coroot::simple(rank, i)).collect();
    let mut first = Coroot::simple(rank, 0).scaled(2);
    first.0[1] = 1;
    out.insert(first);
    out
}

/// `{alpha_0^v, ..., alpha_{l-1}^v, alpha_{l-1}^v + 2 alpha_l^v}`.
pub fn pi_2(rank: usize) -> BTreeSet<Coroot> {
    let mut out: BTreeSet<Coroot> = (0..rank).map(|i| Coroot::simple(rank, i)).collect();
    let mut last = Coroot::simple(rank, rank - 1);
    last.0[rank] = 2;
    out.insert(last);
    out
}

pub fn simple_coroots(rank: usize) -> BTreeSet<Coroot> {
    (0..=rank).map(|i| Coroot::simple(rank, i)).collect()
}

/// An element of `h*` written as `sum a_i Lambda_i + d * delta`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineWeight {
    #[serde(rename = "lambda", with = "serde_q::vec")]
    pub coeffs: Vec<Rational>,
    #[serde(with = "serde_q")]
    pub delta: Rational,
}

impl AffineWeight {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        Self {
            coeffs,
            delta: Rational::zero(),
        }
    }

    pub fn zero(rank: usize) -> Self {
        Self::new(vec![Rational::zero(); rank + 1])
    }

    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut w = Self::zero(rank);
        w.coeffs[i] = Rational::one();
        w
    }

    /// `rho`, pairing to one with every simple coroot.
    pub fn rho(rank: usize) -> Self {
        Self::new(vec![Rational::one(); rank + 1])
    }

    /// The weight of level `level` whose finite part is `(lambda(h_1), ..., lambda(h_l))`.
    pub fn from_finite_part(level: &Rational, finite: &[Rational]) -> Self {
        let l = finite.len();
        let mut coeffs = vec![Rational::zero(); l + 1];
        coeffs[0] = level - &finite[0];
        for i in 1..l {
            coeffs[i] = &finite[i - 1] - &finite[i];
        }
        coeffs[l] = finite[l - 1].clone();
        Self::new(coeffs)
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `<lambda, c>`; every mark of `c` over the simple coroots is one.
    pub fn level(&self) -> Rational {
        self.coeffs.iter().fold(Rational::zero(), |acc, x| acc + x)
    }

    /// `(lambda(h_1), ..., lambda(h_l))`.
    pub fn finite_part(&self) -> Vec<Rational> {
        let l = self.rank();
        let mut out = vec![Rational::zero(); l];
        let mut running = Rational::zero();
        for i in (1..=l).rev() {
            running += &self.coeffs[i];
            out[i - 1] = running.clone();
        }
        out
    }

    pub fn pair(&self, x: &Coroot) -> Rational {
        assert_eq!(x.0.len(), self.coeffs.len());
        self.coeffs
            .iter()
            .zip(&x.0)
            .fold(Rational::zero(), |acc, (a, &k)| acc + a * qi(k))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
            delta: &self.delta * s,
        }
    }

    /// Equality in the `Lambda` basis, ignoring the `delta` coefficient.
    pub fn same_lambda(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }

    pub fn is_dominant_integral(&self) -> bool {
        self.coeffs
            .iter()
            .all(|a| a.is_integer() && *a >= Rational::zero())
    }
}

impl Add for &AffineWeight {
    type Output = AffineWeight;
    fn add(self, rhs: &AffineWeight) -> AffineWeight {
        AffineWeight {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
            delta: &self.delta + &rhs.delta,
        }
    }
}

impl Sub for &AffineWeight {
    type Output = AffineWeight;
    fn sub(self, rhs: &AffineWeight) -> AffineWeight {
        AffineWeight {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
            delta: &self.delta - &rhs.delta,
        }
    }
}

impl fmt::Display for AffineWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                parts.push(if a.is_one() {
                    format!("L{i}")
                } else {
                    format!("({})L{i}", fmt_q(a))
                });
            }
        }
        if !self.delta.is_zero() {
            parts.push(format!("({})d", fmt_q(&self.delta)));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// A positive real coroot `(beta + m delta)^v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealCoroot {
    pub root: Root,
    pub m: i64,
    pub coroot: Coroot,
}

/// All positive real coroots `(beta + m delta)^v` with `0 <= m <= bound`.
pub fn real_coroots_up_to(rs: &FiniteRootSystem, bound: u32) -> Vec<RealCoroot> {
    let mut out = Vec::new();
    for m in 0..=bound as i64 {
        for beta in rs.roots() {
            if m == 0 && !beta.is_positive() {
                continue;
            }
            out.push(RealCoroot {
                root: beta.clone(),
                m,
                coroot: rs.affine_coroot(beta, m),
            });
        }
    }
    out
}

/// Outcome of the bounded admissibility check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Admissibility {
    /// `<lambda + rho, alpha> not in -Z_+` for every positive real coroot in range.
    pub cond1: bool,
    /// The integral simple coroots span the full coroot lattice rationally.
    pub cond2: bool,
    /// Minimal elements of the integral positive coroots in range.
    pub pi_lambda: BTreeSet<Coroot>,
    /// First coroot violating `cond1`, if any.
    pub violation: Option<Coroot>,
    pub bound: u32,
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        self.cond1 && self.cond2
    }
}

/// Checks both admissibility conditions on every real coroot with
/// `delta`-multiplicity at most `bound`. This is a bounded verification only.
pub fn check_admissible(rs: &FiniteRootSystem, lambda: &AffineWeight, bound: u32) -> Admissibility {
    let rank = rs.rank();
    assert_eq!(lambda.rank(), rank);
    let shifted = lambda + &AffineWeight::rho(rank);
    let coroots = real_coroots_up_to(rs, bound);

    let mut violation = None;
    for rc in &coroots {
        let v = shifted.pair(&rc.coroot);
        if v.is_integer() && v <= Rational::zero() {
            violation = Some(rc.coroot.clone());
            break;
        }
    }

    let integral: BTreeSet<Coroot> = coroots
        .iter()
        .filter(|rc| lambda.pair(&rc.coroot).is_integer())
        .map(|rc| rc.coroot.clone())
        .collect();
    // Every element of the integral set is a sum of minimal ones, so an element
    // is minimal iff it is not a nonnegative combination of minimal elements of
    // smaller height.
    let mut by_height: Vec<&Coroot> = integral.iter().collect();
    by_height.sort_by_key(|x| (x.0.iter().sum::<i64>(), (*x).clone()));
    let mut minimal: Vec<Coroot> = Vec::new();
    for alpha in by_height {
        if !in_nat_span(alpha, &minimal) {
            minimal.push(alpha.clone());
        }
    }
    let pi_lambda: BTreeSet<Coroot> = minimal.into_iter().collect();

    let mut span = EchelonBasis::new();
    for x in &pi_lambda {
        let v =
            x.0.iter()
                .enumerate()
                .map(|(i, &k)| (i, qi(k)))
                .filter(|(_, k)| !k.is_zero())
                .collect();
        span.insert(&v);
    }

    Admissibility {
        cond1: violation.is_none(),
        cond2: span.dim() == rank + 1,
        pi_lambda,
        violation,
        bound,
    }
}

/// Whether `v` is a nonnegative integer combination of `gens`.
fn in_nat_span(v: &Coroot, gens: &[Coroot]) -> bool {
    match solve_independent(gens, v) {
        Some(Some(x)) => x.iter().all(|c| c.is_integer() && *c >= Rational::zero()),
        Some(None) => false,
        None => in_nat_span_search(v, gens),
    }
}

/// Exact solve of `sum x_i gens_i = v`. Outer `None` when `gens` are linearly
/// dependent; inner `None` when the system is inconsistent.
fn solve_independent(gens: &[Coroot], v: &Coroot) -> Option<Option<Vec<Rational>>> {
    let rows = v.0.len();
    let cols = gens.len();
    let mut m: Vec<Vec<Rational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Rational> = gens.iter().map(|g| qi(g.0[r])).collect();
            row.push(qi(v.0[r]));
            row
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..cols {
        let p = (pivot_row..rows).find(|&r| !m[r][col].is_zero())?;
        m.swap(pivot_row, p);
        let inv = Rational::one() / &m[pivot_row][col];
        for x in m[pivot_row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..rows {
            if r != pivot_row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot = m[pivot_row].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|row| !row[cols].is_zero()) {
        return Some(None);
    }
    Some(Some(
        m[..cols].iter().map(|row| row[cols].clone()).collect(),
    ))
}

fn in_nat_span_search(v: &Coroot, gens: &[Coroot]) -> bool {
    if v.0.iter().all(|&x| x == 0) {
        return true;
    }
    let Some((g, rest)) = gens.split_first() else {
        return false;
    };
    let mut remaining = v.clone();
    loop {
        if in_nat_span_search(&remaining, rest) {
            return true;
        }
        remaining = &remaining - g;
        if !remaining.is_nonnegative() {
            return false;
        }
    }
}
