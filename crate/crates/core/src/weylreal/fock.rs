//! Oscillator Fock modules for the Weyl vertex algebra and the level `-1/2`
//! currents acting on them.
//!
//! Modes are stored doubled so that half-integer moding stays in integers.
//! With integer moding the zero modes `a_i^*(0)` are treated as polynomial
//! variables `x_i` and `a_i(0)` acts as `d/dx_i`; the conjugate zero-mode pair
//! inside a current is ordered symmetrically.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::{LieAlgebra, Osc};
use crate::cartan::AffineWeight;
use crate::error::{Error, Result};
use crate::exact::{fmt_q, q, qi, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Moding {
    Integer,
    HalfInteger,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

/// A moding together with the parity of the number of oscillators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sector {
    pub moding: Moding,
    pub parity: Parity,
}

impl Sector {
    pub const ALL: [Sector; 4] = [
        Sector {
            moding: Moding::HalfInteger,
            parity: Parity::Even,
        },
        Sector {
            moding: Moding::HalfInteger,
            parity: Parity::Odd,
        },
        Sector {
            moding: Moding::Integer,
            parity: Parity::Even,
        },
        Sector {
            moding: Moding::Integer,
            parity: Parity::Odd,
        },
    ];
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = match self.moding {
            Moding::Integer => "int",
            Moding::HalfInteger => "half",
        };
        let p = match self.parity {
            Parity::Even => "even",
            Parity::Odd => "odd",
        };
        write!(f, "{m}-{p}")
    }
}

impl FromStr for Sector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (m, p) = s
            .split_once('-')
            .ok_or_else(|| Error::InvalidParameter(format!("bad sector {s:?}")))?;
        let moding = match m {
            "int" => Moding::Integer,
            "half" => Moding::HalfInteger,
            _ => return Err(Error::InvalidParameter(format!("bad moding {m:?}"))),
        };
        let parity = match p {
            "even" => Parity::Even,
            "odd" => Parity::Odd,
            _ => return Err(Error::InvalidParameter(format!("bad parity {p:?}"))),
        };
        Ok(Sector { moding, parity })
    }
}

impl Serialize for Sector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The oscillator mode `osc(twice / 2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mode {
    pub osc: Osc,
    pub twice: i64,
}

impl Mode {
    /// Negative modes create; at mode zero only `a_i^*(0)` does.
    pub fn is_creator(self) -> bool {
        self.twice < 0 || (self.twice == 0 && self.osc.is_star())
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let star = if self.osc.is_star() { "*" } else { "" };
        write!(
            f,
            "a{}{star}({})",
            self.osc.index() + 1,
            fmt_q(&q(self.twice, 2))
        )
    }
}

/// A monomial in creation modes applied to the vacuum.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockState(BTreeMap<Mode, u32>);

impl FockState {
    pub fn vacuum() -> Self {
        Self::default()
    }

    pub fn from_modes(modes: &[Mode]) -> Self {
        let mut s = Self::vacuum();
        for &m in modes {
            assert!(m.is_creator(), "{m} is not a creation mode");
            *s.0.entry(m).or_insert(0) += 1;
        }
        s
    }

    pub fn modes(&self) -> impl Iterator<Item = (&Mode, &u32)> {
        self.0.iter()
    }

    pub fn count(&self) -> u32 {
        self.0.values().sum()
    }

    /// Twice the `L_0`-energy above the vacuum.
    pub fn energy2(&self) -> i64 {
        self.0.iter().map(|(m, k)| -m.twice * *k as i64).sum()
    }

    /// Twice the grading used to truncate: energy plus zero-mode degree.
    pub fn degree2(&self) -> i64 {
        self.0
            .iter()
            .map(|(m, k)| (if m.twice == 0 { 2 } else { -m.twice }) * *k as i64)
            .sum()
    }

    pub fn parity(&self) -> Parity {
        if self.count().is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Epsilon-coordinates of the `h`-weight, not counting the vacuum shift.
    pub fn weight(&self, rank: usize) -> Vec<i64> {
        let mut w = vec![0; rank];
        for (m, k) in &self.0 {
            let sign = if m.osc.is_star() { -1 } else { 1 };
            w[m.osc.index()] += sign * *k as i64;
        }
        w
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (m, k) in &self.0 {
            if *k == 1 {
                write!(f, "{m} ")?;
            } else {
                write!(f, "{m}^{k} ")?;
            }
        }
        f.write_str("|0>")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FockVector {
    terms: BTreeMap<FockState, Rational>,
}

impl FockVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(state: FockState) -> Self {
        let mut v = Self::zero();
        v.add_term(state, Rational::one());
        v
    }

    pub fn add_term(&mut self, s: FockState, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&s) {
            Some(e) => {
                *e += c;
                if e.is_zero() {
                    self.terms.remove(&s);
                }
            }
            None => {
                self.terms.insert(s, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &FockVector, c: &Rational) {
        for (s, v) in &other.terms {
            self.add_term(s.clone(), v * c);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FockState, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, s: &FockState) -> Rational {
        self.terms.get(s).cloned().unwrap_or_else(Rational::zero)
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (s, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({}) {s}", fmt_q(c))?;
        }
        Ok(())
    }
}

fn apply_osc(mode: Mode, state: &FockState) -> Option<(FockState, Rational)> {
    if mode.is_creator() {
        let mut s = state.clone();
        *s.0.entry(mode).or_insert(0) += 1;
        return Some((s, Rational::one()));
    }
    // a(r) = d/da^*(-r) and a^*(r) = -d/da(-r) for annihilating r
    let target = Mode {
        osc: mode.osc.conjugate(),
        twice: -mode.twice,
    };
    let k = *state.0.get(&target)?;
    let mut s = state.clone();
    if k == 1 {
        s.0.remove(&target);
    } else {
        s.0.insert(target, k - 1);
    }
    let sign = if mode.osc.is_star() { -1 } else { 1 };
    Some((s, qi(sign * k as i64)))
}

/// `N(x y)` on a single state: annihilators act first, and the conjugate
/// zero-mode pair is symmetrised.
fn apply_ordered_pair(x: Mode, y: Mode, state: &FockState, c: &Rational, out: &mut FockVector) {
    let (first, second) = if !x.is_creator() && y.is_creator() {
        (x, y)
    } else {
        (y, x)
    };
    if let Some((s1, c1)) = apply_osc(first, state) {
        if let Some((s2, c2)) = apply_osc(second, &s1) {
            out.add_term(s2, c * c1 * c2);
        }
    }
    if x.twice == 0 && y.twice == 0 && x.osc == y.osc.conjugate() {
        out.add_term(state.clone(), c * q(1, 2));
    }
}

/// A mode `X(m)` of the current attached to basis element `element`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CurrentMode {
    pub element: usize,
    pub m: i64,
}

/// `X(m) v` for the current `X(z) = sum_r N(x(r) y(m - r)) z^{-m-1}`.
pub fn fock_apply(
    alg: &LieAlgebra,
    mode: CurrentMode,
    v: &FockVector,
    moding: Moding,
) -> FockVector {
    let mut out = FockVector::zero();
    let m2 = 2 * mode.m;
    let lattice_offset = match moding {
        Moding::Integer => 0,
        Moding::HalfInteger => 1,
    };
    for (state, cs) in v.terms() {
        let e2 = state.energy2();
        // some factor must annihilate within the energy, or both create
        let mut lo = m2.min(0) - e2;
        let hi = m2.max(0) + e2;
        if (lo - lattice_offset).rem_euclid(2) != 0 {
            lo += 1;
        }
        for (&(x, y), cq) in alg.quadratic(mode.element).terms() {
            let c = cs * cq;
            let mut r2 = lo;
            while r2 <= hi {
                let xm = Mode { osc: x, twice: r2 };
                let ym = Mode {
                    osc: y,
                    twice: m2 - r2,
                };
                apply_ordered_pair(xm, ym, state, &c, &mut out);
                r2 += 2;
            }
        }
    }
    out
}

/// All basis states of a sector with `degree <= max_degree`.
pub fn sector_basis(sector: Sector, rank: usize, max_degree: u32) -> Vec<FockState> {
    let budget = 2 * max_degree as i64;
    let mut modes: Vec<(Mode, i64)> = Vec::new();
    let mut twice = match sector.moding {
        Moding::Integer => {
            for i in 0..rank {
                modes.push((
                    Mode {
                        osc: Osc::AStar(i),
                        twice: 0,
                    },
                    2,
                ));
            }
            -2
        }
        Moding::HalfInteger => -1,
    };
    while -twice <= budget {
        for i in 0..rank {
            modes.push((
                Mode {
                    osc: Osc::A(i),
                    twice,
                },
                -twice,
            ));
            modes.push((
                Mode {
                    osc: Osc::AStar(i),
                    twice,
                },
                -twice,
            ));
        }
        twice -= 2;
    }

    fn rec(
        modes: &[(Mode, i64)],
        idx: usize,
        left: i64,
        cur: &mut FockState,
        out: &mut Vec<FockState>,
    ) {
        if idx == modes.len() {
            out.push(cur.clone());
            return;
        }
        let (m, cost) = modes[idx];
        let mut k = 0u32;
        loop {
            rec(modes, idx + 1, left - cost * k as i64, cur, out);
            if left - cost * (k as i64 + 1) < 0 {
                break;
            }
            k += 1;
            cur.0.insert(m, k);
        }
        cur.0.remove(&m);
    }

    let mut out = Vec::new();
    rec(&modes, 0, budget, &mut FockState::vacuum(), &mut out);
    out.retain(|s| s.parity() == sector.parity);
    out.sort_by(|a, b| a.degree2().cmp(&b.degree2()).then_with(|| a.cmp(b)));
    out
}

fn unit_root(rank: usize, entries: &[(usize, i64)]) -> Vec<i64> {
    let mut v = vec![0; rank];
    for &(i, c) in entries {
        v[i] += c;
    }
    v
}

/// Raising operators of the affine algebra: `X_{alpha_i}(0)` for the finite
/// simple roots and `X_{-theta}(1)`.
pub fn raising_modes(alg: &LieAlgebra) -> Vec<CurrentMode> {
    let l = alg.rank();
    let mut out: Vec<CurrentMode> = (0..l - 1)
        .map(|i| CurrentMode {
            element: alg.root(&unit_root(l, &[(i, 1), (i + 1, -1)])),
            m: 0,
        })
        .collect();
    out.push(CurrentMode {
        element: alg.root(&unit_root(l, &[(l - 1, 2)])),
        m: 0,
    });
    out.push(CurrentMode {
        element: alg.root(&unit_root(l, &[(0, -2)])),
        m: 1,
    });
    out
}

/// The highest weight of a sector, read off from its lowest-degree states
/// annihilated by every raising operator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TopWeight {
    pub sector: Sector,
    pub state: String,
    pub weight: AffineWeight,
}

pub fn top_weights(alg: &LieAlgebra, sector: Sector) -> Vec<TopWeight> {
    let l = alg.rank();
    let raising = raising_modes(alg);
    let basis = sector_basis(sector, l, 2);
    let Some(min_deg) = basis.first().map(FockState::degree2) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for state in basis.iter().filter(|s| s.degree2() == min_deg) {
        let v = FockVector::basis(state.clone());
        if raising
            .iter()
            .all(|&op| fock_apply(alg, op, &v, sector.moding).is_zero())
        {
            let h: Vec<Rational> = (0..l)
                .map(|i| {
                    let hv = fock_apply(
                        alg,
                        CurrentMode {
                            element: alg.cartan(i),
                            m: 0,
                        },
                        &v,
                        sector.moding,
                    );
                    let c = hv.coefficient(state);
                    assert_eq!(
                        hv.len(),
                        usize::from(!c.is_zero()),
                        "weight vectors are h-eigenvectors"
                    );
                    c
                })
                .collect();
            out.push(TopWeight {
                sector,
                state: state.to_string(),
                weight: AffineWeight::from_finite_part(&q(-1, 2), &h),
            });
        }
    }
    out
}

/// Outcome of checking the affine commutation relations on a sector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineRelationReport {
    pub sector: Sector,
    pub checked: usize,
    pub failure: Option<String>,
}

/// Checks `[X(m), Y(k)] = [X,Y](m+k) - (1/2) m delta_{m+k,0} (X|Y)` on every
/// basis state of the sector with degree at most `max_degree`, for all basis
/// pairs and `|m|, |k| <= mode_bound`.
pub fn check_affine_relations(
    alg: &LieAlgebra,
    sector: Sector,
    max_degree: u32,
    mode_bound: i64,
) -> AffineRelationReport {
    let dim = alg.dim();
    let modes: Vec<i64> = (-mode_bound..=mode_bound).collect();
    let basis = sector_basis(sector, alg.rank(), max_degree);
    let level = q(-1, 2);
    let failure = basis.par_iter().find_map_first(|state| {
        let v = FockVector::basis(state.clone());
        let cache: Vec<Vec<FockVector>> = (0..dim)
            .map(|a| {
                modes
                    .iter()
                    .map(|&m| fock_apply(alg, CurrentMode { element: a, m }, &v, sector.moding))
                    .collect()
            })
            .collect();
        for a in 0..dim {
            for b in 0..dim {
                for (im, &m) in modes.iter().enumerate() {
                    for (ik, &k) in modes.iter().enumerate() {
                        let mut lhs = fock_apply(
                            alg,
                            CurrentMode { element: a, m },
                            &cache[b][ik],
                            sector.moding,
                        );
                        let yx = fock_apply(
                            alg,
                            CurrentMode { element: b, m: k },
                            &cache[a][im],
                            sector.moding,
                        );
                        lhs.add_scaled(&yx, &-Rational::one());
                        for (c, coef) in alg.bracket(a, b) {
                            let z = if (m + k).abs() <= mode_bound {
                                cache[*c][(m + k + mode_bound) as usize].clone()
                            } else {
                                fock_apply(
                                    alg,
                                    CurrentMode {
                                        element: *c,
                                        m: m + k,
                                    },
                                    &v,
                                    sector.moding,
                                )
                            };
                            lhs.add_scaled(&z, &-coef.clone());
                        }
                        if m + k == 0 {
                            let central = qi(m) * alg.form(a, b) * &level;
                            lhs.add_term(state.clone(), -central);
                        }
                        if !lhs.is_zero() {
                            return Some(format!(
                                "[{}({m}), {}({k})] on {state}: defect {lhs}",
                                alg.label(a),
                                alg.label(b)
                            ));
                        }
                    }
                }
            }
        }
        None
    });
    AffineRelationReport {
        sector,
        checked: basis.len(),
        failure,
    }
}

/// Which combination of the two normally ordered products is tested.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Combination {
    /// `X_{e1+e2}(z)^2 - X_{2e1}(z) X_{2e2}(z)`.
    Minus,
    /// The same with the sign flipped, expected to fail.
    Plus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositeFieldWitness {
    pub state: String,
    pub j: i64,
    pub image: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositeFieldReport {
    pub sector: Sector,
    pub combination: Combination,
    pub max_degree: u32,
    pub modes: (i64, i64),
    pub checked: usize,
    pub failures: Vec<CompositeFieldWitness>,
}

impl CompositeFieldReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Mode `j` of `:A(z) B(z):` on a state of twice-energy `e2`:
/// `sum_{m <= -1} A(m) B(j-m) + sum_{m >= 0} B(j-m) A(m)`.
fn normal_product_mode(
    alg: &LieAlgebra,
    a: usize,
    b: usize,
    j: i64,
    v: &FockVector,
    moding: Moding,
) -> FockVector {
    let e = v.terms().map(|(s, _)| s.energy2()).max().unwrap_or(0);
    let e = (e + 1) / 2 + 1;
    let mut out = FockVector::zero();
    for m in (j - e)..=e {
        let term = if m <= -1 {
            let bv = fock_apply(
                alg,
                CurrentMode {
                    element: b,
                    m: j - m,
                },
                v,
                moding,
            );
            fock_apply(alg, CurrentMode { element: a, m }, &bv, moding)
        } else {
            let av = fock_apply(alg, CurrentMode { element: a, m }, v, moding);
            fock_apply(
                alg,
                CurrentMode {
                    element: b,
                    m: j - m,
                },
                &av,
                moding,
            )
        };
        out.add_scaled(&term, &Rational::one());
    }
    out
}

/// Checks that every mode `j` in `modes` of the composite field annihilates
/// every state of the sector with degree at most `max_degree`. Failures are
/// listed in basis order, then by `j`.
pub fn check_composite_field(
    alg: &LieAlgebra,
    sector: Sector,
    max_degree: u32,
    modes: (i64, i64),
    combination: Combination,
) -> CompositeFieldReport {
    let l = alg.rank();
    let x11 = alg.root(&unit_root(l, &[(0, 1), (1, 1)]));
    let x2a = alg.root(&unit_root(l, &[(0, 2)]));
    let x2b = alg.root(&unit_root(l, &[(1, 2)]));
    let sign = match combination {
        Combination::Minus => -Rational::one(),
        Combination::Plus => Rational::one(),
    };
    let basis = sector_basis(sector, l, max_degree);
    let failures: Vec<CompositeFieldWitness> = basis
        .par_iter()
        .flat_map_iter(|state| {
            let v = FockVector::basis(state.clone());
            let sign = sign.clone();
            (modes.0..=modes.1).filter_map(move |j| {
                let mut image = normal_product_mode(alg, x11, x11, j, &v, sector.moding);
                image.add_scaled(
                    &normal_product_mode(alg, x2a, x2b, j, &v, sector.moding),
                    &sign,
                );
                (!image.is_zero()).then(|| CompositeFieldWitness {
                    state: state.to_string(),
                    j,
                    image: image.to_string(),
                })
            })
        })
        .collect();
    CompositeFieldReport {
        sector,
        combination,
        max_degree,
        modes,
        checked: basis.len(),
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weylreal::realize_sp;

    fn half_vac() -> FockVector {
        FockVector::basis(FockState::vacuum())
    }

    #[test]
    fn sector_round_trip() {
        for s in Sector::ALL {
            assert_eq!(s.to_string().parse::<Sector>().unwrap(), s);
        }
        assert!("int-odd".parse::<Sector>().is_ok());
        assert!("whole-even".parse::<Sector>().is_err());
    }

    #[test]
    fn cartan_zero_modes_on_vacua() {
        let alg = realize_sp(2).unwrap();
        for i in 0..2 {
            let h = CurrentMode {
                element: alg.cartan(i),
                m: 0,
            };
            assert!(fock_apply(&alg, h, &half_vac(), Moding::HalfInteger).is_zero());
            let hv = fock_apply(&alg, h, &half_vac(), Moding::Integer);
            assert_eq!(hv.coefficient(&FockState::vacuum()), q(-1, 2));
            assert_eq!(hv.len(), 1);
        }
    }

    #[test]
    fn central_term_long_root() {
        let alg = realize_sp(2).unwrap();
        let e = alg.root(&[2, 0]);
        let f = alg.root(&[-2, 0]);
        for moding in [Moding::HalfInteger, Moding::Integer] {
            let fv = fock_apply(&alg, CurrentMode { element: f, m: -1 }, &half_vac(), moding);
            let efv = fock_apply(&alg, CurrentMode { element: e, m: 1 }, &fv, moding);
            // -4 h_1(0) + 1 * (-4) * (-1/2) on the vacuum
            let h0 = if moding == Moding::Integer {
                q(-1, 2)
            } else {
                qi(0)
            };
            assert_eq!(
                efv.coefficient(&FockState::vacuum()),
                qi(-4) * h0 + qi(2),
                "{moding:?}"
            );
        }
    }

    #[test]
    fn basis_counts() {
        let half_even = sector_basis(Sector::ALL[0], 2, 1);
        // vacuum and the 10 products of two modes at -1/2
        assert_eq!(half_even.len(), 11);
        let int_odd = sector_basis(Sector::ALL[3], 2, 1);
        // x1, x2 and the four single modes at -1
        assert_eq!(int_odd.len(), 6);
    }

    #[test]
    fn top_weights_are_the_four_level_minus_half_weights() {
        let alg = realize_sp(2).unwrap();
        let w = |c: &[(i64, i64)]| AffineWeight::new(c.iter().map(|&(a, b)| q(a, b)).collect());
        let expected = [
            w(&[(-1, 2), (0, 1), (0, 1)]),
            w(&[(-3, 2), (1, 1), (0, 1)]),
            w(&[(0, 1), (0, 1), (-1, 2)]),
            w(&[(0, 1), (1, 1), (-3, 2)]),
        ];
        for (sector, exp) in Sector::ALL.iter().zip(&expected) {
            let tops = top_weights(&alg, *sector);
            assert_eq!(tops.len(), 1, "{sector}");
            assert!(
                tops[0].weight.same_lambda(exp),
                "{sector}: {}",
                tops[0].weight
            );
        }
    }

    #[test]
    fn affine_relations_low_degree() {
        let alg = realize_sp(2).unwrap();
        for sector in Sector::ALL {
            let r = check_affine_relations(&alg, sector, 1, 2);
            assert_eq!(r.failure, None);
        }
    }

    #[test]
    fn composite_field_small() {
        let alg = realize_sp(2).unwrap();
        for sector in Sector::ALL {
            assert!(
                check_composite_field(&alg, sector, 2, (-2, 2), Combination::Minus).passed(),
                "{sector}"
            );
        }
        let plus = check_composite_field(&alg, Sector::ALL[0], 2, (-2, 2), Combination::Plus);
        assert!(!plus.passed());
    }
}
