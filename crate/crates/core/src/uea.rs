//! PBW arithmetic in the universal enveloping algebra of `sp_2l`.
//!
//! Monomials are exponent vectors over the basis of [`LieAlgebra`], read in its
//! order (negative root vectors, Cartan, positive root vectors). With positive
//! root vectors on the right, the left ideal `U(g) n_+` is spanned by the
//! monomials that contain a positive factor.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{qi, EchelonBasis, MultiPoly, Rational};
use crate::weylreal::{realize_sp, Block, LieAlgebra};

pub type Monomial = Vec<u32>;

/// A rational combination of PBW monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UeaElement {
    terms: BTreeMap<Monomial, Rational>,
}

impl UeaElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_monomial(m: Monomial, c: Rational) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                *e += c;
                if e.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }

    pub fn as_map(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }
}

/// The enveloping algebra of a fixed `sp_2l`, with a cache of
/// monomial-times-generator products.
pub struct Uea {
    alg: LieAlgebra,
    memo: Mutex<HashMap<(Monomial, usize), UeaElement>>,
}

impl Uea {
    pub fn new(rank: usize) -> Result<Self> {
        Ok(Self::from_algebra(realize_sp(rank)?))
    }

    pub fn from_algebra(alg: LieAlgebra) -> Self {
        Self {
            alg,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.alg
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn one(&self) -> UeaElement {
        UeaElement::from_monomial(vec![0; self.dim()], Rational::one())
    }

    pub fn scalar(&self, c: Rational) -> UeaElement {
        UeaElement::from_monomial(vec![0; self.dim()], c)
    }

    pub fn gen(&self, g: usize) -> UeaElement {
        self.gen_pow(g, 1)
    }

    pub fn gen_pow(&self, g: usize, k: u32) -> UeaElement {
        let mut m = vec![0; self.dim()];
        m[g] = k;
        UeaElement::from_monomial(m, Rational::one())
    }

    /// Root vector for a root in epsilon coordinates.
    pub fn root(&self, eps: &[i64]) -> UeaElement {
        self.gen(self.alg.root(eps))
    }

    pub fn h(&self, i: usize) -> UeaElement {
        self.gen(self.alg.cartan(i))
    }

    fn mul_gen(&self, m: &Monomial, g: usize) -> UeaElement {
        let last = m.iter().rposition(|&e| e > 0);
        match last {
            Some(y) if y > g => {}
            _ => {
                let mut out = m.clone();
                out[g] += 1;
                return UeaElement::from_monomial(out, Rational::one());
            }
        }
        let key = (m.clone(), g);
        if let Some(hit) = self.memo.lock().expect("memo lock").get(&key) {
            return hit.clone();
        }
        let y = last.expect("checked above");
        let mut rest = m.clone();
        rest[y] -= 1;
        // rest * y * g = (rest * g) * y + rest * [y, g]
        let mut out = UeaElement::zero();
        for (mono, c) in self.mul_gen(&rest, g).terms() {
            out.add_scaled(&self.mul_gen(mono, y), c);
        }
        for (z, c) in self.alg.bracket(y, g) {
            out.add_scaled(&self.mul_gen(&rest, *z), c);
        }
        self.memo
            .lock()
            .expect("memo lock")
            .insert(key, out.clone());
        out
    }

    fn mul_monomial(&self, f: &UeaElement, m: &Monomial) -> UeaElement {
        let mut acc = f.clone();
        for (g, &e) in m.iter().enumerate() {
            for _ in 0..e {
                let mut next = UeaElement::zero();
                for (mono, c) in acc.terms() {
                    next.add_scaled(&self.mul_gen(mono, g), c);
                }
                acc = next;
            }
        }
        acc
    }

    pub fn mul(&self, f: &UeaElement, g: &UeaElement) -> UeaElement {
        let mut out = UeaElement::zero();
        for (m, c) in g.terms() {
            out.add_scaled(&self.mul_monomial(f, m), c);
        }
        out
    }

    pub fn pow(&self, f: &UeaElement, k: u32) -> UeaElement {
        (0..k).fold(self.one(), |acc, _| self.mul(&acc, f))
    }

    pub fn commutator(&self, f: &UeaElement, g: &UeaElement) -> UeaElement {
        self.mul(f, g).sub(&self.mul(g, f))
    }

    /// `(ad x)^k f`.
    pub fn adjoint_power(&self, x: &UeaElement, k: u32, f: &UeaElement) -> UeaElement {
        (0..k).fold(f.clone(), |acc, _| self.commutator(x, &acc))
    }

    /// `(x_1 x_2 ... x_r)_L f = ad x_1 (ad x_2 (... ad x_r f))`.
    pub fn adjoint_word(&self, word: &[(&UeaElement, u32)], f: &UeaElement) -> UeaElement {
        word.iter()
            .rev()
            .fold(f.clone(), |acc, (x, k)| self.adjoint_power(x, *k, &acc))
    }

    /// `ad h` weight of a PBW monomial, in epsilon coordinates.
    pub fn monomial_weight(&self, m: &Monomial) -> Vec<i64> {
        let mut w = vec![0; self.alg.rank()];
        for (g, &e) in m.iter().enumerate() {
            for (wi, ai) in w.iter_mut().zip(self.alg.weight(g)) {
                *wi += e as i64 * ai;
            }
        }
        w
    }

    pub fn is_weight_zero(&self, f: &UeaElement) -> bool {
        f.terms()
            .all(|(m, _)| self.monomial_weight(m).iter().all(|&x| x == 0))
    }

    fn has_block(&self, m: &Monomial, block: Block) -> bool {
        m.iter()
            .enumerate()
            .any(|(g, &e)| e > 0 && self.alg.block(g) == block)
    }

    /// Drops every monomial lying in `U(g) n_+`.
    pub fn reduce_mod_n_plus(&self, f: &UeaElement) -> UeaElement {
        let mut out = UeaElement::zero();
        for (m, c) in f.terms() {
            if !self.has_block(m, Block::Positive) {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// True when every PBW monomial has a positive root factor.
    pub fn in_left_ideal_n_plus(&self, f: &UeaElement) -> bool {
        self.reduce_mod_n_plus(f).is_zero()
    }

    /// True when `f` lies in the left ideal generated by generator `g`, which
    /// must be the last generator in PBW order of its block for the test to
    /// be meaningful; here it is used with the last positive generator.
    pub fn in_left_ideal_of_last(&self, f: &UeaElement, g: usize) -> bool {
        assert!(
            m_is_last_positive(&self.alg, g),
            "generator is not last in PBW order"
        );
        f.terms().all(|(m, _)| m[g] > 0)
    }

    /// The `U(h)` component of a weight-zero element modulo `U(g) n_+`, as a
    /// polynomial in `h_1..h_l`.
    pub fn hc_project(&self, f: &UeaElement) -> Result<MultiPoly> {
        if !self.is_weight_zero(f) {
            return Err(Error::NotWeightZero);
        }
        let l = self.alg.rank();
        let mut out = MultiPoly::zero(l);
        for (m, c) in self.reduce_mod_n_plus(f).terms() {
            assert!(
                !self.has_block(m, Block::Negative),
                "weight-zero monomial without positive factor has a negative factor"
            );
            let exps = (0..l).map(|i| m[self.alg.cartan(i)]).collect();
            out.add_term(exps, c.clone());
        }
        Ok(out)
    }

    /// Embeds a polynomial in `h_1..h_l` into `U(h)`.
    pub fn from_h_poly(&self, p: &MultiPoly) -> UeaElement {
        let mut out = UeaElement::zero();
        for (exps, c) in p.terms() {
            let mut m = vec![0; self.dim()];
            for (i, &e) in exps.iter().enumerate() {
                m[self.alg.cartan(i)] = e;
            }
            out.add_term(m, c.clone());
        }
        out
    }
}

fn m_is_last_positive(alg: &LieAlgebra, g: usize) -> bool {
    g + 1 == alg.dim() && alg.block(g) == Block::Positive
}

fn rank2(uea: &Uea) -> Result<()> {
    match uea.algebra().rank() {
        2 => Ok(()),
        l => Err(Error::UnsupportedRank(l)),
    }
}

/// `X_{e1+e2}^2 - X_{2e1} X_{2e2}`, the top of the generating vector at `n = 1`.
pub fn w_vector(uea: &Uea) -> UeaElement {
    let a = uea.root(&[1, 1]);
    let sq = uea.mul(&a, &a);
    sq.sub(&uea.mul(&uea.root(&[2, 0]), &uea.root(&[0, 2])))
}

/// The unnormalised projections whose zero sets cut out the allowed highest
/// weights at level `n - 3/2`.
pub fn compute_p_raw(uea: &Uea, index: u8, n: u32) -> Result<MultiPoly> {
    rank2(uea)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let element = match index {
        1 => {
            let wn = uea.pow(&w_vector(uea), n);
            uea.adjoint_word(
                &[(&uea.root(&[1, -1]), 2 * n), (&uea.root(&[-2, 0]), 2 * n)],
                &wn,
            )
        }
        2 => {
            let wn = uea.pow(&w_vector(uea), n);
            uea.adjoint_word(&[(&uea.root(&[-2, 0]), n), (&uea.root(&[0, -2]), n)], &wn)
        }
        3 => {
            let b = uea.root(&[-1, -1]);
            let lower = uea
                .mul(&b, &b)
                .sub(&uea.mul(&uea.root(&[-2, 0]), &uea.root(&[0, -2])));
            uea.adjoint_power(&uea.root(&[1, 1]), 2 * n, &uea.pow(&lower, n))
        }
        _ => return Err(Error::InvalidParameter(format!("no polynomial p{index}"))),
    };
    let p = uea.hc_project(&element)?;
    if p.is_zero() {
        return Err(Error::ZeroProjection { index, n });
    }
    Ok(p)
}

/// [`compute_p_raw`] divided by its leading coefficient.
pub fn compute_p(uea: &Uea, index: u8, n: u32) -> Result<MultiPoly> {
    compute_p_raw(uea, index, n).map(|p| p.monic())
}

/// Basis of the polynomials obtained by projecting the zero-weight part of
/// the adjoint module generated by `w^n`. Fails if the module exceeds `cap`
/// dimensions before closing.
pub fn adjoint_module_zero_weight(uea: &Uea, n: u32, cap: usize) -> Result<Vec<MultiPoly>> {
    rank2(uea)?;
    let start = uea.pow(&w_vector(uea), n);
    let mut basis: EchelonBasis<Monomial> = EchelonBasis::new();
    let mut queue = vec![start.as_map().clone()];
    basis.insert(&queue[0]);
    let mut zero_weight = Vec::new();
    while let Some(v) = queue.pop() {
        let elt = UeaElement { terms: v };
        if uea.is_weight_zero(&elt) {
            zero_weight.push(elt.clone());
        }
        for g in 0..uea.dim() {
            let image = uea.commutator(&uea.gen(g), &elt);
            if !image.is_zero() && basis.insert(image.as_map()) {
                if basis.dim() > cap {
                    return Err(Error::ClosureCapExceeded(cap));
                }
                queue.push(image.terms);
            }
        }
    }
    let mut polys: EchelonBasis<Vec<u32>> = EchelonBasis::new();
    for u in &zero_weight {
        let p = uea.hc_project(u)?;
        let map: BTreeMap<Vec<u32>, Rational> =
            p.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
        polys.insert(&map);
    }
    Ok(polys
        .rows()
        .map(|row| {
            let mut p = MultiPoly::zero(2);
            for (e, c) in row {
                p.add_term(e.clone(), c.clone());
            }
            p
        })
        .collect())
}

/// True when `p` is a rational combination of `basis`.
pub fn poly_in_span(basis: &[MultiPoly], p: &MultiPoly) -> bool {
    let mut span: EchelonBasis<Vec<u32>> = EchelonBasis::new();
    for b in basis {
        span.insert(&b.terms().map(|(e, c)| (e.clone(), c.clone())).collect());
    }
    span.contains(&p.terms().map(|(e, c)| (e.clone(), c.clone())).collect())
}

/// `Some(c)` with `x = c * y` for a nonzero rational `c`.
pub fn element_ratio(x: &UeaElement, y: &UeaElement) -> Option<Rational> {
    let (m, c) = y.terms().next()?;
    let r = x.as_map().get(m)? / c;
    (!r.is_zero() && y.scale(&r) == *x).then_some(r)
}

/// `(-1)^k 4^k n (n-1) ... (n-k+1)` as used by the long-root projections.
pub fn long_root_scalar(n: u32, k: u32) -> Rational {
    let mut c = qi(if k.is_multiple_of(2) { 1 } else { -1 });
    for i in 0..k {
        c *= qi(4 * (n - i) as i64);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{falling_product, q};

    fn uea() -> Uea {
        Uea::new(2).unwrap()
    }

    fn h(i: usize) -> MultiPoly {
        MultiPoly::var(2, i)
    }

    #[test]
    fn long_root_product() {
        let u = uea();
        let e = u.root(&[2, 0]);
        let f = u.root(&[-2, 0]);
        let expected = u.mul(&f, &e).sub(&u.h(0).scale(&qi(4)));
        assert_eq!(u.mul(&e, &f), expected);
        let one = u.one();
        assert_eq!(u.mul(&e, &one), e);
    }

    #[test]
    fn cartan_passes_root_vectors() {
        let u = uea();
        for eps in [[1, -1], [2, 0], [1, 1], [0, -2], [-1, -1]] {
            let x = u.root(&eps);
            let lhs = u.mul(&u.h(0), &x);
            let shifted = u.h(0).add(&u.scalar(qi(eps[0])));
            assert_eq!(lhs, u.mul(&x, &shifted));
        }
    }

    #[test]
    fn associativity_and_jacobi_samples() {
        let u = uea();
        let d = u.dim();
        for a in 0..d {
            for b in (0..d).step_by(3) {
                for c in (0..d).step_by(2) {
                    let (x, y, z) = (u.gen(a), u.gen(b), u.gen(c));
                    assert_eq!(u.mul(&u.mul(&x, &y), &z), u.mul(&x, &u.mul(&y, &z)));
                    let j = u
                        .commutator(&x, &u.commutator(&y, &z))
                        .add(&u.commutator(&y, &u.commutator(&z, &x)))
                        .add(&u.commutator(&z, &u.commutator(&x, &y)));
                    assert!(j.is_zero());
                }
            }
        }
    }

    #[test]
    fn projections_of_long_root_powers() {
        let u = uea();
        let e = u.root(&[2, 0]);
        let f = u.root(&[-2, 0]);
        assert_eq!(
            u.hc_project(&u.adjoint_power(&e, 1, &f)).unwrap(),
            h(0).scale(&qi(-4))
        );
        let e2 = u.root(&[0, 2]);
        let p = u
            .hc_project(&u.adjoint_power(&e2, 2, &u.gen_pow(u.algebra().root(&[0, -2]), 2)))
            .unwrap();
        let expected = falling_product(&h(1), 2, &qi(-1)).scale(&qi(32));
        assert_eq!(p, expected);
        let hh = &h(0) * &h(1);
        assert_eq!(u.hc_project(&u.from_h_poly(&hh)).unwrap(), hh);
    }

    #[test]
    fn rejects_nonzero_weight() {
        let u = uea();
        assert_eq!(u.hc_project(&u.root(&[2, 0])), Err(Error::NotWeightZero));
        assert!(matches!(
            Uea::new(3).map(|u| compute_p(&u, 1, 1)),
            Ok(Err(Error::UnsupportedRank(3)))
        ));
    }

    #[test]
    fn p_polynomials_at_n1() {
        let u = uea();
        let p1 = compute_p(&u, 1, 1).unwrap();
        let d = &h(0) - &h(1);
        assert!(p1.ratio_to(&falling_product(&d, 2, &qi(-1))).is_some());
        let p2 = compute_p(&u, 2, 1).unwrap();
        let e2 = &(&h(0) + &MultiPoly::constant(2, q(1, 2))) * &h(1);
        assert!(p2.ratio_to(&e2).is_some(), "{p2}");
        let p3 = compute_p(&u, 3, 1).unwrap();
        let s = &h(0) + &h(1);
        let e3 = &h(1).scale(&qi(4)) + &(&s * &(&s - &MultiPoly::one(2)));
        assert!(p3.ratio_to(&e3).is_some(), "{p3}");
    }

    #[test]
    fn adjoint_module_at_n1() {
        let u = uea();
        let polys = adjoint_module_zero_weight(&u, 1, 200).unwrap();
        assert!(!polys.is_empty());
        for i in 1..=3 {
            assert!(poly_in_span(&polys, &compute_p(&u, i, 1).unwrap()));
        }
        assert!(matches!(
            adjoint_module_zero_weight(&u, 1, 3),
            Err(Error::ClosureCapExceeded(3))
        ));
    }

    #[test]
    fn scalar_helper() {
        assert_eq!(long_root_scalar(3, 2), qi(16 * 6));
        assert_eq!(long_root_scalar(2, 1), qi(-8));
    }
}
