//! The generalized Verma module `N(k Lambda_0)` of affine `sp_2l`, spanned by
//! ordered monomials in negative modes applied to a vector `1` annihilated by
//! every nonnegative mode.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::cartan::AffineWeight;
use crate::error::{Error, Result};
use crate::exact::{fmt_q, qi, serde_q, MultiPoly, Rational};
use crate::weights::level_of;
use crate::weylreal::{realize_sp, LieAlgebra};

/// `X_g(-m)` with `m >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NegMode {
    pub m: u32,
    pub g: usize,
}

/// Nondecreasing word of negative modes; the leftmost entry acts last.
pub type VermaState = Vec<NegMode>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VermaVector {
    terms: BTreeMap<VermaState, Rational>,
}

impl VermaVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn top() -> Self {
        let mut v = Self::zero();
        v.add_term(Vec::new(), Rational::one());
        v
    }

    pub fn add_term(&mut self, s: VermaState, c: Rational) {
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

    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        for (s, v) in &other.terms {
            self.add_term(s.clone(), v * c);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&VermaState, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// The module at a fixed level, truncated at `t`-degree `max_degree`.
pub struct TruncatedVerma {
    alg: LieAlgebra,
    level: Rational,
    max_degree: u32,
    memo: Mutex<HashMap<(usize, i64, VermaState), VermaVector>>,
}

fn degree(s: &VermaState) -> u32 {
    s.iter().map(|x| x.m).sum()
}

impl TruncatedVerma {
    pub fn new(rank: usize, level: Rational, max_degree: u32) -> Result<Self> {
        Ok(Self {
            alg: realize_sp(rank)?,
            level,
            max_degree,
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.alg
    }

    pub fn level(&self) -> &Rational {
        &self.level
    }

    /// `X_g(k)` applied to a basis state.
    pub fn apply_state(&self, g: usize, k: i64, s: &VermaState) -> Result<VermaVector> {
        if k < 0 && degree(s) + (-k) as u32 > self.max_degree {
            return Err(Error::TruncationTooSmall {
                degree: self.max_degree,
                required: degree(s) + (-k) as u32,
            });
        }
        let Some(first) = s.first().copied() else {
            let mut out = VermaVector::zero();
            if k < 0 {
                out.add_term(vec![NegMode { m: (-k) as u32, g }], Rational::one());
            }
            return Ok(out);
        };
        if k < 0 && (NegMode { m: (-k) as u32, g }) <= first {
            let mut t = Vec::with_capacity(s.len() + 1);
            t.push(NegMode { m: (-k) as u32, g });
            t.extend_from_slice(s);
            let mut out = VermaVector::zero();
            out.add_term(t, Rational::one());
            return Ok(out);
        }
        let key = (g, k, s.clone());
        if let Some(hit) = self.memo.lock().expect("memo lock").get(&key) {
            return Ok(hit.clone());
        }
        // X(k) Y(-j) rest = Y(-j) X(k) rest + [X,Y](k-j) rest + k delta_{k,j} (X|Y) level rest
        let rest: VermaState = s[1..].to_vec();
        let j = first.m as i64;
        let mut out = VermaVector::zero();
        let moved = self.apply_state(g, k, &rest)?;
        for (t, c) in moved.terms() {
            out.add_scaled(&self.apply_state(first.g, -j, t)?, c);
        }
        for (z, c) in self.alg.bracket(g, first.g) {
            out.add_scaled(&self.apply_state(*z, k - j, &rest)?, c);
        }
        if k == j {
            let central = qi(k) * self.alg.form(g, first.g) * &self.level;
            out.add_term(rest, central);
        }
        self.memo
            .lock()
            .expect("memo lock")
            .insert(key, out.clone());
        Ok(out)
    }

    pub fn apply(&self, g: usize, k: i64, v: &VermaVector) -> Result<VermaVector> {
        let mut out = VermaVector::zero();
        for (s, c) in v.terms() {
            out.add_scaled(&self.apply_state(g, k, s)?, c);
        }
        Ok(out)
    }

    /// All basis states of degree at most `d`.
    pub fn basis(&self, d: u32) -> Vec<VermaState> {
        let dim = self.alg.dim();
        let modes: Vec<NegMode> = (1..=d)
            .flat_map(|m| (0..dim).map(move |g| NegMode { m, g }))
            .collect();
        fn rec(
            modes: &[NegMode],
            from: usize,
            left: u32,
            cur: &mut VermaState,
            out: &mut Vec<VermaState>,
        ) {
            out.push(cur.clone());
            for i in from..modes.len() {
                if modes[i].m <= left {
                    cur.push(modes[i]);
                    rec(modes, i, left - modes[i].m, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(&modes, 0, d, &mut Vec::new(), &mut out);
        out
    }

    /// Weight of a homogeneous vector: level, finite weight and `-degree`
    /// as the `delta` coefficient. `None` if `v` is zero or inhomogeneous.
    pub fn weight(&self, v: &VermaVector) -> Option<AffineWeight> {
        let l = self.alg.rank();
        let mut seen: Option<AffineWeight> = None;
        for (s, _) in v.terms() {
            let mut eps = vec![0i64; l];
            for x in s {
                for (e, w) in eps.iter_mut().zip(self.alg.weight(x.g)) {
                    *e += w;
                }
            }
            // h_j pairs with e_i as delta_ij, so the finite part is eps itself
            let finite: Vec<Rational> = eps.iter().map(|&e| qi(e)).collect();
            let mut w = AffineWeight::from_finite_part(&self.level, &finite);
            w.delta = -qi(degree(s) as i64);
            match &seen {
                Some(prev) if *prev != w => return None,
                _ => seen = Some(w),
            }
        }
        seen
    }
}

fn root_vec(l: usize, entries: &[(usize, i64)]) -> Vec<i64> {
    let mut v = vec![0; l];
    for &(i, c) in entries {
        v[i] += c;
    }
    v
}

/// `(X_{e1+e2}(-1)^2 - X_{2e1}(-1) X_{2e2}(-1))^n 1` in PBW form.
pub fn build_singular_vector(verma: &TruncatedVerma, n: u32) -> Result<VermaVector> {
    if verma.max_degree < 2 * n {
        return Err(Error::TruncationTooSmall {
            degree: verma.max_degree,
            required: 2 * n,
        });
    }
    let alg = verma.algebra();
    let l = alg.rank();
    let a = alg.root(&root_vec(l, &[(0, 1), (1, 1)]));
    let b = alg.root(&root_vec(l, &[(0, 2)]));
    let c = alg.root(&root_vec(l, &[(1, 2)]));
    let mut v = VermaVector::top();
    for _ in 0..n {
        let mut next = verma.apply(a, -1, &verma.apply(a, -1, &v)?)?;
        next.add_scaled(
            &verma.apply(b, -1, &verma.apply(c, -1, &v)?)?,
            &-Rational::one(),
        );
        v = next;
    }
    Ok(v)
}

/// `lambda_n - 2n gamma_0` with `gamma_0 = delta - (e_1 + e_2)`.
pub fn expected_singular_weight(rank: usize, n: u32) -> AffineWeight {
    let lambda_n = AffineWeight::fundamental(rank, 0).scale(&level_of(n));
    let mut gamma0 = &AffineWeight::fundamental(rank, 0) - &AffineWeight::fundamental(rank, 2);
    gamma0.delta = Rational::one();
    &lambda_n - &gamma0.scale(&qi(2 * n as i64))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RaisingCheck {
    pub op: String,
    pub zero: bool,
    pub image_terms: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub image: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularReport {
    pub n: u32,
    #[serde(with = "serde_q")]
    pub level: Rational,
    pub terms: usize,
    pub checks: Vec<RaisingCheck>,
}

impl SingularReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.zero)
    }
}

/// Applies `X_{alpha_i}(0)` for the finite simple roots and `X_{-theta}(1)`
/// to `v_n` in `N(level Lambda_0)` for `sp_4`.
pub fn singular_check_at(n: u32, level: Rational) -> Result<SingularReport> {
    let verma = TruncatedVerma::new(2, level.clone(), 2 * n + 1)?;
    let v = build_singular_vector(&verma, n)?;
    let alg = verma.algebra();
    let ops = [
        ("X[e1-e2](0)", alg.root(&[1, -1]), 0),
        ("X[2e2](0)", alg.root(&[0, 2]), 0),
        ("X[-2e1](1)", alg.root(&[-2, 0]), 1),
    ];
    let checks = ops
        .iter()
        .map(|(name, g, k)| {
            let image = verma.apply(*g, *k, &v)?;
            Ok(RaisingCheck {
                op: name.to_string(),
                zero: image.is_zero(),
                image_terms: image.len(),
                image: (!image.is_zero()).then(|| image.to_string()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SingularReport {
        n,
        level,
        terms: v.len(),
        checks,
    })
}

/// [`singular_check_at`] at level `n - 3/2`.
pub fn singular_check(n: u32) -> Result<SingularReport> {
    singular_check_at(n, level_of(n))
}

/// True when `p_1, p_2, p_3` vanish on every adjacent pair of finite
/// coordinates `(lambda(h_j), lambda(h_{j+1}))`.
pub fn evaluate_module_criterion(
    lambda: &AffineWeight,
    n: u32,
    polys: &[MultiPoly; 3],
) -> Result<bool> {
    let expected = level_of(n);
    if lambda.level() != expected {
        return Err(Error::level_mismatch(&expected, &lambda.level()));
    }
    let fin = lambda.finite_part();
    Ok(fin.windows(2).all(|w| {
        polys
            .iter()
            .all(|p| p.eval(&[w[0].clone(), w[1].clone()]).is_zero())
    }))
}

impl fmt::Display for VermaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (s, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({})", fmt_q(c))?;
            for x in s {
                write!(f, " g{}(-{})", x.g, x.m)?;
            }
            f.write_str(" 1")?;
        }
        Ok(())
    }
}
