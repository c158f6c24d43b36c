//! `sp_2l` realised by symmetrised quadratics in the Weyl algebra, and the
//! structure constants and invariant form read off from that realisation.
//!
//! Root vectors are fixed as
//! `X_{e_i - e_j} = :a_i a_j^*:`, `X_{e_i + e_j} = :a_i a_j:`,
//! `X_{-(e_i + e_j)} = :a_i^* a_j^*:` (including `i = j` for the long roots)
//! and `h_i = -:a_i a_i^*:`. Every other module takes its brackets from here.

mod fock;
mod weyl;

pub use fock::{
    check_affine_relations, check_composite_field, fock_apply, raising_modes, sector_basis,
    top_weights, AffineRelationReport, Combination, CompositeFieldReport, CompositeFieldWitness,
    CurrentMode, FockState, FockVector, Mode, Moding, Parity, Sector, TopWeight,
};
pub use weyl::{Osc, WeylElement, WeylMonomial};

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::cartan::Root;
use crate::error::{Error, Result};
use crate::exact::{qi, Rational};

/// Linear combination of `:xy:` with `x <= y` in the `Osc` order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WeylQuadratic {
    terms: BTreeMap<(Osc, Osc), Rational>,
}

impl WeylQuadratic {
    pub fn pair(x: Osc, y: Osc, c: Rational) -> Self {
        let mut out = Self::default();
        out.add(x, y, c);
        out
    }

    pub fn add(&mut self, x: Osc, y: Osc, c: Rational) {
        let key = if x <= y { (x, y) } else { (y, x) };
        let e = self.terms.entry(key).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Osc, Osc), &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_weyl(&self, rank: usize) -> WeylElement {
        let mut out = WeylElement::zero(rank);
        for (&(x, y), c) in &self.terms {
            out = &out + &WeylElement::symmetric(rank, x, y).scale(c);
        }
        out
    }

    /// Reads a Weyl algebra element back as a symmetrised quadratic. Fails if
    /// the element has terms of degree other than two or a constant that is
    /// not the one produced by symmetrisation.
    pub fn from_weyl(e: &WeylElement) -> Option<Self> {
        let rank = e.rank();
        let mut out = Self::default();
        for (m, c) in e.terms() {
            match m.degree() {
                0 => {}
                2 => {
                    let mut gens = Vec::with_capacity(2);
                    for i in 0..rank {
                        for _ in 0..m.star[i] {
                            gens.push(Osc::AStar(i));
                        }
                        for _ in 0..m.plain[i] {
                            gens.push(Osc::A(i));
                        }
                    }
                    // (a*)^p a^q has coefficient 1 in :xy: except x = y where
                    // :xx: = x^2 has coefficient 1 too
                    out.add(gens[0], gens[1], c.clone());
                }
                _ => return None,
            }
        }
        (out.to_weyl(rank) == *e).then_some(out)
    }

    pub fn commutator(&self, other: &Self, rank: usize) -> Option<Self> {
        Self::from_weyl(&self.to_weyl(rank).commutator(&other.to_weyl(rank)))
    }
}

/// Label of a basis element of `sp_2l`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Root(Root),
    /// `h_{i+1}`.
    Cartan(usize),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Root(r) => write!(f, "X[{r}]"),
            Label::Cartan(i) => write!(f, "h{}", i + 1),
        }
    }
}

/// Where a basis element sits in the triangular decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Block {
    Negative,
    Cartan,
    Positive,
}

/// `sp_2l` with its fixed basis, brackets and normalised invariant form.
///
/// Basis order is the PBW order used throughout: negative root vectors, then
/// `h_1..h_l`, then positive root vectors. Positive roots are ordered
/// `e_i - e_j`, then `2 e_i`, then `e_i + e_j`; the negative block uses the
/// same pattern with signs flipped.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    rank: usize,
    labels: Vec<Label>,
    quadratics: Vec<WeylQuadratic>,
    weights: Vec<Vec<i64>>,
    blocks: Vec<Block>,
    brackets: Vec<Vec<Vec<(usize, Rational)>>>,
    form: Vec<Vec<Rational>>,
}

fn ordered_positive_roots(rank: usize) -> Vec<Root> {
    let mut out = Vec::new();
    for i in 0..rank {
        for j in (i + 1)..rank {
            let mut v = vec![0; rank];
            v[i] = 1;
            v[j] = -1;
            out.push(Root(v));
        }
    }
    for i in 0..rank {
        let mut v = vec![0; rank];
        v[i] = 2;
        out.push(Root(v));
    }
    for i in 0..rank {
        for j in (i + 1)..rank {
            let mut v = vec![0; rank];
            v[i] = 1;
            v[j] = 1;
            out.push(Root(v));
        }
    }
    out
}

/// The fixed quadratic attached to a root or Cartan label.
pub fn root_quadratic(label: &Label) -> WeylQuadratic {
    match label {
        Label::Cartan(i) => WeylQuadratic::pair(Osc::A(*i), Osc::AStar(*i), -Rational::one()),
        Label::Root(r) => {
            let plus: Vec<usize> =
                r.0.iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0)
                    .map(|(i, _)| i)
                    .collect();
            let minus: Vec<usize> =
                r.0.iter()
                    .enumerate()
                    .filter(|(_, &c)| c < 0)
                    .map(|(i, _)| i)
                    .collect();
            let one = Rational::one();
            match (plus.as_slice(), minus.as_slice()) {
                ([i], [j]) => WeylQuadratic::pair(Osc::A(*i), Osc::AStar(*j), one),
                ([i], []) if r.0[*i] == 2 => WeylQuadratic::pair(Osc::A(*i), Osc::A(*i), one),
                ([i, j], []) => WeylQuadratic::pair(Osc::A(*i), Osc::A(*j), one),
                ([], [i]) if r.0[*i] == -2 => {
                    WeylQuadratic::pair(Osc::AStar(*i), Osc::AStar(*i), one)
                }
                ([], [i, j]) => WeylQuadratic::pair(Osc::AStar(*i), Osc::AStar(*j), one),
                _ => panic!("not a root of C_l: {r:?}"),
            }
        }
    }
}

/// Builds `sp_2l` from the Weyl algebra and checks closure of every bracket.
pub fn realize_sp(rank: usize) -> Result<LieAlgebra> {
    if rank < 2 {
        return Err(Error::RankTooSmall(rank));
    }
    let positive = ordered_positive_roots(rank);
    let mut labels: Vec<Label> = positive
        .iter()
        .map(|r| Label::Root(Root(r.0.iter().map(|x| -x).collect())))
        .collect();
    labels.extend((0..rank).map(Label::Cartan));
    labels.extend(positive.iter().cloned().map(Label::Root));

    let quadratics: Vec<WeylQuadratic> = labels.iter().map(root_quadratic).collect();
    let weights = labels
        .iter()
        .map(|l| match l {
            Label::Root(r) => r.0.clone(),
            Label::Cartan(_) => vec![0; rank],
        })
        .collect();
    let blocks = labels
        .iter()
        .map(|l| match l {
            Label::Root(r) if r.is_positive() => Block::Positive,
            Label::Root(_) => Block::Negative,
            Label::Cartan(_) => Block::Cartan,
        })
        .collect();

    // each basis quadratic is a single :xy:, so decomposition is a lookup
    let mut by_pair: BTreeMap<(Osc, Osc), (usize, Rational)> = BTreeMap::new();
    for (idx, quad) in quadratics.iter().enumerate() {
        let (key, c) = quad.terms().next().expect("basis quadratic is nonzero");
        by_pair.insert(*key, (idx, c.clone()));
    }
    let decompose = |quad: &WeylQuadratic| -> Vec<(usize, Rational)> {
        let mut out: Vec<(usize, Rational)> = quad
            .terms()
            .map(|(key, c)| {
                let (idx, unit) = &by_pair[key];
                (*idx, c / unit)
            })
            .collect();
        out.sort_by_key(|(i, _)| *i);
        out
    };

    let dim = labels.len();
    let mut brackets = vec![vec![Vec::new(); dim]; dim];
    for a in 0..dim {
        for b in 0..dim {
            let comm = quadratics[a]
                .commutator(&quadratics[b], rank)
                .expect("symmetrised quadratics close under the commutator");
            brackets[a][b] = decompose(&comm);
        }
    }

    // trace form on the defining representation span{a_i, a_i^*}
    let defining: Vec<Osc> = (0..rank)
        .map(Osc::A)
        .chain((0..rank).map(Osc::AStar))
        .collect();
    let matrices: Vec<Vec<Vec<Rational>>> = quadratics
        .iter()
        .map(|quad| {
            let w = quad.to_weyl(rank);
            let mut mat = vec![vec![Rational::zero(); 2 * rank]; 2 * rank];
            for (col, &v) in defining.iter().enumerate() {
                let image = w.commutator(&WeylElement::generator(rank, v));
                for (m, c) in image.terms() {
                    let row = (0..rank)
                        .find(|&i| m.plain[i] == 1)
                        .or_else(|| (0..rank).find(|&i| m.star[i] == 1).map(|i| i + rank))
                        .expect("linear image");
                    mat[row][col] = c.clone();
                }
            }
            mat
        })
        .collect();
    let form = (0..dim)
        .map(|a| {
            (0..dim)
                .map(|b| {
                    let (ma, mb) = (&matrices[a], &matrices[b]);
                    let mut tr = Rational::zero();
                    for i in 0..2 * rank {
                        for (k, mbk) in mb.iter().enumerate() {
                            tr += &ma[i][k] * &mbk[i];
                        }
                    }
                    tr
                })
                .collect()
        })
        .collect();

    Ok(LieAlgebra {
        rank,
        labels,
        quadratics,
        weights,
        blocks,
        brackets,
        form,
    })
}

impl LieAlgebra {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: usize) -> &Label {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn quadratic(&self, i: usize) -> &WeylQuadratic {
        &self.quadratics[i]
    }

    /// Epsilon-coordinates of the `ad h` weight of basis element `i`.
    pub fn weight(&self, i: usize) -> &[i64] {
        &self.weights[i]
    }

    pub fn block(&self, i: usize) -> Block {
        self.blocks[i]
    }

    pub fn bracket(&self, a: usize, b: usize) -> &[(usize, Rational)] {
        &self.brackets[a][b]
    }

    /// Invariant form normalised by `(theta | theta) = 2`.
    pub fn form(&self, a: usize, b: usize) -> &Rational {
        &self.form[a][b]
    }

    pub fn index_of(&self, label: &Label) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Index of the root vector for a root given in epsilon coordinates.
    pub fn root(&self, eps: &[i64]) -> usize {
        self.index_of(&Label::Root(Root(eps.to_vec())))
            .unwrap_or_else(|| panic!("{eps:?} is not a root"))
    }

    pub fn cartan(&self, i: usize) -> usize {
        self.index_of(&Label::Cartan(i))
            .expect("cartan index in range")
    }

    /// Bracket of two arbitrary linear combinations.
    pub fn bracket_vec(
        &self,
        x: &[(usize, Rational)],
        y: &[(usize, Rational)],
    ) -> BTreeMap<usize, Rational> {
        let mut out = BTreeMap::new();
        for (a, ca) in x {
            for (b, cb) in y {
                for (c, k) in &self.brackets[*a][*b] {
                    let e = out.entry(*c).or_insert_with(Rational::zero);
                    *e += ca * cb * k;
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
}

/// `[X_{2e1}, X_{-2e1}]` through the fixed basis, handy for quick sanity checks.
pub fn long_root_bracket_scalar(alg: &LieAlgebra) -> Rational {
    let e = alg.root(&{
        let mut v = vec![0; alg.rank()];
        v[0] = 2;
        v
    });
    let f = alg.root(&{
        let mut v = vec![0; alg.rank()];
        v[0] = -2;
        v
    });
    let h = alg.cartan(0);
    alg.bracket(e, f)
        .iter()
        .find(|(i, _)| *i == h)
        .map(|(_, c)| c.clone())
        .unwrap_or_else(|| qi(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn eps(v: &[i64]) -> Vec<i64> {
        v.to_vec()
    }

    #[test]
    fn dimension_and_blocks() {
        for l in 2..=4 {
            let alg = realize_sp(l).unwrap();
            assert_eq!(alg.dim(), 2 * l * l + l);
            let blocks: Vec<Block> = (0..alg.dim()).map(|i| alg.block(i)).collect();
            let mut sorted = blocks.clone();
            sorted.sort();
            assert_eq!(blocks, sorted, "PBW order is n- < h < n+");
        }
    }

    #[test]
    fn long_root_sl2() {
        let alg = realize_sp(2).unwrap();
        assert_eq!(long_root_bracket_scalar(&alg), qi(-4));
        let e = alg.root(&eps(&[2, 0]));
        let f = alg.root(&eps(&[-2, 0]));
        assert_eq!(alg.bracket(e, f), &[(alg.cartan(0), qi(-4))]);
    }

    #[test]
    fn cartan_acts_by_weights() {
        let alg = realize_sp(3).unwrap();
        for x in 0..alg.dim() {
            for i in 0..3 {
                let h = alg.cartan(i);
                let w = alg.weight(x)[i];
                let expected: Vec<(usize, Rational)> =
                    if w == 0 { vec![] } else { vec![(x, qi(w))] };
                assert_eq!(
                    alg.bracket(h, x),
                    expected.as_slice(),
                    "[h{}, {}]",
                    i + 1,
                    alg.label(x)
                );
            }
        }
    }

    #[test]
    fn short_long_bracket_regression() {
        // [X_{e1-e2}, X_{e1+e2}] = [a1 a2*, a1 a2] = -a1^2 = -X_{2e1}
        let alg = realize_sp(2).unwrap();
        let x = alg.root(&eps(&[1, -1]));
        let y = alg.root(&eps(&[1, 1]));
        assert_eq!(alg.bracket(x, y), &[(alg.root(&eps(&[2, 0])), qi(-1))]);
    }

    #[test]
    fn brackets_respect_weights_and_antisymmetry() {
        let alg = realize_sp(3).unwrap();
        for a in 0..alg.dim() {
            for b in 0..alg.dim() {
                let ab = alg.bracket(a, b);
                let ba = alg.bracket(b, a);
                let neg: Vec<(usize, Rational)> =
                    ba.iter().map(|(i, c)| (*i, -c.clone())).collect();
                assert_eq!(ab, neg.as_slice());
                let w: Vec<i64> = alg
                    .weight(a)
                    .iter()
                    .zip(alg.weight(b))
                    .map(|(x, y)| x + y)
                    .collect();
                for (c, _) in ab {
                    assert_eq!(alg.weight(*c), w.as_slice());
                }
            }
        }
    }

    #[test]
    fn jacobi() {
        let alg = realize_sp(2).unwrap();
        let d = alg.dim();
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    let one = |i: usize| vec![(i, Rational::one())];
                    let bc: Vec<_> = alg.bracket_vec(&one(b), &one(c)).into_iter().collect();
                    let ca: Vec<_> = alg.bracket_vec(&one(c), &one(a)).into_iter().collect();
                    let ab: Vec<_> = alg.bracket_vec(&one(a), &one(b)).into_iter().collect();
                    let mut total = alg.bracket_vec(&one(a), &bc);
                    for (k, v) in alg
                        .bracket_vec(&one(b), &ca)
                        .into_iter()
                        .chain(alg.bracket_vec(&one(c), &ab))
                    {
                        *total.entry(k).or_insert_with(Rational::zero) += v;
                    }
                    assert!(total.values().all(|v| v.is_zero()));
                }
            }
        }
    }

    #[test]
    fn form_normalisation_and_invariance() {
        let alg = realize_sp(2).unwrap();
        let h1 = alg.cartan(0);
        assert_eq!(alg.form(h1, h1), &qi(2));
        let e = alg.root(&eps(&[2, 0]));
        let f = alg.root(&eps(&[-2, 0]));
        assert_eq!(alg.form(e, f), &qi(-4));
        let d = alg.dim();
        for x in 0..d {
            for y in 0..d {
                assert_eq!(alg.form(x, y), alg.form(y, x));
                for z in 0..d {
                    // ([x,y] | z) = (x | [y,z])
                    let lhs: Rational = alg
                        .bracket(x, y)
                        .iter()
                        .map(|(k, c)| c * alg.form(*k, z))
                        .sum();
                    let rhs: Rational = alg
                        .bracket(y, z)
                        .iter()
                        .map(|(k, c)| c * alg.form(x, *k))
                        .sum();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn quadratic_round_trip() {
        let quad = WeylQuadratic::pair(Osc::A(0), Osc::AStar(1), q(3, 2));
        assert_eq!(WeylQuadratic::from_weyl(&quad.to_weyl(2)), Some(quad));
        // a plain product carries the wrong constant for a symmetrised quadratic
        let raw = &WeylElement::generator(2, Osc::A(0)) * &WeylElement::generator(2, Osc::AStar(0));
        assert!(WeylQuadratic::from_weyl(&raw).is_none());
    }
}
