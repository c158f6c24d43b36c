//! Highest weights allowed at level `n - 3/2`, rebuilt from the rank-two zero
//! sets by requiring every adjacent pair `(lambda(h_j), lambda(h_{j+1}))` to
//! lie in one component `T_i^n`, then compared with the recursive families.

use std::collections::BTreeSet;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::cartan::AffineWeight;
use crate::error::{Error, Result};
use crate::exact::{qi, Rational};
use crate::weights::{enumerate_s, level_of, SetLabel, WeightSet};
use crate::zeros::{explicit_zero_set, PlanePoint, ZeroSet};

fn set_label(i: u8) -> Result<SetLabel> {
    match i {
        1 => Ok(SetLabel::S1),
        2 => Ok(SetLabel::S2),
        _ => Err(Error::InvalidParameter(format!("no component T{i}"))),
    }
}

/// All finite-coordinate tuples of length `rank` whose adjacent pairs lie in
/// `part`, with coordinates drawn from the coordinates occurring in `part`.
fn chains(part: &BTreeSet<PlanePoint>, rank: usize) -> Vec<Vec<Rational>> {
    let alphabet: BTreeSet<Rational> = part
        .iter()
        .flat_map(|p| [p.h1.clone(), p.h2.clone()])
        .collect();
    let alphabet: Vec<Rational> = alphabet.into_iter().collect();
    alphabet
        .par_iter()
        .flat_map_iter(|start| {
            let mut out = Vec::new();
            let mut stack = vec![vec![start.clone()]];
            while let Some(chain) = stack.pop() {
                if chain.len() == rank {
                    out.push(chain);
                    continue;
                }
                let last = chain.last().expect("chains are nonempty");
                for next in &alphabet {
                    if part.contains(&PlanePoint::new(last.clone(), next.clone())) {
                        let mut c = chain.clone();
                        c.push(next.clone());
                        stack.push(c);
                    }
                }
            }
            out
        })
        .collect()
}

/// Weights of level `n - 3/2` whose adjacent finite-coordinate pairs all lie
/// in `T_i^n`.
pub fn tilde_s_with(i: u8, n: u32, rank: usize, t: &ZeroSet) -> Result<WeightSet> {
    let label = set_label(i)?;
    if rank < 2 {
        return Err(Error::RankTooSmall(rank));
    }
    let level = level_of(n);
    let members = chains(t.part(i), rank)
        .into_iter()
        .map(|fin| AffineWeight::from_finite_part(&level, &fin).coeffs)
        .collect();
    Ok(WeightSet::from_members(label, n, rank, members))
}

pub fn tilde_s(i: u8, n: u32, rank: usize) -> Result<WeightSet> {
    tilde_s_with(i, n, rank, &explicit_zero_set(n))
}

fn check_level(lambda: &AffineWeight, n: u32) -> Result<()> {
    let expected = level_of(n);
    let found = lambda.level();
    if found != expected {
        return Err(Error::level_mismatch(&expected, &found));
    }
    Ok(())
}

/// True when every adjacent pair of finite coordinates lies in `T^n` and all
/// pairs lie in the same component.
pub fn check_module_with(lambda: &AffineWeight, n: u32, t: &ZeroSet) -> Result<bool> {
    check_level(lambda, n)?;
    let fin = lambda.finite_part();
    let comps: Option<BTreeSet<u8>> = fin
        .windows(2)
        .map(|w| t.component(&PlanePoint::new(w[0].clone(), w[1].clone())))
        .collect();
    Ok(matches!(comps, Some(c) if c.len() == 1))
}

pub fn check_module(lambda: &AffineWeight, n: u32) -> Result<bool> {
    check_module_with(lambda, n, &explicit_zero_set(n))
}

/// What the loop module generated by the singular vector cuts out of the
/// Verma module `M(lambda)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VermaImage {
    MaximalSubmodule,
    WholeModule,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleEntry {
    pub weight: AffineWeight,
    pub source: SetLabel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImageFlag {
    pub weight: AffineWeight,
    pub image: VermaImage,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub n: u32,
    pub rank: usize,
    pub tilde_s1: WeightSet,
    pub tilde_s2: WeightSet,
    pub s1: WeightSet,
    pub s2: WeightSet,
    #[serde(rename = "match")]
    pub matches: bool,
    pub modules: Vec<ModuleEntry>,
    pub verma_images: Vec<ImageFlag>,
}

/// Full classification at level `n - 3/2`. Candidate weights are flagged
/// alongside the classified list itself; candidates must have the right level.
pub fn classify(n: u32, rank: usize, candidates: &[AffineWeight]) -> Result<ClassificationReport> {
    for c in candidates {
        check_level(c, n)?;
        if c.rank() != rank {
            return Err(Error::WeightLength {
                expected: rank + 1,
                found: c.coeffs.len(),
            });
        }
    }
    let t = explicit_zero_set(n);
    let tilde_s1 = tilde_s_with(1, n, rank, &t)?;
    let tilde_s2 = tilde_s_with(2, n, rank, &t)?;
    let s1 = enumerate_s(1, n, rank)?;
    let s2 = enumerate_s(2, n, rank)?;
    let matches =
        tilde_s1.lambda_keys() == s1.lambda_keys() && tilde_s2.lambda_keys() == s2.lambda_keys();

    let mut seen = BTreeSet::new();
    let mut modules = Vec::new();
    for (set, label) in [(&s1, SetLabel::S1), (&s2, SetLabel::S2)] {
        for w in &set.members {
            if seen.insert(w.coeffs.clone()) {
                modules.push(ModuleEntry {
                    weight: w.clone(),
                    source: label,
                });
            }
        }
    }

    let mut flagged = BTreeSet::new();
    let verma_images = modules
        .iter()
        .map(|m| &m.weight)
        .chain(candidates)
        .filter(|w| flagged.insert(w.coeffs.clone()))
        .map(|w| ImageFlag {
            weight: w.clone(),
            image: if seen.contains(&w.coeffs) {
                VermaImage::MaximalSubmodule
            } else {
                VermaImage::WholeModule
            },
        })
        .collect();

    Ok(ClassificationReport {
        n,
        rank,
        tilde_s1,
        tilde_s2,
        s1,
        s2,
        matches,
        modules,
        verma_images,
    })
}

/// `-(n + 3/2) Lambda_0 + (2n + 1) Lambda_1`, the one weight at level
/// `n - 1/2` not reached by adding a level-one weight.
pub fn exceptional_weight(n: u32, rank: usize) -> AffineWeight {
    let mut w = AffineWeight::zero(rank);
    w.coeffs[0] = -(qi(n as i64) + Rational::new(3.into(), 2.into()));
    w.coeffs[1] = qi(2 * n as i64 + 1);
    w
}

/// How the level-one weight `Lambda` is chosen in [`check_induction_step`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepRule {
    /// `<Lambda, h_j> = 0` when the pair at `j` already lies in `T_1^n`, else 1;
    /// the last coordinate is 0 when the last pair lies in `T_1^n` or
    /// `T_1^n + (1, 0)`.
    PairRule,
    /// Any fundamental weight that works.
    Search,
}

fn pair_rule(
    fin: &[Rational],
    t1: &BTreeSet<PlanePoint>,
    shifted: &BTreeSet<PlanePoint>,
) -> AffineWeight {
    let rank = fin.len();
    let pair = |j: usize| PlanePoint::new(fin[j].clone(), fin[j + 1].clone());
    let mut values: Vec<Rational> = (0..rank - 1)
        .map(|j| {
            if t1.contains(&pair(j)) {
                Rational::zero()
            } else {
                qi(1)
            }
        })
        .collect();
    let last = pair(rank - 2);
    values.push(if t1.contains(&last) || shifted.contains(&last) {
        Rational::zero()
    } else {
        qi(1)
    });
    AffineWeight::from_finite_part(&qi(1), &values)
}

/// For each non-exceptional `lambda` in the integer family at `n + 1`, picks a
/// level-one weight `Lambda` by `rule` and checks that it is dominant integral
/// with `lambda - Lambda` in the family at `n`. Returns the failures.
pub fn check_induction_step(n: u32, rank: usize, rule: StepRule) -> Result<Vec<String>> {
    let small_t = explicit_zero_set(n);
    let small = tilde_s_with(1, n, rank, &small_t)?;
    let big = tilde_s(1, n + 1, rank)?;
    let shifted: BTreeSet<PlanePoint> = small_t.part1.iter().map(|p| p.shifted(1, 0)).collect();
    let exceptional = exceptional_weight(n, rank);
    let mut failures = Vec::new();
    for lambda in &big.members {
        if lambda.same_lambda(&exceptional) {
            continue;
        }
        match rule {
            StepRule::PairRule => {
                let fundamental = pair_rule(&lambda.finite_part(), &small_t.part1, &shifted);
                let rest = lambda - &fundamental;
                if !fundamental.is_dominant_integral() {
                    failures.push(format!("{lambda}: rule gives non-dominant {fundamental}"));
                } else if !small.contains(&rest) {
                    failures.push(format!("{lambda}: subtracting {fundamental} leaves {rest}"));
                }
            }
            StepRule::Search => {
                let found = (0..=rank)
                    .any(|i| small.contains(&(lambda - &AffineWeight::fundamental(rank, i))));
                if !found {
                    failures.push(format!("{lambda}: no level-one fundamental weight works"));
                }
            }
        }
    }
    Ok(failures)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn w(c: &[(i64, i64)]) -> AffineWeight {
        AffineWeight::new(c.iter().map(|&(a, b)| q(a, b)).collect())
    }

    #[test]
    fn base_families() {
        let t1 = tilde_s(1, 1, 2).unwrap();
        assert_eq!(
            t1.lambda_keys(),
            enumerate_s(1, 1, 2).unwrap().lambda_keys()
        );
        assert!(t1.contains(&w(&[(-1, 2), (0, 1), (0, 1)])));
        assert!(t1.contains(&w(&[(-3, 2), (1, 1), (0, 1)])));

        let t2 = tilde_s(2, 1, 3).unwrap();
        let expected: BTreeSet<Vec<Rational>> = [
            w(&[(0, 1), (0, 1), (0, 1), (-1, 2)]).coeffs,
            w(&[(0, 1), (0, 1), (1, 1), (-3, 2)]).coeffs,
        ]
        .into_iter()
        .collect();
        assert_eq!(t2.lambda_keys(), expected);
    }

    #[test]
    fn agrees_with_recursive_families() {
        for rank in 2..=3 {
            for n in 1..=3 {
                for i in 1..=2 {
                    assert_eq!(
                        tilde_s(i, n, rank).unwrap().lambda_keys(),
                        enumerate_s(i, n, rank).unwrap().lambda_keys(),
                        "i={i} n={n} rank={rank}"
                    );
                }
            }
        }
    }

    #[test]
    fn module_lists() {
        let r = classify(1, 2, &[]).unwrap();
        assert!(r.matches);
        assert_eq!(r.modules.len(), 4);
        let r = classify(2, 2, &[]).unwrap();
        assert_eq!(r.modules.len(), 12);
    }

    #[test]
    fn candidate_flags() {
        let cand = w(&[(1, 1), (-3, 2), (0, 1)]);
        let r = classify(1, 2, std::slice::from_ref(&cand)).unwrap();
        let flag = r.verma_images.iter().find(|f| f.weight == cand).unwrap();
        assert_eq!(flag.image, VermaImage::WholeModule);
        assert!(
            r.verma_images
                .iter()
                .filter(|f| f.image == VermaImage::MaximalSubmodule)
                .count()
                == 4
        );
        assert!(classify(1, 2, &[AffineWeight::fundamental(2, 0)]).is_err());
    }

    #[test]
    fn single_weight_checks() {
        let mu2 = w(&[(-3, 2), (1, 1), (0, 1)]);
        assert!(check_module(&mu2, 1).unwrap());
        // finite part (0, -1/2) mixes the two components
        let mixed = AffineWeight::from_finite_part(&q(-1, 2), &[qi(0), q(-1, 2)]);
        assert!(!check_module(&mixed, 1).unwrap());
        assert!(check_module(&AffineWeight::fundamental(2, 0), 1).is_err());
    }

    #[test]
    fn induction_step_pair_rule_rank_two() {
        for n in 1..=3 {
            assert_eq!(
                check_induction_step(n, 2, StepRule::PairRule).unwrap(),
                Vec::<String>::new(),
                "n={n}"
            );
        }
    }

    #[test]
    fn induction_step_pair_rule_breaks_at_rank_three() {
        // finite part (1, 1, 0): the pair (1, 0) lies in T_1^1 and in T_1^1 + (1, 0),
        // the rule picks Lambda_1 where only Lambda_2 works
        let failures = check_induction_step(1, 3, StepRule::PairRule).unwrap();
        assert!(
            failures.iter().any(|f| f.starts_with("(-1/2)L0 + L2:")),
            "{failures:?}"
        );
    }

    #[test]
    fn induction_step_search() {
        for rank in 2..=4 {
            for n in 1..=3 {
                assert_eq!(
                    check_induction_step(n, rank, StepRule::Search).unwrap(),
                    Vec::<String>::new()
                );
            }
        }
    }
}
