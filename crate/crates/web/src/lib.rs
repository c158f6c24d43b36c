//! Browser entry points. Each returns a JSON string; failures come back as
//! `{"error": "..."}` so the page never has to catch exceptions.
//!
//! The plain `*_json` functions do the work and are what the native tests call.

use num_traits::ToPrimitive;
use serde_json::{json, Value};
use sympvoa::cartan::{build_root_system, check_admissible, AffineWeight};
use sympvoa::classify::{check_module, classify};
use sympvoa::exact::{fmt_q, parse_q, Rational};
use sympvoa::weights::{enumerate_s, level_of};
use sympvoa::zeros::explicit_zero_set;
use wasm_bindgen::prelude::*;

const MAX_N: u32 = 12;
const MAX_RANK: usize = 6;

type Res = Result<Value, String>;

fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn check_n(n: u32) -> Result<(), String> {
    if n == 0 || n > MAX_N {
        return Err(format!("n must lie in 1..={MAX_N}"));
    }
    Ok(())
}

fn finish(r: Res) -> String {
    r.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

/// Points of `T_1^n` and `T_2^n`, exact and as floats for plotting.
pub fn zero_set_json(n: u32) -> Res {
    check_n(n)?;
    let t = explicit_zero_set(n);
    let pts = |part: u8| -> Vec<Value> {
        t.part(part)
            .iter()
            .map(|p| json!({ "h1": fmt_q(&p.h1), "h2": fmt_q(&p.h2), "x": to_f64(&p.h1), "y": to_f64(&p.h2) }))
            .collect()
    };
    Ok(json!({ "n": n, "T1": pts(1), "T2": pts(2) }))
}

/// Highest weights of the irreducible modules at level `n - 3/2`.
pub fn classification_json(n: u32, rank: usize) -> Res {
    check_n(n)?;
    if !(2..=MAX_RANK).contains(&rank) {
        return Err(format!("rank must lie in 2..={MAX_RANK}"));
    }
    let report = classify(n, rank, &[]).map_err(|e| e.to_string())?;
    let modules: Vec<Value> = report
        .modules
        .iter()
        .map(|m| {
            json!({
                "weight": m.weight.to_string(),
                "lambda": m.weight.coeffs.iter().map(fmt_q).collect::<Vec<_>>(),
                "family": m.source.to_string(),
            })
        })
        .collect();
    Ok(
        json!({ "n": n, "rank": rank, "level": fmt_q(&level_of(n)), "cross_check": report.matches, "modules": modules }),
    )
}

/// Checks a weight given as comma-separated `Lambda` coefficients against the
/// level, the zero-set criterion, the two families and bounded admissibility.
pub fn check_weight_json(coeffs: &str, n: u32) -> Res {
    check_n(n)?;
    let coeffs = coeffs
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| parse_q(t).ok_or_else(|| format!("not a rational: {t:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    let rank = coeffs
        .len()
        .checked_sub(1)
        .filter(|r| (2..=MAX_RANK).contains(r));
    let rank = rank.ok_or_else(|| format!("need between 3 and {} coefficients", MAX_RANK + 1))?;
    let lambda = AffineWeight::new(coeffs);
    let level = lambda.level();
    let level_ok = level == level_of(n);
    let rs = build_root_system(rank).map_err(|e| e.to_string())?;
    let adm = check_admissible(&rs, &lambda, 2 * n + 2);
    let mut families = Vec::new();
    for i in 1..=2u8 {
        if enumerate_s(i, n, rank)
            .map_err(|e| e.to_string())?
            .contains(&lambda)
        {
            families.push(format!("S{i}"));
        }
    }
    let zero_set_ok = if level_ok {
        check_module(&lambda, n).map_err(|e| e.to_string())?
    } else {
        false
    };
    Ok(json!({
        "weight": lambda.to_string(),
        "level": fmt_q(&level),
        "level_ok": level_ok,
        "zero_set_criterion": zero_set_ok,
        "families": families,
        "admissible": adm.is_admissible(),
    }))
}

#[wasm_bindgen]
pub fn zero_set(n: u32) -> String {
    finish(zero_set_json(n))
}

#[wasm_bindgen]
pub fn classification(n: u32, rank: usize) -> String {
    finish(classification_json(n, rank))
}

#[wasm_bindgen]
pub fn check_weight(coeffs: &str, n: u32) -> String {
    finish(check_weight_json(coeffs, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_set_at_n1() {
        let v = zero_set_json(1).unwrap();
        assert_eq!(v["T1"].as_array().unwrap().len(), 2);
        assert_eq!(v["T2"][0]["x"], -0.5);
        assert!(zero_set_json(0).is_err());
    }

    #[test]
    fn four_modules() {
        let v = classification_json(1, 2).unwrap();
        assert_eq!(v["modules"].as_array().unwrap().len(), 4);
        assert_eq!(v["cross_check"], true);
    }

    #[test]
    fn weight_checks() {
        let v = check_weight_json("-1/2, 0, 0", 1).unwrap();
        assert_eq!(v["families"], json!(["S1"]));
        assert_eq!(v["zero_set_criterion"], true);
        assert_eq!(v["admissible"], true);
        let w = check_weight_json("-3/2,0,1", 1).unwrap();
        assert_eq!(w["zero_set_criterion"], false);
        assert_eq!(w["families"], json!([]));
        assert!(check_weight_json("1,x,0", 1).is_err());
        assert_eq!(
            check_weight("1", 1),
            r#"{"error":"need between 3 and 7 coefficients"}"#
        );
    }
}
