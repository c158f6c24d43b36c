use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context};
use serde::Serialize;
use serde_json::{json, Value};
use sympvoa::affine::singular_check_at;
use sympvoa::cartan::{
    build_root_system, check_admissible, pi_1, pi_2, real_coroots_up_to, AffineWeight,
};
use sympvoa::classify::classify;
use sympvoa::exact::{fmt_q, parse_q, Rational};
use sympvoa::uea::{compute_p, Uea};
use sympvoa::weights::{enumerate_s, level_of, p_plus_1, WeightSet};
use sympvoa::weylreal::{check_composite_field, realize_sp, Combination};
use sympvoa::zeros::{
    brute_force_t, check_shift_recursion, closed_form_p, explicit_zero_set, PolySource, ZeroSet,
};

use crate::{Command, Family, Format, Source};

pub const SCHEMA: u32 = 1;

/// What gets printed, and whether the run counts as a verification success.
pub struct Report {
    pub text: String,
    pub ok: bool,
    pub witness: Option<String>,
}

impl Report {
    fn passed(text: String) -> Self {
        Self {
            text,
            ok: true,
            witness: None,
        }
    }

    fn judged(text: String, witness: Option<String>) -> Self {
        Self {
            text,
            ok: witness.is_none(),
            witness,
        }
    }
}

fn envelope(check: &str, payload: impl Serialize) -> anyhow::Result<String> {
    let mut value = serde_json::to_value(payload)?;
    let map = value
        .as_object_mut()
        .ok_or_else(|| anyhow!("report is not an object"))?;
    map.insert("schema".into(), json!(SCHEMA));
    map.insert("check".into(), json!(check));
    let mut text = serde_json::to_string_pretty(&value)?;
    text.push('\n');
    Ok(text)
}

fn parse_weight(raw: &str, ell: usize) -> anyhow::Result<AffineWeight> {
    let coeffs = raw
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| parse_q(t).ok_or_else(|| anyhow!("not a rational: {t:?}")))
        .collect::<anyhow::Result<Vec<Rational>>>()?;
    if coeffs.len() != ell + 1 {
        bail!(
            "weight {raw:?} has {} coefficients, expected {}",
            coeffs.len(),
            ell + 1
        );
    }
    Ok(AffineWeight::new(coeffs))
}

fn read_candidates(path: &Path, ell: usize) -> anyhow::Result<Vec<AffineWeight>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| parse_weight(l, ell))
        .collect()
}

fn weight_csv<'a>(
    rows: impl Iterator<Item = (&'a AffineWeight, Option<String>)>,
    ell: usize,
    extra: Option<&str>,
) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = (0..=ell).map(|i| format!("L{i}")).collect();
    header.push("level".into());
    header.extend(extra.map(String::from));
    w.write_record(&header)?;
    for (weight, tail) in rows {
        let mut rec: Vec<String> = weight.coeffs.iter().map(fmt_q).collect();
        rec.push(fmt_q(&weight.level()));
        rec.extend(tail);
        w.write_record(&rec)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn zero_set_json(t: &ZeroSet) -> Value {
    let pts = |s: &std::collections::BTreeSet<_>| -> Vec<[String; 2]> {
        s.iter()
            .map(|p: &sympvoa::zeros::PlanePoint| [fmt_q(&p.h1), fmt_q(&p.h2)])
            .collect()
    };
    json!({ "T1": pts(&t.part1), "T2": pts(&t.part2) })
}

pub fn dispatch(command: &Command) -> anyhow::Result<Report> {
    match command {
        Command::Roots { ell, bound } => roots(*ell, *bound),
        Command::Weights {
            set,
            n,
            ell,
            format,
        } => weights(*set, *n, *ell, *format),
        Command::Admissible {
            weight,
            set,
            n,
            ell,
            bound,
        } => admissible(
            weight.as_deref(),
            set.as_deref(),
            *n,
            *ell,
            bound.unwrap_or(2 * n + 2),
        ),
        Command::Polys {
            n,
            check_closed_form,
        } => polys(*n, *check_closed_form),
        Command::Zeros {
            n,
            source,
            check_recursion,
        } => zeros(*n, *source, *check_recursion),
        Command::Classify {
            n,
            ell,
            cross_check,
            candidates,
            format,
        } => classify_cmd(*n, *ell, *cross_check, candidates.as_deref(), *format),
        Command::Singular { n, perturb_level } => singular(*n, perturb_level.as_deref()),
        Command::Fock {
            sector,
            max_degree,
            modes,
            sign_flip,
        } => {
            let alg = realize_sp(2)?;
            let combination = if *sign_flip {
                Combination::Plus
            } else {
                Combination::Minus
            };
            let report = check_composite_field(&alg, *sector, *max_degree, *modes, combination);
            let witness = report
                .failures
                .first()
                .map(|w| format!("mode {} on {} gives {}", w.j, w.state, w.image));
            Ok(Report::judged(
                envelope("composite-field-annihilation", &report)?,
                witness,
            ))
        }
    }
}

fn roots(ell: usize, bound: Option<u32>) -> anyhow::Result<Report> {
    let rs = build_root_system(ell)?;
    let mut payload = json!({
        "ell": ell,
        "roots": rs.roots(),
        "positive": rs.positive_roots().collect::<Vec<_>>(),
        "simple": rs.simple_roots(),
        "highest": rs.highest_root(),
    });
    if let Some(b) = bound {
        payload["bound"] = json!(b);
        payload["real_coroots"] = serde_json::to_value(real_coroots_up_to(&rs, b))?;
    }
    Ok(Report::passed(envelope("root-system", payload)?))
}

fn family(set: Family, n: u32, ell: usize) -> anyhow::Result<WeightSet> {
    Ok(match set {
        Family::S1 => enumerate_s(1, n, ell)?,
        Family::S2 => enumerate_s(2, n, ell)?,
        Family::PPlus1 => p_plus_1(ell)?,
    })
}

fn weights(set: Family, n: u32, ell: usize, format: Format) -> anyhow::Result<Report> {
    let ws = family(set, n, ell)?;
    let text = match format {
        Format::Json => envelope(
            "weight-family",
            json!({ "level": fmt_q(&ws.level()), "set": ws }),
        )?,
        Format::Csv => weight_csv(ws.members.iter().map(|w| (w, None)), ell, None)?,
    };
    Ok(Report::passed(text))
}

fn admissible(
    weight: Option<&str>,
    set: Option<&str>,
    n: u32,
    ell: usize,
    bound: u32,
) -> anyhow::Result<Report> {
    let rs = build_root_system(ell)?;
    if let Some(raw) = weight {
        let lambda = parse_weight(raw, ell)?;
        let adm = check_admissible(&rs, &lambda, bound);
        let witness = (!adm.is_admissible()).then(|| match &adm.violation {
            Some(c) => format!("{lambda}: <lambda + rho, {c}> is a nonpositive integer"),
            None => format!("{lambda}: integral coroots do not span"),
        });
        let payload = json!({
            "weight": lambda,
            "level": fmt_q(&lambda.level()),
            "admissible": adm.is_admissible(),
            "result": adm,
        });
        return Ok(Report::judged(
            envelope("bounded-admissibility", payload)?,
            witness,
        ));
    }
    let (label, expected) = match set {
        Some("S1") => (1, pi_1(ell)),
        Some("S2") => (2, pi_2(ell)),
        other => bail!("unknown family {other:?}"),
    };
    let ws = enumerate_s(label, n, ell)?;
    let level = level_of(n);
    let mut witness = None;
    let rows: Vec<Value> = ws
        .members
        .iter()
        .map(|lambda| {
            let adm = check_admissible(&rs, lambda, bound);
            let pi_ok = adm.pi_lambda == expected;
            let level_ok = lambda.level() == level;
            if witness.is_none() && !(adm.is_admissible() && pi_ok && level_ok) {
                witness = Some(format!("{lambda}: admissible={}, simple coroots match={pi_ok}, level ok={level_ok}", adm.is_admissible()));
            }
            json!({ "weight": lambda, "admissible": adm.is_admissible(), "pi_matches": pi_ok, "level_ok": level_ok })
        })
        .collect();
    let payload = json!({
        "set": format!("S{label}"),
        "n": n,
        "ell": ell,
        "bound": bound,
        "level": fmt_q(&level),
        "expected_pi": expected,
        "members": rows,
    });
    Ok(Report::judged(
        envelope("bounded-admissibility", payload)?,
        witness,
    ))
}

fn polys(n: u32, check: bool) -> anyhow::Result<Report> {
    let uea = Uea::new(2)?;
    let mut payload = json!({ "n": n });
    let mut witness = None;
    for i in 1..=3u8 {
        let p = compute_p(&uea, i, n)?;
        payload[format!("p{i}")] = json!(p.to_pairs());
        if check {
            let closed = closed_form_p(i, n)?;
            let ratio = p.ratio_to(&closed);
            if ratio.is_none() && witness.is_none() {
                witness = Some(format!("p{i} = {p} is not proportional to {closed}"));
            }
            payload[format!("p{i}_closed_form_ratio")] = json!(ratio.as_ref().map(fmt_q));
        }
    }
    Ok(Report::judged(
        envelope("enveloping-algebra-polynomials", payload)?,
        witness,
    ))
}

fn zeros(n: u32, source: Source, check_recursion: bool) -> anyhow::Result<Report> {
    let source = match source {
        Source::ClosedForm => PolySource::ClosedForm,
        Source::Uea => PolySource::Uea,
    };
    let t = brute_force_t(n, source)?;
    let matches = t == explicit_zero_set(n);
    let mut payload = zero_set_json(&t);
    payload["n"] = json!(n);
    payload["source"] = json!(source);
    payload["matches_explicit"] = json!(matches);
    let mut witness =
        (!matches).then(|| format!("brute-force zero set differs from the explicit one at n={n}"));
    if check_recursion {
        let ok = check_shift_recursion(n);
        payload["recursion"] = json!(ok);
        if !ok && witness.is_none() {
            witness = Some(format!(
                "zero sets at n={n} and n={} violate the shift recursion",
                n + 1
            ));
        }
    }
    Ok(Report::judged(
        envelope("common-zero-set", payload)?,
        witness,
    ))
}

fn classify_cmd(
    n: u32,
    ell: usize,
    cross_check: bool,
    candidates: Option<&Path>,
    format: Format,
) -> anyhow::Result<Report> {
    let cands = match candidates {
        Some(p) => read_candidates(p, ell)?,
        None => Vec::new(),
    };
    let report = classify(n, ell, &cands)?;
    let witness = (cross_check && !report.matches).then(|| {
        format!("pair-constrained weights differ from the recursive families at n={n}, ell={ell}")
    });
    let text = match format {
        Format::Json => envelope("module-classification", &report)?,
        Format::Csv => {
            let rows = report.verma_images.iter().map(|f| {
                let image = serde_json::to_value(f.image)
                    .ok()
                    .and_then(|v| v.as_str().map(String::from));
                (&f.weight, image)
            });
            weight_csv(rows, ell, Some("verma_image"))?
        }
    };
    Ok(Report::judged(text, witness))
}

fn singular(n: u32, perturb: Option<&str>) -> anyhow::Result<Report> {
    let shift = match perturb {
        Some(raw) => parse_q(raw).ok_or_else(|| anyhow!("not a rational: {raw:?}"))?,
        None => Rational::from_integer(0.into()),
    };
    let report = singular_check_at(n, level_of(n) + shift)?;
    let witness = report.checks.iter().find(|c| !c.zero).map(|c| {
        format!(
            "{} leaves {} terms: {}",
            c.op,
            c.image_terms,
            c.image.as_deref().unwrap_or("")
        )
    });
    Ok(Report::judged(
        envelope("singular-vector", &report)?,
        witness,
    ))
}
