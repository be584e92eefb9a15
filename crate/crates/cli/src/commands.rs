use std::fs;

use anyhow::{anyhow, Context};
use l2burau_core::fkdet::mahler_measure;
use l2burau_core::torsion::{alexander_polynomial, fq_value, markov_report, reduced_burau, FqValue, MarkovMove, MarkovReport};
use l2burau_core::{parse_braid, BraidWord, DetOptions, EpiFamily};
use rayon::prelude::*;

use crate::output::{self, bound_csv, bound_text, AlexanderOut, BurauOut, CounterOut, FqOut, MarkovOut, StageOut};
use crate::{AlexanderArgs, BraidArgs, CounterArgs, EvalArgs, Failure, MarkovArgs, Which};

const BOYD: f64 = 1.381_356_444_518_497;

fn braid_of(text: &str, strands: Option<usize>) -> Result<BraidWord, Failure> {
    parse_braid(text, strands).with_context(|| format!("cannot parse braid `{text}`")).map_err(Failure::parse)
}

fn family_of(tag: &str) -> Result<EpiFamily, Failure> {
    if let Some(f) = EpiFamily::from_tag(tag) {
        return Ok(f);
    }
    let Some(path) = tag.strip_prefix("custom:") else {
        return Err(Failure::parse(anyhow!("unknown family `{tag}` (expected id, phi, ab or custom:<file>)")));
    };
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {path}")).map_err(Failure::other)?;
    let mut rows = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(str::parse::<i64>)
            .collect::<Result<Vec<_>, _>>()
            .with_context(|| format!("{path}:{}: expected integers", no + 1))
            .map_err(Failure::parse)?;
        rows.push(row);
    }
    EpiFamily::custom(rows).with_context(|| format!("invalid custom family in {path}")).map_err(Failure::parse)
}

fn check_t(ts: &[f64]) -> Result<(), Failure> {
    match ts.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
        Some(t) => Err(Failure::parse(anyhow!("t values must be positive, got {t}"))),
        None => Ok(()),
    }
}

fn fq_out(v: &FqValue) -> FqOut {
    FqOut {
        braid: v.braid.to_string(),
        family: v.family.tag(),
        t: v.t0,
        value: v.value,
        error_bound: v.error_bound,
        method: v.estimate.method.to_string(),
        normalization: v.normalization,
        diagnostics: v.estimate.diagnostics.clone(),
    }
}

fn markov_out(r: &MarkovReport) -> MarkovOut {
    MarkovOut {
        braid: r.braid.to_string(),
        family: r.family.tag(),
        t: r.t,
        stages: r
            .stages
            .iter()
            .map(|s| StageOut {
                mv: s.mv.as_ref().map(ToString::to_string),
                braid: s.braid.to_string(),
                value: s.value,
                error_bound: s.error_bound,
                method: s.method.clone(),
            })
            .collect(),
        verdict: r.verdict.to_string(),
        max_deviation: r.max_deviation,
    }
}

pub fn burau(a: &BraidArgs) -> Result<u8, Failure> {
    let beta = braid_of(&a.braid, a.strands)?;
    let family = family_of(&a.family)?;
    let b = reduced_burau(&beta, &family).map_err(Failure::backend)?;
    let rows: Vec<Vec<String>> = b.matrix.row_vecs().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    let out = BurauOut {
        braid: beta.to_string(),
        strands: beta.strands(),
        family: family.tag(),
        group: b.matrix.group().name(),
        size: b.size(),
        rows: rows.clone(),
    };
    let header: Vec<String> = (1..=b.size()).map(|j| format!("col{j}")).collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let text = output::render(a.common.format(), &[out], || b.matrix.to_string(), || output::csv_rows(&header, &rows))?;
    output::emit(&text, a.common.output.as_deref())?;
    Ok(0)
}

fn evaluate(a: &EvalArgs) -> Result<(BraidWord, EpiFamily, DetOptions), Failure> {
    let beta = braid_of(&a.braid.braid, a.braid.strands)?;
    let family = family_of(&a.braid.family)?;
    check_t(&a.t)?;
    Ok((beta, family, a.backend.options()))
}

pub fn fq(a: &EvalArgs) -> Result<u8, Failure> {
    let (beta, family, opts) = evaluate(a)?;
    let values: Vec<FqValue> = a
        .t
        .par_iter()
        .map(|&t| fq_value(&beta, &family, t, &opts))
        .collect::<Result<_, _>>()
        .map_err(Failure::backend)?;
    let outs: Vec<FqOut> = values.iter().map(fq_out).collect();
    let text = output::render(
        a.braid.common.format(),
        &outs,
        || {
            outs.iter()
                .map(|o| format!("t = {}: {} ± {} ({})\n", o.t, o.value, bound_text(o.error_bound), o.method))
                .collect()
        },
        || {
            let rows: Vec<Vec<String>> = outs
                .iter()
                .map(|o| {
                    vec![
                        o.t.to_string(),
                        o.value.to_string(),
                        bound_csv(o.error_bound),
                        o.method.clone(),
                        o.normalization.to_string(),
                    ]
                })
                .collect();
            output::csv_rows(&["t", "value", "error_bound", "method", "normalization"], &rows)
        },
    )?;
    output::emit(&text, a.braid.common.output.as_deref())?;
    Ok(0)
}

pub fn markov(a: &MarkovArgs) -> Result<u8, Failure> {
    let (beta, family, opts) = evaluate(&a.eval)?;
    let moves = MarkovMove::parse_list(&a.moves).with_context(|| format!("cannot parse moves `{}`", a.moves)).map_err(Failure::parse)?;
    let reports: Vec<MarkovReport> = a
        .eval
        .t
        .par_iter()
        .map(|&t| markov_report(&beta, &moves, &family, t, &opts))
        .collect::<Result<_, _>>()
        .map_err(Failure::backend)?;
    let outs: Vec<MarkovOut> = reports.iter().map(markov_out).collect();
    let common = &a.eval.braid.common;
    let text = output::render(
        common.format(),
        &outs,
        || {
            let mut s = String::new();
            for o in &outs {
                s.push_str(&format!("t = {} ({})\n", o.t, o.family));
                for st in &o.stages {
                    let label = st.mv.as_deref().unwrap_or("start");
                    s.push_str(&format!(
                        "  {label:<12} [{}] {} ± {} ({})\n",
                        st.braid,
                        st.value,
                        bound_text(st.error_bound),
                        st.method
                    ));
                }
                s.push_str(&format!("  verdict: {} (max deviation {:.3e})\n", o.verdict, o.max_deviation));
            }
            s
        },
        || {
            let mut rows = Vec::new();
            for o in &outs {
                for (i, st) in o.stages.iter().enumerate() {
                    rows.push(vec![
                        o.t.to_string(),
                        i.to_string(),
                        st.mv.clone().unwrap_or_default(),
                        st.braid.clone(),
                        st.value.to_string(),
                        bound_csv(st.error_bound),
                        st.method.clone(),
                        o.verdict.clone(),
                    ]);
                }
            }
            output::csv_rows(&["t", "stage", "move", "braid", "value", "error_bound", "method", "verdict"], &rows)
        },
    )?;
    output::emit(&text, common.output.as_deref())?;
    Ok(0)
}

pub fn alexander(a: &AlexanderArgs) -> Result<u8, Failure> {
    let beta = braid_of(&a.braid, a.strands)?;
    let delta = alexander_polynomial(&beta).map_err(Failure::backend)?;
    let (mahler, _) = mahler_measure(&delta);
    let out = AlexanderOut {
        braid: beta.to_string(),
        polynomial: delta.display_with("s"),
        coefficients: delta.terms().map(|(k, c)| (k, c.to_string())).collect(),
        mahler,
    };
    let rows: Vec<Vec<String>> = out.coefficients.iter().map(|(k, c)| vec![k.to_string(), c.clone()]).collect();
    let text = output::render(
        a.common.format(),
        std::slice::from_ref(&out),
        || format!("{}\n", out.polynomial),
        || output::csv_rows(&["degree", "coefficient"], &rows),
    )?;
    output::emit(&text, a.common.output.as_deref())?;
    Ok(0)
}

pub fn counterexample(a: &CounterArgs) -> Result<u8, Failure> {
    let (family, expected, tolerance) = match a.which {
        Which::Abelianization => (EpiFamily::Abelianization, vec![1.0, BOYD], vec![1e-9, 1e-3]),
        Which::Identity => (EpiFamily::Identity, vec![1.0, 2.0 / 3f64.sqrt()], vec![1e-9, 2e-2]),
    };
    let opts = a.backend.options();
    let braids = [parse_braid("-1", Some(2)), parse_braid("-1 2", Some(3))];
    let values: Vec<FqValue> = braids
        .par_iter()
        .map(|b| fq_value(b.as_ref().map_err(Clone::clone)?, &family, 1.0, &opts))
        .collect::<Result<_, _>>()
        .map_err(Failure::backend)?;
    let pass = values.iter().zip(&expected).zip(&tolerance).all(|((v, e), tol)| (v.value - e).abs() <= *tol);
    let out = CounterOut {
        which: format!("{:?}", a.which).to_lowercase(),
        family: family.tag(),
        t: 1.0,
        values: values.iter().map(fq_out).collect(),
        expected,
        tolerance,
        pass,
    };
    let verdict = if pass { "PASS" } else { "FAIL" };
    let text = output::render(
        a.common.format(),
        std::slice::from_ref(&out),
        || {
            let mut s = String::new();
            for (v, (e, tol)) in out.values.iter().zip(out.expected.iter().zip(&out.tolerance)) {
                s.push_str(&format!(
                    "F_{}([{}])(1) = {} ± {} ({}), expected {e} ± {tol:.0e}\n",
                    out.family,
                    v.braid,
                    v.value,
                    bound_text(v.error_bound),
                    v.method
                ));
            }
            s.push_str(&format!("{verdict}\n"));
            s
        },
        || {
            let rows: Vec<Vec<String>> = out
                .values
                .iter()
                .zip(out.expected.iter().zip(&out.tolerance))
                .map(|(v, (e, tol))| {
                    vec![v.braid.clone(), v.value.to_string(), bound_csv(v.error_bound), e.to_string(), tol.to_string()]
                })
                .collect();
            output::csv_rows(&["braid", "value", "error_bound", "expected", "tolerance"], &rows)
        },
    )?;
    output::emit(&text, a.common.output.as_deref())?;
    Ok(if pass { 0 } else { 1 })
}
