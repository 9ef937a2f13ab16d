use std::io::Write;
use std::path::Path;

use egs_algebra::graph::{LabeledGraph, TrailOptions};
use egs_algebra::oracle::{
    brute_minimal_leading_entry, enumerate_small_splines, random_combinations, OracleError,
};
use egs_algebra::pid::{flow_up_basis, minimal_leading_entries, verify_flow_up, TriangularBasis};
use egs_algebra::rings::{RingDescriptor, RingElement};
use egs_algebra::splines::{
    certify_basis, classical_qg, express_in_basis, h_factor, is_spline, qhat, qhat_components,
    Expression, Obstruction, SplineError, SplineMatrix, Verdict,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{exit, CliError};
use crate::files::{load_instance, load_splines, load_target, spline_set_json};

type Out<'a> = &'a mut dyn Write;

fn io(e: std::io::Error) -> CliError {
    CliError::Failed(format!("cannot write output: {e}"))
}

fn emit_json(out: Out, value: &Value) -> Result<(), CliError> {
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(value).expect("JSON values serialize")
    )
    .map_err(io)
}

fn strings(xs: &[RingElement]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn tuple(xs: &[RingElement]) -> String {
    format!("({})", strings(xs).join(", "))
}

/// Parenthesize anything with more than one term.
fn factor(x: &RingElement) -> String {
    let s = x.to_string();
    if s[1..].contains(['+', '-']) {
        format!("({s})")
    } else {
        s
    }
}

pub fn qhat_cmd(
    path: &Path,
    classical: bool,
    json_out: bool,
    opts: &TrailOptions,
    out: Out,
) -> Result<u8, CliError> {
    let g = load_instance(path)?;
    let comps = qhat_components(&g, opts)?;
    let q = qhat(&g, opts)?;
    let extra = if classical {
        Some((classical_qg(&g, opts)?, h_factor(&g, opts)?))
    } else {
        None
    };
    if json_out {
        let mut v = json!({ "components": strings(&comps), "qhat": q.to_string() });
        if let Some((qg, h)) = &extra {
            v["classical"] = json!(qg.to_string());
            v["h"] = json!(h.to_string());
        }
        emit_json(out, &v)?;
    } else {
        for (i, c) in comps.iter().enumerate() {
            writeln!(out, "Q^({}) = {c}", i + 1).map_err(io)?;
        }
        writeln!(out, "Qhat = {q}").map_err(io)?;
        if let Some((qg, h)) = &extra {
            writeln!(out, "Q_G = {qg}").map_err(io)?;
            writeln!(out, "H = {h}").map_err(io)?;
        }
    }
    Ok(exit::OK)
}

fn verdict_code(v: &Verdict) -> u8 {
    match v {
        Verdict::Certified { .. } => exit::OK,
        Verdict::Inconclusive => exit::INCONCLUSIVE,
        _ => exit::REFUTED,
    }
}

pub fn certify_cmd(
    path: &Path,
    splines: &Path,
    json_out: bool,
    opts: &TrailOptions,
    out: Out,
) -> Result<u8, CliError> {
    let g = load_instance(path)?;
    let ms = SplineMatrix::new(&g, load_splines(&g, splines)?)?;
    let cert = certify_basis(&g, &ms, opts)?;
    let unit = match &cert.verdict {
        Verdict::Certified { unit } => Some(unit.to_string()),
        _ => None,
    };
    let failing: Vec<usize> = match &cert.verdict {
        Verdict::RefutedNotSplines { columns } => columns.iter().map(|k| k + 1).collect(),
        _ => Vec::new(),
    };
    if json_out {
        emit_json(
            out,
            &json!({
                "verdict": cert.verdict.name(),
                "unit": unit,
                "determinant": cert.determinant.to_string(),
                "qhat": cert.qhat.to_string(),
                "non_spline_columns": failing,
            }),
        )?;
    } else {
        match &unit {
            Some(u) => writeln!(out, "verdict: Certified (unit {u})"),
            None => writeln!(out, "verdict: {}", cert.verdict.name()),
        }
        .map_err(io)?;
        for &k in &failing {
            let report = is_spline(&g, &ms.columns()[k - 1])?;
            writeln!(out, "  F{k}: {report}").map_err(io)?;
        }
        writeln!(out, "determinant: {}", cert.determinant).map_err(io)?;
        writeln!(out, "qhat: {}", cert.qhat).map_err(io)?;
        let note = match cert.verdict {
            Verdict::Certified { .. } => "the determinant is a unit multiple of qhat, so the splines form a basis",
            Verdict::RefutedNotSplines { .. } => "some columns are not splines",
            Verdict::RefutedDependent => "the splines are linearly dependent",
            Verdict::RefutedByCoprimeConverse => {
                "the determinant is not a unit multiple of qhat, which rules out a basis here (PID or pairwise coprime labels)"
            }
            Verdict::Inconclusive => {
                "the determinant is not a unit multiple of qhat, but no converse is known for this ring and these labels"
            }
        };
        writeln!(out, "{note}").map_err(io)?;
    }
    Ok(verdict_code(&cert.verdict))
}

fn flow_up_json(tb: &TriangularBasis, report: &egs_algebra::pid::FlowUpReport) -> Value {
    let columns: Vec<Vec<RingElement>> = tb
        .splines()
        .into_iter()
        .map(|s| s.into_components())
        .collect();
    json!({
        "splines": spline_set_json(&columns),
        "leading_terms": strings(&tb.leading_terms()),
        "expected_leading_terms": strings(&report.expected_leading_terms),
        "determinant": report.determinant.to_string(),
        "qhat": report.qhat.to_string(),
        "passed": report.passed(),
    })
}

pub fn flowup_cmd(
    path: &Path,
    json_out: bool,
    opts: &TrailOptions,
    out: Out,
) -> Result<u8, CliError> {
    let g = load_instance(path)?;
    let tb = flow_up_basis(&g)?;
    let report = verify_flow_up(&g, &tb, opts)?;
    if json_out {
        emit_json(out, &flow_up_json(&tb, &report))?;
    } else {
        for (i, c) in tb.classes().iter().enumerate() {
            let ok = if report.leading_term_matches[i] {
                "ok"
            } else {
                "MISMATCH"
            };
            writeln!(
                out,
                "F{} = {}  LT = {}  formula = {}  {ok}",
                i + 1,
                tuple(c.spline().components()),
                c.leading_term(),
                report.expected_leading_terms[i]
            )
            .map_err(io)?;
        }
        writeln!(out, "determinant: {}", report.determinant).map_err(io)?;
        writeln!(out, "qhat: {}", report.qhat).map_err(io)?;
        let yes = |b: bool| if b { "yes" } else { "no" };
        writeln!(
            out,
            "determinant and product of leading terms are +-qhat: {}",
            yes(report.determinant_matches)
        )
        .map_err(io)?;
        writeln!(out, "all checks passed: {}", yes(report.passed())).map_err(io)?;
    }
    Ok(if report.passed() {
        exit::OK
    } else {
        exit::REFUTED
    })
}

fn obstruction_text(o: &Obstruction) -> String {
    format!(
        "c{} = {}/{}",
        o.index + 1,
        factor(&o.numerator),
        factor(&o.denominator)
    )
}

pub fn express_cmd(
    path: &Path,
    splines: &Path,
    target: &Path,
    json_out: bool,
    out: Out,
) -> Result<u8, CliError> {
    let g = load_instance(path)?;
    let ms = SplineMatrix::new(&g, load_splines(&g, splines)?)?;
    let f = load_target(&g, target)?;
    let report = is_spline(&g, &f)?;
    if !report.is_spline() {
        return Err(CliError::Invalid(format!(
            "target is not a spline: {report}"
        )));
    }
    let result = match express_in_basis(&g, &ms, &f) {
        Err(SplineError::ZeroDeterminant) => {
            return Err(CliError::Invalid(
                "the splines are linearly dependent (determinant 0)".into(),
            ))
        }
        other => other?,
    };
    match &result {
        Expression::Coefficients(c) => {
            if json_out {
                emit_json(
                    out,
                    &json!({ "result": "Coefficients", "coefficients": strings(c) }),
                )?;
            } else {
                let parts: Vec<String> = c
                    .iter()
                    .enumerate()
                    .map(|(k, x)| format!("c{} = {x}", k + 1))
                    .collect();
                writeln!(out, "coefficients: {}", parts.join(", ")).map_err(io)?;
            }
            Ok(exit::OK)
        }
        Expression::NotInSpan {
            witness,
            obstructions,
        } => {
            if json_out {
                let obs: Vec<Value> = obstructions
                    .iter()
                    .map(|o| {
                        json!({
                            "index": o.index + 1,
                            "numerator": o.numerator.to_string(),
                            "denominator": o.denominator.to_string(),
                        })
                    })
                    .collect();
                emit_json(
                    out,
                    &json!({ "result": "NotInSpan", "witness": witness + 1, "obstructions": obs }),
                )?;
            } else {
                writeln!(
                    out,
                    "NotInSpan: coefficient c{} is not a ring element",
                    witness + 1
                )
                .map_err(io)?;
                for o in obstructions {
                    writeln!(out, "  {}", obstruction_text(o)).map_err(io)?;
                }
            }
            Ok(exit::REFUTED)
        }
    }
}

/// The largest box bound up to `target` keeping the candidate count small.
fn enumeration_box(g: &LabeledGraph, target: u64) -> u64 {
    let labels: Vec<u64> = g
        .vertices()
        .iter()
        .map(|v| {
            v.label
                .to_bigint()
                .and_then(|n| u64::try_from(n.magnitude().clone()).ok())
                .unwrap_or(u64::MAX)
        })
        .collect();
    let mut b = target;
    while b > 0
        && labels
            .iter()
            .map(|&m| (2 * (b / m) + 1) as f64)
            .product::<f64>()
            > 20_000.0
    {
        b /= 2;
    }
    b
}

pub struct OracleArgs {
    pub bound: Option<u64>,
    pub seed: u64,
    pub samples: usize,
    pub json: bool,
}

pub fn oracle_cmd(
    path: &Path,
    args: &OracleArgs,
    opts: &TrailOptions,
    out: Out,
) -> Result<u8, CliError> {
    let g = load_instance(path)?;
    if g.ring().descriptor() != &RingDescriptor::Integers {
        return Err(OracleError::NotIntegers {
            ring: g.ring().to_string(),
        }
        .into());
    }
    let formula = minimal_leading_entries(&g, opts)?;
    let tb = flow_up_basis(&g)?;
    let basis = tb.to_spline_matrix(&g)?;
    let lts = tb.leading_terms();
    let mut all_ok = true;
    let mut rows = Vec::new();
    for (i, f) in formula.iter().enumerate() {
        let fv = f.to_bigint().and_then(|n| u64::try_from(n).ok());
        let bound = args
            .bound
            .or_else(|| fv.map(|v| v.saturating_mul(4)))
            .unwrap_or(u64::MAX);
        let brute = match brute_minimal_leading_entry(&g, i, bound) {
            Ok(r) => Some(r.value),
            Err(OracleError::NotFoundWithin { .. }) => None,
            Err(e) => return Err(e.into()),
        };
        let covered = fv.is_some_and(|v| v <= bound);
        let agrees = match (brute, fv) {
            (Some(b), Some(v)) => b == v,
            (None, _) => !covered,
            (Some(_), None) => false,
        };
        let hnf_ok = lts[i].is_associate(f);
        all_ok &= agrees && hnf_ok;
        rows.push((
            i,
            f.to_string(),
            lts[i].to_string(),
            brute,
            bound,
            agrees,
            hnf_ok,
        ));
    }
    let box_bound = enumeration_box(
        &g,
        lts.iter()
            .filter_map(|x| x.to_bigint())
            .filter_map(|n| u64::try_from(n).ok())
            .max()
            .unwrap_or(1),
    );
    let small = enumerate_small_splines(&g, box_bound)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let sampled = random_combinations(&g, &tb.splines(), args.samples, 5, &mut rng)?;
    let mut unexpressed = 0;
    for s in small.iter().chain(&sampled) {
        if !matches!(
            express_in_basis(&g, &basis, s.components())?,
            Expression::Coefficients(_)
        ) {
            unexpressed += 1;
        }
    }
    all_ok &= unexpressed == 0;
    if args.json {
        let per_vertex: Vec<Value> = rows
            .iter()
            .map(|(i, f, lt, brute, bound, agrees, hnf_ok)| {
                json!({
                    "vertex": i + 1,
                    "formula": f,
                    "flow_up_leading_term": lt,
                    "brute_force": brute,
                    "bound": bound,
                    "brute_force_agrees": agrees,
                    "flow_up_agrees": hnf_ok,
                })
            })
            .collect();
        emit_json(
            out,
            &json!({
                "vertices": per_vertex,
                "enumeration_box": box_bound,
                "enumerated": small.len(),
                "sampled": sampled.len(),
                "not_expressible": unexpressed,
                "passed": all_ok,
            }),
        )?;
    } else {
        for (i, f, lt, brute, bound, agrees, hnf_ok) in &rows {
            let brute = brute.map_or_else(|| format!("none <= {bound}"), |b| b.to_string());
            let verdict = if *agrees && *hnf_ok { "ok" } else { "MISMATCH" };
            writeln!(
                out,
                "v{}: formula {f}  flow-up {lt}  brute force {brute}  {verdict}",
                i + 1
            )
            .map_err(io)?;
        }
        writeln!(
            out,
            "{} splines with entries in [-{box_bound}, {box_bound}] and {} random splines (seed {}): {} not expressible in the flow-up basis",
            small.len(),
            sampled.len(),
            args.seed,
            unexpressed
        )
        .map_err(io)?;
        writeln!(
            out,
            "all checks passed: {}",
            if all_ok { "yes" } else { "no" }
        )
        .map_err(io)?;
    }
    Ok(if all_ok { exit::OK } else { exit::REFUTED })
}
