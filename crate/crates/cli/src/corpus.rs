//! The bundled example corpus and the checks run by `egs examples`.

use std::fs;
use std::io::Write;
use std::path::Path;

use egs_algebra::graph::{LabeledGraph, TrailOptions};
use egs_algebra::oracle::brute_minimal_leading_entry;
use egs_algebra::pid::{flow_up_basis, verify_flow_up};
use egs_algebra::rings::{product, RingElement};
use egs_algebra::splines::{
    all_labels, certify_basis, classical_qg, cofactor_products, coprime_witness_matrices,
    express_in_basis, h_factor, is_spline, qhat, qhat_components, Expression, SplineMatrix,
    Verdict,
};

use crate::error::{exit, CliError};
use crate::files::{parse_splines, parse_target, InstanceFile};

pub const FILES: &[(&str, &str)] = &[
    ("t4.json", include_str!("../corpus/t4.json")),
    ("t4_basis_b.json", include_str!("../corpus/t4_basis_b.json")),
    ("t4_set_a.json", include_str!("../corpus/t4_set_a.json")),
    ("t4_target.json", include_str!("../corpus/t4_target.json")),
    (
        "c3_rationals.json",
        include_str!("../corpus/c3_rationals.json"),
    ),
    (
        "c3_rationals_basis.json",
        include_str!("../corpus/c3_rationals_basis.json"),
    ),
    (
        "c3_integers.json",
        include_str!("../corpus/c3_integers.json"),
    ),
    ("p2.json", include_str!("../corpus/p2.json")),
    ("p2_basis.json", include_str!("../corpus/p2_basis.json")),
    (
        "single_vertex.json",
        include_str!("../corpus/single_vertex.json"),
    ),
    (
        "coprime_square.json",
        include_str!("../corpus/coprime_square.json"),
    ),
];

fn text(name: &str) -> &'static str {
    FILES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .expect("bundled file")
}

fn graph(name: &str) -> Result<LabeledGraph, CliError> {
    InstanceFile::parse(Path::new(name), text(name))?.to_graph()
}

fn matrix(g: &LabeledGraph, name: &str) -> Result<SplineMatrix, CliError> {
    Ok(SplineMatrix::new(
        g,
        parse_splines(g, Path::new(name), text(name))?,
    )?)
}

fn expect(cond: bool, detail: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(detail())
    }
}

type Check = fn(&TrailOptions) -> Result<Result<(), String>, CliError>;

fn t4_qhat(opts: &TrailOptions) -> Result<Result<(), String>, CliError> {
    let g = graph("t4.json")?;
    let q = qhat(&g, opts)?;
    let want = g.ring().parse("x^4*y^4*(x+y)*(x^2+y)")?;
    Ok(expect(q == want, || format!("qhat = {q}")))
}

fn t4_basis(opts: &TrailOptions) -> Result<Result<(), String>, CliError> {
    let g = graph("t4.json")?;
    let cert = certify_basis(&g, &matrix(&g, "t4_basis_b.json")?, opts)?;
    Ok(expect(
        cert.verdict
            == Verdict::Certified {
                unit: g.ring().int(-1),
            },
        || format!("{:?}", cert.verdict),
    ))
}

fn t4_non_basis(opts: &TrailOptions) -> Result<Result<(), String>, CliError> {
    let g = graph("t4.json")?;
    let a = matrix(&g, "t4_set_a.json")?;
    let cert = certify_basis(&g, &a, opts)?;
    if cert.verdict != Verdict::Inconclusive {
        return Ok(Err(format!("verdict {:?}", cert.verdict)));
    }
    let f = parse_target(&g, Path::new("t4_target.json"), text("t4_target.json"))?;
    if !is_spline(&g, &f)?.is_spline() {
        return Ok(Err("target is not a spline".into()));
    }
    let (num, den) = (g.ring().parse("-y")?, g.ring().parse("x^2")?);
    Ok(match express_in_basis(&g, &a, &f)? {
        Expression::NotInSpan { obstructions, .. } => expect(
            obstructions
                .iter()
                .any(|o| o.index == 1 && o.numerator == num && o.denominator == den),
            || "no obstruction c2 = -y/x^2".into(),
        ),
        other => Err(format!("{other:?}")),
    })
}

fn c3_rationals(opts: &TrailOptions) -> Result<Result<(), String>, CliError> {
    let g = graph("c3_rationals.json")?;
    let cert = certify_basis(&g, &matrix(&g, "c3_rationals_basis.json")?, opts)?;
    Ok(expect(
        cert.verdict
            == Verdict::Certified {
                unit: g.ring().int(2),
            },
        || format!("{:?}", cert.verdict),
    ))
}

fn c3_integers(opts: &TrailOptions) -> Result<Result<(), String>, CliError> {
    let g = graph("c3_integers.json")?;
    let comps = qhat_components(&g, opts)?;
    let lts = flow_up_basis(&g)?.leading_terms();
    for (i, c) in comps.iter().enumerate() {
        let brute = brute_minimal_leading_entry(&g, i, 1000)?;
        if g.ring().int(brute.value as i64) != *c || !lts[i].is_associate(c) {
            return Ok(Err(format!(
                "v{}: formula {c}, flow-up {}, brute force {}",
                i + 1,
                lts[i],
                brute.value
            )));
        }
    }
    Ok(Ok(()))
}

fn p2(opts: &TrailOptions) -> Result<Result<(), String>, CliError> {
    let g = graph("p2.json")?;
    let z = g.ring();
    let got = (
        qhat(&g, opts)?,
        classical_qg(&g, opts)?,
        h_factor(&g, opts)?,
    );
    if got != (z.int(24), z.int(4), z.int(6)) {
        return Ok(Err(format!(
            "qhat, Q_G, H = {}, {}, {}",
            got.0, got.1, got.2
        )));
    }
    let cert = certify_basis(&g, &matrix(&g, "p2_basis.json")?, opts)?;
    if !matches!(cert.verdict, Verdict::Certified { .. }) {
        return Ok(Err(format!("{:?}", cert.verdict)));
    }
    let tb = flow_up_basis(&g)?;
    Ok(expect(
        tb.leading_terms() == vec![z.int(2), z.int(12)] && verify_flow_up(&g, &tb, opts)?.passed(),
        || {
            format!(
                "leading terms {:?}",
                tb.leading_terms()
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
            )
        },
    ))
}

fn single_vertex(opts: &TrailOptions) -> Result<Result<(), String>, CliError> {
    let g = graph("single_vertex.json")?;
    let q = qhat(&g, opts)?;
    Ok(expect(q == g.ring().int(5), || format!("qhat = {q}")))
}

fn coprime_square(opts: &TrailOptions) -> Result<Result<(), String>, CliError> {
    let g = graph("coprime_square.json")?;
    let q = qhat(&g, opts)?;
    let labels = all_labels(&g);
    if q != product(g.ring(), &labels) {
        return Ok(Err(format!("qhat = {q}")));
    }
    let hats = cofactor_products(&g);
    for (i, (w, hat)) in coprime_witness_matrices(&g, opts)?
        .iter()
        .zip(&hats)
        .enumerate()
    {
        let splines_ok = w
            .columns()
            .iter()
            .all(|c| is_spline(&g, c).map(|r| r.is_spline()).unwrap_or(false));
        let expected: RingElement = &hat.pow(g.vertex_count() as u32 - 1) * &q;
        if !splines_ok || !w.determinant().is_associate(&expected) {
            return Ok(Err(format!("witness matrix A^({})", i + 1)));
        }
    }
    Ok(Ok(()))
}

pub const CHECKS: &[(&str, Check)] = &[
    ("T4 key element", t4_qhat),
    ("T4 basis B certified with unit -1", t4_basis),
    ("T4 set A is not a basis (c2 = -y/x^2)", t4_non_basis),
    ("C3 over QQ[x,y] certified with unit 2", c3_rationals),
    (
        "C3 over ZZ: formula, flow-up and brute force agree",
        c3_integers,
    ),
    ("P2: qhat 24 = H 6 * Q_G 4, flow-up (2, 12)", p2),
    ("single vertex: qhat 5", single_vertex),
    (
        "pairwise coprime square: qhat and witness matrices",
        coprime_square,
    ),
];

pub fn examples_cmd(
    export: Option<&Path>,
    opts: &TrailOptions,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    let io = |e: std::io::Error| CliError::Failed(format!("cannot write output: {e}"));
    if let Some(dir) = export {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        for (name, body) in FILES {
            let path = dir.join(name);
            fs::write(&path, body).map_err(|source| CliError::Io { path, source })?;
        }
        writeln!(out, "wrote {} files to {}", FILES.len(), dir.display()).map_err(io)?;
    }
    let mut failures = 0;
    for (name, check) in CHECKS {
        match check(opts) {
            Ok(Ok(())) => writeln!(out, "PASS {name}"),
            Ok(Err(detail)) => {
                failures += 1;
                writeln!(out, "FAIL {name}: {detail}")
            }
            Err(e) => {
                failures += 1;
                writeln!(out, "FAIL {name}: {e}")
            }
        }
        .map_err(io)?;
    }
    writeln!(
        out,
        "{} of {} checks passed",
        CHECKS.len() - failures,
        CHECKS.len()
    )
    .map_err(io)?;
    Ok(if failures == 0 {
        exit::OK
    } else {
        exit::REFUTED
    })
}
