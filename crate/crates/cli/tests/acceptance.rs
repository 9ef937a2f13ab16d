//! Acceptance criteria 1 to 9, one PASS/FAIL line each. All comparisons are
//! exact; associates are compared through the library's normal forms.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use egs_algebra::graph::{LabeledGraph, TrailOptions};
use egs_algebra::oracle::*;
use egs_algebra::pid::*;
use egs_algebra::rings::*;
use egs_algebra::splines::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(name)
}

/// Run `egs` and return exit code, stdout and wall time.
fn egs(args: &[&str]) -> (i32, String, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_egs"))
        .args(args)
        .output()
        .expect("egs runs");
    let elapsed = start.elapsed();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        elapsed,
    )
}

fn egs_json(args: &[&str]) -> Result<(i32, Value, Duration), String> {
    let (code, stdout, t) = egs(args);
    let v = serde_json::from_str(&stdout).map_err(|e| format!("bad JSON ({e}): {stdout}"))?;
    Ok((code, v, t))
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn zxy() -> Ring {
    Ring::polynomial(&["x", "y"], BaseRing::Integers).unwrap()
}

fn criterion_1() -> Outcome {
    let want = zxy().parse("x^4*y^4*(x+y)*(x^2+y)").unwrap().to_string();
    let t4 = corpus("t4.json");
    let (code, out, t) = egs(&["qhat", t4.to_str().unwrap()]);
    let line = out
        .lines()
        .find(|l| l.starts_with("Qhat = "))
        .unwrap_or("")
        .to_string();
    check(code == 0, || format!("exit {code}"))?;
    check(line == format!("Qhat = {want}"), || {
        format!("got `{line}`, want `Qhat = {want}`")
    })?;
    check(t < Duration::from_secs(1), || format!("took {t:?}"))?;
    Ok(format!("{line} in {t:?}"))
}

fn criterion_2() -> Outcome {
    let (t4, b) = (corpus("t4.json"), corpus("t4_basis_b.json"));
    let (code, v, t) = egs_json(&[
        "certify",
        t4.to_str().unwrap(),
        "--splines",
        b.to_str().unwrap(),
        "--json",
    ])?;
    let r = zxy();
    let det = r
        .parse(v["determinant"].as_str().unwrap_or(""))
        .map_err(|e| e.to_string())?;
    let q = r
        .parse(v["qhat"].as_str().unwrap_or(""))
        .map_err(|e| e.to_string())?;
    check(
        code == 0 && v["verdict"] == "Certified" && v["unit"] == "-1",
        || format!("exit {code}, {v}"),
    )?;
    check(det == -q, || "determinant is not -qhat".into())?;
    check(t < Duration::from_secs(5), || format!("took {t:?}"))?;
    Ok(format!("Certified, unit -1, determinant = -qhat, in {t:?}"))
}

fn criterion_3() -> Outcome {
    let (t4, a, f) = (
        corpus("t4.json"),
        corpus("t4_set_a.json"),
        corpus("t4_target.json"),
    );
    let (code, v, _) = egs_json(&[
        "express",
        t4.to_str().unwrap(),
        "--splines",
        a.to_str().unwrap(),
        "--target",
        f.to_str().unwrap(),
        "--json",
    ])?;
    check(code == 1 && v["result"] == "NotInSpan", || {
        format!("exit {code}, {v}")
    })?;
    let obs = v["obstructions"].as_array().cloned().unwrap_or_default();
    let second = obs
        .iter()
        .find(|o| o["index"] == 2)
        .ok_or_else(|| format!("no obstruction at index 2: {v}"))?;
    check(
        second["numerator"] == "-y" && second["denominator"] == "x^2",
        || format!("index 2: {second}"),
    )?;
    Ok("NotInSpan, obstruction at index 2: c2 = -y/x^2".into())
}

fn criterion_4() -> Outcome {
    let (c3, b) = (
        corpus("c3_rationals.json"),
        corpus("c3_rationals_basis.json"),
    );
    let (code, v, t) = egs_json(&[
        "certify",
        c3.to_str().unwrap(),
        "--splines",
        b.to_str().unwrap(),
        "--json",
    ])?;
    let r = Ring::polynomial(&["x", "y"], BaseRing::Rationals).unwrap();
    let det = r
        .parse(v["determinant"].as_str().unwrap_or(""))
        .map_err(|e| e.to_string())?;
    let q = r
        .parse(v["qhat"].as_str().unwrap_or(""))
        .map_err(|e| e.to_string())?;
    check(
        code == 0 && v["verdict"] == "Certified" && v["unit"] == "2",
        || format!("exit {code}, {v}"),
    )?;
    check(det == &r.int(2) * &q, || "determinant is not 2*qhat".into())?;
    check(t < Duration::from_secs(5), || format!("took {t:?}"))?;
    Ok(format!("Certified, unit 2, determinant = 2*qhat, in {t:?}"))
}

fn criterion_5() -> Outcome {
    let c3 = corpus("c3_integers.json");
    let (code, v, _) = egs_json(&["qhat", c3.to_str().unwrap(), "--json"])?;
    let comps: Vec<String> = v["components"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|c| c.as_str().unwrap_or("").to_string())
        .collect();
    let q = v["qhat"].as_str().unwrap_or("").to_string();
    check(code == 0, || format!("exit {code}"))?;
    // independent ground truth for the third component
    let g = load_graph(&c3);
    let brute = brute_minimal_leading_entry(&g, 2, 1000)
        .map(|r| r.value)
        .map_err(|e| e.to_string())?;
    check(comps == ["4", "6", "18"] && q == "432", || {
        format!(
            "expected components (4, 6, 18) and qhat 432; got ({}) and {q}. [m3, r2, r3] = lcm(9, 3, 5) = 45, \
             and exhaustive search finds the least leading entry at v3 is {brute}, so 18 is not attainable",
            comps.join(", ")
        )
    })?;
    Ok("components (4, 6, 18), qhat 432".into())
}

fn load_graph(path: &std::path::Path) -> LabeledGraph {
    let text = std::fs::read_to_string(path).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let z = Ring::integers();
    let names: Vec<&str> = v["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["name"].as_str().unwrap())
        .collect();
    let idx = |n: &Value| {
        names
            .iter()
            .position(|m| *m == n.as_str().unwrap())
            .unwrap()
    };
    LabeledGraph::from_labels(
        z.clone(),
        v["vertices"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| z.parse(x["label"].as_str().unwrap()).unwrap())
            .collect(),
        v["edges"]
            .as_array()
            .unwrap()
            .iter()
            .map(|e| {
                (
                    idx(&e["u"]),
                    idx(&e["v"]),
                    z.parse(e["label"].as_str().unwrap()).unwrap(),
                )
            })
            .collect(),
    )
    .unwrap()
}

fn opts() -> TrailOptions {
    TrailOptions::default()
}

fn suite_6_instance(seed: u64) -> LabeledGraph {
    let n = 1 + (seed % 6) as usize;
    let density = [0.2, 0.4, 0.7][(seed / 6 % 3) as usize];
    random_instance(&InstanceSpec::new(seed, n, 50).with_density(density))
}

fn suite_7_instance(seed: u64) -> LabeledGraph {
    let n = 1 + (seed % 6) as usize;
    random_instance(
        &InstanceSpec::new(10_000 + seed, n, 50)
            .with_density(0.3)
            .coprime(),
    )
}

/// Largest box bound up to `target` with at most 20000 candidate vectors.
fn enumeration_box(g: &LabeledGraph, target: u64) -> u64 {
    let labels: Vec<u64> = g
        .vertices()
        .iter()
        .map(|v| u64::try_from(v.label.to_bigint().unwrap().magnitude().clone()).unwrap())
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

fn as_u64(x: &RingElement) -> u64 {
    u64::try_from(x.to_bigint().unwrap().magnitude().clone()).unwrap()
}

fn instance_6(seed: u64) -> Result<usize, String> {
    let g = suite_6_instance(seed);
    let n = g.vertex_count();
    let fail = |what: &str| format!("seed {seed}: {what}");
    let tb = flow_up_basis(&g).map_err(|e| fail(&format!("(a) {e}")))?;
    check(tb.classes().len() == n, || fail("(a) rank"))?;
    let report = verify_flow_up(&g, &tb, &opts()).map_err(|e| fail(&e.to_string()))?;
    check(report.non_splines.is_empty() && report.triangular, || {
        fail("(a) not a triangular spline basis")
    })?;
    check(report.determinant_matches, || {
        fail("(b) |det| not associate to qhat")
    })?;
    check(report.leading_term_matches.iter().all(|&b| b), || {
        fail("(c) leading terms differ from the formula")
    })?;
    for (i, f) in report.expected_leading_terms.iter().enumerate() {
        let fv = as_u64(f);
        let brute = brute_minimal_leading_entry(&g, i, 4 * fv)
            .map_err(|e| fail(&format!("(d) v{}: {e}", i + 1)))?;
        check(brute.value == fv, || {
            fail(&format!(
                "(d) v{}: brute force {} vs formula {fv}",
                i + 1,
                brute.value
            ))
        })?;
    }
    let basis = tb.to_spline_matrix(&g).map_err(|e| fail(&e.to_string()))?;
    let target = tb.leading_terms().iter().map(as_u64).max().unwrap_or(1);
    let small = enumerate_small_splines(&g, enumeration_box(&g, target))
        .map_err(|e| fail(&e.to_string()))?;
    for s in &small {
        match express_in_basis(&g, &basis, s.components()) {
            Ok(Expression::Coefficients(_)) => {}
            other => {
                return Err(fail(&format!(
                    "(e) {:?} not reconstructed: {other:?}",
                    s.components()
                )))
            }
        }
    }
    Ok(small.len())
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut enumerated = 0;
    for seed in 0..500 {
        enumerated += instance_6(seed)?;
    }
    let t = start.elapsed();
    check(t < Duration::from_secs(300), || format!("took {t:?}"))?;
    Ok(format!(
        "500 instances, (a)-(d) hold, {enumerated} enumerated splines reconstructed, in {t:?}"
    ))
}

fn instance_7(seed: u64, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let g = suite_7_instance(seed);
    let n = g.vertex_count();
    let fail = |what: &str| format!("seed {seed}: {what}");
    let q = qhat(&g, &opts()).map_err(|e| fail(&e.to_string()))?;
    check(q == product(g.ring(), &all_labels(&g)), || {
        fail("qhat is not the product of the labels")
    })?;
    let tb = flow_up_basis(&g).map_err(|e| fail(&e.to_string()))?;
    let any =
        random_combinations(&g, &tb.splines(), n, 9, rng).map_err(|e| fail(&e.to_string()))?;
    let det = SplineMatrix::from_splines(&g, &any)
        .map_err(|e| fail(&e.to_string()))?
        .determinant();
    check(q.divides(&det), || {
        fail("qhat does not divide the determinant of random splines")
    })?;
    let hats = cofactor_products(&g);
    let witnesses = coprime_witness_matrices(&g, &opts()).map_err(|e| fail(&e.to_string()))?;
    check(witnesses.len() == hats.len(), || fail("witness count"))?;
    for (i, (w, hat)) in witnesses.iter().zip(&hats).enumerate() {
        check(
            w.columns()
                .iter()
                .all(|c| is_spline(&g, c).unwrap().is_spline()),
            || fail(&format!("A^({}) column", i + 1)),
        )?;
        let expected = &hat.pow(n as u32 - 1) * &q;
        check(w.determinant().is_associate(&expected), || {
            fail(&format!("det A^({})", i + 1))
        })?;
    }
    let basis = tb.to_spline_matrix(&g).map_err(|e| fail(&e.to_string()))?;
    check(
        matches!(
            certify_basis(&g, &basis, &opts()).map(|c| c.verdict),
            Ok(Verdict::Certified { .. })
        ),
        || fail("flow-up basis not certified"),
    )?;
    let k = rng.gen_range(0..n);
    let factor = g.ring().int(rng.gen_range(2..=7));
    let scaled = scale_class(&g, &tb, k, &factor).map_err(|e| fail(&e.to_string()))?;
    let verdict = certify_basis(&g, &scaled.to_spline_matrix(&g).unwrap(), &opts())
        .map_err(|e| fail(&e.to_string()))?
        .verdict;
    check(verdict == Verdict::RefutedByCoprimeConverse, || {
        fail(&format!("scaled basis gave {verdict:?}"))
    })
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for seed in 0..200 {
        instance_7(seed, &mut rng)?;
    }
    let t = start.elapsed();
    check(t < Duration::from_secs(120), || format!("took {t:?}"))?;
    Ok(format!("200 coprime instances, in {t:?}"))
}

fn hat(items: &[RingElement], i: usize) -> RingElement {
    product(
        items[0].ring(),
        items
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, a)| a),
    )
}

fn lemma_holds(a: &[RingElement], b: &RingElement) -> Result<(), String> {
    let r = b.ring().clone();
    let e = |x: RingError| x.to_string();
    let show = || {
        format!(
            "a = ({}), b = {b}",
            a.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        )
    };
    let lcm_a = lcm_many(&r, a).map_err(e)?;
    let gcds: Vec<RingElement> = a
        .iter()
        .map(|x| x.gcd(b))
        .collect::<Result<_, _>>()
        .map_err(e)?;
    check(
        lcm_a
            .gcd(b)
            .map_err(e)?
            .is_associate(&lcm_many(&r, &gcds).map_err(e)?),
        || format!("item 1 fails for {}", show()),
    )?;
    let lcms: Vec<RingElement> = a
        .iter()
        .map(|x| x.lcm(b))
        .collect::<Result<_, _>>()
        .map_err(e)?;
    let gcd_a = gcd_many(&r, a).map_err(e)?;
    check(
        gcd_a
            .lcm(b)
            .map_err(e)?
            .is_associate(&gcd_many(&r, &lcms).map_err(e)?),
        || format!("item 2 fails for {}", show()),
    )?;
    let (a1, a2, a3) = (&a[0], &a[1], &a[2]);
    let num = &(&(a1 * a2) * a3) * &gcd_many(&r, [a1, a2, a3]).map_err(e)?;
    let den = &(&a1.gcd(a2).map_err(e)? * &a1.gcd(a3).map_err(e)?) * &a2.gcd(a3).map_err(e)?;
    let three = lcm_many(&r, [a1, a2, a3]).map_err(e)?;
    check(num.exact_div(&den).map_err(e)?.is_associate(&three), || {
        format!("item 3 fails for {}", show())
    })?;
    let hats: Vec<RingElement> = (0..a.len()).map(|i| hat(a, i)).collect();
    let right = product(&r, a).exact_div(&lcm_a).map_err(e)?;
    check(gcd_many(&r, &hats).map_err(e)?.is_associate(&right), || {
        format!("item 4 fails for {}", show())
    })
}

fn random_int(r: &Ring, rng: &mut ChaCha8Rng) -> RingElement {
    let v = rng.gen_range(1..=120i64);
    r.int(if rng.gen_bool(0.5) { v } else { -v })
}

fn random_qx(r: &Ring, rng: &mut ChaCha8Rng) -> RingElement {
    let x = r.variable("x").unwrap();
    loop {
        let deg = rng.gen_range(0..=3);
        let mut p = r.zero();
        for _ in 0..=deg {
            p = &(&p * &x) + &r.int(rng.gen_range(-3..=3));
        }
        // shared factors make the identities non-trivial
        let shared = ["1", "x", "x+1", "x^2-2"][rng.gen_range(0..4)];
        let p = &p * &r.parse(shared).unwrap();
        if !p.is_zero() {
            return p;
        }
    }
}

/// Exhaustive solvability over `0..lcm` of the moduli.
fn brute_crt(system: &[(i64, i64)]) -> Option<i64> {
    let l = system.iter().fold(1i64, |acc, &(_, m)| num_lcm(acc, m));
    (0..l).find(|x| system.iter().all(|&(a, m)| (x - a).rem_euclid(m) == 0))
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        num_gcd(b, a % b)
    }
}

fn num_lcm(a: i64, b: i64) -> i64 {
    a / num_gcd(a, b) * b
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let z = Ring::integers();
    for _ in 0..1000 {
        let k = rng.gen_range(3..=5);
        let a: Vec<RingElement> = (0..k).map(|_| random_int(&z, &mut rng)).collect();
        lemma_holds(&a, &random_int(&z, &mut rng))?;
    }
    let qx = Ring::polynomial(&["x"], BaseRing::Rationals).unwrap();
    for _ in 0..100 {
        let k = rng.gen_range(3..=4);
        let a: Vec<RingElement> = (0..k).map(|_| random_qx(&qx, &mut rng)).collect();
        lemma_holds(&a, &random_qx(&qx, &mut rng))?;
    }
    let mut systems = 0;
    let mut unsolvable = 0;
    while systems < 1000 {
        let k = rng.gen_range(1..=3);
        let system: Vec<(i64, i64)> = (0..k)
            .map(|_| (rng.gen_range(0..200), rng.gen_range(1..=40)))
            .collect();
        if system.iter().map(|s| s.1).product::<i64>() > 10_000 {
            continue;
        }
        systems += 1;
        let congruences: Vec<Congruence> = system
            .iter()
            .map(|&(a, m)| Congruence::new(z.int(a), z.int(m)).unwrap())
            .collect();
        match (crt(&congruences), brute_crt(&system)) {
            (Ok(sol), Some(x)) => {
                check(
                    congruences.iter().all(|c| c.is_satisfied_by(&sol.solution)),
                    || format!("{system:?}: bad solution"),
                )?;
                check(
                    sol.solution.rem_euclid(&sol.modulus).unwrap() == z.int(x),
                    || format!("{system:?}: not the least solution"),
                )?;
            }
            (Err(CrtError::Incompatible { first, second }), None) => {
                unsolvable += 1;
                let ((a, m), (b, n)) = (system[first], system[second]);
                check((a - b).rem_euclid(num_gcd(m, n)) != 0, || {
                    format!("{system:?}: wrong incompatible pair")
                })?;
            }
            (got, want) => return Err(format!("{system:?}: crt {got:?}, exhaustive {want:?}")),
        }
    }
    let t = start.elapsed();
    check(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!("1000 integer and 100 QQ[x] tuples, {systems} congruence systems ({unsolvable} unsolvable), in {t:?}"))
}

fn criterion_9() -> Outcome {
    let p2 = load_graph(&corpus("p2.json"));
    let z = Ring::integers();
    let got = (
        h_factor(&p2, &opts()).unwrap(),
        classical_qg(&p2, &opts()).unwrap(),
        qhat(&p2, &opts()).unwrap(),
    );
    check(got == (z.int(6), z.int(4), z.int(24)), || {
        format!("P2: H, Q_G, qhat = {}, {}, {}", got.0, got.1, got.2)
    })?;
    let instances = (0..500)
        .map(suite_6_instance)
        .chain((0..200).map(suite_7_instance));
    let mut count = 0;
    for (k, g) in instances.enumerate() {
        let h = h_factor(&g, &opts()).map_err(|e| e.to_string())?;
        let qg = classical_qg(&g, &opts()).map_err(|e| e.to_string())?;
        let q = qhat(&g, &opts()).map_err(|e| e.to_string())?;
        check((&h * &qg).is_associate(&q), || {
            format!("instance {k}: H = {h}, Q_G = {qg}, qhat = {q}")
        })?;
        count += 1;
    }
    Ok(format!(
        "P2 gives H 6, Q_G 4, qhat 24; H * Q_G ~ qhat on {count} instances"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("T4 key element", criterion_1),
        ("T4 basis B certification", criterion_2),
        ("T4 set A refutation", criterion_3),
        ("C3 over QQ[x,y] certification", criterion_4),
        ("C3 integer components", criterion_5),
        ("PID property suite", criterion_6),
        ("pairwise-coprime suite", criterion_7),
        ("ring identities and CRT", criterion_8),
        ("H-factor", criterion_9),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail}", k + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
