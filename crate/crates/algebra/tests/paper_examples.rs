use egs_algebra::graph::{LabeledGraph, TrailOptions};
use egs_algebra::matrix::Matrix;
use egs_algebra::rings::{BaseRing, Ring, RingElement};
use egs_algebra::splines::*;

fn opts() -> TrailOptions {
    TrailOptions::default()
}

fn parse_all(r: &Ring, xs: &[&str]) -> Vec<RingElement> {
    xs.iter().map(|s| r.parse(s).unwrap()).collect()
}

fn t4() -> (Ring, LabeledGraph) {
    let r = Ring::polynomial(&["x", "y"], BaseRing::Integers).unwrap();
    let p = |s: &str| r.parse(s).unwrap();
    let g = LabeledGraph::from_labels(
        r.clone(),
        parse_all(&r, &["x", "y^2", "x+y", "x*y"]),
        vec![(2, 0, p("x^2+y")), (2, 1, p("x^2")), (2, 3, p("y"))],
    )
    .unwrap();
    (r, g)
}

fn t4_set_a(r: &Ring, g: &LabeledGraph) -> SplineMatrix {
    SplineMatrix::new(
        g,
        vec![
            parse_all(r, &["x^3+x*y", "0", "0", "0"]),
            parse_all(r, &["0", "x^2*y^2", "0", "0"]),
            parse_all(r, &["0", "0", "(x+y)*(x^2+y)*x^2*y", "0"]),
            parse_all(r, &["0", "0", "0", "x*y"]),
        ],
    )
    .unwrap()
}

fn t4_set_b(r: &Ring, g: &LabeledGraph) -> SplineMatrix {
    SplineMatrix::new(
        g,
        vec![
            parse_all(r, &["x^3+x*y", "0", "0", "0"]),
            parse_all(r, &["x^2*y^2-x*y^2", "-x*y^2-y^3", "-x*y^2-y^3", "0"]),
            parse_all(r, &["x^2*y+x*y^2", "x*y^2", "x^2*y+x*y^2", "0"]),
            parse_all(r, &["0", "0", "0", "x*y"]),
        ],
    )
    .unwrap()
}

#[test]
fn t4_qhat() {
    let (r, g) = t4();
    let q = qhat(&g, &opts()).unwrap();
    assert_eq!(q, r.parse("x^4*y^4*(x+y)*(x^2+y)").unwrap());
    assert_eq!(q.to_string(), "x^7*y^4+x^6*y^5+x^5*y^5+x^4*y^6");
}

#[test]
fn t4_basis_b_certifies_with_unit_minus_one() {
    let (r, g) = t4();
    let b = t4_set_b(&r, &g);
    let cert = certify_basis(&g, &b, &opts()).unwrap();
    assert_eq!(cert.verdict, Verdict::Certified { unit: r.int(-1) });
    assert_eq!(cert.determinant, -cert.qhat.clone());
}

#[test]
fn t4_set_a_is_not_a_basis() {
    let (r, g) = t4();
    let a = t4_set_a(&r, &g);
    let cert = certify_basis(&g, &a, &opts()).unwrap();
    assert_eq!(cert.verdict, Verdict::Inconclusive);

    let f = parse_all(&r, &["x^2*y^2+x^2*y", "-y^3", "x^2*y-y^3", "0"]);
    assert!(is_spline(&g, &f).unwrap().is_spline());
    match express_in_basis(&g, &a, &f).unwrap() {
        Expression::NotInSpan { obstructions, .. } => {
            let second = obstructions
                .iter()
                .find(|o| o.index == 1)
                .expect("obstruction at the second column");
            assert_eq!(second.numerator, r.parse("-y").unwrap());
            assert_eq!(second.denominator, r.parse("x^2").unwrap());
        }
        other => panic!("expected NotInSpan, got {other:?}"),
    }
    // the same spline is expressible in the certified basis
    let b = t4_set_b(&r, &g);
    assert!(matches!(
        express_in_basis(&g, &b, &f).unwrap(),
        Expression::Coefficients(_)
    ));
}

#[test]
fn t4_has_flow_up_classes_of_formula_degree() {
    let (r, g) = t4();
    // A's columns are flow-up classes whose leading terms are the components
    let comps = qhat_components(&g, &opts()).unwrap();
    let a = t4_set_a(&r, &g);
    for (i, col) in a.columns().iter().enumerate() {
        assert!(is_spline(&g, col).unwrap().is_spline());
        assert!(comps[i].divides(&col[i]));
    }
}

#[test]
fn triangle_over_qxy_certifies_with_unit_two() {
    let r = Ring::polynomial(&["x", "y"], BaseRing::Rationals).unwrap();
    let p = |s: &str| r.parse(s).unwrap();
    let g = LabeledGraph::from_labels(
        r.clone(),
        parse_all(&r, &["x", "y", "x+y"]),
        vec![(0, 1, p("x^2+y")), (1, 2, p("x^2+y^2")), (0, 2, p("x+y^2"))],
    )
    .unwrap();
    let b = SplineMatrix::new(
        &g,
        vec![
            parse_all(&r, &["x^2*y+x*y^2", "x^2*y+x*y^2", "x^2*y+x*y^2"]),
            parse_all(
                &r,
                &[
                    "x^3+x^2*y+2*x*y^3-4*x*y^2+2*x*y",
                    "x^3*y-x^2*y^2+2*x*y^3-3*x*y^2+x*y-y^3-y^2",
                    "x^3+x^2+x*y^3-2*x*y^2+x*y+y^4-y^3",
                ],
            ),
            parse_all(
                &r,
                &[
                    "x^4-2*x^3-x^2*y^2+4*x*y^2-2*x*y",
                    "-x^2*y+4*x*y^2+y^3",
                    "x^4-x^3+3*x*y^2-y^4+2*y^3",
                ],
            ),
        ],
    )
    .unwrap();
    let cert = certify_basis(&g, &b, &opts()).unwrap();
    assert_eq!(cert.verdict, Verdict::Certified { unit: r.int(2) });
    assert_eq!(cert.determinant, p("2*x*y*(x+y)*(x+y^2)*(x^2+y)*(x^2+y^2)"));
}

/// The pairwise-coprime example on four vertices and four edges.
fn coprime_square() -> LabeledGraph {
    let z = Ring::integers();
    LabeledGraph::from_labels(
        z.clone(),
        [2, 3, 5, 7].map(|m| z.int(m)).to_vec(),
        vec![
            (0, 1, z.int(11)),
            (2, 1, z.int(13)),
            (3, 2, z.int(17)),
            (1, 3, z.int(19)),
        ],
    )
    .unwrap()
}

/// Matrices as printed, rows `v_4..v_1`; `Q` marks Q̂ and `L` marks `l̂_i`.
const PRINTED: [[&str; 4]; 8] = [
    ["000L", "00L0", "0L00", "Q000"],
    ["000L", "00L0", "0Q00", "L000"],
    ["000L", "00Q0", "0L00", "L000"],
    ["000Q", "00L0", "0L00", "L000"],
    ["000L", "00L0", "LQ00", "L000"],
    ["000L", "L000", "LQ00", "00L0"],
    ["L000", "L00Q", "00L0", "0L00"],
    ["L00Q", "00L0", "L000", "0L00"],
];

fn sorted_columns(m: &Matrix) -> Vec<Vec<String>> {
    let mut cols: Vec<Vec<String>> = m
        .columns()
        .iter()
        .map(|c| c.iter().map(ToString::to_string).collect())
        .collect();
    cols.sort();
    cols
}

#[test]
fn coprime_witness_matrices_match_the_printed_ones() {
    let g = coprime_square();
    let z = g.ring().clone();
    let q = qhat(&g, &opts()).unwrap();
    assert_eq!(q, z.int(2 * 3 * 5 * 7 * 11 * 13 * 17 * 19));
    let hats = cofactor_products(&g);
    let witnesses = coprime_witness_matrices(&g, &opts()).unwrap();
    assert_eq!(witnesses.len(), 8);
    for (i, (w, printed)) in witnesses.iter().zip(PRINTED).enumerate() {
        let rows = printed
            .iter()
            .map(|row| {
                row.chars()
                    .map(|c| match c {
                        'Q' => q.clone(),
                        'L' => hats[i].clone(),
                        _ => z.zero(),
                    })
                    .collect()
            })
            .collect();
        let expected = Matrix::from_rows(&z, rows);
        assert_eq!(
            sorted_columns(&w.to_matrix()),
            sorted_columns(&expected),
            "A^({})",
            i + 1
        );
        for col in w.columns() {
            assert!(is_spline(&g, col).unwrap().is_spline());
        }
        assert!(w.determinant().is_associate(&(&hats[i].pow(3) * &q)));
    }
}
