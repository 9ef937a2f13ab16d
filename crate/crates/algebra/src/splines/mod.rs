//! Spline modules on edge-labeled graphs.
//!
//! A spline assigns `f_v ∈ m_v R` to every vertex such that
//! `f_u − f_v ∈ r_e R` across every edge `e = {u, v}`. Candidate bases are
//! certified by comparing their determinant with the key element Q̂_G.
//!
//! Components are always listed `v_1..v_n`. The determinant uses the matrix
//! whose column `k` is the `k`-th spline read bottom-to-top, i.e. row 0 holds
//! the `v_n` entries and the last row the `v_1` entries.

mod qhat;
mod witness;

use std::fmt;

use thiserror::Error;

use crate::graph::{EdgeId, GraphError, LabeledGraph, TrailOptions, VertexId};
use crate::matrix::Matrix;
use crate::rings::{RingElement, RingError};

pub use qhat::{classical_qg, h_factor, qhat, qhat_component, qhat_components, TrailTable};
pub use witness::{
    all_labels, cofactor_products, coprimality_violation, coprime_witness_matrices,
    labels_pairwise_coprime,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SplineError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("expected {expected} entries, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("not a spline: {0}")]
    NotASpline(SplineReport),
    #[error("the splines are linearly dependent (determinant 0)")]
    ZeroDeterminant,
    #[error("determinant {determinant} is not associate to Q̂ = {qhat}")]
    HypothesisViolated { determinant: String, qhat: String },
    #[error("labels l{} and l{} are not coprime", .first + 1, .second + 1)]
    NotPairwiseCoprime { first: usize, second: usize },
}

/// A failed spline condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplineViolation {
    /// `f_v ∉ m_v R`.
    Vertex(VertexId),
    /// `f_u − f_v ∉ r_e R`.
    Edge(EdgeId),
}

/// Outcome of a membership check; empty means the candidate is a spline.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SplineReport {
    pub violations: Vec<SplineViolation>,
}

impl SplineReport {
    pub fn is_spline(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for SplineReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| match v {
                SplineViolation::Vertex(i) => format!("vertex v{} condition fails", i + 1),
                SplineViolation::Edge(e) => format!("edge e{} condition fails", e + 1),
            })
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

fn check_len(g: &LabeledGraph, comps: &[RingElement]) -> Result<(), SplineError> {
    if comps.len() != g.vertex_count() {
        return Err(SplineError::Dimension {
            expected: g.vertex_count(),
            got: comps.len(),
        });
    }
    for c in comps {
        if c.ring() != g.ring() {
            return Err(g.ring().mismatch(c.ring()).into());
        }
    }
    Ok(())
}

/// Check both spline conditions for the candidate components `v_1..v_n`.
pub fn is_spline(g: &LabeledGraph, comps: &[RingElement]) -> Result<SplineReport, SplineError> {
    check_len(g, comps)?;
    let mut violations = Vec::new();
    for (i, (f, v)) in comps.iter().zip(g.vertices()).enumerate() {
        if !v.label.divides(f) {
            violations.push(SplineViolation::Vertex(i));
        }
    }
    for (k, e) in g.edges().iter().enumerate() {
        if !e.label.divides(&(&comps[e.u] - &comps[e.v])) {
            violations.push(SplineViolation::Edge(k));
        }
    }
    Ok(SplineReport { violations })
}

/// A vertex labeling known to satisfy the spline conditions of the graph it
/// was checked against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spline {
    components: Vec<RingElement>,
}

impl Spline {
    pub fn new(g: &LabeledGraph, components: Vec<RingElement>) -> Result<Self, SplineError> {
        let report = is_spline(g, &components)?;
        if !report.is_spline() {
            return Err(SplineError::NotASpline(report));
        }
        Ok(Spline { components })
    }

    pub fn zero(g: &LabeledGraph) -> Self {
        Spline {
            components: vec![g.ring().zero(); g.vertex_count()],
        }
    }

    pub fn components(&self) -> &[RingElement] {
        &self.components
    }

    pub fn into_components(self) -> Vec<RingElement> {
        self.components
    }

    /// Index of the first nonzero component.
    pub fn leading_index(&self) -> Option<VertexId> {
        self.components.iter().position(|c| !c.is_zero())
    }
}

/// A spline whose components below `index` vanish and whose component at
/// `index` does not; that component is its leading term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowUpClass {
    spline: Spline,
    index: VertexId,
}

impl FlowUpClass {
    pub fn new(spline: Spline) -> Option<Self> {
        let index = spline.leading_index()?;
        Some(FlowUpClass { spline, index })
    }

    pub fn index(&self) -> VertexId {
        self.index
    }

    pub fn leading_term(&self) -> &RingElement {
        &self.spline.components[self.index]
    }

    pub fn spline(&self) -> &Spline {
        &self.spline
    }
}

/// `n` candidate splines on an `n`-vertex graph (membership is not assumed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplineMatrix {
    columns: Vec<Vec<RingElement>>,
}

impl SplineMatrix {
    pub fn new(g: &LabeledGraph, columns: Vec<Vec<RingElement>>) -> Result<Self, SplineError> {
        if columns.len() != g.vertex_count() {
            return Err(SplineError::Dimension {
                expected: g.vertex_count(),
                got: columns.len(),
            });
        }
        for c in &columns {
            check_len(g, c)?;
        }
        Ok(SplineMatrix { columns })
    }

    pub fn from_splines(g: &LabeledGraph, splines: &[Spline]) -> Result<Self, SplineError> {
        Self::new(g, splines.iter().map(|s| s.components.clone()).collect())
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn columns(&self) -> &[Vec<RingElement>] {
        &self.columns
    }

    /// The square matrix with rows `v_n..v_1` and columns `F_1..F_n`.
    pub fn to_matrix(&self) -> Matrix {
        let n = self.columns.len();
        let ring = self.columns[0][0].ring().clone();
        let mut m = Matrix::zeros(&ring, n, n);
        for (k, col) in self.columns.iter().enumerate() {
            for (v, x) in col.iter().enumerate() {
                m.set(n - 1 - v, k, x.clone());
            }
        }
        m
    }

    /// `|F_1, …, F_n|` under the fixed bottom-to-top row convention.
    pub fn determinant(&self) -> RingElement {
        self.to_matrix().determinant()
    }

    fn with_column(&self, k: usize, col: &[RingElement]) -> SplineMatrix {
        let mut columns = self.columns.clone();
        columns[k] = col.to_vec();
        SplineMatrix { columns }
    }

    /// `Σ c_k F_k`.
    pub fn combine(&self, coeffs: &[RingElement]) -> Vec<RingElement> {
        assert_eq!(coeffs.len(), self.columns.len());
        let n = self.columns[0].len();
        let ring = self.columns[0][0].ring().clone();
        let mut out = vec![ring.zero(); n];
        for (c, col) in coeffs.iter().zip(&self.columns) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(col) {
                *o = &*o + &(c * x);
            }
        }
        out
    }
}

/// Free-function form of [`SplineMatrix::determinant`].
pub fn spline_determinant(ms: &SplineMatrix) -> RingElement {
    ms.determinant()
}

/// The verdict of the determinant test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// `det = unit · Q̂`: a basis.
    Certified { unit: RingElement },
    /// These columns (0-based) are not splines.
    RefutedNotSplines { columns: Vec<usize> },
    /// Determinant zero: linearly dependent.
    RefutedDependent,
    /// Not associate to Q̂ where the converse is known to hold (pairwise
    /// coprime labels, or a PID).
    RefutedByCoprimeConverse,
    /// Not associate to Q̂ and no converse applies.
    Inconclusive,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Certified { .. } => "Certified",
            Verdict::RefutedNotSplines { .. } => "RefutedNotSplines",
            Verdict::RefutedDependent => "RefutedDependent",
            Verdict::RefutedByCoprimeConverse => "RefutedByCoprimeConverse",
            Verdict::Inconclusive => "Inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisCertificate {
    pub verdict: Verdict,
    pub determinant: RingElement,
    pub qhat: RingElement,
}

/// Decide whether `ms` is a basis of the spline module of `g`.
pub fn certify_basis(
    g: &LabeledGraph,
    ms: &SplineMatrix,
    opts: &TrailOptions,
) -> Result<BasisCertificate, SplineError> {
    let q = qhat(g, opts)?;
    let determinant = ms.determinant();
    let mut bad = Vec::new();
    for (k, col) in ms.columns().iter().enumerate() {
        if !is_spline(g, col)?.is_spline() {
            bad.push(k);
        }
    }
    let verdict = if !bad.is_empty() {
        Verdict::RefutedNotSplines { columns: bad }
    } else if determinant.is_zero() {
        Verdict::RefutedDependent
    } else if let Some(unit) = determinant.associate(&q)? {
        Verdict::Certified { unit }
    } else if g.ring().is_pid() || labels_pairwise_coprime(g)? {
        Verdict::RefutedByCoprimeConverse
    } else {
        Verdict::Inconclusive
    };
    Ok(BasisCertificate {
        verdict,
        determinant,
        qhat: q,
    })
}

/// A Cramer quotient `numerator / denominator` in lowest terms that is not
/// a ring element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub index: usize,
    pub numerator: RingElement,
    pub denominator: RingElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expression {
    /// `f = Σ c_k F_k`, verified by reconstruction.
    Coefficients(Vec<RingElement>),
    /// Some Cramer quotient is not in the ring. `witness` is the first
    /// failing index; `obstructions` lists every failing index.
    NotInSpan {
        witness: usize,
        obstructions: Vec<Obstruction>,
    },
}

/// Write `f` in terms of the columns of `ms` by Cramer's rule, where the
/// `k`-th coefficient is `|F_1, …, f, …, F_n| / |F_1, …, F_n|`.
pub fn express_in_basis(
    g: &LabeledGraph,
    ms: &SplineMatrix,
    f: &[RingElement],
) -> Result<Expression, SplineError> {
    check_len(g, f)?;
    let det = ms.determinant();
    if det.is_zero() {
        return Err(SplineError::ZeroDeterminant);
    }
    let mut coeffs = Vec::with_capacity(ms.len());
    let mut obstructions = Vec::new();
    for k in 0..ms.len() {
        let x = ms.with_column(k, f).determinant();
        match x.exact_div(&det) {
            Ok(c) => coeffs.push(c),
            Err(RingError::NotDivisible { .. }) => {
                let d = x.gcd(&det)?;
                let mut numerator = x.exact_div(&d)?;
                let mut denominator = det.exact_div(&d)?;
                let u = denominator.unit_part();
                numerator = numerator.exact_div(&u)?;
                denominator = denominator.exact_div(&u)?;
                obstructions.push(Obstruction {
                    index: k,
                    numerator,
                    denominator,
                });
            }
            Err(e) => return Err(e.into()),
        }
    }
    if let Some(first) = obstructions.first() {
        return Ok(Expression::NotInSpan {
            witness: first.index,
            obstructions,
        });
    }
    assert_eq!(
        ms.combine(&coeffs),
        f,
        "Cramer reconstruction must be exact"
    );
    Ok(Expression::Coefficients(coeffs))
}

/// Coefficients `x_k` with `Σ x_k F_k = Q̂ · f`, valid when the determinant
/// of `ms` is associate to Q̂. No division by a non-unit takes place.
pub fn qhat_span_decomposition(
    g: &LabeledGraph,
    ms: &SplineMatrix,
    f: &[RingElement],
    opts: &TrailOptions,
) -> Result<Vec<RingElement>, SplineError> {
    check_len(g, f)?;
    let q = qhat(g, opts)?;
    let det = ms.determinant();
    let unit = det
        .associate(&q)?
        .ok_or_else(|| SplineError::HypothesisViolated {
            determinant: det.to_string(),
            qhat: q.to_string(),
        })?;
    let xs = (0..ms.len())
        .map(|k| ms.with_column(k, f).determinant().exact_div(&unit))
        .collect::<Result<Vec<_>, _>>()?;
    let target: Vec<RingElement> = f.iter().map(|c| &q * c).collect();
    assert_eq!(
        ms.combine(&xs),
        target,
        "span decomposition must reconstruct Q̂·f"
    );
    Ok(xs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{BaseRing, Ring};

    fn ints(ms: &[i64], es: &[(usize, usize, i64)]) -> LabeledGraph {
        let z = Ring::integers();
        LabeledGraph::from_labels(
            z.clone(),
            ms.iter().map(|&m| z.int(m)).collect(),
            es.iter().map(|&(u, v, r)| (u, v, z.int(r))).collect(),
        )
        .unwrap()
    }

    fn col(g: &LabeledGraph, xs: &[i64]) -> Vec<RingElement> {
        xs.iter().map(|&x| g.ring().int(x)).collect()
    }

    fn p2() -> LabeledGraph {
        ints(&[2, 3], &[(0, 1, 4)])
    }

    fn p2_basis(g: &LabeledGraph) -> SplineMatrix {
        SplineMatrix::new(g, vec![col(g, &[2, 6]), col(g, &[0, 12])]).unwrap()
    }

    fn opts() -> TrailOptions {
        TrailOptions::default()
    }

    #[test]
    fn membership() {
        let g = p2();
        assert!(is_spline(&g, &col(&g, &[0, 0])).unwrap().is_spline());
        let r = is_spline(&g, &col(&g, &[1, 0])).unwrap();
        assert_eq!(
            r.violations,
            vec![SplineViolation::Vertex(0), SplineViolation::Edge(0)]
        );
        assert!(matches!(
            is_spline(&g, &col(&g, &[0])),
            Err(SplineError::Dimension {
                expected: 2,
                got: 1
            })
        ));
        assert!(Spline::new(&g, col(&g, &[4, 0])).is_ok());
        assert!(matches!(
            Spline::new(&g, col(&g, &[2, 0])),
            Err(SplineError::NotASpline(_))
        ));
    }

    #[test]
    fn t4_flow_up_spline() {
        let r = Ring::polynomial(&["x", "y"], BaseRing::Integers).unwrap();
        let p = |s: &str| r.parse(s).unwrap();
        let g = LabeledGraph::from_labels(
            r.clone(),
            vec![p("x"), p("y^2"), p("x+y"), p("x*y")],
            vec![(2, 0, p("x^2+y")), (2, 1, p("x^2")), (2, 3, p("y"))],
        )
        .unwrap();
        let f = vec![p("x^3+x*y"), r.zero(), r.zero(), r.zero()];
        assert!(is_spline(&g, &f).unwrap().is_spline());
    }

    #[test]
    fn determinants() {
        let g = p2();
        // rows v2, v1: [[6, 12], [2, 0]]
        assert_eq!(p2_basis(&g).determinant(), g.ring().int(-24));
        let g3 = ints(&[1, 1, 1], &[(0, 1, 1), (1, 2, 1)]);
        let diag = SplineMatrix::new(
            &g3,
            vec![
                col(&g3, &[2, 0, 0]),
                col(&g3, &[0, 3, 0]),
                col(&g3, &[0, 0, 5]),
            ],
        )
        .unwrap();
        // reversing three rows is odd
        assert_eq!(diag.determinant(), g3.ring().int(-30));
    }

    #[test]
    fn certify_p2() {
        let g = p2();
        let c = certify_basis(&g, &p2_basis(&g), &opts()).unwrap();
        assert_eq!(
            c.verdict,
            Verdict::Certified {
                unit: g.ring().int(-1)
            }
        );
        assert_eq!(c.qhat, g.ring().int(24));

        let scaled = SplineMatrix::new(&g, vec![col(&g, &[2, 6]), col(&g, &[0, 24])]).unwrap();
        assert_eq!(
            certify_basis(&g, &scaled, &opts()).unwrap().verdict,
            Verdict::RefutedByCoprimeConverse
        );

        let dep = SplineMatrix::new(&g, vec![col(&g, &[2, 6]), col(&g, &[4, 12])]).unwrap();
        assert_eq!(
            certify_basis(&g, &dep, &opts()).unwrap().verdict,
            Verdict::RefutedDependent
        );

        let junk = SplineMatrix::new(&g, vec![col(&g, &[1, 6]), col(&g, &[0, 12])]).unwrap();
        assert_eq!(
            certify_basis(&g, &junk, &opts()).unwrap().verdict,
            Verdict::RefutedNotSplines { columns: vec![0] }
        );
    }

    #[test]
    fn express_p2() {
        let g = p2();
        let b = p2_basis(&g);
        assert_eq!(
            express_in_basis(&g, &b, &col(&g, &[6, 42])).unwrap(),
            Expression::Coefficients(col(&g, &[3, 2]))
        );
        assert_eq!(
            express_in_basis(&g, &b, &col(&g, &[2, 6])).unwrap(),
            Expression::Coefficients(col(&g, &[1, 0]))
        );
        // (0, 6) is not a spline; its Cramer quotient 6/12 fails at index 1
        match express_in_basis(&g, &b, &col(&g, &[0, 6])).unwrap() {
            Expression::NotInSpan {
                witness,
                obstructions,
            } => {
                assert_eq!(witness, 1);
                assert_eq!(obstructions[0].numerator, g.ring().int(1));
                assert_eq!(obstructions[0].denominator, g.ring().int(2));
            }
            other => panic!("unexpected {other:?}"),
        }
        let dep = SplineMatrix::new(&g, vec![col(&g, &[2, 6]), col(&g, &[4, 12])]).unwrap();
        assert_eq!(
            express_in_basis(&g, &dep, &col(&g, &[2, 6])),
            Err(SplineError::ZeroDeterminant)
        );
    }

    #[test]
    fn span_decomposition_p2() {
        let g = p2();
        let b = p2_basis(&g);
        assert_eq!(
            qhat_span_decomposition(&g, &b, &col(&g, &[2, 6]), &opts()).unwrap(),
            col(&g, &[24, 0])
        );
        assert_eq!(
            qhat_span_decomposition(&g, &b, &col(&g, &[0, 0]), &opts()).unwrap(),
            col(&g, &[0, 0])
        );
        let scaled = SplineMatrix::new(&g, vec![col(&g, &[2, 6]), col(&g, &[0, 24])]).unwrap();
        assert!(matches!(
            qhat_span_decomposition(&g, &scaled, &col(&g, &[2, 6]), &opts()),
            Err(SplineError::HypothesisViolated { .. })
        ));
    }

    #[test]
    fn witness_matrices_small() {
        let g = ints(&[5], &[]);
        let w = coprime_witness_matrices(&g, &opts()).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].columns(), &[col(&g, &[5])]);

        let g = ints(&[2, 3], &[(0, 1, 5)]);
        let w = coprime_witness_matrices(&g, &opts()).unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w[2].columns(), &[col(&g, &[6, 6]), col(&g, &[0, 30])]);
        for m in &w {
            assert!(m
                .columns()
                .iter()
                .all(|c| is_spline(&g, c).unwrap().is_spline()));
        }
        assert_eq!(
            w[2].determinant()
                .to_bigint()
                .unwrap()
                .magnitude()
                .to_string(),
            "180"
        );

        let g = p2();
        assert_eq!(
            coprime_witness_matrices(&g, &opts()),
            Err(SplineError::NotPairwiseCoprime {
                first: 0,
                second: 2
            })
        );
    }
}
