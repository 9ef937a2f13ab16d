//! Flow-up bases over principal ideal domains.
//!
//! The spline module is the image of the kernel of the constraint matrix
//! `M_G` under `(a, b) ↦ (m_v a_v)_v`. Both the kernel and the triangular
//! basis come from column Hermite reduction, so this module needs a
//! Euclidean descriptor (integers or univariate polynomials over ℚ).

use thiserror::Error;

use crate::graph::{LabeledGraph, TrailOptions};
use crate::matrix::Matrix;
use crate::rings::{product, RingElement, RingError};
use crate::splines::{
    is_spline, qhat, qhat_components, FlowUpClass, Spline, SplineError, SplineMatrix,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PidError {
    #[error("{ring} is not a principal ideal domain handled here; flow-up bases need not exist (a tree over ZZ[x,y] can have no flow-up basis at all)")]
    NotPid { ring: String },
    #[error("spline lattice has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Spline(#[from] SplineError),
}

/// `M_G`: one row per edge, columns `a_1..a_n` then `b_1..b_k`. The row of
/// edge `{v_a, v_b}` with `a < b` reads `m_a a_a − m_b a_b − r_e b_e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintMatrix {
    matrix: Matrix,
    vertices: usize,
}

impl ConstraintMatrix {
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    /// The spline `(m_v a_v)_v` of a kernel vector.
    pub fn spline_of(&self, g: &LabeledGraph, x: &[RingElement]) -> Vec<RingElement> {
        g.vertices()
            .iter()
            .zip(x)
            .map(|(v, a)| &v.label * a)
            .collect()
    }
}

pub fn assemble_constraint_matrix(g: &LabeledGraph) -> ConstraintMatrix {
    let n = g.vertex_count();
    let k = g.edge_count();
    let mut m = Matrix::zeros(g.ring(), k, n + k);
    for (row, e) in g.edges().iter().enumerate() {
        let (a, b) = if e.u < e.v { (e.u, e.v) } else { (e.v, e.u) };
        m.set(row, a, g.vertex_label(a).clone());
        m.set(row, b, -g.vertex_label(b).clone());
        m.set(row, n + row, -e.label.clone());
    }
    ConstraintMatrix {
        matrix: m,
        vertices: n,
    }
}

/// Column echelon form `H = M·U` with `U` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hermite {
    pub h: Matrix,
    pub u: Matrix,
    /// `(row, column)` of each pivot, in order.
    pub pivots: Vec<(usize, usize)>,
}

impl Hermite {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn require_euclidean(m: &Matrix, op: &'static str) -> Result<(), RingError> {
    if m.ring().is_euclidean() {
        Ok(())
    } else {
        Err(RingError::NotEuclidean {
            op,
            ring: m.ring().to_string(),
        })
    }
}

/// Replace columns `p, c` of both matrices by `(s·p + t·c, −(b/g)·p + (a/g)·c)`,
/// a unimodular step that clears entry `(r, c)`.
fn eliminate(
    h: &mut Matrix,
    u: &mut Matrix,
    r: usize,
    p: usize,
    c: usize,
) -> Result<(), RingError> {
    let a = h.get(r, p).clone();
    let b = h.get(r, c).clone();
    let (g, s, t) = a.extended_gcd(&b)?;
    let bg = -b.exact_div(&g)?;
    let ag = a.exact_div(&g)?;
    for m in [h, u] {
        for i in 0..m.rows() {
            let x = m.get(i, p).clone();
            let y = m.get(i, c).clone();
            m.set(i, p, &(&s * &x) + &(&t * &y));
            m.set(i, c, &(&bg * &x) + &(&ag * &y));
        }
    }
    Ok(())
}

/// Column Hermite reduction. Rows are scanned top to bottom; each pivot is
/// normalized (positive over ℤ, monic over ℚ[x]) and the entries to its
/// left in the pivot row are reduced modulo it.
pub fn hermite_triangularize(m: &Matrix) -> Result<Hermite, RingError> {
    require_euclidean(m, "hermite_triangularize")?;
    let ring = m.ring();
    let mut h = m.clone();
    let mut u = Matrix::identity(ring, m.cols());
    let mut pivots = Vec::new();
    let mut p = 0;
    for r in 0..m.rows() {
        if p == m.cols() {
            break;
        }
        let Some(first) = (p..m.cols()).find(|&c| !h.get(r, c).is_zero()) else {
            continue;
        };
        h.swap_columns(p, first);
        u.swap_columns(p, first);
        for c in p + 1..m.cols() {
            if !h.get(r, c).is_zero() {
                eliminate(&mut h, &mut u, r, p, c)?;
            }
        }
        let unit = h.get(r, p).unit_part();
        if !unit.is_one() {
            let inv = ring.one().exact_div(&unit)?;
            h.scale_column(p, &inv);
            u.scale_column(p, &inv);
        }
        let pivot = h.get(r, p).clone();
        for c in 0..p {
            let (q, _) = h.get(r, c).div_rem(&pivot)?;
            if !q.is_zero() {
                let f = -q;
                h.add_column_multiple(c, p, &f);
                u.add_column_multiple(c, p, &f);
            }
        }
        pivots.push((r, p));
        p += 1;
    }
    Ok(Hermite { h, u, pivots })
}

/// A basis of `{x : Mx = 0}`: the columns of `U` beyond the rank.
pub fn kernel_basis(m: &Matrix) -> Result<Vec<Vec<RingElement>>, RingError> {
    let hnf = hermite_triangularize(m)?;
    Ok((hnf.rank()..m.cols()).map(|c| hnf.u.column(c)).collect())
}

/// `n` flow-up classes, class `i` leading at vertex index `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangularBasis {
    classes: Vec<FlowUpClass>,
}

impl TriangularBasis {
    pub fn classes(&self) -> &[FlowUpClass] {
        &self.classes
    }

    pub fn leading_terms(&self) -> Vec<RingElement> {
        self.classes
            .iter()
            .map(|c| c.leading_term().clone())
            .collect()
    }

    pub fn splines(&self) -> Vec<Spline> {
        self.classes.iter().map(|c| c.spline().clone()).collect()
    }

    pub fn to_spline_matrix(&self, g: &LabeledGraph) -> Result<SplineMatrix, SplineError> {
        SplineMatrix::from_splines(g, &self.splines())
    }
}

fn require_pid(g: &LabeledGraph) -> Result<(), PidError> {
    if g.ring().is_pid() {
        Ok(())
    } else {
        Err(PidError::NotPid {
            ring: g.ring().to_string(),
        })
    }
}

/// The flow-up basis obtained from the kernel lattice by a second Hermite
/// pass over the matrix with rows `v_1..v_n`.
pub fn flow_up_basis(g: &LabeledGraph) -> Result<TriangularBasis, PidError> {
    require_pid(g)?;
    let n = g.vertex_count();
    let cm = assemble_constraint_matrix(g);
    let kernel = kernel_basis(cm.matrix())?;
    let generators: Vec<Vec<RingElement>> =
        kernel.iter().map(|x| cm.spline_of(g, &x[..n])).collect();
    let lattice = Matrix::from_columns(g.ring(), n, &generators);
    let hnf = hermite_triangularize(&lattice)?;
    if hnf.rank() != n || hnf.pivots.iter().any(|&(r, c)| r != c) {
        return Err(PidError::RankDeficient {
            rank: hnf.rank(),
            expected: n,
        });
    }
    let classes = (0..n)
        .map(|i| {
            let spline = Spline::new(g, hnf.h.column(i))?;
            Ok(FlowUpClass::new(spline).expect("pivot column is nonzero"))
        })
        .collect::<Result<Vec<_>, SplineError>>()?;
    Ok(TriangularBasis { classes })
}

/// `[m_i, {(m_j, [{(P_ji)}]) : j > i}, {[{(P_si)}] : s < i}]` for every `i`:
/// the generators of the ideals of flow-up leading terms over a PID.
pub fn minimal_leading_entries(
    g: &LabeledGraph,
    opts: &TrailOptions,
) -> Result<Vec<RingElement>, SplineError> {
    qhat_components(g, opts)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowUpReport {
    /// Indices of columns failing the spline conditions.
    pub non_splines: Vec<usize>,
    pub triangular: bool,
    pub determinant: RingElement,
    pub leading_product: RingElement,
    pub qhat: RingElement,
    /// `|det|` and `∏ LT` are both associate to Q̂.
    pub determinant_matches: bool,
    pub expected_leading_terms: Vec<RingElement>,
    /// Per index: LT associate to the formula value.
    pub leading_term_matches: Vec<bool>,
}

impl FlowUpReport {
    pub fn passed(&self) -> bool {
        self.non_splines.is_empty()
            && self.triangular
            && self.determinant_matches
            && self.leading_term_matches.iter().all(|&b| b)
    }
}

/// Check a triangular basis against Q̂ and the minimal-leading-entry formula.
pub fn verify_flow_up(
    g: &LabeledGraph,
    tb: &TriangularBasis,
    opts: &TrailOptions,
) -> Result<FlowUpReport, SplineError> {
    let n = g.vertex_count();
    let mut non_splines = Vec::new();
    for (k, c) in tb.classes.iter().enumerate() {
        if !is_spline(g, c.spline().components())?.is_spline() {
            non_splines.push(k);
        }
    }
    let triangular =
        tb.classes.len() == n && tb.classes.iter().enumerate().all(|(i, c)| c.index() == i);
    let ms = tb.to_spline_matrix(g)?;
    let determinant = ms.determinant();
    let lts = tb.leading_terms();
    let leading_product = product(g.ring(), &lts);
    let q = qhat(g, opts)?;
    let determinant_matches = determinant.is_associate(&q) && leading_product.is_associate(&q);
    let expected = minimal_leading_entries(g, opts)?;
    let leading_term_matches = lts
        .iter()
        .zip(&expected)
        .map(|(a, b)| a.is_associate(b))
        .collect();
    Ok(FlowUpReport {
        non_splines,
        triangular,
        determinant,
        leading_product,
        qhat: q,
        determinant_matches,
        expected_leading_terms: expected,
        leading_term_matches,
    })
}

/// Replace the spline of class `k` by `factor` times itself; used to build
/// tampered bases.
pub fn scale_class(
    g: &LabeledGraph,
    tb: &TriangularBasis,
    k: usize,
    factor: &RingElement,
) -> Result<TriangularBasis, SplineError> {
    let mut classes = tb.classes.clone();
    let scaled: Vec<RingElement> = classes[k]
        .spline()
        .components()
        .iter()
        .map(|c| c * factor)
        .collect();
    classes[k] = FlowUpClass::new(Spline::new(g, scaled)?).ok_or(SplineError::ZeroDeterminant)?;
    Ok(TriangularBasis { classes })
}
