//! Witness matrices for the pairwise-coprime converse.
//!
//! Labels are numbered `l_1..l_{n+k}` (vertex labels, then edge labels) and
//! `l̂_i` is the product of all labels but `l_i`. For a vertex index the
//! witness is diagonal with Q̂ at that vertex; for an edge `{v_a, v_b}` it
//! has column `a` equal to `l̂(e_a + e_b)`, column `b` equal to `Q̂ e_b` and
//! `l̂ e_c` elsewhere. Every column is a spline and the determinant is
//! `±(l̂_i)^{n-1} Q̂`.

use crate::graph::{LabeledGraph, TrailOptions};
use crate::rings::{product, RingElement};

use super::{qhat, SplineError, SplineMatrix};

/// All labels, vertex labels first.
pub fn all_labels(g: &LabeledGraph) -> Vec<RingElement> {
    g.vertices()
        .iter()
        .map(|v| v.label.clone())
        .chain(g.edges().iter().map(|e| e.label.clone()))
        .collect()
}

/// `None` when every pair of labels is coprime, else the first offending
/// pair of label indices.
pub fn coprimality_violation(g: &LabeledGraph) -> Result<Option<(usize, usize)>, SplineError> {
    let labels = all_labels(g);
    for a in 0..labels.len() {
        for b in a + 1..labels.len() {
            if !labels[a].gcd(&labels[b])?.is_unit() {
                return Ok(Some((a, b)));
            }
        }
    }
    Ok(None)
}

pub fn labels_pairwise_coprime(g: &LabeledGraph) -> Result<bool, SplineError> {
    Ok(coprimality_violation(g)?.is_none())
}

/// `l̂_i` for every label index.
pub fn cofactor_products(g: &LabeledGraph) -> Vec<RingElement> {
    let labels = all_labels(g);
    (0..labels.len())
        .map(|i| {
            product(
                g.ring(),
                labels
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i)
                    .map(|(_, l)| l),
            )
        })
        .collect()
}

/// `A^(1), …, A^(n+k)`; requires pairwise coprime labels.
pub fn coprime_witness_matrices(
    g: &LabeledGraph,
    opts: &TrailOptions,
) -> Result<Vec<SplineMatrix>, SplineError> {
    if let Some((a, b)) = coprimality_violation(g)? {
        return Err(SplineError::NotPairwiseCoprime {
            first: a,
            second: b,
        });
    }
    let ring = g.ring();
    let n = g.vertex_count();
    let q = qhat(g, opts)?;
    let hats = cofactor_products(g);
    let unit_column = |k: usize, value: &RingElement| {
        let mut c = vec![ring.zero(); n];
        c[k] = value.clone();
        c
    };
    let mut out = Vec::with_capacity(hats.len());
    for (i, hat) in hats.iter().enumerate() {
        let columns: Vec<Vec<RingElement>> = if i < n {
            (0..n)
                .map(|k| unit_column(k, if k == i { &q } else { hat }))
                .collect()
        } else {
            let e = &g.edges()[i - n];
            (0..n)
                .map(|k| {
                    if k == e.u {
                        let mut c = unit_column(e.u, hat);
                        c[e.v] = hat.clone();
                        c
                    } else if k == e.v {
                        unit_column(e.v, &q)
                    } else {
                        unit_column(k, hat)
                    }
                })
                .collect()
        };
        out.push(SplineMatrix::new(g, columns)?);
    }
    Ok(out)
}
