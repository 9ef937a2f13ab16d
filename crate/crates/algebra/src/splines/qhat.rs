//! The key element Q̂_G and its factorization through the classical Q_G.

use crate::graph::{trail_constraint, LabeledGraph, TrailOptions, VertexId};
use crate::rings::{lcm_many, product, RingElement};

use super::SplineError;

/// Trail constraints `[{(P_ji)}]` for every ordered pair, computed once per
/// unordered pair (reversing a trail swaps its endpoints).
#[derive(Clone, Debug)]
pub struct TrailTable {
    table: Vec<Vec<Option<RingElement>>>,
}

impl TrailTable {
    #[allow(clippy::needless_range_loop)]
    pub fn new(g: &LabeledGraph, opts: &TrailOptions) -> Result<Self, SplineError> {
        let n = g.vertex_count();
        let mut table = vec![vec![None; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let c = trail_constraint(g, j, i, opts)?;
                table[i][j] = Some(c.clone());
                table[j][i] = Some(c);
            }
        }
        Ok(TrailTable { table })
    }

    /// `[{(P_ji)}]` for `j != i`.
    pub fn get(&self, j: VertexId, i: VertexId) -> &RingElement {
        self.table[j][i]
            .as_ref()
            .expect("trail constraint needs distinct vertices")
    }
}

/// The two lcm blocks of 𝒬^(i): `A_i = [m_i, {(m_j, [{(P_ji)}]) : j > i}]`
/// and `B_i = [{[{(P_si)}]} : s < i]`, so that 𝒬^(i) = [A_i, B_i].
fn blocks(
    g: &LabeledGraph,
    table: &TrailTable,
    i: VertexId,
) -> Result<(RingElement, RingElement), SplineError> {
    let ring = g.ring();
    let mut upper = vec![g.vertex_label(i).clone()];
    for j in i + 1..g.vertex_count() {
        upper.push(g.vertex_label(j).gcd(table.get(j, i))?);
    }
    let lower: Vec<RingElement> = (0..i).map(|s| table.get(s, i).clone()).collect();
    Ok((lcm_many(ring, &upper)?, lcm_many(ring, &lower)?))
}

fn component(
    g: &LabeledGraph,
    table: &TrailTable,
    i: VertexId,
) -> Result<RingElement, SplineError> {
    let (a, b) = blocks(g, table, i)?;
    Ok(a.lcm(&b)?)
}

/// 𝒬^(i) for a single vertex index `i` (0-based).
pub fn qhat_component(
    g: &LabeledGraph,
    i: VertexId,
    opts: &TrailOptions,
) -> Result<RingElement, SplineError> {
    let table = TrailTable::new(g, opts)?;
    component(g, &table, i)
}

/// 𝒬^(1), …, 𝒬^(n).
pub fn qhat_components(
    g: &LabeledGraph,
    opts: &TrailOptions,
) -> Result<Vec<RingElement>, SplineError> {
    let table = TrailTable::new(g, opts)?;
    (0..g.vertex_count())
        .map(|i| component(g, &table, i))
        .collect()
}

/// Q̂_G, the product of all components.
pub fn qhat(g: &LabeledGraph, opts: &TrailOptions) -> Result<RingElement, SplineError> {
    let comps = qhat_components(g, opts)?;
    Ok(product(g.ring(), &comps).normalized())
}

/// Q_G of the classical setting: Q̂ with every vertex label set to one.
pub fn classical_qg(g: &LabeledGraph, opts: &TrailOptions) -> Result<RingElement, SplineError> {
    let ones = vec![g.ring().one(); g.vertex_count()];
    qhat(&g.with_vertex_labels(ones)?, opts)
}

/// `H = ∏_i A_i / (A_i, B_i)`, so that `Q̂_G = H · Q_G` up to a unit.
pub fn h_factor(g: &LabeledGraph, opts: &TrailOptions) -> Result<RingElement, SplineError> {
    let table = TrailTable::new(g, opts)?;
    let mut h = g.ring().one();
    for i in 0..g.vertex_count() {
        let (a, b) = blocks(g, &table, i)?;
        let d = a.gcd(&b)?;
        h = &h * &a.exact_div(&d)?;
    }
    Ok(h.normalized())
}
