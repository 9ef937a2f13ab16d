//! Brute-force cross-checks for integer instances and a seeded instance
//! generator.
//!
//! The searches here share no code with the trail formula or the Hermite
//! reduction. Minimal leading entries are found by exhaustive residue
//! search one prime at a time, and the witness spline is glued together
//! with the Chinese remainder theorem.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{GraphError, LabeledGraph, VertexId};
use crate::rings::{crt, Congruence, CrtError, Ring, RingDescriptor, RingElement};
use crate::splines::{Spline, SplineError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("the oracle works over the integers only, not {ring}")]
    NotIntegers { ring: String },
    #[error("label {label} is too large for exhaustive search")]
    LabelTooLarge { label: String },
    #[error("no flow-up class found with leading entry at most {bound}")]
    NotFoundWithin { bound: u64 },
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(VertexId),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spline(#[from] SplineError),
    #[error(transparent)]
    Crt(#[from] CrtError),
}

/// Largest label the exhaustive searches accept.
pub const MAX_LABEL: u64 = 1 << 20;

/// Absolute values of the labels as machine integers.
struct IntLabels {
    m: Vec<u64>,
    edges: Vec<(usize, usize, u64)>,
}

fn small(x: &RingElement) -> Result<u64, OracleError> {
    x.to_bigint()
        .and_then(|n| n.abs().to_u64())
        .filter(|&n| n <= MAX_LABEL)
        .ok_or_else(|| OracleError::LabelTooLarge {
            label: x.to_string(),
        })
}

fn int_labels(g: &LabeledGraph) -> Result<IntLabels, OracleError> {
    if g.ring().descriptor() != &RingDescriptor::Integers {
        return Err(OracleError::NotIntegers {
            ring: g.ring().to_string(),
        });
    }
    let m = g
        .vertices()
        .iter()
        .map(|v| small(&v.label))
        .collect::<Result<_, _>>()?;
    let edges = g
        .edges()
        .iter()
        .map(|e| Ok((e.u, e.v, small(&e.label)?)))
        .collect::<Result<_, OracleError>>()?;
    Ok(IntLabels { m, edges })
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Largest power of `p` dividing `n` (`n > 0`).
fn p_part(mut n: u64, p: u64) -> u64 {
    let mut q = 1;
    while n.is_multiple_of(p) {
        n /= p;
        q *= p;
    }
    q
}

/// The spline conditions localized at one prime: every quantity is replaced
/// by its `p`-part, and vertex `v` only matters modulo `modulus[v]`.
struct Local {
    modulus: Vec<u64>,
    vertex: Vec<u64>,
    edges: Vec<(usize, usize, u64)>,
    adjacency: Vec<Vec<(usize, u64)>>,
}

impl Local {
    fn new(labels: &IntLabels, p: u64) -> Self {
        let n = labels.m.len();
        let vertex: Vec<u64> = labels.m.iter().map(|&m| p_part(m, p)).collect();
        let mut modulus = vertex.clone();
        let mut edges = Vec::new();
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v, r) in &labels.edges {
            let s = p_part(r, p);
            if s == 1 {
                continue;
            }
            modulus[u] = modulus[u].max(s);
            modulus[v] = modulus[v].max(s);
            edges.push((u, v, s));
            adjacency[u].push((v, s));
            adjacency[v].push((u, s));
        }
        Local {
            modulus,
            vertex,
            edges,
            adjacency,
        }
    }

    /// Residues for every vertex satisfying the local conditions with the
    /// given vertices pinned, or `None` when there are none.
    fn solve(&self, pinned: &[(usize, u64)]) -> Option<Vec<u64>> {
        let n = self.modulus.len();
        let mut value: Vec<Option<u64>> = vec![None; n];
        for &(v, x) in pinned {
            let x = x % self.modulus[v];
            if !x.is_multiple_of(self.vertex[v]) {
                return None;
            }
            value[v] = Some(x);
        }
        for &(u, v, s) in &self.edges {
            if let (Some(a), Some(b)) = (value[u], value[v]) {
                if a % s != b % s {
                    return None;
                }
            }
        }
        // breadth-first from the pinned vertices so each choice is constrained
        let mut order = Vec::new();
        let mut seen: Vec<bool> = value.iter().map(Option::is_some).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| seen[v]).collect();
        loop {
            while let Some(v) = queue.pop_front() {
                for &(w, _) in &self.adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        order.push(w);
                        queue.push_back(w);
                    }
                }
            }
            match (0..n).find(|&v| !seen[v]) {
                Some(v) => {
                    seen[v] = true;
                    order.push(v);
                    queue.push_back(v);
                }
                None => break,
            }
        }
        if self.assign(&order, &mut value) {
            Some(value.into_iter().map(|x| x.unwrap_or(0)).collect())
        } else {
            None
        }
    }

    fn assign(&self, order: &[usize], value: &mut [Option<u64>]) -> bool {
        let Some((&v, rest)) = order.split_first() else {
            return true;
        };
        let step = self.vertex[v];
        let mut x = 0;
        while x < self.modulus[v] {
            let fits = self.adjacency[v]
                .iter()
                .all(|&(w, s)| value[w].is_none_or(|y| x % s == y % s));
            if fits {
                value[v] = Some(x);
                if self.assign(rest, value) {
                    return true;
                }
            }
            x += step;
        }
        value[v] = None;
        false
    }
}

/// The smallest positive leading entry together with a flow-up class
/// realizing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingEntry {
    pub value: u64,
    pub witness: Spline,
}

/// Smallest `t` in `1..=bound` such that some spline vanishes on `v_1..v_{i-1}`
/// (0-based `i`) and equals `t` at `v_i`.
///
/// The congruence system is solvable over ℤ iff it is solvable modulo every
/// prime power dividing the lcm of the labels. For each prime every residue
/// of `t` modulo the local modulus `p^K` of `v_i` is tried; the admissible
/// residues form a subgroup `p^a ℤ / p^K ℤ` (checked, not assumed), so the
/// admissible `t` are exactly the multiples of `∏ p^a`. The witness is glued
/// from local solutions by the Chinese remainder theorem and re-checked.
pub fn brute_minimal_leading_entry(
    g: &LabeledGraph,
    i: VertexId,
    bound: u64,
) -> Result<LeadingEntry, OracleError> {
    let labels = int_labels(g)?;
    if i >= labels.m.len() {
        return Err(OracleError::VertexOutOfRange(i));
    }
    let mut primes: Vec<u64> = labels
        .m
        .iter()
        .chain(labels.edges.iter().map(|e| &e.2))
        .flat_map(|&x| prime_factors(x))
        .collect();
    primes.sort_unstable();
    primes.dedup();
    let locals: Vec<Local> = primes.iter().map(|&p| Local::new(&labels, p)).collect();
    let pinned = |t: u64| -> Vec<(usize, u64)> { (0..i).map(|s| (s, 0)).chain([(i, t)]).collect() };
    let mut t: u64 = 1;
    for local in &locals {
        let q = local.modulus[i];
        let admissible: Vec<u64> = (1..=q)
            .filter(|&r| local.solve(&pinned(r)).is_some())
            .collect();
        let generator = admissible[0];
        assert!(
            q % generator == 0,
            "local leading entries must form a subgroup"
        );
        assert_eq!(
            admissible.len() as u64,
            q / generator,
            "local leading entries must form a subgroup"
        );
        assert!(
            admissible.iter().all(|r| r % generator == 0),
            "local leading entries must form a subgroup"
        );
        t = t
            .checked_mul(generator)
            .filter(|&t| t <= bound)
            .ok_or(OracleError::NotFoundWithin { bound })?;
    }
    if t > bound {
        return Err(OracleError::NotFoundWithin { bound });
    }
    let pins = pinned(t);
    let residues: Vec<Vec<u64>> = locals
        .iter()
        .map(|l| l.solve(&pins).expect("admissible residue"))
        .collect();
    let witness = glue(g, &locals, &residues, &pins)?;
    Ok(LeadingEntry { value: t, witness })
}

/// Combine local residues into a global spline with the pinned values exact.
fn glue(
    g: &LabeledGraph,
    locals: &[Local],
    residues: &[Vec<u64>],
    pinned: &[(usize, u64)],
) -> Result<Spline, OracleError> {
    let z = g.ring();
    let n = g.vertex_count();
    let mut comps = Vec::with_capacity(n);
    for v in 0..n {
        if let Some(&(_, x)) = pinned.iter().find(|&&(w, _)| w == v) {
            comps.push(z.from_bigint(BigInt::from(x)));
            continue;
        }
        let congruences = locals
            .iter()
            .zip(residues)
            .map(|(l, r)| {
                Congruence::new(
                    z.from_bigint(BigInt::from(r[v])),
                    z.from_bigint(BigInt::from(l.modulus[v])),
                )
            })
            .collect::<Result<Vec<_>, _>>()?;
        comps.push(if congruences.is_empty() {
            z.zero()
        } else {
            crt(&congruences)?.solution
        });
    }
    Ok(Spline::new(g, comps)?)
}

/// Every spline with all `|f_v| <= bound`, in lexicographic order of the
/// components `v_1..v_n` read as integers.
pub fn enumerate_small_splines(g: &LabeledGraph, bound: u64) -> Result<Vec<Spline>, OracleError> {
    let labels = int_labels(g)?;
    let n = labels.m.len();
    let mut earlier: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n];
    for &(u, v, r) in &labels.edges {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        earlier[b].push((a, r));
    }
    let bound = bound as i64;
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    enumerate(&labels.m, &earlier, bound, &mut current, &mut out);
    let z = g.ring();
    out.into_iter()
        .map(|f| {
            Spline::new(g, f.into_iter().map(|x| z.int(x)).collect()).map_err(OracleError::from)
        })
        .collect()
}

fn enumerate(
    m: &[u64],
    earlier: &[Vec<(usize, u64)>],
    bound: i64,
    current: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    let v = current.len();
    if v == m.len() {
        out.push(current.clone());
        return;
    }
    let step = m[v] as i64;
    let mut x = -(bound / step) * step;
    while x <= bound {
        if earlier[v]
            .iter()
            .all(|&(u, r)| (x - current[u]).rem_euclid(r as i64) == 0)
        {
            current.push(x);
            enumerate(m, earlier, bound, current, out);
            current.pop();
        }
        x += step;
    }
}

/// Parameters of a random integer instance.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceSpec {
    pub seed: u64,
    /// Vertex count, 1 to 6.
    pub vertices: usize,
    /// Probability of each extra edge on top of a random spanning tree; an
    /// extra edge parallel to a tree edge is allowed.
    pub edge_density: f64,
    /// Labels are drawn from `1..=label_bound`.
    pub label_bound: u64,
    /// Draw labels as distinct primes up to the bound (then 1 once the
    /// primes run out), making all labels pairwise coprime.
    pub coprime: bool,
}

impl InstanceSpec {
    pub fn new(seed: u64, vertices: usize, label_bound: u64) -> Self {
        InstanceSpec {
            seed,
            vertices,
            edge_density: 0.3,
            label_bound,
            coprime: false,
        }
    }

    pub fn coprime(mut self) -> Self {
        self.coprime = true;
        self
    }

    pub fn with_density(mut self, density: f64) -> Self {
        self.edge_density = density;
        self
    }
}

fn primes_up_to(b: u64) -> Vec<u64> {
    (2..=b)
        .filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0))
        .collect()
}

/// A connected integer instance determined by `spec` alone (ChaCha8 seeded
/// from `spec.seed`).
pub fn random_instance(spec: &InstanceSpec) -> LabeledGraph {
    assert!(
        (1..=6).contains(&spec.vertices),
        "vertex count must be between 1 and 6"
    );
    assert!(spec.label_bound >= 1, "label bound must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.vertices;
    let mut endpoints = Vec::new();
    for v in 1..n {
        endpoints.push((rng.gen_range(0..v), v));
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(spec.edge_density.clamp(0.0, 1.0)) {
                endpoints.push(if rng.gen_bool(0.5) { (a, b) } else { (b, a) });
            }
        }
    }
    let count = n + endpoints.len();
    let labels: Vec<u64> = if spec.coprime {
        let mut primes = primes_up_to(spec.label_bound);
        primes.shuffle(&mut rng);
        (0..count)
            .map(|k| primes.get(k).copied().unwrap_or(1))
            .collect()
    } else {
        (0..count)
            .map(|_| rng.gen_range(1..=spec.label_bound))
            .collect()
    };
    let z = Ring::integers();
    let int = |x: u64| z.from_bigint(BigInt::from(x));
    LabeledGraph::from_labels(
        z.clone(),
        labels[..n].iter().map(|&x| int(x)).collect(),
        endpoints
            .iter()
            .zip(&labels[n..])
            .map(|(&(u, v), &r)| (u, v, int(r)))
            .collect(),
    )
    .expect("generated instances are valid")
}

/// `count` random integer combinations of `generators` with coefficients in
/// `-coeff_bound..=coeff_bound`.
pub fn random_combinations(
    g: &LabeledGraph,
    generators: &[Spline],
    count: usize,
    coeff_bound: i64,
    rng: &mut impl Rng,
) -> Result<Vec<Spline>, OracleError> {
    if g.ring().descriptor() != &RingDescriptor::Integers {
        return Err(OracleError::NotIntegers {
            ring: g.ring().to_string(),
        });
    }
    let z = g.ring();
    (0..count)
        .map(|_| {
            let mut comps = vec![z.zero(); g.vertex_count()];
            for s in generators {
                let c = z.int(rng.gen_range(-coeff_bound..=coeff_bound));
                for (o, x) in comps.iter_mut().zip(s.components()) {
                    *o = &*o + &(&c * x);
                }
            }
            Ok(Spline::new(g, comps)?)
        })
        .collect()
}
