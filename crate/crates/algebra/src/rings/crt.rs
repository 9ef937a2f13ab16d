//! Chinese remainder theorem over Euclidean descriptors, with non-coprime
//! moduli allowed.

use thiserror::Error;

use super::{RingElement, RingError};

/// `x ≡ residue (mod modulus)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Congruence {
    pub residue: RingElement,
    pub modulus: RingElement,
}

impl Congruence {
    pub fn new(residue: RingElement, modulus: RingElement) -> Result<Self, CrtError> {
        if residue.ring() != modulus.ring() {
            return Err(residue.ring().mismatch(modulus.ring()).into());
        }
        if modulus.is_zero() {
            return Err(RingError::DivisionByZero.into());
        }
        Ok(Congruence { residue, modulus })
    }

    pub fn is_satisfied_by(&self, x: &RingElement) -> bool {
        self.modulus.divides(&(x - &self.residue))
    }
}

/// The unique solution modulo the lcm of all moduli.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrtSolution {
    pub solution: RingElement,
    pub modulus: RingElement,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CrtError {
    /// Congruences `first` and `second` (0-based) disagree modulo the gcd of
    /// their moduli.
    #[error("congruences {first} and {second} are incompatible")]
    Incompatible { first: usize, second: usize },
    #[error("empty congruence system")]
    Empty,
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Solve a congruence system. A solution exists iff every pair satisfies
/// `a_i ≡ a_j (mod gcd(b_i, b_j))`; otherwise the first violating pair is
/// reported.
pub fn crt(congruences: &[Congruence]) -> Result<CrtSolution, CrtError> {
    let first = congruences.first().ok_or(CrtError::Empty)?;
    let ring = first.residue.ring();
    for c in congruences {
        for e in [&c.residue, &c.modulus] {
            if e.ring() != ring {
                return Err(ring.mismatch(e.ring()).into());
            }
        }
        if c.modulus.is_zero() {
            return Err(RingError::DivisionByZero.into());
        }
    }
    if !ring.is_euclidean() {
        return Err(RingError::NotEuclidean {
            op: "crt",
            ring: ring.to_string(),
        }
        .into());
    }

    for (i, ci) in congruences.iter().enumerate() {
        for (j, cj) in congruences.iter().enumerate().skip(i + 1) {
            let g = ci.modulus.gcd(&cj.modulus)?;
            if !g.divides(&(&ci.residue - &cj.residue)) {
                return Err(CrtError::Incompatible {
                    first: i,
                    second: j,
                });
            }
        }
    }

    let mut modulus = first.modulus.normalized();
    let mut x = first.residue.rem_euclid(&modulus)?;
    for c in &congruences[1..] {
        let (g, s, _) = modulus.extended_gcd(&c.modulus)?;
        let diff = (&c.residue - &x).exact_div(&g)?;
        let step = c.modulus.exact_div(&g)?;
        let k = (&diff * &s).rem_euclid(&step)?;
        x = &x + &(&modulus * &k);
        modulus = modulus.lcm(&c.modulus)?;
        x = x.rem_euclid(&modulus)?;
    }
    Ok(CrtSolution {
        solution: x,
        modulus,
    })
}
