//! Recursive dense polynomials.
//!
//! An element of `B[x_0, ..., x_{k-1}]` is stored at *level* `k` as a
//! univariate polynomial in the last variable `x_{k-1}` whose coefficients
//! are elements at level `k - 1`. Level 0 is the base coefficient domain.
//! Coefficient vectors never carry trailing zeros, so the zero polynomial at
//! any level `k >= 1` is the empty vector and representations are canonical.

use std::cmp::Ordering;

use super::coeff::Coefficient;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) enum Rec<C> {
    Const(C),
    Univ(Vec<Rec<C>>),
}

/// A flattened term: exponent per variable (index 0 is the first variable)
/// and its base coefficient.
pub(crate) type Term<C> = (Vec<u32>, C);

impl<C: Coefficient> Rec<C> {
    pub fn zero(level: usize) -> Self {
        if level == 0 {
            Rec::Const(C::zero())
        } else {
            Rec::Univ(Vec::new())
        }
    }

    pub fn constant(level: usize, c: C) -> Self {
        if level == 0 {
            Rec::Const(c)
        } else if c.is_zero() {
            Rec::Univ(Vec::new())
        } else {
            Rec::Univ(vec![Rec::constant(level - 1, c)])
        }
    }

    pub fn one(level: usize) -> Self {
        Rec::constant(level, C::one())
    }

    /// The variable with index `idx` as an element at `level` (`idx < level`).
    pub fn variable(level: usize, idx: usize) -> Self {
        debug_assert!(idx < level);
        if idx + 1 == level {
            Rec::Univ(vec![Rec::zero(level - 1), Rec::one(level - 1)])
        } else {
            Rec::Univ(vec![Rec::variable(level - 1, idx)])
        }
    }

    /// Lift an element of level `level - 1` to a constant in the top variable.
    pub fn lift(c: Rec<C>) -> Self {
        if c.is_zero() {
            Rec::Univ(Vec::new())
        } else {
            Rec::Univ(vec![c])
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Rec::Const(c) => c.is_zero(),
            Rec::Univ(v) => v.is_empty(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Rec::Const(c) => c.is_one(),
            Rec::Univ(v) => v.len() == 1 && v[0].is_one(),
        }
    }

    fn coeffs(&self) -> &[Rec<C>] {
        match self {
            Rec::Univ(v) => v,
            Rec::Const(_) => panic!("coefficient access on a base element"),
        }
    }

    /// Degree in the top variable; `None` for zero. Base elements have degree 0.
    pub fn degree(&self) -> Option<usize> {
        match self {
            Rec::Const(c) => (!c.is_zero()).then_some(0),
            Rec::Univ(v) => v.len().checked_sub(1),
        }
    }

    fn trimmed(mut v: Vec<Rec<C>>) -> Self {
        while v.last().is_some_and(Rec::is_zero) {
            v.pop();
        }
        Rec::Univ(v)
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (Rec::Const(a), Rec::Const(b)) => Rec::Const(a.add(b)),
            (Rec::Univ(a), Rec::Univ(b)) => {
                let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
                let mut out = long.clone();
                for (slot, s) in out.iter_mut().zip(short) {
                    *slot = slot.add(s);
                }
                Rec::trimmed(out)
            }
            _ => panic!("level mismatch in polynomial addition"),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Rec::Const(c) => Rec::Const(c.neg()),
            Rec::Univ(v) => Rec::Univ(v.iter().map(Rec::neg).collect()),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (Rec::Const(a), Rec::Const(b)) => Rec::Const(a.mul(b)),
            (Rec::Univ(a), Rec::Univ(b)) => {
                if a.is_empty() || b.is_empty() {
                    return Rec::Univ(Vec::new());
                }
                let mut out: Vec<Option<Rec<C>>> = vec![None; a.len() + b.len() - 1];
                for (i, ai) in a.iter().enumerate() {
                    if ai.is_zero() {
                        continue;
                    }
                    for (j, bj) in b.iter().enumerate() {
                        if bj.is_zero() {
                            continue;
                        }
                        let p = ai.mul(bj);
                        out[i + j] = Some(match out[i + j].take() {
                            Some(acc) => acc.add(&p),
                            None => p,
                        });
                    }
                }
                // Leading and constant slots are always filled (nonzero top and
                // bottom-most nonzero coefficients); interior gaps become zero.
                let zero = a[a.len() - 1].zero_like();
                Rec::trimmed(
                    out.into_iter()
                        .map(|c| c.unwrap_or_else(|| zero.clone()))
                        .collect(),
                )
            }
            _ => panic!("level mismatch in polynomial multiplication"),
        }
    }

    /// Zero with the same level as `self` (requires `self` nonzero when it is
    /// a `Univ`, which holds for every leading coefficient).
    fn zero_like(&self) -> Self {
        match self {
            Rec::Const(_) => Rec::Const(C::zero()),
            Rec::Univ(_) => Rec::Univ(Vec::new()),
        }
    }

    pub fn pow(&self, level: usize, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Rec::one(level);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiply by `x_top^shift`.
    fn shift(&self, level: usize, shift: usize) -> Self {
        match self {
            Rec::Univ(v) if !v.is_empty() => {
                let mut out = vec![Rec::zero(level - 1); shift];
                out.extend(v.iter().cloned());
                Rec::Univ(out)
            }
            _ => self.clone(),
        }
    }

    /// Apply `f` to every base coefficient. `f` must map zero to zero.
    pub fn map_base(&self, f: &impl Fn(&C) -> C) -> Self {
        match self {
            Rec::Const(c) => Rec::Const(f(c)),
            Rec::Univ(v) => Rec::trimmed(v.iter().map(|c| c.map_base(f)).collect()),
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self, level: usize) -> Option<Self> {
        match (self, d) {
            (Rec::Const(a), Rec::Const(b)) => a.exact_div(b).map(Rec::Const),
            (Rec::Univ(a), Rec::Univ(b)) => {
                if b.is_empty() {
                    return None;
                }
                if a.is_empty() {
                    return Some(Rec::zero(level));
                }
                if a.len() < b.len() {
                    return None;
                }
                let db = b.len() - 1;
                let lcd = &b[db];
                let mut rem = a.clone();
                let mut q = vec![Rec::zero(level - 1); a.len() - db];
                for k in (db..rem.len()).rev() {
                    if rem[k].is_zero() {
                        continue;
                    }
                    let t = rem[k].exact_div(lcd, level - 1)?;
                    for (idx, bc) in b.iter().enumerate() {
                        if bc.is_zero() {
                            continue;
                        }
                        let pos = k - db + idx;
                        rem[pos] = rem[pos].sub(&t.mul(bc));
                    }
                    q[k - db] = t;
                }
                if rem[..db].iter().any(|c| !c.is_zero()) {
                    return None;
                }
                Some(Rec::trimmed(q))
            }
            _ => panic!("level mismatch in exact division"),
        }
    }

    /// Pseudo-remainder of `a` by nonzero `b` in the top variable.
    fn pseudo_rem(&self, b: &Self, level: usize) -> Self {
        let bdeg = b.degree().expect("pseudo-remainder by zero");
        let lcb = &b.coeffs()[bdeg];
        let mut r = self.clone();
        while let Some(rdeg) = r.degree() {
            if rdeg < bdeg {
                break;
            }
            let lcr = r.coeffs()[rdeg].clone();
            let lhs = r.mul(&Rec::lift(lcb.clone()));
            let rhs = b.mul(&Rec::lift(lcr)).shift(level, rdeg - bdeg);
            r = lhs.sub(&rhs);
        }
        r
    }

    /// Content with respect to the top variable: normalized gcd of the
    /// coefficients, an element of level `level - 1`.
    pub fn content(&self, level: usize) -> Self {
        debug_assert!(level >= 1);
        let mut g = Rec::zero(level - 1);
        for c in self.coeffs() {
            g = g.gcd(c, level - 1);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// `self / content`, or zero for zero.
    pub fn primitive_part(&self, level: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content(level);
        Rec::trimmed(
            self.coeffs()
                .iter()
                .map(|x| {
                    x.exact_div(&c, level - 1)
                        .expect("content divides every coefficient")
                })
                .collect(),
        )
    }

    /// Normalized gcd: recursive content reduction plus a primitive
    /// pseudo-remainder sequence in the top variable.
    pub fn gcd(&self, other: &Self, level: usize) -> Self {
        if level == 0 {
            return match (self, other) {
                (Rec::Const(a), Rec::Const(b)) => Rec::Const(a.gcd(b)),
                _ => panic!("level mismatch in gcd"),
            };
        }
        if self.is_zero() {
            return other.normalize(level);
        }
        if other.is_zero() {
            return self.normalize(level);
        }
        let c = self.content(level).gcd(&other.content(level), level - 1);
        let mut a = self.primitive_part(level).normalize(level);
        let mut b = other.primitive_part(level).normalize(level);
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b, level);
            a = b;
            b = if r.is_zero() {
                r
            } else {
                r.primitive_part(level).normalize(level)
            };
        }
        Rec::lift(c).mul(&a).normalize(level)
    }

    /// All nonzero terms, unordered.
    pub fn terms(&self, level: usize) -> Vec<Term<C>> {
        let mut out = Vec::new();
        let mut exps = vec![0u32; level];
        self.collect_terms(level, &mut exps, &mut out);
        out
    }

    fn collect_terms(&self, level: usize, exps: &mut Vec<u32>, out: &mut Vec<Term<C>>) {
        match self {
            Rec::Const(c) => {
                if !c.is_zero() {
                    out.push((exps.clone(), c.clone()));
                }
            }
            Rec::Univ(v) => {
                for (e, c) in v.iter().enumerate() {
                    exps[level - 1] = e as u32;
                    c.collect_terms(level - 1, exps, out);
                }
                exps[level - 1] = 0;
            }
        }
    }

    /// Coefficient of the leading term under graded-lexicographic order.
    pub fn glex_leading_coeff(&self, level: usize) -> Option<C> {
        self.terms(level)
            .into_iter()
            .max_by(|a, b| glex_cmp(&a.0, &b.0))
            .map(|(_, c)| c)
    }

    /// Divide by the unit making the graded-lex leading coefficient normal
    /// (positive over the integers, one over the rationals).
    pub fn normalize(&self, level: usize) -> Self {
        match self.glex_leading_coeff(level) {
            None => self.clone(),
            Some(lc) => {
                let u = lc.unit_part();
                if u.is_one() {
                    self.clone()
                } else {
                    self.map_base(&|c| c.exact_div(&u).expect("division by a unit"))
                }
            }
        }
    }

    /// Quotient and remainder in the top variable when the leading
    /// coefficient of `d` is invertible (univariate over a field).
    pub fn div_rem_monic_lc(&self, d: &Self, level: usize) -> (Self, Self) {
        let db = d.degree().expect("division by zero");
        let lcd = d.coeffs()[db].clone();
        let mut r = self.clone();
        let mut q = Rec::zero(level);
        while let Some(rd) = r.degree() {
            if rd < db {
                break;
            }
            let t = r.coeffs()[rd]
                .exact_div(&lcd, level - 1)
                .expect("leading coefficient must be invertible");
            let mono = Rec::lift(t).shift(level, rd - db);
            r = r.sub(&mono.mul(d));
            q = q.add(&mono);
        }
        (q, r)
    }
}

/// Graded-lexicographic comparison of exponent vectors: total degree first,
/// then the exponent of the first variable, the second, and so on.
pub(crate) fn glex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}
