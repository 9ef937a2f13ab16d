//! Exact arithmetic over the supported GCD domains.
//!
//! Four kinds of ring are available: the integers, and polynomial rings in
//! named variables over either the integers or the rationals. The integers
//! and univariate polynomials over the rationals are Euclidean (and so PIDs);
//! the remaining descriptors are GCD domains only.
//!
//! Every gcd and lcm is returned in a fixed normal form (nonnegative
//! integers, primitive polynomials with positive graded-lex leading
//! coefficient over the integers, monic polynomials over the rationals), so
//! theorem checks reduce to [`RingElement::associate`].

mod coeff;
mod crt;
mod format;
mod parse;
mod poly;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use poly::Rec;

pub use crt::{crt, Congruence, CrtError, CrtSolution};
pub use parse::{ParseError, ParseErrorKind};

/// Coefficient domain of a polynomial ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseRing {
    Integers,
    Rationals,
}

/// Which ring elements live in. Two elements interact only when their
/// descriptors are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingDescriptor {
    Integers,
    Polynomial {
        variables: Vec<String>,
        base: BaseRing,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("ring mismatch: {left} vs {right}")]
    DescriptorMismatch { left: String, right: String },
    #[error("{dividend} is not divisible by {divisor}")]
    NotDivisible { dividend: String, divisor: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid ring descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("{op} requires a Euclidean ring (integers or univariate polynomials over the rationals), got {ring}")]
    NotEuclidean { op: &'static str, ring: String },
    #[error("{op} requires a polynomial ring, got {ring}")]
    NotPolynomial { op: &'static str, ring: String },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T, E = RingError> = std::result::Result<T, E>;

/// Shared handle to a validated [`RingDescriptor`].
#[derive(Clone, Debug)]
pub struct Ring(Arc<RingDescriptor>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Ring {}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Ring {
    pub fn integers() -> Self {
        Ring(Arc::new(RingDescriptor::Integers))
    }

    /// A polynomial ring; variable names must be distinct identifiers.
    pub fn polynomial<S: AsRef<str>>(variables: &[S], base: BaseRing) -> Result<Self> {
        Self::new(RingDescriptor::Polynomial {
            variables: variables.iter().map(|v| v.as_ref().to_string()).collect(),
            base,
        })
    }

    pub fn new(descriptor: RingDescriptor) -> Result<Self> {
        if let RingDescriptor::Polynomial { variables, .. } = &descriptor {
            if variables.is_empty() {
                return Err(RingError::InvalidDescriptor(
                    "polynomial ring needs at least one variable".into(),
                ));
            }
            for (i, v) in variables.iter().enumerate() {
                if !is_identifier(v) {
                    return Err(RingError::InvalidDescriptor(format!(
                        "`{v}` is not a valid variable name"
                    )));
                }
                if variables[..i].contains(v) {
                    return Err(RingError::InvalidDescriptor(format!(
                        "variable `{v}` listed twice"
                    )));
                }
            }
        }
        Ok(Ring(Arc::new(descriptor)))
    }

    pub fn descriptor(&self) -> &RingDescriptor {
        &self.0
    }

    pub fn variables(&self) -> &[String] {
        match &*self.0 {
            RingDescriptor::Integers => &[],
            RingDescriptor::Polynomial { variables, .. } => variables,
        }
    }

    pub fn base(&self) -> BaseRing {
        match &*self.0 {
            RingDescriptor::Integers => BaseRing::Integers,
            RingDescriptor::Polynomial { base, .. } => *base,
        }
    }

    /// Number of polynomial variables (0 for the integers).
    pub(crate) fn level(&self) -> usize {
        self.variables().len()
    }

    /// Integers and univariate polynomials over the rationals.
    pub fn is_euclidean(&self) -> bool {
        match &*self.0 {
            RingDescriptor::Integers => true,
            RingDescriptor::Polynomial { variables, base } => {
                variables.len() == 1 && *base == BaseRing::Rationals
            }
        }
    }

    /// Every shipped Euclidean descriptor is a PID and no other one is.
    pub fn is_pid(&self) -> bool {
        self.is_euclidean()
    }

    fn wrap(&self, value: Value) -> RingElement {
        RingElement {
            ring: self.clone(),
            value,
        }
    }

    fn int_value(&self, n: BigInt) -> Value {
        let level = self.level();
        match self.base() {
            BaseRing::Integers => Value::Z(Rec::constant(level, n)),
            BaseRing::Rationals => Value::Q(Rec::constant(level, BigRational::from_integer(n))),
        }
    }

    pub fn zero(&self) -> RingElement {
        self.from_bigint(BigInt::zero())
    }

    pub fn one(&self) -> RingElement {
        self.from_bigint(BigInt::one())
    }

    pub fn int(&self, n: i64) -> RingElement {
        self.from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(&self, n: BigInt) -> RingElement {
        self.wrap(self.int_value(n))
    }

    /// A rational constant; fails in integer-based rings unless it is integral.
    pub fn from_rational(&self, q: BigRational) -> Result<RingElement> {
        match self.base() {
            BaseRing::Rationals => Ok(self.wrap(Value::Q(Rec::constant(self.level(), q)))),
            BaseRing::Integers if q.is_integer() => Ok(self.from_bigint(q.to_integer())),
            BaseRing::Integers => Err(RingError::NotDivisible {
                dividend: q.numer().to_string(),
                divisor: q.denom().to_string(),
            }),
        }
    }

    pub fn variable(&self, name: &str) -> Option<RingElement> {
        let idx = self.variables().iter().position(|v| v == name)?;
        let level = self.level();
        Some(self.wrap(match self.base() {
            BaseRing::Integers => Value::Z(Rec::variable(level, idx)),
            BaseRing::Rationals => Value::Q(Rec::variable(level, idx)),
        }))
    }

    /// Parse an expression in this ring (see the grammar in [`parse`](self::parse_element)).
    pub fn parse(&self, text: &str) -> Result<RingElement, ParseError> {
        parse::parse(self, text)
    }

    pub fn mismatch(&self, other: &Ring) -> RingError {
        RingError::DescriptorMismatch {
            left: self.to_string(),
            right: other.to_string(),
        }
    }
}

/// Free-function form of [`Ring::parse`].
pub fn parse_element(text: &str, ring: &Ring) -> Result<RingElement, ParseError> {
    ring.parse(text)
}

/// Free-function form of the [`fmt::Display`] impl of [`RingElement`].
pub fn format_element(a: &RingElement) -> String {
    a.to_string()
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            RingDescriptor::Integers => write!(f, "ZZ"),
            RingDescriptor::Polynomial { variables, base } => {
                let b = match base {
                    BaseRing::Integers => "ZZ",
                    BaseRing::Rationals => "QQ",
                };
                write!(f, "{b}[{}]", variables.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Value {
    Z(Rec<BigInt>),
    Q(Rec<BigRational>),
}

/// An exact element of one of the supported rings, always in canonical form.
#[derive(Clone, Debug)]
pub struct RingElement {
    ring: Ring,
    value: Value,
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.value == other.value
    }
}

impl Eq for RingElement {}

impl std::hash::Hash for RingElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.value.hash(state);
    }
}

macro_rules! unary {
    ($self:expr, |$v:ident| $body:expr) => {
        match &$self.value {
            Value::Z($v) => Value::Z($body),
            Value::Q($v) => Value::Q($body),
        }
    };
}

macro_rules! binary {
    ($a:expr, $b:expr, |$x:ident, $y:ident| $body:expr) => {
        match (&$a.value, &$b.value) {
            (Value::Z($x), Value::Z($y)) => Value::Z($body),
            (Value::Q($x), Value::Q($y)) => Value::Q($body),
            _ => unreachable!("descriptor check precedes value dispatch"),
        }
    };
}

macro_rules! binary_opt {
    ($a:expr, $b:expr, |$x:ident, $y:ident| $body:expr) => {
        match (&$a.value, &$b.value) {
            (Value::Z($x), Value::Z($y)) => $body.map(Value::Z),
            (Value::Q($x), Value::Q($y)) => $body.map(Value::Q),
            _ => unreachable!("descriptor check precedes value dispatch"),
        }
    };
}

impl RingElement {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    fn level(&self) -> usize {
        self.ring.level()
    }

    fn with(&self, value: Value) -> RingElement {
        RingElement {
            ring: self.ring.clone(),
            value,
        }
    }

    fn check(&self, other: &RingElement) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(self.ring.mismatch(&other.ring))
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Z(v) => v.is_zero(),
            Value::Q(v) => v.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.value {
            Value::Z(v) => v.is_one(),
            Value::Q(v) => v.is_one(),
        }
    }

    pub fn checked_add(&self, other: &RingElement) -> Result<RingElement> {
        self.check(other)?;
        Ok(self.with(binary!(self, other, |x, y| x.add(y))))
    }

    pub fn checked_sub(&self, other: &RingElement) -> Result<RingElement> {
        self.check(other)?;
        Ok(self.with(binary!(self, other, |x, y| x.sub(y))))
    }

    pub fn checked_mul(&self, other: &RingElement) -> Result<RingElement> {
        self.check(other)?;
        Ok(self.with(binary!(self, other, |x, y| x.mul(y))))
    }

    pub fn pow(&self, k: u32) -> RingElement {
        let level = self.level();
        self.with(unary!(self, |v| v.pow(level, k)))
    }

    /// `q` with `self = q * divisor`.
    pub fn exact_div(&self, divisor: &RingElement) -> Result<RingElement> {
        self.check(divisor)?;
        if divisor.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        let level = self.level();
        binary_opt!(self, divisor, |x, y| x.exact_div(y, level))
            .map(|v| self.with(v))
            .ok_or_else(|| RingError::NotDivisible {
                dividend: self.to_string(),
                divisor: divisor.to_string(),
            })
    }

    /// Whether `self` divides `other` (zero divides only zero).
    pub fn divides(&self, other: &RingElement) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.exact_div(self).is_ok()
    }

    pub fn gcd(&self, other: &RingElement) -> Result<RingElement> {
        self.check(other)?;
        let level = self.level();
        Ok(self.with(binary!(self, other, |x, y| x.gcd(y, level))))
    }

    pub fn lcm(&self, other: &RingElement) -> Result<RingElement> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(self.ring.zero());
        }
        let g = self.gcd(other)?;
        let prod = self * other;
        Ok(prod.exact_div(&g)?.normalized())
    }

    /// The representative of the associate class used for gcd results.
    pub fn normalized(&self) -> RingElement {
        let level = self.level();
        self.with(unary!(self, |v| v.normalize(level)))
    }

    /// The unit `u` with `self = u * self.normalized()` (one for zero).
    pub fn unit_part(&self) -> RingElement {
        if self.is_zero() {
            return self.ring.one();
        }
        self.exact_div(&self.normalized())
            .expect("normal form is an associate")
    }

    /// Whether `self` divides one.
    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.ring.one().exact_div(self).is_ok()
    }

    /// `Some(u)` with `self = u * other` and `u` a unit when the two are
    /// associates, `None` otherwise. Zero is associate only to zero.
    pub fn associate(&self, other: &RingElement) -> Result<Option<RingElement>> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok((self.is_zero() && other.is_zero()).then(|| self.ring.one()));
        }
        match (self.exact_div(other), other.exact_div(self)) {
            (Ok(u), Ok(_)) => Ok(Some(u)),
            _ => Ok(None),
        }
    }

    pub fn is_associate(&self, other: &RingElement) -> bool {
        matches!(self.associate(other), Ok(Some(_)))
    }

    /// Content and primitive part with respect to the last variable: the
    /// content lies in the coefficient ring (one fewer variable, embedded
    /// here as a constant in the last variable) and the primitive part is in
    /// normal form, with `content * primitive == self` exactly.
    pub fn content_and_primitive(&self) -> Result<(RingElement, RingElement)> {
        let level = self.level();
        if level == 0 {
            return Err(RingError::NotPolynomial {
                op: "content",
                ring: self.ring.to_string(),
            });
        }
        if self.is_zero() {
            return Ok((self.clone(), self.clone()));
        }
        let primitive = self.with(unary!(self, |v| v.primitive_part(level).normalize(level)));
        let content = self.exact_div(&primitive)?;
        Ok((content, primitive))
    }

    /// The integer value when `self` lies in the integer ring.
    pub fn to_bigint(&self) -> Option<BigInt> {
        match &self.value {
            Value::Z(Rec::Const(n)) => Some(n.clone()),
            _ => None,
        }
    }

    /// Total degree, `None` for zero.
    pub fn total_degree(&self) -> Option<u64> {
        let level = self.level();
        let degs: Vec<u64> = match &self.value {
            Value::Z(v) => v
                .terms(level)
                .iter()
                .map(|(e, _)| e.iter().map(|&d| d as u64).sum())
                .collect(),
            Value::Q(v) => v
                .terms(level)
                .iter()
                .map(|(e, _)| e.iter().map(|&d| d as u64).sum())
                .collect(),
        };
        degs.into_iter().max()
    }

    // ---- Euclidean structure (integers and QQ[x]) ----

    fn require_euclidean(&self, op: &'static str) -> Result<()> {
        if self.ring.is_euclidean() {
            Ok(())
        } else {
            Err(RingError::NotEuclidean {
                op,
                ring: self.ring.to_string(),
            })
        }
    }

    /// Euclidean size: absolute value over the integers, degree over QQ[x].
    /// Zero has the smallest size of all.
    pub fn euclidean_size(&self) -> Result<Option<BigInt>> {
        self.require_euclidean("euclidean_size")?;
        if self.is_zero() {
            return Ok(None);
        }
        Ok(Some(match &self.value {
            Value::Z(Rec::Const(n)) => n.abs(),
            Value::Q(v) => BigInt::from(v.degree().unwrap_or(0)),
            _ => unreachable!(),
        }))
    }

    /// Euclidean division `self = q * d + r`. Over the integers `0 <= r < |d|`;
    /// over QQ[x], `deg r < deg d`.
    pub fn div_rem(&self, d: &RingElement) -> Result<(RingElement, RingElement)> {
        self.check(d)?;
        self.require_euclidean("div_rem")?;
        if d.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        match (&self.value, &d.value) {
            (Value::Z(Rec::Const(a)), Value::Z(Rec::Const(b))) => {
                let (mut q, mut r) = a.div_mod_floor(b);
                if r.is_negative() {
                    // b < 0 under floor division
                    r += b.abs();
                    q += 1;
                }
                Ok((self.ring.from_bigint(q), self.ring.from_bigint(r)))
            }
            (Value::Q(a), Value::Q(b)) => {
                let (q, r) = a.div_rem_monic_lc(b, 1);
                Ok((self.with(Value::Q(q)), self.with(Value::Q(r))))
            }
            _ => unreachable!(),
        }
    }

    /// `self mod d` in the Euclidean sense.
    pub fn rem_euclid(&self, d: &RingElement) -> Result<RingElement> {
        Ok(self.div_rem(d)?.1)
    }

    /// Extended gcd `(g, s, t)` with `s*self + t*other = g`, `g` normalized.
    pub fn extended_gcd(
        &self,
        other: &RingElement,
    ) -> Result<(RingElement, RingElement, RingElement)> {
        self.check(other)?;
        self.require_euclidean("extended_gcd")?;
        let ring = &self.ring;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (ring.one(), ring.zero());
        let (mut t0, mut t1) = (ring.zero(), ring.one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        let u = r0.unit_part();
        Ok((r0.exact_div(&u)?, s0.exact_div(&u)?, t0.exact_div(&u)?))
    }

    fn map_value(&self, level_f: impl FnOnce(&Value) -> Value) -> RingElement {
        self.with(level_f(&self.value))
    }
}

/// gcd of a list; the gcd of the empty list is zero.
pub fn gcd_many<'a>(
    ring: &Ring,
    items: impl IntoIterator<Item = &'a RingElement>,
) -> Result<RingElement> {
    let mut g = ring.zero();
    for a in items {
        g = g.gcd(a)?;
        if g.is_one() {
            break;
        }
    }
    Ok(g)
}

/// lcm of a list; the lcm of the empty list is one.
pub fn lcm_many<'a>(
    ring: &Ring,
    items: impl IntoIterator<Item = &'a RingElement>,
) -> Result<RingElement> {
    let mut l = ring.one();
    for a in items {
        l = l.lcm(a)?;
    }
    Ok(l)
}

/// Product of a list; the empty product is one.
pub fn product<'a>(ring: &Ring, items: impl IntoIterator<Item = &'a RingElement>) -> RingElement {
    items.into_iter().fold(ring.one(), |acc, x| &acc * x)
}

macro_rules! impl_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&RingElement> for &RingElement {
            type Output = RingElement;

            /// Panics when the operands live in different rings.
            fn $method(self, rhs: &RingElement) -> RingElement {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }

        impl $trait<RingElement> for RingElement {
            type Output = RingElement;

            fn $method(self, rhs: RingElement) -> RingElement {
                (&self).$method(&rhs)
            }
        }
    };
}

impl_op!(Add, add, checked_add);
impl_op!(Sub, sub, checked_sub);
impl_op!(Mul, mul, checked_mul);

impl Neg for &RingElement {
    type Output = RingElement;

    fn neg(self) -> RingElement {
        self.map_value(|v| match v {
            Value::Z(x) => Value::Z(x.neg()),
            Value::Q(x) => Value::Q(x.neg()),
        })
    }
}

impl Neg for RingElement {
    type Output = RingElement;

    fn neg(self) -> RingElement {
        -&self
    }
}
