//! Exact scalars over the rationals and prime fields.
//!
//! Every other module works with [`FieldElement`] values tagged by the
//! [`FieldSpec`] they belong to. Rationals are kept in lowest terms with a
//! positive denominator and residues are kept in `[0, p)`, so structural
//! equality coincides with equality in the field.

mod poly;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

pub use poly::{poly_eval, poly_roots, rational_root_candidates};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields ({left} and {right})")]
    MixedFields { left: FieldSpec, right: FieldSpec },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime {0} is too large (moduli must be below 2^32)")]
    PrimeTooLarge(u64),
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("polynomial is not monic")]
    NonMonic,
}

/// The ground field: either the rationals or `F_p` for a prime `p < 2^32`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec(Option<u64>);

impl FieldSpec {
    pub const RATIONALS: FieldSpec = FieldSpec(None);

    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p > u64::from(u32::MAX) {
            return Err(FieldError::PrimeTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec(Some(p)))
    }

    pub fn is_rational(&self) -> bool {
        self.0.is_none()
    }

    /// `Some(p)` for `F_p`, `None` for the rationals.
    pub fn modulus(&self) -> Option<u64> {
        self.0
    }

    /// Zero for the rationals.
    pub fn characteristic(&self) -> u64 {
        self.0.unwrap_or(0)
    }

    pub fn zero(&self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldElement {
        match self.0 {
            None => FieldElement(Repr::Rational(BigRational::from_integer(BigInt::from(v)))),
            Some(p) => FieldElement::residue(v.rem_euclid(p as i64) as u64, p),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> FieldElement {
        match self.0 {
            None => FieldElement(Repr::Rational(BigRational::from_integer(v.clone()))),
            Some(p) => {
                let r = ((v % BigInt::from(p)) + BigInt::from(p)) % BigInt::from(p);
                FieldElement::residue(r.to_u64().expect("residue fits in u64"), p)
            }
        }
    }

    /// Maps a rational into this field. Fails in `F_p` when `p` divides the
    /// denominator.
    pub fn from_rational(&self, q: &BigRational) -> Result<FieldElement, FieldError> {
        match self.0 {
            None => Ok(FieldElement(Repr::Rational(q.clone()))),
            Some(_) => {
                let num = self.from_bigint(q.numer());
                let den = self.from_bigint(q.denom());
                num.checked_div(&den)
            }
        }
    }

    /// Parses a scalar: `"a"` or `"a/b"` over Q, `"r"` with `0 <= r < p` over `F_p`.
    pub fn parse_element(&self, s: &str) -> Result<FieldElement, FieldError> {
        let err = |reason: &str| FieldError::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let t = s.trim();
        match self.0 {
            None => {
                let (num, den) = match t.split_once('/') {
                    Some((a, b)) => (a, Some(b)),
                    None => (t, None),
                };
                let num: BigInt = num.parse().map_err(|_| err("bad numerator"))?;
                let den: BigInt = match den {
                    Some(d) => d.parse().map_err(|_| err("bad denominator"))?,
                    None => BigInt::one(),
                };
                if den.is_zero() {
                    return Err(err("zero denominator"));
                }
                Ok(FieldElement(Repr::Rational(BigRational::new(num, den))))
            }
            Some(p) => {
                let r: u64 = t
                    .parse()
                    .map_err(|_| err("expected a non-negative residue"))?;
                if r >= p {
                    return Err(err("residue out of range"));
                }
                Ok(FieldElement::residue(r, p))
            }
        }
    }

    /// All elements of a prime field, in increasing residue order.
    pub(crate) fn residues(&self) -> Option<impl Iterator<Item = FieldElement>> {
        self.0
            .map(|p| (0..p).map(move |r| FieldElement::residue(r, p)))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            None => write!(f, "Q"),
            Some(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "Q" {
            return Ok(FieldSpec::RATIONALS);
        }
        match t.strip_prefix("Fp:") {
            Some(p) => {
                let p: u64 = p.parse().map_err(|_| FieldError::Parse {
                    input: s.to_string(),
                    reason: "expected Fp:<prime>".to_string(),
                })?;
                FieldSpec::prime(p)
            }
            None => Err(FieldError::Parse {
                input: s.to_string(),
                reason: "expected \"Q\" or \"Fp:<p>\"".to_string(),
            }),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

/// An exact scalar of some [`FieldSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement(Repr);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic: fails on mixed fields and on division by zero.
pub fn field_arithmetic(
    a: &FieldElement,
    b: &FieldElement,
    op: ArithOp,
) -> Result<FieldElement, FieldError> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
        ArithOp::Div => a.checked_div(b),
    }
}

impl FieldElement {
    fn residue(value: u64, modulus: u64) -> Self {
        debug_assert!(value < modulus);
        FieldElement(Repr::Residue { value, modulus })
    }

    pub fn field(&self) -> FieldSpec {
        match &self.0 {
            Repr::Rational(_) => FieldSpec::RATIONALS,
            Repr::Residue { modulus, .. } => FieldSpec(Some(*modulus)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Rational(q) => q.is_zero(),
            Repr::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Rational(q) => q.is_one(),
            Repr::Residue { value, .. } => *value == 1,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Rational(q) => Some(q),
            Repr::Residue { .. } => None,
        }
    }

    pub fn as_residue(&self) -> Option<u64> {
        match &self.0 {
            Repr::Rational(_) => None,
            Repr::Residue { value, .. } => Some(*value),
        }
    }

    /// Signed integer view: the integer itself over Q (if integral), or the
    /// symmetric representative in `(-p/2, p/2]` over `F_p`.
    pub fn to_i64_symmetric(&self) -> Option<i64> {
        match &self.0 {
            Repr::Rational(q) if q.is_integer() => q.numer().to_i64(),
            Repr::Rational(_) => None,
            Repr::Residue { value, modulus } => {
                let v = *value as i64;
                let m = *modulus as i64;
                Some(if v > m / 2 { v - m } else { v })
            }
        }
    }

    fn same_field(&self, other: &Self) -> Result<(), FieldError> {
        let (l, r) = (self.field(), other.field());
        if l == r {
            Ok(())
        } else {
            Err(FieldError::MixedFields { left: l, right: r })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        Ok(match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => FieldElement(Repr::Rational(a + b)),
            (Repr::Residue { value: a, modulus }, Repr::Residue { value: b, .. }) => {
                FieldElement::residue(
                    ((*a as u128 + *b as u128) % *modulus as u128) as u64,
                    *modulus,
                )
            }
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        Ok(match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => FieldElement(Repr::Rational(a * b)),
            (Repr::Residue { value: a, modulus }, Repr::Residue { value: b, .. }) => {
                FieldElement::residue(
                    ((*a as u128 * *b as u128) % *modulus as u128) as u64,
                    *modulus,
                )
            }
            _ => unreachable!(),
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        let inv = other.inv()?;
        self.checked_mul(&inv)
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match &self.0 {
            Repr::Rational(q) => FieldElement(Repr::Rational(q.recip())),
            Repr::Residue { value, modulus } => {
                FieldElement::residue(mod_pow(*value, modulus - 2, *modulus), *modulus)
            }
        })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

pub(crate) fn mod_pow(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128 % m as u128;
    let mut base = b as u128 % m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m as u128;
        }
        base = base * base % m as u128;
        e >>= 1;
    }
    acc as u64
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Rational(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Repr::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Repr::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

/// Rationals compare numerically; residues compare by representative in `[0, p)`.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => a.cmp(b),
            (
                Repr::Residue {
                    value: a,
                    modulus: p,
                },
                Repr::Residue {
                    value: b,
                    modulus: q,
                },
            ) => (p, a).cmp(&(q, b)),
            (Repr::Rational(_), Repr::Residue { .. }) => Ordering::Less,
            (Repr::Residue { .. }, Repr::Rational(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// Operator forms panic on mixed fields; callers that cannot guarantee a
// common field use the `checked_*` methods.

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.checked_add(rhs).expect("field mismatch in addition")
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.checked_sub(rhs)
            .expect("field mismatch in subtraction")
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.checked_mul(rhs)
            .expect("field mismatch in multiplication")
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        &self + &rhs
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        &self - &rhs
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        &self * &rhs
    }
}

impl AddAssign<&FieldElement> for FieldElement {
    fn add_assign(&mut self, rhs: &FieldElement) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&FieldElement> for FieldElement {
    fn sub_assign(&mut self, rhs: &FieldElement) {
        *self = &*self - rhs;
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        match &self.0 {
            Repr::Rational(q) => FieldElement(Repr::Rational(-q)),
            Repr::Residue { value, modulus } => {
                FieldElement::residue(if *value == 0 { 0 } else { modulus - value }, *modulus)
            }
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}
