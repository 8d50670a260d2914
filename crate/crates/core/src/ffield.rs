//! Prime field and quadratic extension arithmetic.
//!
//! Residues are stored as `u64` with the prime bounded by `2^31`, so a
//! product of two residues always fits in a machine word before reduction.
//! The quadratic extension is `F_p[ω]/(ω² − d)` where `d` is the smallest
//! positive quadratic non-residue.

use core::fmt;
use core::hash::Hash;
use core::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// Largest prime accepted by [`Modulus::new`] (exclusive).
pub const MODULUS_LIMIT: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the supported bound 2^31")]
    TooLarge(u64),
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("no quadratic non-residue exists modulo {0}")]
    NoNonResidue(u64),
    #[error("multiplicative order of zero is undefined")]
    ZeroOrder,
}

/// A validated prime modulus `p < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p >= MODULUS_LIMIT {
            return Err(FieldError::TooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Self(p))
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    /// Reduces a signed integer into `[0, p)`.
    pub fn elem(self, v: i64) -> FieldElement {
        FieldElement {
            value: v.rem_euclid(self.0 as i64) as u64,
            modulus: self,
        }
    }

    pub fn elem_u(self, v: u64) -> FieldElement {
        FieldElement {
            value: v % self.0,
            modulus: self,
        }
    }

    pub fn zero(self) -> FieldElement {
        self.elem_u(0)
    }

    pub fn one(self) -> FieldElement {
        self.elem_u(1)
    }

    /// All residues `0, 1, …, p−1` in increasing order.
    pub fn elements(self) -> impl Iterator<Item = FieldElement> {
        (0..self.0).map(move |v| FieldElement { value: v, modulus: self })
    }

    #[inline]
    pub(crate) fn add_raw(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn sub_raw(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub(crate) fn mul_raw(self, a: u64, b: u64) -> u64 {
        (a * b) % self.0
    }

    pub(crate) fn pow_raw(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            exp >>= 1;
        }
        acc
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Deterministic primality by trial division; adequate below `2^62`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// Prime factorization by trial division, returned as `(prime, exponent)`
/// pairs in increasing prime order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Order of an element of a cyclic group of order `group_order`, given a
/// closure that raises the element to a power. Peels prime factors off the
/// group order while the power stays the identity.
fn order_by_peeling(group_order: u64, is_identity_at: impl Fn(u64) -> bool) -> u64 {
    let mut order = group_order;
    for (q, e) in factorize(group_order) {
        for _ in 0..e {
            if order.is_multiple_of(q) && is_identity_at(order / q) {
                order /= q;
            } else {
                break;
            }
        }
    }
    order
}

/// An element of `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    modulus: Modulus,
}

impl FieldElement {
    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Value in `(−p/2, p/2]`, handy for printing signed coefficients.
    pub fn signed(self) -> i64 {
        let p = self.modulus.0;
        if self.value > p / 2 {
            self.value as i64 - p as i64
        } else {
            self.value as i64
        }
    }

    fn check(self, other: Self) -> Result<(), FieldError> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(FieldError::ModulusMismatch {
                left: self.modulus.0,
                right: other.modulus.0,
            })
        }
    }

    pub fn try_add(self, rhs: Self) -> Result<Self, FieldError> {
        self.check(rhs)?;
        Ok(self + rhs)
    }

    pub fn try_sub(self, rhs: Self) -> Result<Self, FieldError> {
        self.check(rhs)?;
        Ok(self - rhs)
    }

    pub fn try_mul(self, rhs: Self) -> Result<Self, FieldError> {
        self.check(rhs)?;
        Ok(self * rhs)
    }

    pub fn try_div(self, rhs: Self) -> Result<Self, FieldError> {
        self.check(rhs)?;
        Ok(self * rhs.inv()?)
    }

    pub fn inv(self) -> Result<Self, FieldError> {
        if self.value == 0 {
            return Err(FieldError::ZeroInverse);
        }
        Ok(self.pow(self.modulus.0 - 2))
    }

    /// Square-and-multiply exponentiation; `x^0 = 1` for every `x`.
    pub fn pow(self, exp: u64) -> Self {
        Self {
            value: self.modulus.pow_raw(self.value, exp),
            modulus: self.modulus,
        }
    }

    /// Signed exponent; negative powers require a nonzero base.
    pub fn pow_signed(self, exp: i64) -> Result<Self, FieldError> {
        if exp >= 0 {
            Ok(self.pow(exp as u64))
        } else {
            Ok(self.inv()?.pow(exp.unsigned_abs()))
        }
    }

    /// Legendre symbol computed as `a^((p−1)/2)`. For `p = 2` every nonzero
    /// residue is a square.
    pub fn legendre(self) -> i8 {
        if self.value == 0 {
            return 0;
        }
        let p = self.modulus.0;
        if p == 2 {
            return 1;
        }
        if self.pow((p - 1) / 2).value == 1 {
            1
        } else {
            -1
        }
    }

    /// Tonelli–Shanks square root. Returns the numerically smaller of the
    /// two roots, or `None` when `self` is a non-residue.
    pub fn sqrt(self) -> Option<Self> {
        let m = self.modulus;
        let p = m.0;
        if self.value == 0 || p == 2 {
            return Some(self);
        }
        if self.legendre() != 1 {
            return None;
        }
        // p − 1 = q·2^s with q odd
        let mut q = p - 1;
        let mut s = 0u32;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let root = if s == 1 {
            m.pow_raw(self.value, (p + 1) / 4)
        } else {
            let z = smallest_nonresidue(m).expect("odd prime has a non-residue").value;
            let mut c = m.pow_raw(z, q);
            let mut r = m.pow_raw(self.value, q.div_ceil(2));
            let mut t = m.pow_raw(self.value, q);
            let mut bits = s;
            while t != 1 {
                let mut i = 0u32;
                let mut t2 = t;
                while t2 != 1 {
                    t2 = m.mul_raw(t2, t2);
                    i += 1;
                }
                let b = m.pow_raw(c, 1u64 << (bits - i - 1));
                r = m.mul_raw(r, b);
                c = m.mul_raw(b, b);
                t = m.mul_raw(t, c);
                bits = i;
            }
            r
        };
        let canonical = root.min(p - root);
        Some(Self {
            value: canonical,
            modulus: m,
        })
    }

    /// Smallest `n ≥ 1` with `x^n = 1`, found by peeling the prime factors
    /// of `p − 1`.
    pub fn mult_order(self) -> Result<u64, FieldError> {
        if self.value == 0 {
            return Err(FieldError::ZeroOrder);
        }
        let m = self.modulus;
        Ok(order_by_peeling(m.0 - 1, |e| m.pow_raw(self.value, e) == 1))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

macro_rules! same_modulus {
    ($a:expr, $b:expr) => {
        assert_eq!(
            $a.modulus, $b.modulus,
            "field elements from different moduli"
        )
    };
}

impl Add for FieldElement {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        same_modulus!(self, rhs);
        Self {
            value: self.modulus.add_raw(self.value, rhs.value),
            modulus: self.modulus,
        }
    }
}

impl Sub for FieldElement {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        same_modulus!(self, rhs);
        Self {
            value: self.modulus.sub_raw(self.value, rhs.value),
            modulus: self.modulus,
        }
    }
}

impl Mul for FieldElement {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        same_modulus!(self, rhs);
        Self {
            value: self.modulus.mul_raw(self.value, rhs.value),
            modulus: self.modulus,
        }
    }
}

impl Neg for FieldElement {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self {
            value: self.modulus.sub_raw(0, self.value),
            modulus: self.modulus,
        }
    }
}

/// Smallest positive quadratic non-residue modulo `p`, by linear scan.
pub fn smallest_nonresidue(m: Modulus) -> Result<FieldElement, FieldError> {
    if m.0 == 2 {
        return Err(FieldError::NoNonResidue(2));
    }
    Ok(m.elements()
        .skip(2)
        .find(|x| x.legendre() == -1)
        .expect("odd prime has a non-residue"))
}

/// The field `F_{p²} = F_p[ω]/(ω² − d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadField {
    nonresidue: FieldElement,
}

impl QuadField {
    pub fn new(m: Modulus) -> Result<Self, FieldError> {
        Ok(Self {
            nonresidue: smallest_nonresidue(m)?,
        })
    }

    pub fn modulus(self) -> Modulus {
        self.nonresidue.modulus
    }

    /// The non-residue `d = ω²`.
    pub fn nonresidue(self) -> FieldElement {
        self.nonresidue
    }

    pub fn elem(self, a: FieldElement, b: FieldElement) -> QuadExtElement {
        assert_eq!(a.modulus, self.modulus());
        assert_eq!(b.modulus, self.modulus());
        QuadExtElement { a, b, field: self }
    }

    pub fn embed(self, a: FieldElement) -> QuadExtElement {
        self.elem(a, self.modulus().zero())
    }

    pub fn zero(self) -> QuadExtElement {
        self.embed(self.modulus().zero())
    }

    pub fn one(self) -> QuadExtElement {
        self.embed(self.modulus().one())
    }

    pub fn omega(self) -> QuadExtElement {
        let m = self.modulus();
        self.elem(m.zero(), m.one())
    }

    /// Square root in `F_{p²}` of a base-field element; always exists.
    /// A non-residue `a` has root `s·ω` with `s² = a/d`.
    pub fn sqrt_base(self, a: FieldElement) -> QuadExtElement {
        match a.sqrt() {
            Some(r) => self.embed(r),
            None => {
                let s = (a * self.nonresidue.inv().expect("d is nonzero"))
                    .sqrt()
                    .expect("a/d is a residue when a and d are non-residues");
                self.elem(self.modulus().zero(), s)
            }
        }
    }

    /// Every element, ordered by `(b, a)` so the base field comes first.
    pub fn elements(self) -> impl Iterator<Item = QuadExtElement> {
        let m = self.modulus();
        m.elements()
            .flat_map(move |b| m.elements().map(move |a| QuadExtElement { a, b, field: self }))
    }
}

/// An element `a + bω` of `F_{p²}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadExtElement {
    a: FieldElement,
    b: FieldElement,
    field: QuadField,
}

impl QuadExtElement {
    pub fn a(self) -> FieldElement {
        self.a
    }

    pub fn b(self) -> FieldElement {
        self.b
    }

    pub fn field(self) -> QuadField {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn in_base_field(self) -> bool {
        self.b.is_zero()
    }

    /// The base-field value when `b = 0`.
    pub fn to_base(self) -> Option<FieldElement> {
        self.in_base_field().then_some(self.a)
    }

    /// Frobenius conjugate `a − bω`.
    pub fn conj(self) -> Self {
        Self {
            a: self.a,
            b: -self.b,
            field: self.field,
        }
    }

    /// Norm `a² − d·b²`.
    pub fn norm(self) -> FieldElement {
        self.a * self.a - self.field.nonresidue * self.b * self.b
    }

    fn check(self, other: Self) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::ModulusMismatch {
                left: self.field.modulus().0,
                right: other.field.modulus().0,
            })
        }
    }

    pub fn try_add(self, rhs: Self) -> Result<Self, FieldError> {
        self.check(rhs)?;
        Ok(self + rhs)
    }

    pub fn try_sub(self, rhs: Self) -> Result<Self, FieldError> {
        self.check(rhs)?;
        Ok(self - rhs)
    }

    pub fn try_mul(self, rhs: Self) -> Result<Self, FieldError> {
        self.check(rhs)?;
        Ok(self * rhs)
    }

    pub fn try_div(self, rhs: Self) -> Result<Self, FieldError> {
        self.check(rhs)?;
        Ok(self * rhs.inv()?)
    }

    pub fn inv(self) -> Result<Self, FieldError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        let ninv = n.inv()?;
        Ok(Self {
            a: self.a * ninv,
            b: -self.b * ninv,
            field: self.field,
        })
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let mut acc = self.field.one();
        let mut base = self;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    pub fn pow_signed(self, exp: i64) -> Result<Self, FieldError> {
        if exp >= 0 {
            Ok(self.pow(exp as u64))
        } else {
            Ok(self.inv()?.pow(exp.unsigned_abs()))
        }
    }

    /// Smallest `n ≥ 1` with `x^n = 1`. The group order peeled is `p − 1`
    /// for base-field elements and `p² − 1` otherwise.
    pub fn mult_order(self) -> Result<u64, FieldError> {
        if self.is_zero() {
            return Err(FieldError::ZeroOrder);
        }
        let p = self.field.modulus().0;
        let group = if self.in_base_field() { p - 1 } else { p * p - 1 };
        let one = self.field.one();
        Ok(order_by_peeling(group, |e| self.pow(e) == one))
    }
}

impl fmt::Display for QuadExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}+{}w", self.a, self.b)
        }
    }
}

impl Add for QuadExtElement {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
            field: self.field,
        }
    }
}

impl Sub for QuadExtElement {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self {
            a: self.a - rhs.a,
            b: self.b - rhs.b,
            field: self.field,
        }
    }
}

impl Mul for QuadExtElement {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.field, rhs.field, "elements from different extensions");
        let d = self.field.nonresidue;
        Self {
            a: self.a * rhs.a + self.b * rhs.b * d,
            b: self.a * rhs.b + rhs.a * self.b,
            field: self.field,
        }
    }
}

impl Neg for QuadExtElement {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self {
            a: -self.a,
            b: -self.b,
            field: self.field,
        }
    }
}

/// Common surface of `F_p` and `F_{p²}` used by the generic polynomial code.
pub trait FieldLike:
    Copy
    + Eq
    + Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Whatever is needed to build constants: the modulus, or the extension.
    type Ctx: Copy + Eq + fmt::Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: Self::Ctx) -> Self;
    fn one(ctx: Self::Ctx) -> Self;
    fn embed(ctx: Self::Ctx, x: FieldElement) -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Result<Self, FieldError>;
    fn field_size(ctx: Self::Ctx) -> u64;
    fn all_elements(ctx: Self::Ctx) -> Vec<Self>;
    fn base_modulus(ctx: Self::Ctx) -> Modulus;
}

impl FieldLike for FieldElement {
    type Ctx = Modulus;

    fn ctx(&self) -> Modulus {
        self.modulus
    }
    fn zero(ctx: Modulus) -> Self {
        ctx.zero()
    }
    fn one(ctx: Modulus) -> Self {
        ctx.one()
    }
    fn embed(ctx: Modulus, x: FieldElement) -> Self {
        assert_eq!(ctx, x.modulus);
        x
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn inv(&self) -> Result<Self, FieldError> {
        FieldElement::inv(*self)
    }
    fn field_size(ctx: Modulus) -> u64 {
        ctx.0
    }
    fn all_elements(ctx: Modulus) -> Vec<Self> {
        ctx.elements().collect()
    }
    fn base_modulus(ctx: Modulus) -> Modulus {
        ctx
    }
}

impl FieldLike for QuadExtElement {
    type Ctx = QuadField;

    fn ctx(&self) -> QuadField {
        self.field
    }
    fn zero(ctx: QuadField) -> Self {
        ctx.zero()
    }
    fn one(ctx: QuadField) -> Self {
        ctx.one()
    }
    fn embed(ctx: QuadField, x: FieldElement) -> Self {
        ctx.embed(x)
    }
    fn is_zero(&self) -> bool {
        QuadExtElement::is_zero(*self)
    }
    fn inv(&self) -> Result<Self, FieldError> {
        QuadExtElement::inv(*self)
    }
    fn field_size(ctx: QuadField) -> u64 {
        let p = ctx.modulus().0;
        p * p
    }
    fn all_elements(ctx: QuadField) -> Vec<Self> {
        ctx.elements().collect()
    }
    fn base_modulus(ctx: QuadField) -> Modulus {
        ctx.modulus()
    }
}
