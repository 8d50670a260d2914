use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::ops::{Add, Mul, Neg, Sub};

use crate::ffield::{FieldElement, FieldLike, Modulus};

use super::NewtonError;

/// Exponent pair `(i, j)` of the monomial `x^i y^j`.
pub type Exponent = (u32, u32);

/// A sparse polynomial in `x, y` with coefficients in `F`. Zero coefficients
/// are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseBivarPoly<F: FieldLike> {
    terms: BTreeMap<Exponent, F>,
    ctx: F::Ctx,
}

impl<F: FieldLike> SparseBivarPoly<F> {
    pub fn zero(ctx: F::Ctx) -> Self {
        Self {
            terms: BTreeMap::new(),
            ctx,
        }
    }

    /// Sums repeated exponents and drops zero coefficients.
    pub fn from_terms(ctx: F::Ctx, terms: impl IntoIterator<Item = (Exponent, F)>) -> Self {
        let mut out = Self::zero(ctx);
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn constant(ctx: F::Ctx, c: F) -> Self {
        Self::monomial(ctx, (0, 0), c)
    }

    pub fn monomial(ctx: F::Ctx, e: Exponent, c: F) -> Self {
        Self::from_terms(ctx, [(e, c)])
    }

    pub fn add_term(&mut self, e: Exponent, c: F) {
        let slot = self.terms.entry(e).or_insert_with(|| F::zero(self.ctx));
        *slot = *slot + c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn ctx(&self) -> F::Ctx {
        self.ctx
    }

    pub fn modulus(&self) -> Modulus {
        F::base_modulus(self.ctx)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing `(i, j)` order.
    pub fn terms(&self) -> impl Iterator<Item = (Exponent, F)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn support(&self) -> impl Iterator<Item = Exponent> + '_ {
        self.terms.keys().copied()
    }

    pub fn coeff(&self, i: u32, j: u32) -> F {
        self.terms.get(&(i, j)).copied().unwrap_or_else(|| F::zero(self.ctx))
    }

    /// `(max i, max j)`; `(0, 0)` for the zero polynomial.
    pub fn bidegree(&self) -> (u32, u32) {
        self.terms
            .keys()
            .fold((0, 0), |(a, b), &(i, j)| (a.max(i), b.max(j)))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|&(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn scale(&self, c: F) -> Self {
        Self::from_terms(self.ctx, self.terms().map(|(e, a)| (e, a * c)))
    }

    pub fn map_coeffs<G: FieldLike>(&self, ctx: G::Ctx, f: impl Fn(F) -> G) -> SparseBivarPoly<G> {
        SparseBivarPoly::from_terms(ctx, self.terms().map(|(e, c)| (e, f(c))))
    }

    pub fn eval(&self, x: F, y: F) -> F {
        let (d1, d2) = self.bidegree();
        let pows = |v: F, d: u32| {
            let mut out = Vec::with_capacity(d as usize + 1);
            let mut cur = F::one(self.ctx);
            for _ in 0..=d {
                out.push(cur);
                cur = cur * v;
            }
            out
        };
        let (xp, yp) = (pows(x, d1), pows(y, d2));
        self.terms().fold(F::zero(self.ctx), |acc, ((i, j), c)| {
            acc + c * xp[i as usize] * yp[j as usize]
        })
    }

    /// Componentwise minimum exponent: the largest monomial dividing `self`.
    pub fn monomial_content(&self) -> Exponent {
        self.terms
            .keys()
            .fold((u32::MAX, u32::MAX), |(a, b), &(i, j)| (a.min(i), b.min(j)))
    }

    /// Divides by `x^a y^b`; every term must be divisible.
    pub fn shift_down(&self, (a, b): Exponent) -> Self {
        Self::from_terms(
            self.ctx,
            self.terms().map(|((i, j), c)| ((i - a, j - b), c)),
        )
    }

    /// Exact division using lex order with `x > y`. Returns `None` when
    /// `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (&lead_e, &lead_c) = divisor.terms.iter().next_back()?;
        let lead_inv = lead_c.inv().ok()?;
        let mut rem = self.clone();
        let mut quot = Self::zero(self.ctx);
        while let Some((&e, &c)) = rem.terms.iter().next_back() {
            if e.0 < lead_e.0 || e.1 < lead_e.1 {
                return None;
            }
            let qe = (e.0 - lead_e.0, e.1 - lead_e.1);
            let qc = c * lead_inv;
            quot.add_term(qe, qc);
            for ((i, j), d) in divisor.terms() {
                rem.add_term((i + qe.0, j + qe.1), -(d * qc));
            }
        }
        Some(quot)
    }

    /// The homogeneous part of least total degree `d♯ = min(i + j)`.
    pub fn sharp_part(&self) -> Result<SharpPart<F>, NewtonError> {
        let degree = self
            .terms
            .keys()
            .map(|&(i, j)| i + j)
            .min()
            .ok_or(NewtonError::ZeroPolynomial)?;
        let poly = Self::from_terms(
            self.ctx,
            self.terms().filter(|&((i, j), _)| i + j == degree),
        );
        Ok(SharpPart {
            monomials: poly.len(),
            poly,
            degree,
        })
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|&(i, j)| i + j);
        match degs.next() {
            Some(d) => degs.all(|e| e == d),
            None => true,
        }
    }
}

/// Result of [`SparseBivarPoly::sharp_part`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharpPart<F: FieldLike> {
    pub poly: SparseBivarPoly<F>,
    pub degree: u32,
    pub monomials: usize,
}

impl<F: FieldLike> Add for &SparseBivarPoly<F> {
    type Output = SparseBivarPoly<F>;
    fn add(self, rhs: Self) -> SparseBivarPoly<F> {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl<F: FieldLike> Sub for &SparseBivarPoly<F> {
    type Output = SparseBivarPoly<F>;
    fn sub(self, rhs: Self) -> SparseBivarPoly<F> {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, -c);
        }
        out
    }
}

impl<F: FieldLike> Neg for &SparseBivarPoly<F> {
    type Output = SparseBivarPoly<F>;
    fn neg(self) -> SparseBivarPoly<F> {
        SparseBivarPoly::from_terms(self.ctx, self.terms().map(|(e, c)| (e, -c)))
    }
}

impl<F: FieldLike> Mul for &SparseBivarPoly<F> {
    type Output = SparseBivarPoly<F>;
    fn mul(self, rhs: Self) -> SparseBivarPoly<F> {
        let mut out = SparseBivarPoly::zero(self.ctx);
        for ((i, j), a) in self.terms() {
            for ((k, l), b) in rhs.terms() {
                out.add_term((i + k, j + l), a * b);
            }
        }
        out
    }
}

/// Terms in descending `(i, j)` order, e.g. `3*x^2*y + 4*y + 1`.
impl<F: FieldLike> fmt::Display for SparseBivarPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, ((i, j), c)) in self.terms.iter().rev().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            let mono: Vec<String> = [("x", *i), ("y", *j)]
                .iter()
                .filter(|(_, e)| *e > 0)
                .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
                .collect();
            match (mono.is_empty(), *c == F::one(self.ctx)) {
                (true, _) => write!(f, "{c}")?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "({c})*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

impl SparseBivarPoly<FieldElement> {
    /// One `i j coeff` line per term, sorted by `(i, j)`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for ((i, j), c) in self.terms() {
            writeln!(out, "{i} {j} {c}").expect("writing to a String");
        }
        out
    }

    /// Parses `i j coeff` lines. Blank lines and `#` comments are skipped;
    /// coefficients may be negative and are reduced modulo `p`.
    pub fn from_text(modulus: Modulus, text: &str) -> Result<Self, NewtonError> {
        let mut out = Self::zero(modulus);
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| NewtonError::Parse {
                line: n + 1,
                msg: msg.to_string(),
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [i, j, c] = fields[..] else {
                return Err(bad("expected three fields `i j coeff`"));
            };
            let i: u32 = i.parse().map_err(|_| bad("bad x exponent"))?;
            let j: u32 = j.parse().map_err(|_| bad("bad y exponent"))?;
            let c: i64 = c.parse().map_err(|_| bad("bad coefficient"))?;
            out.add_term((i, j), modulus.elem(c));
        }
        Ok(out)
    }
}
