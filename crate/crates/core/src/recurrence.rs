//! Linear recurrences modulo a prime.
//!
//! A [`RecurrenceSpec`] with coefficients `(α₁, …, α_m)` generates
//! `X_{n+m} = α₁X_{n+m−1} + ⋯ + α_mX_n`. Terms are indexed from zero: the
//! initials are `X_0, …, X_{m−1}`. For the K-Fibonacci family this matches
//! `F_0 = 0, F_1 = 1`.

use std::collections::HashMap;

use thiserror::Error;

use crate::doubling::ValueSet;
use crate::ffield::{factorize, FieldElement, FieldError, Modulus, QuadExtElement, QuadField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecurrenceError {
    #[error("K must be a nonzero residue")]
    ZeroK,
    #[error("recurrence needs at least one coefficient and matching initials (got {coeffs} coefficients, {initials} initials)")]
    Shape { coeffs: usize, initials: usize },
    #[error("last coefficient α_m is zero; pre-periodic sequences are unsupported")]
    SingularShift,
    #[error("operation implemented for order 2 only (order is {0})")]
    OrderNotTwo(usize),
    #[error("characteristic polynomial has a repeated root")]
    RepeatedRoot,
    #[error("characteristic 2 has no quadratic extension of the form F_p[ω]/(ω² − d)")]
    CharacteristicTwo,
    #[error("stride must be at least 1")]
    ZeroStride,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `X_{n+m} = α₁X_{n+m−1} + ⋯ + α_mX_n` over `F_p`, with its first `m` terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceSpec {
    coeffs: Vec<FieldElement>,
    initials: Vec<FieldElement>,
    modulus: Modulus,
}

impl RecurrenceSpec {
    pub fn new(
        coeffs: Vec<FieldElement>,
        initials: Vec<FieldElement>,
    ) -> Result<Self, RecurrenceError> {
        if coeffs.is_empty() || coeffs.len() != initials.len() {
            return Err(RecurrenceError::Shape {
                coeffs: coeffs.len(),
                initials: initials.len(),
            });
        }
        let modulus = coeffs[0].modulus();
        for x in coeffs.iter().chain(&initials) {
            if x.modulus() != modulus {
                return Err(FieldError::ModulusMismatch {
                    left: modulus.value(),
                    right: x.modulus().value(),
                }
                .into());
            }
        }
        Ok(Self {
            coeffs,
            initials,
            modulus,
        })
    }

    /// `X_{n+2} = a1·X_{n+1} + a2·X_n` starting from `x0, x1`.
    pub fn order_two(
        a1: FieldElement,
        a2: FieldElement,
        x0: FieldElement,
        x1: FieldElement,
    ) -> Result<Self, RecurrenceError> {
        Self::new(vec![a1, a2], vec![x0, x1])
    }

    /// The K-Fibonacci sequence `F_{n+2} = K·F_n + F_{n+1}`, `F_0 = 0`, `F_1 = 1`.
    pub fn kfib(k: FieldElement) -> Result<Self, RecurrenceError> {
        if k.is_zero() {
            return Err(RecurrenceError::ZeroK);
        }
        let m = k.modulus();
        Self::order_two(m.one(), k, m.zero(), m.one())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn initials(&self) -> &[FieldElement] {
        &self.initials
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    /// Whether `α₁·α_m ≠ 0`.
    pub fn is_nondegenerate(&self) -> bool {
        !self.coeffs[0].is_zero() && !self.coeffs[self.order() - 1].is_zero()
    }

    fn step(&self, window: &[FieldElement]) -> FieldElement {
        // window holds X_n, …, X_{n+m−1}; α₁ multiplies the newest term
        let m = self.order();
        let mut acc = self.modulus.zero();
        for (i, &a) in self.coeffs.iter().enumerate() {
            acc = acc + a * window[m - 1 - i];
        }
        acc
    }

    /// The first `n` terms `X_0, …, X_{n−1}`.
    pub fn iterate(&self, n: usize) -> Vec<FieldElement> {
        let m = self.order();
        let mut out: Vec<FieldElement> = self.initials.iter().copied().take(n).collect();
        while out.len() < n {
            let next = self.step(&out[out.len() - m..]);
            out.push(next);
        }
        out
    }

    /// Full orbit of a purely periodic sequence.
    pub fn orbit(&self) -> Result<Orbit, RecurrenceError> {
        Ok(self
            .orbit_capped(u64::MAX)?
            .expect("uncapped orbit always completes"))
    }

    /// Like [`orbit`](Self::orbit) but gives up (returning `None`) once the
    /// period is known to exceed `cap`.
    pub fn orbit_capped(&self, cap: u64) -> Result<Option<Orbit>, RecurrenceError> {
        if self.coeffs[self.order() - 1].is_zero() {
            return Err(RecurrenceError::SingularShift);
        }
        let values = if self.order() == 2 {
            self.cycle_order_two(cap)
        } else {
            self.cycle_general(cap)
        };
        Ok(values.map(|values| {
            let value_set = ValueSet::from_elements(self.modulus, values.iter().copied());
            Orbit {
                period: values.len() as u64,
                values,
                value_set,
            }
        }))
    }

    fn cycle_order_two(&self, cap: u64) -> Option<Vec<FieldElement>> {
        let m = self.modulus;
        let (a1, a2) = (self.coeffs[0].value(), self.coeffs[1].value());
        let (s0, s1) = (self.initials[0].value(), self.initials[1].value());
        let (mut x, mut y) = (s0, s1);
        let mut values = Vec::new();
        loop {
            if values.len() as u64 >= cap {
                return None;
            }
            values.push(m.elem_u(x));
            let next = m.add_raw(m.mul_raw(a1, y), m.mul_raw(a2, x));
            x = y;
            y = next;
            if x == s0 && y == s1 {
                return Some(values);
            }
        }
    }

    fn cycle_general(&self, cap: u64) -> Option<Vec<FieldElement>> {
        let m = self.order();
        let mut window: Vec<FieldElement> = self.initials.clone();
        let mut values = Vec::new();
        loop {
            if values.len() as u64 >= cap {
                return None;
            }
            values.push(window[0]);
            let next = self.step(&window);
            window.remove(0);
            window.push(next);
            if window == self.initials {
                return Some(values);
            }
            debug_assert_eq!(window.len(), m);
        }
    }

    /// Spec of `Y_k = X_{t·k + offset}`. Coefficients come from the companion
    /// matrix power `M^t`: `Y_{k+2} = tr(M^t)·Y_{k+1} − det(M^t)·Y_k`.
    pub fn decimate(&self, stride: u64, offset: u64) -> Result<Self, RecurrenceError> {
        if self.order() != 2 {
            return Err(RecurrenceError::OrderNotTwo(self.order()));
        }
        if stride == 0 {
            return Err(RecurrenceError::ZeroStride);
        }
        if stride == 1 && offset == 0 {
            return Ok(self.clone());
        }
        let (trace, det) = self.companion_power_invariants(stride);
        let terms = self.iterate((stride + offset + 1) as usize);
        Self::order_two(
            trace,
            -det,
            terms[offset as usize],
            terms[(stride + offset) as usize],
        )
    }

    /// Trace and determinant of `M^t` for the order-2 companion matrix
    /// `M = [[α₁, α₂], [1, 0]]`.
    pub fn companion_power_invariants(&self, t: u64) -> (FieldElement, FieldElement) {
        assert_eq!(self.order(), 2);
        let m = self.modulus;
        let base = [[self.coeffs[0], self.coeffs[1]], [m.one(), m.zero()]];
        let pow = mat_pow(base, t, m);
        let trace = pow[0][0] + pow[1][1];
        let det = pow[0][0] * pow[1][1] - pow[0][1] * pow[1][0];
        (trace, det)
    }

    /// Roots of `λ² − α₁λ − α₂`, embedded in `F_{p²}`.
    pub fn char_roots(&self) -> Result<CharRoots, RecurrenceError> {
        if self.order() != 2 {
            return Err(RecurrenceError::OrderNotTwo(self.order()));
        }
        let m = self.modulus;
        if m.value() == 2 {
            return Err(RecurrenceError::CharacteristicTwo);
        }
        let field = QuadField::new(m)?;
        let (a1, a2) = (self.coeffs[0], self.coeffs[1]);
        let disc = a1 * a1 + m.elem(4) * a2;
        let s = field.sqrt_base(disc);
        let half = field.embed(m.elem(2).inv()?);
        let a1e = field.embed(a1);
        let class = match disc.legendre() {
            0 => DiscriminantClass::Repeated,
            1 => DiscriminantClass::Split,
            _ => DiscriminantClass::Inert,
        };
        Ok(CharRoots {
            roots: [(a1e + s) * half, (a1e - s) * half],
            discriminant: disc,
            class,
        })
    }

    /// Writes the sequence as `X_n = c₁μ^{n·k₁} + c₂μ^{n·k₂}` with `μ`
    /// generating the group spanned by the two characteristic roots.
    pub fn subgroup_repr(&self) -> Result<SubgroupRepr, RecurrenceError> {
        let roots = self.char_roots()?;
        if roots.class == DiscriminantClass::Repeated {
            return Err(RecurrenceError::RepeatedRoot);
        }
        let [l1, l2] = roots.roots;
        let field = l1.field();
        let one = field.one();

        let (mu, mut k1, mut k2) = if l1 * l2 == one {
            (l1, 1i64, -1i64)
        } else {
            match common_generator(l1, l2)? {
                Some(found) => found,
                None => {
                    return Ok(SubgroupRepr::NotRepresentable {
                        reason: "no generator with coprime exponents in the search window".into(),
                    })
                }
            }
        };
        let (mut r1, mut r2) = (l1, l2);
        if k1 < k2 {
            std::mem::swap(&mut k1, &mut k2);
            std::mem::swap(&mut r1, &mut r2);
        }

        // Vandermonde [[1, 1], [r1, r2]]·(c1, c2) = (X_0, X_1)
        let x0 = field.embed(self.initials[0]);
        let x1 = field.embed(self.initials[1]);
        let c2 = (x1 - r1 * x0) * (r2 - r1).inv()?;
        let c1 = x0 - c2;

        let extension_degree = if mu.in_base_field() { 1 } else { 2 };
        Ok(SubgroupRepr::Representable(SubgroupDesc {
            generator: mu,
            group_order: mu.mult_order()?,
            exponents: vec![k1, k2],
            coeffs_alpha: vec![c1, c2],
            extension_degree,
        }))
    }
}

fn mat_pow(base: [[FieldElement; 2]; 2], mut e: u64, m: Modulus) -> [[FieldElement; 2]; 2] {
    let mul = |a: [[FieldElement; 2]; 2], b: [[FieldElement; 2]; 2]| {
        let mut c = [[m.zero(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        c
    };
    let mut acc = [[m.one(), m.zero()], [m.zero(), m.one()]];
    let mut b = base;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, b);
        }
        b = mul(b, b);
        e >>= 1;
    }
    acc
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    let (mut r0, mut r1) = (n as i128, (a % n) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(n as i128) as u64)
}

/// Baby-step giant-step discrete log of `target` in the cyclic group of
/// order `n` generated by `base`.
fn discrete_log(base: QuadExtElement, target: QuadExtElement, n: u64) -> Option<u64> {
    let step = (n as f64).sqrt().ceil() as u64 + 1;
    let mut table = HashMap::with_capacity(step as usize);
    let mut cur = base.field().one();
    for j in 0..step {
        table.entry(cur).or_insert(j);
        cur = cur * base;
    }
    let giant = base.pow(step).inv().ok()?;
    let mut gamma = target;
    for i in 0..=step {
        if let Some(&j) = table.get(&gamma) {
            return Some((i * step + j) % n);
        }
        gamma = gamma * giant;
    }
    None
}

/// Finds `μ` with `λ₁ = μ^{k₁}`, `λ₂ = μ^{k₂}`, `gcd(k₁, k₂) = 1`, preferring
/// the smallest `max(k₁, k₁ − k₂)` over a bounded set of candidate generators
/// and exponent representatives.
fn common_generator(
    l1: QuadExtElement,
    l2: QuadExtElement,
) -> Result<Option<(QuadExtElement, i64, i64)>, RecurrenceError> {
    let o1 = l1.mult_order()?;
    let o2 = l2.mult_order()?;
    let g = {
        let (mut a, mut b) = (o1, o2);
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    let n = o1 / g * o2;
    if n == 1 {
        return Ok(None);
    }

    // an element of order n: each prime power comes from whichever root carries it
    let mut mu0 = l1.field().one();
    for (q, e) in factorize(n) {
        let qe = q.pow(e);
        mu0 = mu0
            * if o1 % qe == 0 {
                l1.pow(o1 / qe)
            } else {
                l2.pow(o2 / qe)
            };
    }
    let (Some(e1), Some(e2)) = (discrete_log(mu0, l1, n), discrete_log(mu0, l2, n)) else {
        return Ok(None);
    };

    let mut units: Vec<u64> = vec![1];
    for e in [e1, e2] {
        if mod_inverse(e, n).is_some() {
            units.push(e);
        }
    }
    units.extend((2..n).filter(|&u| mod_inverse(u, n).is_some()).take(32));

    let n_i = n as i64;
    let mut best: Option<(i64, u64, i64, i64)> = None;
    for &u in &units {
        let uinv = mod_inverse(u, n).expect("u is a unit");
        let f1 = ((e1 as u128 * uinv as u128) % n as u128) as i64;
        let f2 = ((e2 as u128 * uinv as u128) % n as u128) as i64;
        for t1 in -2..=1i64 {
            for t2 in -2..=1i64 {
                let (mut k1, mut k2) = (f1 + t1 * n_i, f2 + t2 * n_i);
                if gcd(k1, k2) != 1 {
                    continue;
                }
                if k1 < k2 {
                    std::mem::swap(&mut k1, &mut k2);
                }
                // max(k₁, k₁ − k₂) only bounds the fibers when k₁ > 0
                if k1 < 1 {
                    continue;
                }
                let cost = k1.max(k1 - k2);
                if best.is_none_or(|(c, ..)| cost < c) {
                    best = Some((cost, u, f1 + t1 * n_i, f2 + t2 * n_i));
                }
            }
        }
    }
    Ok(best.map(|(_, u, k1, k2)| (mu0.pow(u), k1, k2)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscriminantClass {
    /// Two distinct roots in `F_p`.
    Split,
    /// Conjugate roots in `F_{p²} \ F_p`.
    Inert,
    Repeated,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharRoots {
    pub roots: [QuadExtElement; 2],
    pub discriminant: FieldElement,
    pub class: DiscriminantClass,
}

/// One period of a purely periodic sequence and its value set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    period: u64,
    values: Vec<FieldElement>,
    value_set: ValueSet,
}

impl Orbit {
    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn values(&self) -> &[FieldElement] {
        &self.values
    }

    pub fn value_set(&self) -> &ValueSet {
        &self.value_set
    }

    pub fn cardinality(&self) -> u64 {
        self.value_set.cardinality()
    }
}

/// `X_n = Σ cᵢ·μ^{n·kᵢ}` with `μ` generating `G ⊂ F_{p^s}*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupDesc {
    pub generator: QuadExtElement,
    pub group_order: u64,
    /// Exponents `k₁ ≥ … ≥ k_m`.
    pub exponents: Vec<i64>,
    pub coeffs_alpha: Vec<QuadExtElement>,
    pub extension_degree: u8,
}

impl SubgroupDesc {
    /// `Σ cᵢ·μ^{n·kᵢ}` evaluated in `F_{p²}`.
    pub fn value_at(&self, n: u64) -> QuadExtElement {
        let x = self.generator.pow(n % self.group_order);
        self.coeffs_alpha
            .iter()
            .zip(&self.exponents)
            .fold(self.generator.field().zero(), |acc, (&c, &k)| {
                acc + c * x.pow_signed(k).expect("generator is a unit")
            })
    }

    /// `max(k₁, k₁ − k_m)`, the fiber bound of `x ↦ Σ cᵢxᵏⁱ`.
    pub fn fiber_factor(&self) -> i64 {
        let k1 = self.exponents[0];
        let km = *self.exponents.last().expect("nonempty exponents");
        k1.max(k1 - km)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubgroupRepr {
    Representable(SubgroupDesc),
    NotRepresentable { reason: String },
}

impl SubgroupRepr {
    pub fn desc(&self) -> Option<&SubgroupDesc> {
        match self {
            SubgroupRepr::Representable(d) => Some(d),
            SubgroupRepr::NotRepresentable { .. } => None,
        }
    }
}

/// Both sides of `|𝐗| ≤ |G| ≤ max(k₁, k₁ − k_m)·|𝐗|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma1Report {
    pub set_card: u64,
    pub group_order: u64,
    pub fiber_factor: i64,
    pub lower_holds: bool,
    pub upper_holds: bool,
    /// `|G| / |𝐗|`, at least 1 when the lower bound holds.
    pub lower_ratio: f64,
    /// `|G| / (max(k₁, k₁ − k_m)·|𝐗|)`, at most 1 when the upper bound holds.
    pub upper_ratio: f64,
}

impl Lemma1Report {
    pub fn holds(&self) -> bool {
        self.lower_holds && self.upper_holds
    }
}

pub fn lemma1_check(orbit: &Orbit, sg: &SubgroupDesc) -> Lemma1Report {
    let x = orbit.cardinality();
    let g = sg.group_order;
    let factor = sg.fiber_factor();
    let upper = factor as i128 * x as i128;
    Lemma1Report {
        set_card: x,
        group_order: g,
        fiber_factor: factor,
        lower_holds: x <= g,
        upper_holds: (g as i128) <= upper,
        lower_ratio: g as f64 / x as f64,
        upper_ratio: g as f64 / upper as f64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn m(p: u64) -> Modulus {
        Modulus::new(p).unwrap()
    }

    fn vals(xs: &[FieldElement]) -> Vec<u64> {
        xs.iter().map(|x| x.value()).collect()
    }

    fn naive(a1: i64, a2: i64, x0: i64, x1: i64, p: i64, n: usize) -> Vec<u64> {
        let mut out = vec![x0.rem_euclid(p), x1.rem_euclid(p)];
        while out.len() < n {
            let k = out.len();
            out.push((a1 * out[k - 1] + a2 * out[k - 2]).rem_euclid(p));
        }
        out.truncate(n);
        out.into_iter().map(|v| v as u64).collect()
    }

    #[test]
    fn kfib_prefixes() {
        let f7 = m(7);
        let fib = RecurrenceSpec::kfib(f7.one()).unwrap();
        assert_eq!(vals(&fib.iterate(10)), vec![0, 1, 1, 2, 3, 5, 1, 6, 0, 6]);
        let pell = RecurrenceSpec::kfib(m(101).elem(2)).unwrap();
        assert_eq!(vals(&pell.iterate(7)), vec![0, 1, 1, 3, 5, 11, 21]);
        assert_eq!(
            RecurrenceSpec::kfib(f7.zero()),
            Err(RecurrenceError::ZeroK)
        );
    }

    #[test]
    fn iterate_edge_cases() {
        let f = m(11);
        let spec = RecurrenceSpec::kfib(f.elem(3)).unwrap();
        assert_eq!(spec.iterate(2), spec.initials().to_vec());
        let constant = RecurrenceSpec::new(vec![f.one()], vec![f.elem(5)]).unwrap();
        assert!(constant.iterate(9).iter().all(|x| x.value() == 5));
        assert_eq!(
            RecurrenceSpec::new(vec![f.one()], vec![]),
            Err(RecurrenceError::Shape { coeffs: 1, initials: 0 })
        );
    }

    #[test]
    fn orbit_examples() {
        let fib7 = RecurrenceSpec::kfib(m(7).one()).unwrap().orbit().unwrap();
        assert_eq!(fib7.period(), 16);
        assert_eq!(fib7.cardinality(), 7);
        let fib5 = RecurrenceSpec::kfib(m(5).one()).unwrap().orbit().unwrap();
        assert_eq!(fib5.period(), 20);

        let f = m(13);
        let constant = RecurrenceSpec::new(vec![f.one()], vec![f.elem(4)])
            .unwrap()
            .orbit()
            .unwrap();
        assert_eq!(constant.period(), 1);
        assert_eq!(constant.value_set().members().collect::<Vec<_>>(), vec![4]);

        let singular =
            RecurrenceSpec::order_two(f.one(), f.zero(), f.one(), f.elem(2)).unwrap();
        assert_eq!(singular.orbit(), Err(RecurrenceError::SingularShift));
    }

    #[test]
    fn orbit_reproduces_initial_state_and_repeats() {
        let f = m(31);
        let spec = RecurrenceSpec::new(
            vec![f.elem(2), f.elem(0), f.elem(5)],
            vec![f.elem(1), f.elem(7), f.elem(3)],
        )
        .unwrap();
        let orbit = spec.orbit().unwrap();
        let pi = orbit.period() as usize;
        let twice = spec.iterate(2 * pi);
        assert_eq!(&twice[..pi], orbit.values());
        assert_eq!(&twice[pi..], orbit.values());
    }

    #[test]
    fn capped_orbit_gives_up() {
        let spec = RecurrenceSpec::kfib(m(7).one()).unwrap();
        assert!(spec.orbit_capped(15).unwrap().is_none());
        assert!(spec.orbit_capped(16).unwrap().is_some());
    }

    #[test]
    fn decimation_examples() {
        let f = m(101);
        let fib = RecurrenceSpec::kfib(f.one()).unwrap();
        let even = fib.decimate(2, 0).unwrap();
        assert_eq!(even.coeffs(), &[f.elem(3), f.elem(-1)]);
        assert_eq!(fib.decimate(1, 0).unwrap(), fib);

        // companion squaring oracle: M = [[1, K], [1, 0]], M² = [[1+K, K], [1, K]]
        let k = 2i64;
        let trace = 1 + k + k;
        let det = (1 + k) * k - k;
        assert_eq!((trace, det), (5, 4));
        let pell = RecurrenceSpec::kfib(f.elem(k)).unwrap();
        let even = pell.decimate(2, 0).unwrap();
        assert_eq!(even.coeffs(), &[f.elem(5), f.elem(-4)]);
        assert_eq!(vals(&even.iterate(4)), vec![0, 1, 5, 21]);
        assert_eq!(5 * 5 - 4, 21);

        let cubic = RecurrenceSpec::new(vec![f.one(); 3], vec![f.one(); 3]).unwrap();
        assert_eq!(cubic.decimate(2, 0), Err(RecurrenceError::OrderNotTwo(3)));
        assert_eq!(fib.decimate(0, 0), Err(RecurrenceError::ZeroStride));
    }

    #[test]
    fn decimation_matches_direct_extraction() {
        for p in [7u64, 13, 101, 211, 499] {
            let f = m(p);
            for k in [1i64, 2, 5, 19] {
                let spec = RecurrenceSpec::kfib(f.elem(k)).unwrap();
                let pi = spec.orbit().unwrap().period();
                for t in [2u64, 3] {
                    for off in [0u64, 1] {
                        let dec = spec.decimate(t, off).unwrap().orbit().unwrap();
                        let direct: Vec<_> = spec
                            .iterate((t * pi + off) as usize)
                            .into_iter()
                            .skip(off as usize)
                            .step_by(t as usize)
                            .take(dec.period() as usize)
                            .collect();
                        assert_eq!(dec.values(), &direct[..], "p={p} K={k} t={t} off={off}");
                    }
                }
            }
        }
    }

    #[test]
    fn char_roots_examples() {
        let f11 = m(11);
        // λ² − 3λ + 1: α₁ = 3, α₂ = −1
        let spec = RecurrenceSpec::order_two(f11.elem(3), f11.elem(-1), f11.zero(), f11.one())
            .unwrap();
        let roots = spec.char_roots().unwrap();
        assert_eq!(roots.discriminant.value(), 5);
        assert_eq!(roots.class, DiscriminantClass::Split);
        let oracle: Vec<u64> = (0..11u64)
            .filter(|l| (l * l + 11 * 11 - 3 * l + 1) % 11 == 0)
            .collect();
        assert_eq!(oracle, vec![5, 9]);
        let mut got: Vec<u64> = roots
            .roots
            .iter()
            .map(|r| r.to_base().unwrap().value())
            .collect();
        got.sort();
        assert_eq!(got, oracle);

        let rep = RecurrenceSpec::order_two(f11.elem(2), f11.elem(-1), f11.zero(), f11.one())
            .unwrap();
        let r = rep.char_roots().unwrap();
        assert_eq!(r.class, DiscriminantClass::Repeated);
        assert_eq!(r.roots[0], r.roots[1]);
        assert_eq!(r.roots[0].to_base(), Some(f11.one()));
        assert_eq!(rep.subgroup_repr(), Err(RecurrenceError::RepeatedRoot));

        let fib7 = RecurrenceSpec::kfib(m(7).one()).unwrap().char_roots().unwrap();
        assert_eq!(fib7.discriminant.value(), 5);
        assert_eq!(fib7.class, DiscriminantClass::Inert);
        assert!(fib7.roots.iter().all(|r| !r.in_base_field()));
    }

    #[test]
    fn char_roots_satisfy_polynomial() {
        for p in [3u64, 7, 11, 101] {
            let f = m(p);
            for a1 in 0..p.min(20) {
                for a2 in 1..p.min(20) {
                    let spec = RecurrenceSpec::order_two(
                        f.elem_u(a1),
                        f.elem_u(a2),
                        f.zero(),
                        f.one(),
                    )
                    .unwrap();
                    let cr = spec.char_roots().unwrap();
                    let k = cr.roots[0].field();
                    for r in cr.roots {
                        let v = r * r - k.embed(f.elem_u(a1)) * r - k.embed(f.elem_u(a2));
                        assert!(v.is_zero());
                    }
                }
            }
        }
        assert_eq!(
            RecurrenceSpec::kfib(m(2).one()).unwrap().char_roots(),
            Err(RecurrenceError::CharacteristicTwo)
        );
    }

    fn check_representation(spec: &RecurrenceSpec) -> SubgroupDesc {
        let desc = spec.subgroup_repr().unwrap().desc().cloned().unwrap();
        let orbit = spec.orbit().unwrap();
        let field = desc.generator.field();
        for (n, &x) in orbit.values().iter().enumerate() {
            assert_eq!(desc.value_at(n as u64), field.embed(x), "n = {n}");
        }
        let roots = spec.char_roots().unwrap().roots;
        for (&c, &k) in desc.coeffs_alpha.iter().zip(&desc.exponents) {
            let _ = c;
            let lam = desc.generator.pow_signed(k).unwrap();
            assert!(roots.contains(&lam));
        }
        assert_eq!(gcd(desc.exponents[0], desc.exponents[1]), 1);
        assert!(desc.exponents[0] >= desc.exponents[1]);
        assert_eq!(desc.group_order, desc.generator.mult_order().unwrap());
        desc
    }

    #[test]
    fn norm_one_representation() {
        let f = m(11);
        let spec =
            RecurrenceSpec::order_two(f.elem(3), f.elem(-1), f.elem(2), f.elem(7)).unwrap();
        let desc = check_representation(&spec);
        assert_eq!(desc.exponents, vec![1, -1]);
        assert_eq!(desc.extension_degree, 1);
        // Vandermonde round trip
        let [c1, c2] = [desc.coeffs_alpha[0], desc.coeffs_alpha[1]];
        let mu = desc.generator;
        let k = mu.field();
        assert_eq!(c1 + c2, k.embed(f.elem(2)));
        assert_eq!(c1 * mu + c2 * mu.inv().unwrap(), k.embed(f.elem(7)));
    }

    #[test]
    fn general_representation_kfib() {
        for p in [7u64, 11, 13, 29, 101] {
            let f = m(p);
            for k in 1..p.min(12) {
                let spec = RecurrenceSpec::kfib(f.elem_u(k)).unwrap();
                if spec.char_roots().unwrap().class == DiscriminantClass::Repeated {
                    continue;
                }
                let desc = check_representation(&spec);
                let orbit = spec.orbit().unwrap();
                let rep = lemma1_check(&orbit, &desc);
                assert!(rep.lower_holds, "p={p} K={k}: {rep:?}");
            }
        }
    }

    #[test]
    fn lemma1_random_norm_one() {
        let mut rng = StdRng::seed_from_u64(1);
        for p in [101u64, 211] {
            let f = m(p);
            let mut done = 0;
            while done < 50 {
                let a1 = f.elem_u(rng.gen_range(0..p));
                if (a1 * a1 - f.elem(4)).is_zero() {
                    continue;
                }
                let (x0, x1) = (f.elem_u(rng.gen_range(0..p)), f.elem_u(rng.gen_range(0..p)));
                if x0.is_zero() && x1.is_zero() {
                    continue;
                }
                let spec = RecurrenceSpec::order_two(a1, f.elem(-1), x0, x1).unwrap();
                let desc = check_representation(&spec);
                assert_eq!(desc.fiber_factor(), 2);
                let rep = lemma1_check(&spec.orbit().unwrap(), &desc);
                assert!(rep.holds(), "{rep:?}");
                done += 1;
            }
        }
    }

    #[test]
    fn lemma1_degenerate_group() {
        let f = m(7);
        let orbit = RecurrenceSpec::new(vec![f.one()], vec![f.elem(3)])
            .unwrap()
            .orbit()
            .unwrap();
        let k = QuadField::new(f).unwrap();
        let sg = SubgroupDesc {
            generator: k.one(),
            group_order: 1,
            exponents: vec![1],
            coeffs_alpha: vec![k.embed(f.elem(3))],
            extension_degree: 1,
        };
        let rep = lemma1_check(&orbit, &sg);
        assert_eq!(rep.set_card, 1);
        assert!(rep.holds());
        assert_eq!(rep.lower_ratio, 1.0);
        assert_eq!(rep.upper_ratio, 1.0);
    }

    #[test]
    fn naive_oracle_spot_check() {
        let spec = RecurrenceSpec::order_two(
            m(97).elem(5),
            m(97).elem(-3),
            m(97).elem(4),
            m(97).elem(9),
        )
        .unwrap();
        assert_eq!(vals(&spec.iterate(50)), naive(5, -3, 4, 9, 97, 50));
    }
}
