//! Solution counts on subgroup grids `G×G` and the bounds they are compared
//! against.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::doubling::ValueSet;
use crate::ffield::{factorize, FieldElement, FieldError, Modulus, QuadExtElement, QuadField};
use crate::newton::{NewtonError, SparseBivarPoly};

/// Default `c₀(d₁, d₂)`; the theorem only asserts that some constant exists.
pub const DEFAULT_C0: u64 = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountingError {
    #[error("subgroup order {order} does not divide p² − 1 = {group}")]
    OrderDoesNotDivide { order: u64, group: u64 },
    #[error("subgroup order must be positive")]
    ZeroOrder,
    #[error("polynomial is over F_{poly}, grid is over F_{grid}²")]
    ModulusMismatch { poly: u64, grid: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Newton(#[from] NewtonError),
}

/// The cyclic subgroup `G = ⟨μ⟩ ⊂ F_{p²}*` listed as `μ⁰, μ¹, …, μ^{n−1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupGrid {
    generator: QuadExtElement,
    order: u64,
    elements: Vec<QuadExtElement>,
}

impl SubgroupGrid {
    pub fn from_generator(mu: QuadExtElement) -> Result<Self, CountingError> {
        let order = mu.mult_order()?;
        let one = mu.field().one();
        let elements = std::iter::successors(Some(one), |&x| Some(x * mu))
            .take(order as usize)
            .collect();
        Ok(Self {
            generator: mu,
            order,
            elements,
        })
    }

    /// The unique subgroup of order `n` in `F_{p²}*`. It lies in `F_p*`
    /// exactly when `n | p − 1`.
    pub fn of_order(field: QuadField, n: u64) -> Result<Self, CountingError> {
        if n == 0 {
            return Err(CountingError::ZeroOrder);
        }
        let p = field.modulus().value();
        let group = p * p - 1;
        if !group.is_multiple_of(n) {
            return Err(CountingError::OrderDoesNotDivide { order: n, group });
        }
        let primes: Vec<u64> = factorize(group).into_iter().map(|(q, _)| q).collect();
        let primitive = field
            .elements()
            .filter(|x| !x.is_zero())
            .find(|x| primes.iter().all(|q| x.pow(group / q) != field.one()))
            .expect("F_{p²}* is cyclic");
        Self::from_generator(primitive.pow(group / n))
    }

    pub fn generator(&self) -> QuadExtElement {
        self.generator
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn elements(&self) -> &[QuadExtElement] {
        &self.elements
    }

    pub fn field(&self) -> QuadField {
        self.generator.field()
    }

    pub fn contains(&self, x: QuadExtElement) -> bool {
        !x.is_zero() && x.pow(self.order) == self.field().one()
    }
}

fn check_modulus(p: &SparseBivarPoly<FieldElement>, g: &SubgroupGrid) -> Result<(), CountingError> {
    let (a, b) = (p.modulus(), g.field().modulus());
    if a != b {
        return Err(CountingError::ModulusMismatch {
            poly: a.value(),
            grid: b.value(),
        });
    }
    Ok(())
}

/// `#{(x, y) ∈ G×G : P(x, y) = 0}` by a full scan.
///
/// For each `x` the polynomial collapses to `Σ_j c_j(x)·y^j`, which is then
/// evaluated against a table of the powers `y^j`. Rows are split across the
/// rayon pool.
pub fn solutions_in_grid(
    p: &SparseBivarPoly<FieldElement>,
    g: &SubgroupGrid,
) -> Result<u64, CountingError> {
    check_modulus(p, g)?;
    let field = g.field();
    let (dx, dy) = p.bidegree();
    let n = g.elements.len();
    // powers[e][i] = (μ^i)^e, and since G is cyclic (μ^i)^e = μ^{ie mod n}
    let power_table = |deg: u32| -> Vec<Vec<QuadExtElement>> {
        (0..=deg as u64)
            .map(|e| (0..n as u64).map(|i| g.elements[((i * e) % n as u64) as usize]).collect())
            .collect()
    };
    let xp = power_table(dx);
    let yp = power_table(dy);
    let mut by_j: BTreeMap<u32, Vec<(u32, QuadExtElement)>> = BTreeMap::new();
    for ((i, j), c) in p.terms() {
        by_j.entry(j).or_default().push((i, field.embed(c)));
    }
    let rows: Vec<(u32, &Vec<(u32, QuadExtElement)>)> = by_j.iter().map(|(&j, v)| (j, v)).collect();

    let total = (0..n)
        .into_par_iter()
        .map(|xi| {
            let coeffs: Vec<(usize, QuadExtElement)> = rows
                .iter()
                .map(|(j, terms)| {
                    let c = terms
                        .iter()
                        .fold(field.zero(), |acc, &(i, c)| acc + c * xp[i as usize][xi]);
                    (*j as usize, c)
                })
                .filter(|(_, c)| !c.is_zero())
                .collect();
            (0..n)
                .filter(|&yi| {
                    coeffs
                        .iter()
                        .fold(field.zero(), |acc, &(j, c)| acc + c * yp[j][yi])
                        .is_zero()
                })
                .count() as u64
        })
        .sum();
    Ok(total)
}

/// Second implementation of [`solutions_in_grid`]: scans all of
/// `F_{p²}×F_{p²}` and keeps zeros whose coordinates lie in `G`. Quartic in
/// `p`, intended for `p ≤ 31`.
pub fn solutions_by_field_scan(
    p: &SparseBivarPoly<FieldElement>,
    g: &SubgroupGrid,
) -> Result<u64, CountingError> {
    check_modulus(p, g)?;
    let field = g.field();
    let lifted = p.map_coeffs(field, |c| field.embed(c));
    let all: Vec<QuadExtElement> = field.elements().collect();
    let member: Vec<bool> = all.iter().map(|&x| g.contains(x)).collect();
    let mut count = 0;
    for (i, &x) in all.iter().enumerate() {
        for (j, &y) in all.iter().enumerate() {
            if member[i] && member[j] && lifted.eval(x, y).is_zero() {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// `12·d₁·d₂·(d₁ + d₂)²·|G|^{2/3}`.
pub fn th_bound(d1: u64, d2: u64, g_order: u64) -> f64 {
    let (d1, d2) = (d1 as f64, d2 as f64);
    12.0 * d1 * d2 * (d1 + d2).powi(2) * (g_order as f64).powf(2.0 / 3.0)
}

/// The bound for `Q_r` after substituting a subgroup representation:
/// `12(d₁k₁−l₁)(d₂k₁−l₂)(d₁k₁+d₂k₁−l₁−l₂)²·max(k₁, k₁−k_m)^{2/3}·|𝐗|^{2/3}`.
pub fn prop1_bound(d1: i64, d2: i64, k1: i64, km: i64, l1: i64, l2: i64, x_card: u64) -> f64 {
    let q1 = (d1 * k1 - l1) as f64;
    let q2 = (d2 * k1 - l2) as f64;
    let fiber = k1.max(k1 - km) as f64;
    12.0 * q1 * q2 * (q1 + q2).powi(2) * fiber.powf(2.0 / 3.0) * (x_card as f64).powf(2.0 / 3.0)
}

/// How absolute irreducibility of `P` was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IrreducibilityStatus {
    /// Taken on trust from the caller.
    Assumed,
    /// Certified by the factor search.
    Checked,
    /// The factor search found a factorization or gave up.
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedCheck {
    pub name: &'static str,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub checks: Vec<NamedCheck>,
    pub irreducibility: IrreducibilityStatus,
}

impl HypothesisReport {
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out: Vec<&'static str> = self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
        if self.irreducibility != IrreducibilityStatus::Checked {
            out.push("absolutely_irreducible");
        }
        out
    }

    /// Every named check passes and irreducibility was certified.
    pub fn all_pass(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn get(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.passed)
    }
}

/// Hypotheses of the Theorem 2 bound: `P(0,0) ≠ 0`, `deg_x P(x,0) ≥ 1`,
/// `d₂ ≥ 1` and `10³ < |G| < p^{3/4}/3`.
pub fn th1_hypotheses(
    p: &SparseBivarPoly<FieldElement>,
    g_order: u64,
    prime: u64,
    irreducibility: IrreducibilityStatus,
) -> HypothesisReport {
    let axis_degree = p.support().filter(|&(_, j)| j == 0).map(|(i, _)| i).max().unwrap_or(0);
    let window = g_order > 1000 && (3 * g_order as u128).pow(4) < (prime as u128).pow(3);
    HypothesisReport {
        checks: vec![
            NamedCheck {
                name: "constant_term_nonzero",
                passed: !p.coeff(0, 0).is_zero(),
            },
            NamedCheck {
                name: "x_degree_on_axis",
                passed: axis_degree >= 1,
            },
            NamedCheck {
                name: "d2_positive",
                passed: p.bidegree().1 >= 1,
            },
            NamedCheck {
                name: "group_order_window",
                passed: window,
            },
        ],
        irreducibility,
    }
}

/// Hypotheses of the Theorem 3 bound: `P^♯` has at least two monomials and
/// `c₀ ≤ |G| ≤ p^{3/4}/2`.
pub fn th2_hypotheses(
    p: &SparseBivarPoly<FieldElement>,
    g_order: u64,
    prime: u64,
    c0: u64,
    irreducibility: IrreducibilityStatus,
) -> HypothesisReport {
    let sharp_ok = p.sharp_part().map(|s| s.monomials >= 2).unwrap_or(false);
    let window = g_order >= c0 && (2 * g_order as u128).pow(4) <= (prime as u128).pow(3);
    HypothesisReport {
        checks: vec![
            NamedCheck {
                name: "sharp_part_two_monomials",
                passed: sharp_ok,
            },
            NamedCheck {
                name: "group_order_window",
                passed: window,
            },
        ],
        irreducibility,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountReport {
    pub solutions: u64,
    pub bound_value: f64,
    /// Whether either theorem's hypotheses all pass.
    pub bound_applicable: bool,
    pub hypothesis_failures: Vec<String>,
    pub c0: u64,
}

impl CountReport {
    /// `N ≤ ⌈bound⌉`; vacuous when the bound does not apply.
    pub fn bound_respected(&self) -> bool {
        !self.bound_applicable || self.solutions as f64 <= self.bound_value.ceil()
    }
}

/// Counts solutions and evaluates both theorems' hypotheses. Failures are
/// prefixed `th2:` or `th3:` by theorem.
pub fn count_report(
    p: &SparseBivarPoly<FieldElement>,
    g: &SubgroupGrid,
    c0: u64,
    irreducibility: IrreducibilityStatus,
) -> Result<CountReport, CountingError> {
    let solutions = solutions_in_grid(p, g)?;
    let prime = p.modulus().value();
    let (d1, d2) = p.bidegree();
    let a = th1_hypotheses(p, g.order(), prime, irreducibility);
    let b = th2_hypotheses(p, g.order(), prime, c0, irreducibility);
    let mut failures: Vec<String> = a.failures().iter().map(|f| format!("th2:{f}")).collect();
    failures.extend(b.failures().iter().map(|f| format!("th3:{f}")));
    Ok(CountReport {
        solutions,
        bound_value: th_bound(d1 as u64, d2 as u64, g.order()),
        bound_applicable: a.all_pass() || b.all_pass(),
        hypothesis_failures: failures,
        c0,
    })
}

/// For each `r ∈ P(𝐗, 𝐗)`, the number of pairs with `P(X, Y) = r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberCensus {
    pub counts: BTreeMap<u64, u64>,
    /// `|𝐗|²`.
    pub total: u64,
    /// Exceptional `r` supplied by the caller that occur in the image.
    pub exceptional_present: Vec<u64>,
}

impl FiberCensus {
    /// `M`, the number of distinct values.
    pub fn image_size(&self) -> u64 {
        self.counts.len() as u64
    }

    pub fn max_count(&self) -> u64 {
        self.counts.values().copied().max().unwrap_or(0)
    }

    /// `Σ_r count(r) = |𝐗|²`.
    pub fn totals_match(&self) -> bool {
        self.counts.values().sum::<u64>() == self.total
    }

    /// `M·max_count ≥ |𝐗|²`.
    pub fn pigeonhole_holds(&self) -> bool {
        self.image_size() as u128 * self.max_count() as u128 >= self.total as u128
    }

    /// `M / |𝐗|^{4/3}`, the measured growth constant.
    pub fn growth_ratio(&self) -> f64 {
        let x = (self.total as f64).sqrt();
        self.image_size() as f64 / x.powf(4.0 / 3.0)
    }
}

pub fn fiber_census(
    p: &SparseBivarPoly<FieldElement>,
    set: &ValueSet,
    exceptional: &[FieldElement],
) -> Result<FiberCensus, CountingError> {
    check_set(p, set)?;
    let m = set.modulus();
    let xs: Vec<FieldElement> = set.members().map(|v| m.elem_u(v)).collect();
    let mut values: Vec<u64> = Vec::with_capacity(xs.len() * xs.len());
    for &x in &xs {
        values.extend(xs.iter().map(|&y| p.eval(x, y).value()));
    }
    values.sort_unstable();
    let mut counts = BTreeMap::new();
    for v in values {
        *counts.entry(v).or_insert(0) += 1;
    }
    let mut exceptional_present: Vec<u64> = exceptional
        .iter()
        .map(|r| r.value())
        .filter(|r| counts.contains_key(r))
        .collect();
    exceptional_present.sort_unstable();
    exceptional_present.dedup();
    Ok(FiberCensus {
        counts,
        total: (xs.len() * xs.len()) as u64,
        exceptional_present,
    })
}

fn check_set(p: &SparseBivarPoly<FieldElement>, set: &ValueSet) -> Result<(), CountingError> {
    if p.modulus() != set.modulus() {
        return Err(CountingError::ModulusMismatch {
            poly: p.modulus().value(),
            grid: set.modulus().value(),
        });
    }
    Ok(())
}

/// Exceptional `r` for `P = x + y`: only `r = 0`, where `Q_r` loses its
/// `xy` term.
pub fn sum_family_exceptional(m: Modulus) -> Vec<FieldElement> {
    vec![m.zero()]
}

/// Exceptional `r` for `P = xy` with `X_n = c₁μⁿ + c₂μ⁻ⁿ`: `Q_r` is the
/// P₂ shape with `αγ = c₁²`, `βδ = c₂²`, which factors at `r = 0` and
/// `r = ±4c₁c₂`.
pub fn product_family_exceptional(c1c2: FieldElement) -> Vec<FieldElement> {
    let four = c1c2.modulus().elem(4);
    vec![c1c2.modulus().zero(), four * c1c2, -(four * c1c2)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doubling::poly_image;
    use crate::newton::{p1_poly, p2_poly};
    use crate::recurrence::RecurrenceSpec;

    fn poly(m: Modulus, terms: &[((u32, u32), i64)]) -> SparseBivarPoly<FieldElement> {
        SparseBivarPoly::from_terms(m, terms.iter().map(|&(e, c)| (e, m.elem(c))))
    }

    #[test]
    fn grid_construction() {
        let m = Modulus::new(7).unwrap();
        let f = QuadField::new(m).unwrap();
        let g = SubgroupGrid::of_order(f, 3).unwrap();
        let mut base: Vec<u64> = g.elements().iter().map(|x| x.to_base().unwrap().value()).collect();
        base.sort();
        assert_eq!(base, vec![1, 2, 4]);
        let big = SubgroupGrid::of_order(f, 48).unwrap();
        assert_eq!(big.elements().len(), 48);
        let mut seen = big.elements().to_vec();
        seen.sort_by_key(|x| (x.a().value(), x.b().value()));
        seen.dedup();
        assert_eq!(seen.len(), 48);
        assert_eq!(big.generator().pow(48), f.one());
        assert!(matches!(
            SubgroupGrid::of_order(f, 5),
            Err(CountingError::OrderDoesNotDivide { .. })
        ));
        assert_eq!(SubgroupGrid::of_order(f, 0), Err(CountingError::ZeroOrder));
    }

    #[test]
    fn grid_count_examples() {
        let m = Modulus::new(7).unwrap();
        let f = QuadField::new(m).unwrap();
        let squares = SubgroupGrid::of_order(f, 3).unwrap();
        assert_eq!(solutions_in_grid(&poly(m, &[((1, 0), 1), ((0, 1), 1)]), &squares).unwrap(), 0);
        assert_eq!(solutions_in_grid(&poly(m, &[((0, 0), 1)]), &squares).unwrap(), 0);
        for n in [1, 3, 8, 16, 48] {
            let g = SubgroupGrid::of_order(f, n).unwrap();
            let diag = poly(m, &[((1, 0), 1), ((0, 1), -1)]);
            assert_eq!(solutions_in_grid(&diag, &g).unwrap(), n);
        }
    }

    #[test]
    fn grid_count_matches_field_scan() {
        for p in [3u64, 5, 7, 11] {
            let m = Modulus::new(p).unwrap();
            let f = QuadField::new(m).unwrap();
            let polys = [
                poly(m, &[((1, 0), 1), ((0, 1), 1), ((0, 0), -1)]),
                p1_poly(m.one(), m.elem(2), m.elem(3), m.one(), m.one()),
                p2_poly(m.one(), m.elem(2), m.one(), m.elem(3), m.elem(4)),
            ];
            let n = p * p - 1;
            for d in (1..=n).filter(|d| n % d == 0) {
                let g = SubgroupGrid::of_order(f, d).unwrap();
                for q in &polys {
                    assert_eq!(solutions_in_grid(q, &g).unwrap(), solutions_by_field_scan(q, &g).unwrap());
                }
            }
        }
    }

    #[test]
    fn bound_examples() {
        assert!((th_bound(1, 1, 1000) - 4800.0).abs() < 1e-6);
        assert!((th_bound(2, 2, 1_000_000) - 7.68e6).abs() < 1e-3);
        assert_eq!(th_bound(0, 3, 1000), 0.0);
        let two23 = 2f64.powf(2.0 / 3.0);
        assert!((prop1_bound(1, 1, 1, -1, -1, -1, 1) - 768.0 * two23).abs() < 1e-9);
        assert!((prop1_bound(1, 1, 1, 1, 0, 0, 8) - 48.0 * 4.0).abs() < 1e-9);
        assert_eq!(prop1_bound(1, 1, 1, -1, -1, -1, 0), 0.0);
    }

    #[test]
    fn hypothesis_examples() {
        let m = Modulus::new(1_000_003).unwrap();
        let one = m.one();
        let p1 = p1_poly(one, one, one, one, one);
        let p2 = p2_poly(one, one, one, one, m.elem(3));
        let a = th1_hypotheses(&p1, 2000, m.value(), IrreducibilityStatus::Checked);
        assert_eq!(a.get("constant_term_nonzero"), Some(false));
        let b = th1_hypotheses(&p2, 2000, m.value(), IrreducibilityStatus::Checked);
        assert_eq!(b.get("constant_term_nonzero"), Some(true));
        assert!(b.all_pass());
        let small = th1_hypotheses(&p2, 500, m.value(), IrreducibilityStatus::Checked);
        assert_eq!(small.get("group_order_window"), Some(false));
        let assumed = th1_hypotheses(&p2, 2000, m.value(), IrreducibilityStatus::Assumed);
        assert_eq!(assumed.failures(), vec!["absolutely_irreducible"]);

        let c = th2_hypotheses(&p1, 2000, m.value(), DEFAULT_C0, IrreducibilityStatus::Checked);
        assert!(c.all_pass());
        let d = th2_hypotheses(&p2, 2000, m.value(), DEFAULT_C0, IrreducibilityStatus::Checked);
        assert_eq!(d.get("sharp_part_two_monomials"), Some(false));
        // p^{3/4}/2 ≈ 15811.5 for p = 1000003
        let edge = th2_hypotheses(&p1, 15_811, m.value(), DEFAULT_C0, IrreducibilityStatus::Checked);
        assert!(edge.all_pass());
        let over = th2_hypotheses(&p1, 15_812, m.value(), DEFAULT_C0, IrreducibilityStatus::Checked);
        assert_eq!(over.get("group_order_window"), Some(false));
    }

    #[test]
    fn census_examples() {
        let m = Modulus::new(5).unwrap();
        let sum = poly(m, &[((1, 0), 1), ((0, 1), 1)]);
        let zero = ValueSet::from_values(m, [0]);
        let c = fiber_census(&sum, &zero, &sum_family_exceptional(m)).unwrap();
        assert_eq!(c.counts, BTreeMap::from([(0, 1)]));
        assert_eq!(c.exceptional_present, vec![0]);
        let full = fiber_census(&sum, &ValueSet::full(m), &[]).unwrap();
        assert_eq!(full.image_size(), 5);
        assert!(full.counts.values().all(|&n| n == 5));

        let m11 = Modulus::new(11).unwrap();
        let orbit = RecurrenceSpec::kfib(m11.one()).unwrap().orbit().unwrap();
        let prod = poly(m11, &[((1, 1), 1)]);
        let c = fiber_census(&prod, orbit.value_set(), &[]).unwrap();
        assert!(c.totals_match());
        assert!(c.pigeonhole_holds());
        let image = poly_image(&prod, orbit.value_set(), orbit.value_set()).unwrap();
        assert_eq!(c.image_size(), image.cardinality());
    }

    #[test]
    fn product_exceptional_values() {
        let m = Modulus::new(13).unwrap();
        let ex = product_family_exceptional(m.elem(2));
        assert_eq!(ex.iter().map(|x| x.value()).collect::<Vec<_>>(), vec![0, 8, 5]);
    }
}
