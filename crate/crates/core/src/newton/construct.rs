use std::collections::BTreeMap;

use crate::ffield::{FieldElement, FieldLike, QuadExtElement, QuadField};

use super::{NewtonError, SparseBivarPoly};

/// Laurent polynomial in one variable.
type Laurent<F> = BTreeMap<i64, F>;

fn laurent_mul<F: FieldLike>(a: &Laurent<F>, b: &Laurent<F>, ctx: F::Ctx) -> Laurent<F> {
    let mut out: Laurent<F> = BTreeMap::new();
    for (&i, &x) in a {
        for (&j, &y) in b {
            let slot = out.entry(i + j).or_insert_with(|| F::zero(ctx));
            *slot = *slot + x * y;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `Q` together with the shifts `l₁, l₂` used to clear negative exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QConstruction<F: FieldLike> {
    pub q: SparseBivarPoly<F>,
    pub l1: i64,
    pub l2: i64,
}

/// `Q(x, y) = x^{−l₁} y^{−l₂} P(Σ αᵢxᵏⁱ, Σ βᵢyᵏⁱ)` where
/// `l₁ = min({i·k_m : a_ij ≠ 0} ∪ {0})` and `l₂` likewise with `j`.
pub fn q_construct<F: FieldLike>(
    p: &SparseBivarPoly<F>,
    alphas: &[F],
    betas: &[F],
    ks: &[i64],
) -> Result<QConstruction<F>, NewtonError> {
    if ks.is_empty() || alphas.len() != ks.len() || betas.len() != ks.len() {
        return Err(NewtonError::Shape(format!(
            "{} alphas, {} betas, {} exponents",
            alphas.len(),
            betas.len(),
            ks.len()
        )));
    }
    if alphas.iter().chain(betas).any(|c| c.is_zero()) {
        return Err(NewtonError::ZeroSubstitutionCoefficient);
    }
    if ks.windows(2).any(|w| w[0] < w[1]) {
        return Err(NewtonError::Shape("exponents must be sorted descending".into()));
    }
    let ctx = p.ctx();
    let km = *ks.last().expect("nonempty");
    let l1 = p.support().map(|(i, _)| i as i64 * km).chain([0]).min().expect("contains 0");
    let l2 = p.support().map(|(_, j)| j as i64 * km).chain([0]).min().expect("contains 0");

    let sum = |coeffs: &[F]| -> Laurent<F> {
        let mut out: Laurent<F> = BTreeMap::new();
        for (&c, &k) in coeffs.iter().zip(ks) {
            let slot = out.entry(k).or_insert_with(|| F::zero(ctx));
            *slot = *slot + c;
        }
        out.retain(|_, c| !c.is_zero());
        out
    };
    let powers = |base: Laurent<F>, d: u32| {
        let mut out = Vec::with_capacity(d as usize + 1);
        let mut cur: Laurent<F> = BTreeMap::from([(0, F::one(ctx))]);
        for _ in 0..=d {
            out.push(cur.clone());
            cur = laurent_mul(&cur, &base, ctx);
        }
        out
    };
    let (d1, d2) = p.bidegree();
    let upow = powers(sum(alphas), d1);
    let vpow = powers(sum(betas), d2);

    let mut q = SparseBivarPoly::zero(ctx);
    for ((i, j), a) in p.terms() {
        for (&ex, &cx) in &upow[i as usize] {
            for (&ey, &cy) in &vpow[j as usize] {
                let (sx, sy) = (ex - l1, ey - l2);
                if sx < 0 || sy < 0 {
                    return Err(NewtonError::NegativeExponent { x: sx, y: sy });
                }
                q.add_term((sx as u32, sy as u32), a * cx * cy);
            }
        }
    }
    Ok(QConstruction { q, l1, l2 })
}

/// `Q_r = Q − r·x^{−l₁} y^{−l₂}`.
pub fn qr_family<F: FieldLike>(
    q: &SparseBivarPoly<F>,
    r: F,
    l1: i64,
    l2: i64,
) -> Result<SparseBivarPoly<F>, NewtonError> {
    if l1 > 0 || l2 > 0 {
        return Err(NewtonError::NegativeExponent { x: -l1, y: -l2 });
    }
    let mut out = q.clone();
    out.add_term(((-l1) as u32, (-l2) as u32), -r);
    Ok(out)
}

/// `αx²y + γxy² − rxy + δx + βy`.
pub fn p1_poly(
    alpha: FieldElement,
    gamma: FieldElement,
    r: FieldElement,
    delta: FieldElement,
    beta: FieldElement,
) -> SparseBivarPoly<FieldElement> {
    SparseBivarPoly::from_terms(
        alpha.modulus(),
        [
            ((2, 1), alpha),
            ((1, 2), gamma),
            ((1, 1), -r),
            ((1, 0), delta),
            ((0, 1), beta),
        ],
    )
}

/// `αγx²y² + αδx² + βγy² − rxy + βδ`.
pub fn p2_poly(
    alpha: FieldElement,
    beta: FieldElement,
    gamma: FieldElement,
    delta: FieldElement,
    r: FieldElement,
) -> SparseBivarPoly<FieldElement> {
    SparseBivarPoly::from_terms(
        alpha.modulus(),
        [
            ((2, 2), alpha * gamma),
            ((2, 0), alpha * delta),
            ((0, 2), beta * gamma),
            ((1, 1), -r),
            ((0, 0), beta * delta),
        ],
    )
}

pub fn p1_hypothesis(
    alpha: FieldElement,
    gamma: FieldElement,
    r: FieldElement,
    delta: FieldElement,
    beta: FieldElement,
) -> bool {
    !(alpha * beta * gamma * delta * r).is_zero()
}

/// `αβγδr ≠ 0` and `r² ≠ 4αβγδ`, the condition printed with the P₂ lemma.
/// It does not rule out `r² = 16αβγδ`, where P₂ factors; see
/// [`p2_symmetric_factorization`].
pub fn p2_hypothesis(
    alpha: FieldElement,
    beta: FieldElement,
    gamma: FieldElement,
    delta: FieldElement,
    r: FieldElement,
) -> bool {
    let prod = alpha * beta * gamma * delta;
    let four = alpha.modulus().elem(4);
    !(prod * r).is_zero() && r * r != four * prod
}

/// Nonzero `r` for which P₂ is reducible over the algebraic closure:
/// `r² = 16αβγδ`.
pub fn p2_reducible_r(
    alpha: FieldElement,
    beta: FieldElement,
    gamma: FieldElement,
    delta: FieldElement,
    r: FieldElement,
) -> bool {
    let prod = alpha * beta * gamma * delta;
    !r.is_zero() && r * r == alpha.modulus().elem(16) * prod
}

pub type QuadPoly = SparseBivarPoly<QuadExtElement>;

/// Solves `P₂ = (A + Bx + Dy + Exy)(A − Bx − Dy + Exy)` over `F_{p²}`.
///
/// Expanding gives `A² = βδ`, `E² = αγ`, `B² = −αδ`, `D² = −βγ` and
/// `2AE − 2BD = −r` on the `xy` coefficient, so a solution exists exactly
/// when `r = 0` or `r² = 16αβγδ`.
pub fn p2_symmetric_factorization(
    alpha: FieldElement,
    beta: FieldElement,
    gamma: FieldElement,
    delta: FieldElement,
    r: FieldElement,
) -> Result<Option<(QuadPoly, QuadPoly)>, NewtonError> {
    let m = alpha.modulus();
    let field = QuadField::new(m)?;
    let target = p2_poly(alpha, beta, gamma, delta, r).map_coeffs(field, |c| field.embed(c));
    let a0 = field.sqrt_base(beta * delta);
    let e0 = field.sqrt_base(alpha * gamma);
    let b0 = field.sqrt_base(-(alpha * delta));
    let d0 = field.sqrt_base(-(beta * gamma));
    let two = field.embed(m.elem(2));
    let minus_r = field.embed(-r);
    for signs in 0u8..8 {
        let pick = |v: QuadExtElement, bit: u8| if signs & bit != 0 { -v } else { v };
        let (a, e, b, d) = (a0, pick(e0, 1), pick(b0, 2), pick(d0, 4));
        if two * a * e - two * b * d != minus_r {
            continue;
        }
        let f = SparseBivarPoly::from_terms(field, [((0, 0), a), ((1, 0), b), ((0, 1), d), ((1, 1), e)]);
        let g = SparseBivarPoly::from_terms(field, [((0, 0), a), ((1, 0), -b), ((0, 1), -d), ((1, 1), e)]);
        debug_assert_eq!(&f * &g, target);
        return Ok(Some((f, g)));
    }
    Ok(None)
}

/// The symmetric factorization at the printed boundary `r² = 4αβγδ`.
/// Returns `None` when no such factorization exists, which is the case
/// for every `p > 3`.
pub fn p2_boundary_factorization(
    alpha: FieldElement,
    beta: FieldElement,
    gamma: FieldElement,
    delta: FieldElement,
    r: FieldElement,
) -> Result<Option<(QuadPoly, QuadPoly)>, NewtonError> {
    let prod = alpha * beta * gamma * delta;
    if r * r != alpha.modulus().elem(4) * prod {
        return Err(NewtonError::Hypothesis("r² = 4αβγδ"));
    }
    p2_symmetric_factorization(alpha, beta, gamma, delta, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::Modulus;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn nz(rng: &mut StdRng, m: Modulus) -> FieldElement {
        m.elem_u(rng.gen_range(1..m.value()))
    }

    #[test]
    fn q_for_sum_and_product() {
        let m = Modulus::new(7).unwrap();
        let (a, b, c, d) = (m.elem(2), m.elem(3), m.elem(4), m.elem(5));
        let sum = SparseBivarPoly::from_terms(m, [((1, 0), m.one()), ((0, 1), m.one())]);
        let qc = q_construct(&sum, &[a, b], &[c, d], &[1, -1]).unwrap();
        assert_eq!((qc.l1, qc.l2), (-1, -1));
        let expect = SparseBivarPoly::from_terms(m, [((2, 1), a), ((0, 1), b), ((1, 2), c), ((1, 0), d)]);
        assert_eq!(qc.q, expect);

        let r = m.elem(3);
        let qr = qr_family(&qc.q, r, qc.l1, qc.l2).unwrap();
        assert_eq!(qr.coeff(1, 1), -r);
        assert_eq!(qr_family(&qc.q, m.zero(), qc.l1, qc.l2).unwrap(), qc.q);

        let prod = SparseBivarPoly::from_terms(m, [((1, 1), m.one())]);
        let qc = q_construct(&prod, &[a, b], &[c, d], &[1, -1]).unwrap();
        let qr = qr_family(&qc.q, r, qc.l1, qc.l2).unwrap();
        assert_eq!(qr, p2_poly(a, b, c, d, r));
    }

    #[test]
    fn q_identity_substitution() {
        let m = Modulus::new(11).unwrap();
        let x = SparseBivarPoly::from_terms(m, [((1, 0), m.one())]);
        let qc = q_construct(&x, &[m.elem(4)], &[m.elem(9)], &[1]).unwrap();
        assert_eq!(qc.q, SparseBivarPoly::from_terms(m, [((1, 0), m.elem(4))]));
        assert_eq!((qc.l1, qc.l2), (0, 0));
    }

    #[test]
    fn q_errors() {
        let m = Modulus::new(11).unwrap();
        let x = SparseBivarPoly::from_terms(m, [((1, 0), m.one())]);
        assert_eq!(
            q_construct(&x, &[m.zero()], &[m.one()], &[1]),
            Err(NewtonError::ZeroSubstitutionCoefficient)
        );
        assert!(matches!(
            q_construct(&x, &[m.one(), m.one()], &[m.one(), m.one()], &[-1, 1]),
            Err(NewtonError::Shape(_))
        ));
        assert!(qr_family(&x, m.one(), 1, 0).is_err());
    }

    #[test]
    fn q_reproduces_lemma_families() {
        let mut rng = StdRng::seed_from_u64(9);
        for p in [7u64, 11, 101] {
            let m = Modulus::new(p).unwrap();
            let sum = SparseBivarPoly::from_terms(m, [((1, 0), m.one()), ((0, 1), m.one())]);
            let prod = SparseBivarPoly::from_terms(m, [((1, 1), m.one())]);
            for _ in 0..50 {
                let (a, b, c, d, r) = (nz(&mut rng, m), nz(&mut rng, m), nz(&mut rng, m), nz(&mut rng, m), nz(&mut rng, m));
                let qc = q_construct(&sum, &[a, b], &[c, d], &[1, -1]).unwrap();
                assert_eq!(qr_family(&qc.q, r, qc.l1, qc.l2).unwrap(), p1_poly(a, c, r, d, b));
                let qc = q_construct(&prod, &[a, b], &[c, d], &[1, -1]).unwrap();
                assert_eq!(qr_family(&qc.q, r, qc.l1, qc.l2).unwrap(), p2_poly(a, b, c, d, r));
            }
        }
    }

    #[test]
    fn hypotheses() {
        let m = Modulus::new(7).unwrap();
        let one = m.one();
        assert!(p1_hypothesis(one, one, one, one, one));
        assert!(!p1_hypothesis(one, one, m.zero(), one, one));
        assert!(!p1_hypothesis(one, one, one, one, m.zero()));
        assert!(p2_hypothesis(one, one, one, one, one));
        assert!(!p2_hypothesis(one, one, one, one, m.elem(2)));
        assert!(!p2_hypothesis(one, one, one, one, m.zero()));
    }

    #[test]
    fn symmetric_factorization_exists_iff_r_squared_is_16_prod() {
        for p in [5u64, 7, 11] {
            let m = Modulus::new(p).unwrap();
            for r in m.elements() {
                let (one, two) = (m.one(), m.elem(2));
                let found = p2_symmetric_factorization(one, two, one, one, r).unwrap();
                let expect = r.is_zero() || p2_reducible_r(one, two, one, one, r);
                assert_eq!(found.is_some(), expect, "p={p} r={r}");
                if let Some((f, g)) = found {
                    let k = f.ctx();
                    let target = p2_poly(one, two, one, one, r).map_coeffs(k, |c| k.embed(c));
                    assert_eq!(&f * &g, target);
                }
            }
        }
    }

    #[test]
    fn boundary_factorization_absent_above_three() {
        let m = Modulus::new(7).unwrap();
        let one = m.one();
        // r = −2: r² = 4 = 4αβγδ
        assert_eq!(p2_boundary_factorization(one, one, one, one, m.elem(-2)).unwrap(), None);
        assert_eq!(
            p2_boundary_factorization(one, one, one, one, one),
            Err(NewtonError::Hypothesis("r² = 4αβγδ"))
        );
        // at p = 3, 4 ≡ 16 and the two conditions agree
        let m3 = Modulus::new(3).unwrap();
        let one = m3.one();
        assert!(p2_boundary_factorization(one, one, one, one, m3.elem(2)).unwrap().is_some());
    }
}
