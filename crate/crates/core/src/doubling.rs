//! Sumsets, product sets and polynomial images of subsets of `F_p`.

use serde::Serialize;
use thiserror::Error;

use crate::ffield::{FieldElement, Modulus};
use crate::newton::SparseBivarPoly;
use crate::recurrence::{RecurrenceError, RecurrenceSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DoublingError {
    #[error("value sets over different moduli: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error(transparent)]
    Recurrence(#[from] RecurrenceError),
}

/// A subset of `F_p` stored as a bit array of length `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueSet {
    modulus: Modulus,
    words: Vec<u64>,
    cardinality: u64,
}

impl ValueSet {
    pub fn empty(modulus: Modulus) -> Self {
        let p = modulus.value() as usize;
        Self {
            modulus,
            words: vec![0; p.div_ceil(64)],
            cardinality: 0,
        }
    }

    /// Builds a set from raw residues; values are reduced modulo `p`.
    pub fn from_values(modulus: Modulus, values: impl IntoIterator<Item = u64>) -> Self {
        let mut set = Self::empty(modulus);
        for v in values {
            set.insert(v % modulus.value());
        }
        set
    }

    pub fn from_elements(modulus: Modulus, elems: impl IntoIterator<Item = FieldElement>) -> Self {
        Self::from_values(modulus, elems.into_iter().map(|x| x.value()))
    }

    pub fn full(modulus: Modulus) -> Self {
        Self::from_values(modulus, 0..modulus.value())
    }

    #[inline]
    fn insert(&mut self, v: u64) {
        let (w, b) = ((v / 64) as usize, v % 64);
        let mask = 1u64 << b;
        if self.words[w] & mask == 0 {
            self.words[w] |= mask;
            self.cardinality += 1;
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn cardinality(&self) -> u64 {
        self.cardinality
    }

    pub fn is_empty(&self) -> bool {
        self.cardinality == 0
    }

    pub fn contains(&self, v: u64) -> bool {
        v < self.modulus.value() && self.words[(v / 64) as usize] & (1u64 << (v % 64)) != 0
    }

    /// Members in increasing order.
    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let tz = bits.trailing_zeros() as u64;
                bits &= bits - 1;
                Some(i as u64 * 64 + tz)
            })
        })
    }

    pub fn is_subset(&self, other: &ValueSet) -> bool {
        self.modulus == other.modulus
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &ValueSet) -> Result<ValueSet, DoublingError> {
        check(self, other)?;
        let words: Vec<u64> = self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect();
        let cardinality = words.iter().map(|w| w.count_ones() as u64).sum();
        Ok(ValueSet {
            modulus: self.modulus,
            words,
            cardinality,
        })
    }
}

fn check(a: &ValueSet, b: &ValueSet) -> Result<(), DoublingError> {
    if a.modulus == b.modulus {
        Ok(())
    } else {
        Err(DoublingError::ModulusMismatch {
            left: a.modulus.value(),
            right: b.modulus.value(),
        })
    }
}

/// `A + B = {a + b}`.
pub fn sumset(a: &ValueSet, b: &ValueSet) -> Result<ValueSet, DoublingError> {
    check(a, b)?;
    let m = a.modulus;
    let bs: Vec<u64> = b.members().collect();
    let mut out = ValueSet::empty(m);
    for x in a.members() {
        for &y in &bs {
            out.insert(m.add_raw(x, y));
        }
    }
    Ok(out)
}

/// `A · B = {a · b}`.
pub fn productset(a: &ValueSet, b: &ValueSet) -> Result<ValueSet, DoublingError> {
    check(a, b)?;
    let m = a.modulus;
    let bs: Vec<u64> = b.members().collect();
    let mut out = ValueSet::empty(m);
    for x in a.members() {
        for &y in &bs {
            out.insert(m.mul_raw(x, y));
        }
    }
    Ok(out)
}

/// `P(A, B) = {P(a, b)}`.
pub fn poly_image(
    poly: &SparseBivarPoly<FieldElement>,
    a: &ValueSet,
    b: &ValueSet,
) -> Result<ValueSet, DoublingError> {
    check(a, b)?;
    if poly.modulus() != a.modulus {
        return Err(DoublingError::ModulusMismatch {
            left: poly.modulus().value(),
            right: a.modulus.value(),
        });
    }
    let m = a.modulus;
    let (d1, d2) = poly.bidegree();
    let terms: Vec<(u32, u32, u64)> = poly.terms().map(|((i, j), c)| (i, j, c.value())).collect();
    let powers = |x: u64, d: u32| {
        let mut pw = Vec::with_capacity(d as usize + 1);
        let mut cur = 1 % m.value();
        for _ in 0..=d {
            pw.push(cur);
            cur = m.mul_raw(cur, x);
        }
        pw
    };
    let ypows: Vec<Vec<u64>> = b.members().map(|y| powers(y, d2)).collect();
    let mut out = ValueSet::empty(m);
    for x in a.members() {
        let xp = powers(x, d1);
        // row[j] = Σ_i a_ij x^i
        let mut row = vec![0u64; d2 as usize + 1];
        for &(i, j, c) in &terms {
            row[j as usize] = m.add_raw(row[j as usize], m.mul_raw(c, xp[i as usize]));
        }
        for yp in &ypows {
            let v = row
                .iter()
                .zip(yp)
                .fold(0, |acc, (&r, &y)| m.add_raw(acc, m.mul_raw(r, y)));
            out.insert(v);
        }
    }
    Ok(out)
}

/// `|A| < p^{3/4} / 6`, decided exactly as `(6|A|)^4 < p^3`.
pub fn theorem1_hypothesis(set_card: u64, p: u64) -> bool {
    let lhs = (6 * set_card as u128).pow(4);
    let rhs = (p as u128).pow(3);
    lhs < rhs
}

/// Measured doubling of one value set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DoublingReport {
    pub p: u64,
    pub input_card: u64,
    pub sum_card: u64,
    pub prod_card: u64,
    pub poly_card: Option<u64>,
    /// `ln|A+A| / ln|A|`; `None` when `|A| ≤ 1`.
    pub exponent_sum: Option<f64>,
    pub exponent_prod: Option<f64>,
    /// `|A+A| / |A|^{4/3}`.
    pub c_sum: f64,
    pub c_prod: f64,
    pub hypothesis_ok: bool,
}

fn growth_exponent(doubled: u64, base: u64) -> Option<f64> {
    (base > 1).then(|| (doubled as f64).ln() / (base as f64).ln())
}

fn growth_constant(doubled: u64, base: u64) -> f64 {
    doubled as f64 / (base as f64).powf(4.0 / 3.0)
}

impl DoublingReport {
    pub fn for_set(set: &ValueSet, extra: Option<&SparseBivarPoly<FieldElement>>) -> Result<Self, DoublingError> {
        let p = set.modulus().value();
        let n = set.cardinality();
        let sum_card = sumset(set, set)?.cardinality();
        let prod_card = productset(set, set)?.cardinality();
        let poly_card = match extra {
            Some(poly) => Some(poly_image(poly, set, set)?.cardinality()),
            None => None,
        };
        Ok(Self {
            p,
            input_card: n,
            sum_card,
            prod_card,
            poly_card,
            exponent_sum: growth_exponent(sum_card, n),
            exponent_prod: growth_exponent(prod_card, n),
            c_sum: growth_constant(sum_card, n),
            c_prod: growth_constant(prod_card, n),
            hypothesis_ok: theorem1_hypothesis(n, p),
        })
    }
}

/// Orbit, value set and doubling measurements of a recurrence.
pub fn doubling_report(spec: &RecurrenceSpec) -> Result<DoublingReport, DoublingError> {
    let orbit = spec.orbit()?;
    DoublingReport::for_set(orbit.value_set(), None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::seq::index::sample;
    use rand::SeedableRng;

    fn m(p: u64) -> Modulus {
        Modulus::new(p).unwrap()
    }

    fn set(p: u64, xs: &[u64]) -> ValueSet {
        ValueSet::from_values(m(p), xs.iter().copied())
    }

    fn members(s: &ValueSet) -> Vec<u64> {
        s.members().collect()
    }

    fn random_set(rng: &mut StdRng, p: u64, n: usize) -> ValueSet {
        ValueSet::from_values(m(p), sample(rng, p as usize, n).into_iter().map(|v| v as u64))
    }

    #[test]
    fn bitset_bookkeeping() {
        let s = set(131, &[0, 63, 64, 130, 64]);
        assert_eq!(s.cardinality(), 4);
        assert_eq!(members(&s), vec![0, 63, 64, 130]);
        assert!(s.contains(130) && !s.contains(129) && !s.contains(131));
        let popcount: u64 = s.words.iter().map(|w| w.count_ones() as u64).sum();
        assert_eq!(popcount, s.cardinality());
    }

    #[test]
    fn sumset_examples() {
        assert_eq!(members(&sumset(&set(7, &[0]), &set(7, &[0])).unwrap()), vec![0]);
        let a = set(7, &[0, 1, 2]);
        assert_eq!(members(&sumset(&a, &a).unwrap()), vec![0, 1, 2, 3, 4]);
        let full = ValueSet::full(m(7));
        assert_eq!(sumset(&full, &full).unwrap().cardinality(), 7);
        assert!(sumset(&a, &set(11, &[1])).is_err());
    }

    #[test]
    fn productset_examples() {
        let a = set(7, &[0, 1]);
        assert_eq!(members(&productset(&a, &a).unwrap()), vec![0, 1]);
        let b = set(7, &[2, 3]);
        assert_eq!(members(&productset(&b, &b).unwrap()), vec![2, 4, 6]);

        let mut rng = StdRng::seed_from_u64(3);
        let a = random_set(&mut rng, 1009, 50);
        let xs: Vec<u64> = a.members().collect();
        let mut naive = vec![false; 1009];
        for &x in &xs {
            for &y in &xs {
                naive[(x * y % 1009) as usize] = true;
            }
        }
        let expect: Vec<u64> = (0..1009).filter(|&v| naive[v as usize]).collect();
        assert_eq!(members(&productset(&a, &a).unwrap()), expect);
    }

    #[test]
    fn poly_image_special_cases() {
        let f = m(5);
        let p = SparseBivarPoly::from_terms(f, [((1, 0), f.one()), ((0, 2), f.one())]);
        let a = set(5, &[1, 2]);
        assert_eq!(members(&poly_image(&p, &a, &a).unwrap()), vec![0, 1, 2, 3]);

        let mut rng = StdRng::seed_from_u64(5);
        let f = m(211);
        let add = SparseBivarPoly::from_terms(f, [((1, 0), f.one()), ((0, 1), f.one())]);
        let mul = SparseBivarPoly::from_terms(f, [((1, 1), f.one())]);
        for n in 1..=20 {
            let a = random_set(&mut rng, 211, n * 3);
            let b = random_set(&mut rng, 211, n);
            assert_eq!(poly_image(&add, &a, &b).unwrap(), sumset(&a, &b).unwrap());
            assert_eq!(poly_image(&mul, &a, &b).unwrap(), productset(&a, &b).unwrap());
        }
    }

    #[test]
    fn report_examples() {
        let spec = RecurrenceSpec::kfib(m(7).one()).unwrap();
        let r = doubling_report(&spec).unwrap();
        assert_eq!(r.input_card, 7);
        assert_eq!(r.sum_card, 7);
        assert!(!r.hypothesis_ok);
        assert!((r.exponent_sum.unwrap() - 1.0).abs() < 1e-12);

        let single = DoublingReport::for_set(&set(13, &[5]), None).unwrap();
        assert_eq!(single.exponent_sum, None);
        assert_eq!(single.exponent_prod, None);
        assert_eq!(single.c_sum, 1.0);
        assert_eq!(single.c_prod, 1.0);
    }

    #[test]
    fn hypothesis_threshold_is_exact() {
        // p^{3/4}/6 is about 3200.49 for p = 514229 and 633.90 for p = 59369
        assert!(theorem1_hypothesis(3200, 514_229));
        assert!(!theorem1_hypothesis(3201, 514_229));
        assert!(theorem1_hypothesis(633, 59_369));
        assert!(!theorem1_hypothesis(634, 59_369));
        assert!(!theorem1_hypothesis(1, 7));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_set(p: u64) -> impl Strategy<Value = ValueSet> {
            proptest::collection::vec(0..p, 1..40).prop_map(move |v| set(p, &v))
        }

        proptest! {
            #[test]
            fn sumset_commutes_and_is_bounded(a in arb_set(97), b in arb_set(97)) {
                let ab = sumset(&a, &b).unwrap();
                prop_assert_eq!(&ab, &sumset(&b, &a).unwrap());
                prop_assert_eq!(productset(&a, &b).unwrap(), productset(&b, &a).unwrap());
                prop_assert!(ab.cardinality() >= a.cardinality().max(b.cardinality()));
                prop_assert!(ab.cardinality() <= (a.cardinality() * b.cardinality()).min(97));
            }

            #[test]
            fn sumset_monotone(a in arb_set(61), extra in arb_set(61), b in arb_set(61)) {
                let bigger = a.union(&extra).unwrap();
                prop_assert!(sumset(&a, &b).unwrap().is_subset(&sumset(&bigger, &b).unwrap()));
                prop_assert!(productset(&a, &b).unwrap().is_subset(&productset(&bigger, &b).unwrap()));
            }
        }
    }
}
