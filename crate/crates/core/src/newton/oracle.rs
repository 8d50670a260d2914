//! Exhaustive factor search guided by Newton polygon decompositions.
//!
//! If `P = f·g` then `Newt(P) = Newt(f) + Newt(g)`, so every factorization
//! shows up under one of the Minkowski splits of `Newt(P)`. For each split we
//! place unknown coefficients on all lattice points of the two summands and
//! solve `f·g = P` coefficientwise by depth-first search: any equation with a
//! single unknown that enters linearly is solved directly, and the remaining
//! unknowns are enumerated over the whole field.

use crate::ffield::{FieldElement, FieldLike, QuadExtElement, QuadField};

use super::minkowski::minkowski_splits;
use super::polygon::{newton_polygon, LatticePolygon, Point};
use super::{NewtonError, SparseBivarPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCaps {
    /// Largest number of coefficient slots allowed in either factor.
    pub max_slots: usize,
    /// Largest number of enumerated search branches per split.
    pub max_work: u64,
}

impl Default for OracleCaps {
    fn default() -> Self {
        Self {
            max_slots: 6,
            max_work: 100_000_000,
        }
    }
}

/// What an irreducible verdict certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IrreducibilityScope {
    /// Irreducible over the algebraic closure.
    Absolute,
    /// Irreducible over `F_{p^degree}` only.
    OverField { degree: u8 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<F: FieldLike> {
    Irreducible { scope: IrreducibilityScope },
    Reducible { factors: Vec<SparseBivarPoly<F>> },
    Inconclusive { reason: String },
}

impl<F: FieldLike> Verdict<F> {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, Verdict::Irreducible { .. })
    }

    pub fn is_reducible(&self) -> bool {
        matches!(self, Verdict::Reducible { .. })
    }

    pub fn factors(&self) -> Option<&[SparseBivarPoly<F>]> {
        match self {
            Verdict::Reducible { factors } => Some(factors),
            _ => None,
        }
    }
}

/// Verdict over `F_p` or over `F_{p²}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome {
    Base(Verdict<FieldElement>),
    Quadratic(Verdict<QuadExtElement>),
}

impl OracleOutcome {
    pub fn is_irreducible(&self) -> bool {
        match self {
            OracleOutcome::Base(v) => v.is_irreducible(),
            OracleOutcome::Quadratic(v) => v.is_irreducible(),
        }
    }

    pub fn is_reducible(&self) -> bool {
        match self {
            OracleOutcome::Base(v) => v.is_reducible(),
            OracleOutcome::Quadratic(v) => v.is_reducible(),
        }
    }

    pub fn scope(&self) -> Option<IrreducibilityScope> {
        match self {
            OracleOutcome::Base(Verdict::Irreducible { scope })
            | OracleOutcome::Quadratic(Verdict::Irreducible { scope }) => Some(*scope),
            _ => None,
        }
    }

    /// One-line human summary listing any factors found.
    pub fn summary(&self) -> String {
        fn describe<F: FieldLike>(v: &Verdict<F>, field: &str) -> String {
            match v {
                Verdict::Irreducible { scope: IrreducibilityScope::Absolute } => {
                    format!("irreducible over {field} (absolutely irreducible)")
                }
                Verdict::Irreducible { .. } => format!("irreducible over {field}"),
                Verdict::Reducible { factors } => {
                    let parts: Vec<String> = factors.iter().map(|f| format!("[{f}]")).collect();
                    format!("reducible over {field}: {}", parts.join(" * "))
                }
                Verdict::Inconclusive { reason } => format!("inconclusive: {reason}"),
            }
        }
        match self {
            OracleOutcome::Base(v) => describe(v, "F_p"),
            OracleOutcome::Quadratic(v) => describe(v, "F_p^2"),
        }
    }
}

/// Runs the factor search over `F_p` (`ext_degree = 1`) or `F_{p²}`
/// (`ext_degree = 2`).
pub fn irreducible_oracle(
    p: &SparseBivarPoly<FieldElement>,
    ext_degree: u8,
    caps: OracleCaps,
) -> Result<OracleOutcome, NewtonError> {
    match ext_degree {
        1 => Ok(OracleOutcome::Base(irreducible_in(p, 1, caps)?)),
        2 => {
            let field = QuadField::new(p.modulus())?;
            let lifted = p.map_coeffs(field, |c| field.embed(c));
            Ok(OracleOutcome::Quadratic(irreducible_in(&lifted, 2, caps)?))
        }
        d => Err(NewtonError::Shape(format!("extension degree {d} unsupported"))),
    }
}

/// Factor search in `F[x, y]`, where `F` has degree `ext_degree` over `F_p`
/// and `P` has all its coefficients in `F_p`.
///
/// An irreducible verdict over `F_{p^e}` is absolute when the dilation gcd
/// `g` of `Newt(P)` divides `e`. The absolutely irreducible factors of `P`
/// form one Frobenius orbit of some size `s`, all with the same Newton
/// polygon, so `s | g | e`. Then every factor is defined over
/// `F_{p^s} ⊆ F_{p^e}`, and irreducibility over `F_{p^e}` forces `s = 1`.
pub(crate) fn irreducible_in<F: FieldLike>(
    p: &SparseBivarPoly<F>,
    ext_degree: u8,
    caps: OracleCaps,
) -> Result<Verdict<F>, NewtonError> {
    if p.is_zero() {
        return Err(NewtonError::ZeroPolynomial);
    }
    let ctx = p.ctx();
    if p.total_degree() == 0 {
        return Ok(Verdict::Inconclusive {
            reason: "constant polynomial".into(),
        });
    }

    // pull out x^a y^b first
    let content = p.monomial_content();
    if content != (0, 0) || p.len() == 1 {
        let single_var = if content.0 > 0 { (1, 0) } else { (0, 1) };
        let factor_exp = if p.len() == 1 { single_var } else { content };
        if p.len() == 1 && p.total_degree() == 1 {
            return Ok(Verdict::Irreducible {
                scope: IrreducibilityScope::Absolute,
            });
        }
        let mono = SparseBivarPoly::monomial(ctx, factor_exp, F::one(ctx));
        let rest = p.shift_down(factor_exp);
        return Ok(Verdict::Reducible {
            factors: vec![mono, rest],
        });
    }

    let polygon = newton_polygon(p)?;
    let mut inconclusive = None;
    for split in minkowski_splits(&polygon).into_iter().filter(|s| !s.is_trivial()) {
        let (a, b) = (&split.summand_a, &split.summand_b);
        let (na, nb) = (a.lattice_points().len(), b.lattice_points().len());
        if na > caps.max_slots || nb > caps.max_slots {
            inconclusive = Some(format!(
                "split with {na} + {nb} coefficient slots exceeds cap {}",
                caps.max_slots
            ));
            continue;
        }
        match search_split(p, a, b, caps.max_work) {
            SearchResult::Found(f, g) => {
                assert_eq!(&f * &g, *p, "factor search returned a non-factorization");
                return Ok(Verdict::Reducible { factors: vec![f, g] });
            }
            SearchResult::Exhausted => {}
            SearchResult::OverBudget => {
                inconclusive = Some(format!("work cap {} exceeded", caps.max_work));
            }
        }
    }
    if let Some(reason) = inconclusive {
        return Ok(Verdict::Inconclusive { reason });
    }
    let g = polygon.dilation_gcd();
    let scope = if g > 0 && (ext_degree as u64).is_multiple_of(g) {
        IrreducibilityScope::Absolute
    } else {
        IrreducibilityScope::OverField { degree: ext_degree }
    };
    Ok(Verdict::Irreducible { scope })
}

enum SearchResult<F: FieldLike> {
    Found(SparseBivarPoly<F>, SparseBivarPoly<F>),
    Exhausted,
    OverBudget,
}

/// One bilinear equation `Σ f_u·g_v = target` over pairs with `u + v = w`.
struct Equation<F> {
    pairs: Vec<(usize, usize)>,
    target: F,
}

struct Search<'a, F: FieldLike> {
    equations: Vec<Equation<F>>,
    n_f: usize,
    /// Slots that sit on a vertex of their summand and must be nonzero.
    vertex: Vec<bool>,
    domain: &'a [F],
    ctx: F::Ctx,
    work: u64,
    max_work: u64,
}

type Assignment<F> = Vec<Option<F>>;

impl<F: FieldLike> Search<'_, F> {
    /// Solves every single-unknown linear equation until nothing changes.
    /// Returns `false` on a contradiction.
    fn propagate(&self, vals: &mut Assignment<F>) -> bool {
        loop {
            let mut changed = false;
            for eq in &self.equations {
                let mut known = F::zero(self.ctx);
                let mut open: Option<(usize, F)> = None;
                let mut open_count = 0;
                let mut nonlinear = false;
                for &(fi, gi) in &eq.pairs {
                    let (u, v) = (fi, self.n_f + gi);
                    match (vals[u], vals[v]) {
                        (Some(x), Some(y)) => known = known + x * y,
                        (Some(x), None) | (None, Some(x)) if x.is_zero() => {}
                        (Some(x), None) => {
                            open_count += 1;
                            open = Some((v, x));
                        }
                        (None, Some(y)) => {
                            open_count += 1;
                            open = Some((u, y));
                        }
                        (None, None) => {
                            open_count += 1;
                            nonlinear = true;
                        }
                    }
                }
                match open_count {
                    0 => {
                        if known != eq.target {
                            return false;
                        }
                    }
                    1 if !nonlinear => {
                        let (var, coef) = open.expect("one open term");
                        let value = (eq.target - known) * coef.inv().expect("nonzero coefficient");
                        if self.vertex[var] && value.is_zero() {
                            return false;
                        }
                        vals[var] = Some(value);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    /// Unassigned variable from the equation with the fewest open terms.
    fn pick(&self, vals: &Assignment<F>) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for eq in &self.equations {
            let open: Vec<usize> = eq
                .pairs
                .iter()
                .flat_map(|&(fi, gi)| [fi, self.n_f + gi])
                .filter(|&v| vals[v].is_none())
                .collect();
            if let Some(&v) = open.iter().min() {
                if best.is_none_or(|(n, _)| open.len() < n) {
                    best = Some((open.len(), v));
                }
            }
        }
        best.map(|(_, v)| v)
            .or_else(|| vals.iter().position(|v| v.is_none()))
    }

    fn dfs(&mut self, mut vals: Assignment<F>) -> Result<Option<Assignment<F>>, ()> {
        if !self.propagate(&mut vals) {
            return Ok(None);
        }
        let Some(var) = self.pick(&vals) else {
            return Ok(Some(vals));
        };
        self.work += self.domain.len() as u64;
        if self.work > self.max_work {
            return Err(());
        }
        for &c in self.domain {
            if self.vertex[var] && c.is_zero() {
                continue;
            }
            let mut next = vals.clone();
            next[var] = Some(c);
            if let Some(found) = self.dfs(next)? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }
}

fn search_split<F: FieldLike>(
    p: &SparseBivarPoly<F>,
    a: &LatticePolygon,
    b: &LatticePolygon,
    max_work: u64,
) -> SearchResult<F> {
    let ctx = p.ctx();
    let pa = a.lattice_points();
    let pb = b.lattice_points();
    let n_f = pa.len();

    let mut targets: Vec<(Point, Vec<(usize, usize)>)> = Vec::new();
    for (fi, u) in pa.iter().enumerate() {
        for (gi, v) in pb.iter().enumerate() {
            let w = (u.0 + v.0, u.1 + v.1);
            match targets.iter_mut().find(|(p, _)| *p == w) {
                Some((_, pairs)) => pairs.push((fi, gi)),
                None => targets.push((w, vec![(fi, gi)])),
            }
        }
    }
    let covered = |e: (u32, u32)| targets.iter().any(|(w, _)| *w == (e.0 as i64, e.1 as i64));
    if !p.support().all(covered) {
        return SearchResult::Exhausted;
    }
    let equations = targets
        .into_iter()
        .map(|(w, pairs)| Equation {
            pairs,
            target: p.coeff(w.0 as u32, w.1 as u32),
        })
        .collect();

    let mut vertex: Vec<bool> = pa.iter().map(|q| a.vertices().contains(q)).collect();
    vertex.extend(pb.iter().map(|q| b.vertices().contains(q)));

    let domain = F::all_elements(ctx);
    let mut search = Search {
        equations,
        n_f,
        vertex,
        domain: &domain,
        ctx,
        work: 0,
        max_work,
    };

    // scale f so its coefficient at the anchor vertex is 1
    let mut vals: Assignment<F> = vec![None; n_f + pb.len()];
    let anchor = pa.iter().position(|&q| q == a.anchor()).expect("anchor is a lattice point");
    vals[anchor] = Some(F::one(ctx));

    match search.dfs(vals) {
        Err(()) => SearchResult::OverBudget,
        Ok(None) => SearchResult::Exhausted,
        Ok(Some(vals)) => {
            let build = |points: &[Point], coeffs: &[Option<F>]| {
                SparseBivarPoly::from_terms(
                    ctx,
                    points
                        .iter()
                        .zip(coeffs)
                        .map(|(&(x, y), c)| ((x as u32, y as u32), c.expect("assigned"))),
                )
            };
            SearchResult::Found(build(&pa, &vals[..n_f]), build(&pb, &vals[n_f..]))
        }
    }
}

/// Whether `a = c·b` for some nonzero scalar `c`.
pub fn same_up_to_scalar<F: FieldLike>(a: &SparseBivarPoly<F>, b: &SparseBivarPoly<F>) -> bool {
    let (Some((ea, ca)), Some((eb, cb))) = (a.terms().next(), b.terms().next()) else {
        return a.is_zero() && b.is_zero();
    };
    if ea != eb || a.len() != b.len() {
        return false;
    }
    let scale = ca * cb.inv().expect("stored coefficients are nonzero");
    *a == b.scale(scale)
}
