//! Sweeps over `(p, K)` cells, the Theorem 1 verification pipeline and
//! report serialization.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use rand::rngs::StdRng;
use rand::seq::index::sample;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::doubling::{productset, sumset, theorem1_hypothesis, DoublingError, DoublingReport};
use crate::ffield::{FieldError, Modulus};
use crate::recurrence::{RecurrenceError, RecurrenceSpec};

/// Largest `limit` accepted by [`find_hypothesis_primes`].
pub const DESK_SCALE_LIMIT: u64 = 10_000_000;
/// How far the rank-of-apparition scan looks by default.
pub const DEFAULT_INDEX_CAP: u64 = 1000;
pub const DEFAULT_PERIOD_CAP: u64 = 100_000;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("empty prime range [{lo}, {hi}]")]
    EmptyRange { lo: u64, hi: u64 },
    #[error("no K values selected")]
    EmptyK,
    #[error("unsupported format {0:?} (expected csv, json or plot-data)")]
    UnsupportedFormat(String),
    #[error("bad K selection {0:?} (expected a list, \"all\" or \"sample:N\")")]
    BadKSelection(String),
    #[error("limit {0} exceeds the desk-scale ceiling {DESK_SCALE_LIMIT}")]
    LimitTooLarge(u64),
    #[error("bad config: {0}")]
    Config(String),
    #[error("CSV line {line}: {msg}")]
    Csv { line: usize, msg: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invariant violated at p={p}, K={k}: {what}")]
    Invariant { p: u64, k: u64, what: String },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Recurrence(#[from] RecurrenceError),
    #[error(transparent)]
    Doubling(#[from] DoublingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
    PlotData,
}

impl FromStr for ReportFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            "plot-data" => Ok(Self::PlotData),
            other => Err(HarnessError::UnsupportedFormat(other.to_string())),
        }
    }
}

/// Which `K` to run for each prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KSelection {
    List(Vec<u64>),
    /// Every `K` in `1..p`.
    All,
    /// `n` distinct `K` in `1..p` per prime, drawn from the seeded RNG.
    Sample(usize),
}

impl FromStr for KSelection {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || HarnessError::BadKSelection(s.to_string());
        if s == "all" {
            return Ok(Self::All);
        }
        if let Some(n) = s.strip_prefix("sample:") {
            return n.parse().map(Self::Sample).map_err(|_| bad());
        }
        let ks = s
            .split(',')
            .map(|k| k.trim().parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| bad())?;
        Ok(Self::List(ks))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    pub prime_range: (u64, u64),
    pub k_values: KSelection,
    /// Cells whose period exceeds this are skipped.
    pub max_period_cap: u64,
    /// Keep only cells with `|𝓕_p| < p^{3/4}/6`.
    pub hypothesis_filter: bool,
    pub output_format: ReportFormat,
    pub seed: u64,
    pub worker_count: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            prime_range: (3, 1000),
            k_values: KSelection::List(vec![1]),
            max_period_cap: DEFAULT_PERIOD_CAP,
            hypothesis_filter: false,
            output_format: ReportFormat::Csv,
            seed: 0,
            worker_count: 1,
        }
    }
}

fn six_decimals<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round6(*x))
}

fn six_decimals_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_f64(round6(*v)),
        None => s.serialize_none(),
    }
}

fn round6(x: f64) -> f64 {
    format!("{x:.6}").parse().expect("formatted float parses")
}

/// One `(p, K)` cell. Serialized keys match the CSV header.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub p: u64,
    #[serde(rename = "K")]
    pub k: u64,
    pub period: u64,
    pub set_card: u64,
    pub sum_card: u64,
    pub prod_card: u64,
    #[serde(serialize_with = "six_decimals_opt")]
    pub exp_sum: Option<f64>,
    #[serde(serialize_with = "six_decimals_opt")]
    pub exp_prod: Option<f64>,
    #[serde(serialize_with = "six_decimals")]
    pub c_sum: f64,
    #[serde(serialize_with = "six_decimals")]
    pub c_prod: f64,
    pub hypothesis_ok: bool,
    /// The derived even-index coefficients `(1 + 2K, −K²)` differ from the
    /// printed `(K² + 2, −1)` modulo `p`.
    pub decim_mismatch: bool,
}

pub const CSV_HEADER: &str =
    "p,K,period,set_card,sum_card,prod_card,exp_sum,exp_prod,c_sum,c_prod,hypothesis_ok,decim_mismatch";

/// Derived vs printed coefficients of the even-index subsequence.
pub fn decimation_mismatch(spec: &RecurrenceSpec, k: u64) -> bool {
    let m = spec.modulus();
    let (trace, det) = spec.companion_power_invariants(2);
    let k = m.elem_u(k);
    let printed = (k * k + m.elem(2), -m.one());
    (trace, -det) != printed
}

/// Primes in `[lo, hi]` by sieve.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    let mut composite = vec![false; hi as usize + 1];
    let mut out = Vec::new();
    for n in 2..=hi as usize {
        if composite[n] {
            continue;
        }
        if n as u64 >= lo {
            out.push(n as u64);
        }
        for m in (n * n..=hi as usize).step_by(n) {
            composite[m] = true;
        }
    }
    out
}

fn ks_for(p: u64, sel: &KSelection, seed: u64) -> Vec<u64> {
    let mut ks = match sel {
        KSelection::List(ks) => ks.clone(),
        KSelection::All => (1..p).collect(),
        KSelection::Sample(n) => {
            let pool = (p - 1) as usize;
            // one stream per prime so the draw does not depend on scheduling
            let mut rng = StdRng::seed_from_u64(seed ^ p.wrapping_mul(0x9E37_79B9_7F4A_7C15));
            sample(&mut rng, pool, (*n).min(pool)).into_iter().map(|i| i as u64 + 1).collect()
        }
    };
    ks.sort_unstable();
    ks.dedup();
    ks
}

/// Computes one cell. `None` when `K ≡ 0 (mod p)` or the period exceeds the
/// cap.
pub fn sweep_cell(p: u64, k: u64, period_cap: u64) -> Result<Option<SweepRow>, HarnessError> {
    let m = Modulus::new(p)?;
    if k.is_multiple_of(p) {
        return Ok(None);
    }
    let spec = RecurrenceSpec::kfib(m.elem_u(k))?;
    let Some(orbit) = spec.orbit_capped(period_cap)? else {
        return Ok(None);
    };
    let report = DoublingReport::for_set(orbit.value_set(), None)?;

    let even = spec.decimate(2, 0)?.orbit()?;
    let even_sum = sumset(even.value_set(), even.value_set())?;
    let even_prod = productset(even.value_set(), even.value_set())?;
    if report.sum_card < even_sum.cardinality() || report.prod_card < even_prod.cardinality() {
        return Err(HarnessError::Invariant {
            p,
            k,
            what: "even-index doubling exceeds full doubling".into(),
        });
    }

    Ok(Some(SweepRow {
        p,
        k,
        period: orbit.period(),
        set_card: report.input_card,
        sum_card: report.sum_card,
        prod_card: report.prod_card,
        exp_sum: report.exponent_sum,
        exp_prod: report.exponent_prod,
        c_sum: report.c_sum,
        c_prod: report.c_prod,
        hypothesis_ok: report.hypothesis_ok,
        decim_mismatch: decimation_mismatch(&spec, k),
    }))
}

/// Rows ordered by `p`, then `K`. The output does not depend on
/// `worker_count`.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>, HarnessError> {
    let (lo, hi) = config.prime_range;
    let primes = primes_in(lo, hi);
    if primes.is_empty() {
        return Err(HarnessError::EmptyRange { lo, hi });
    }
    if config.max_period_cap == 0 {
        return Err(HarnessError::Config("period cap must be positive".into()));
    }
    if matches!(&config.k_values, KSelection::List(ks) if ks.is_empty())
        || config.k_values == KSelection::Sample(0)
    {
        return Err(HarnessError::EmptyK);
    }
    let cells: Vec<(u64, u64)> = primes
        .iter()
        .flat_map(|&p| ks_for(p, &config.k_values, config.seed).into_iter().map(move |k| (p, k)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.worker_count.max(1))
        .build()
        .map_err(|e| HarnessError::Config(e.to_string()))?;
    let rows: Vec<Option<SweepRow>> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(p, k)| sweep_cell(p, k, config.max_period_cap))
            .collect::<Result<_, _>>()
    })?;
    Ok(rows
        .into_iter()
        .flatten()
        .filter(|r| !config.hypothesis_filter || r.hypothesis_ok)
        .collect())
}

/// Smallest `n ≥ 1` with `p | F_n`, searched up to `cap`.
pub fn rank_of_apparition(p: u64, k: u64, cap: u64) -> Option<u64> {
    let m = Modulus::new(p).ok()?;
    let kk = k % p;
    let (mut a, mut b) = (0u64, 1u64);
    for n in 1..=cap {
        // (F_{n-1}, F_n) -> (F_n, F_{n+1})
        (a, b) = (b, m.add_raw(b, m.mul_raw(kk, a)));
        if a == 0 {
            return Some(n);
        }
    }
    None
}

/// Primes `p ≤ limit` whose `K`-Fibonacci value set satisfies
/// `|𝓕_p| < p^{3/4}/6`.
///
/// Candidates are primes with rank of apparition at most `index_cap`, i.e.
/// prime factors of `F_1, …, F_{index_cap}`; the period of each candidate
/// is then computed directly under `period_cap`.
pub fn find_hypothesis_primes(
    limit: u64,
    k: u64,
    index_cap: u64,
    period_cap: u64,
) -> Result<Vec<u64>, HarnessError> {
    if limit > DESK_SCALE_LIMIT {
        return Err(HarnessError::LimitTooLarge(limit));
    }
    let candidates: Vec<u64> = primes_in(2, limit)
        .into_par_iter()
        .filter(|&p| !k.is_multiple_of(p) && rank_of_apparition(p, k, index_cap).is_some())
        .collect();
    let mut out = Vec::new();
    for p in candidates {
        let m = Modulus::new(p)?;
        let spec = RecurrenceSpec::kfib(m.elem_u(k))?;
        if let Some(orbit) = spec.orbit_capped(period_cap)? {
            if theorem1_hypothesis(orbit.cardinality(), p) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// Everything the Theorem 1 argument uses for one cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem1Verdict {
    pub p: u64,
    #[serde(rename = "K")]
    pub k: u64,
    pub period: u64,
    pub set_card: u64,
    pub sum_card: u64,
    pub prod_card: u64,
    pub c_sum: f64,
    pub c_prod: f64,
    pub hypothesis_ok: bool,
    /// `|𝓕_p′|` for the even-index subsequence.
    pub even_card: u64,
    pub even_sum_card: u64,
    pub even_prod_card: u64,
    /// `𝓕_p′ + 𝓕_p′ ⊆ 𝓕_p + 𝓕_p` as sets.
    pub sum_contains: bool,
    pub prod_contains: bool,
    /// `𝓕_p = 𝓕_p′ ∪ 𝓕_p″`.
    pub union_ok: bool,
    pub decim_mismatch: bool,
    /// `|𝓕_p| ≤ 1`, where the growth constants carry no information.
    pub degenerate: bool,
}

impl Theorem1Verdict {
    pub fn containments_hold(&self) -> bool {
        self.sum_contains && self.prod_contains && self.union_ok
    }
}

pub fn verify_theorem1(p: u64, k: u64) -> Result<Theorem1Verdict, HarnessError> {
    let m = Modulus::new(p)?;
    let spec = RecurrenceSpec::kfib(m.elem_u(k))?;
    let orbit = spec.orbit()?;
    let set = orbit.value_set();
    let full_sum = sumset(set, set)?;
    let full_prod = productset(set, set)?;

    let even = spec.decimate(2, 0)?.orbit()?;
    let odd = spec.decimate(2, 1)?.orbit()?;
    let es = even.value_set();
    let even_sum = sumset(es, es)?;
    let even_prod = productset(es, es)?;
    let report = DoublingReport::for_set(set, None)?;

    Ok(Theorem1Verdict {
        p,
        k,
        period: orbit.period(),
        set_card: set.cardinality(),
        sum_card: full_sum.cardinality(),
        prod_card: full_prod.cardinality(),
        c_sum: report.c_sum,
        c_prod: report.c_prod,
        hypothesis_ok: report.hypothesis_ok,
        even_card: es.cardinality(),
        even_sum_card: even_sum.cardinality(),
        even_prod_card: even_prod.cardinality(),
        sum_contains: even_sum.is_subset(&full_sum),
        prod_contains: even_prod.is_subset(&full_prod),
        union_ok: es.union(odd.value_set())? == *set,
        decim_mismatch: decimation_mismatch(&spec, k),
        degenerate: set.cardinality() <= 1,
    })
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".to_string(), |v| format!("{v:.6}"))
}

/// Serializes rows. Output bytes depend only on the rows.
pub fn emit_report(rows: &[SweepRow], format: ReportFormat) -> Result<Vec<u8>, HarnessError> {
    let mut out = String::new();
    match format {
        ReportFormat::Csv => {
            out.push_str(CSV_HEADER);
            out.push('\n');
            for r in rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{:.6},{:.6},{},{}",
                    r.p,
                    r.k,
                    r.period,
                    r.set_card,
                    r.sum_card,
                    r.prod_card,
                    fmt_opt(r.exp_sum),
                    fmt_opt(r.exp_prod),
                    r.c_sum,
                    r.c_prod,
                    r.hypothesis_ok,
                    r.decim_mismatch
                )
                .expect("writing to a String");
            }
        }
        ReportFormat::Json => {
            out = serde_json::to_string_pretty(rows).expect("rows serialize");
            out.push('\n');
        }
        ReportFormat::PlotData => {
            let mut ks: Vec<u64> = rows.iter().map(|r| r.k).collect();
            ks.sort_unstable();
            ks.dedup();
            for (i, k) in ks.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                for r in rows.iter().filter(|r| r.k == *k) {
                    writeln!(out, "{} {}", r.set_card, r.sum_card).expect("writing to a String");
                }
            }
        }
    }
    Ok(out.into_bytes())
}

/// Parses CSV produced by [`emit_report`].
pub fn parse_csv(text: &str) -> Result<Vec<SweepRow>, HarnessError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == CSV_HEADER => {}
        _ => {
            return Err(HarnessError::Csv {
                line: 1,
                msg: "missing or wrong header".into(),
            })
        }
    }
    lines
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, line)| {
            let err = |msg: &str| HarnessError::Csv {
                line: i + 1,
                msg: msg.to_string(),
            };
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 12 {
                return Err(err("expected 12 fields"));
            }
            let int = |s: &str| s.parse::<u64>().map_err(|_| err("bad integer"));
            let float = |s: &str| s.parse::<f64>().map_err(|_| err("bad float"));
            let opt = |s: &str| if s == "NA" { Ok(None) } else { float(s).map(Some) };
            let boolean = |s: &str| s.parse::<bool>().map_err(|_| err("bad boolean"));
            Ok(SweepRow {
                p: int(f[0])?,
                k: int(f[1])?,
                period: int(f[2])?,
                set_card: int(f[3])?,
                sum_card: int(f[4])?,
                prod_card: int(f[5])?,
                exp_sum: opt(f[6])?,
                exp_prod: opt(f[7])?,
                c_sum: float(f[8])?,
                c_prod: float(f[9])?,
                hypothesis_ok: boolean(f[10])?,
                decim_mismatch: boolean(f[11])?,
            })
        })
        .collect()
}

/// Writes `bytes` to `path`, or to stdout when `path` is `None`.
pub fn write_output(path: Option<&std::path::Path>, bytes: &[u8]) -> Result<(), HarnessError> {
    use std::io::Write;
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|source| HarnessError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => std::io::stdout().write_all(bytes).map_err(|source| HarnessError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}
