use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use recurrent_doubling::counting::{count_report, IrreducibilityStatus, SubgroupGrid, DEFAULT_C0};
use recurrent_doubling::ffield::{FieldElement, Modulus, QuadField};
use recurrent_doubling::harness::{
    emit_report, run_sweep, sweep_cell, write_output, HarnessError, KSelection, ReportFormat,
    SweepConfig, DEFAULT_PERIOD_CAP,
};
use recurrent_doubling::newton::{
    irreducible_oracle, minkowski_splits, newton_polygon, IrreducibilityScope, OracleCaps,
    SparseBivarPoly,
};
use recurrent_doubling::recurrence::RecurrenceSpec;

#[derive(Parser)]
#[command(name = "recdbl", version, about = "Doubling of linear recurrent value sets mod p")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the K-Fibonacci sequence mod p with its period.
    Seq {
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 1)]
        k: u64,
        /// Number of terms to print.
        #[arg(long, default_value_t = 20)]
        terms: usize,
        #[arg(long, default_value_t = DEFAULT_PERIOD_CAP)]
        period_cap: u64,
    },
    /// One-cell doubling report.
    Doubling {
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long, default_value_t = DEFAULT_PERIOD_CAP)]
        period_cap: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Newton polygon and Minkowski splits of a polynomial read as
    /// "i j coeff" lines from stdin.
    Polygon {
        #[arg(long)]
        prime: u64,
    },
    /// Irreducibility verdict for a polynomial read from stdin.
    Irred {
        #[arg(long)]
        prime: u64,
        /// Search over F_p (1) or F_{p²} (2).
        #[arg(long, default_value_t = 2)]
        ext: u8,
        #[arg(long, default_value_t = OracleCaps::default().max_slots)]
        max_slots: usize,
        #[arg(long, default_value_t = OracleCaps::default().max_work)]
        max_work: u64,
    },
    /// Zeros of a polynomial from stdin on G×G, with the bound hypotheses.
    Count {
        #[arg(long)]
        prime: u64,
        /// Order of the subgroup G of F_{p²}*.
        #[arg(long)]
        order: u64,
        #[arg(long, default_value_t = DEFAULT_C0)]
        c0: u64,
    },
    /// Full sweep over a prime range.
    Sweep {
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        range: Vec<u64>,
        /// Comma-separated list, "all", or "sample:N".
        #[arg(long, default_value = "1")]
        k: String,
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long, default_value_t = DEFAULT_PERIOD_CAP)]
        period_cap: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Only keep cells satisfying the Theorem 1 hypothesis.
        #[arg(long)]
        hypothesis_only: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Invariant(String),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Invariant { .. } => Failure::Invariant(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn read_poly(m: Modulus) -> Result<SparseBivarPoly<FieldElement>, Failure> {
    let mut text = String::new();
    std::io::stdin().read_to_string(&mut text).map_err(usage)?;
    SparseBivarPoly::from_text(m, &text).map_err(usage)
}

fn run(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Seq {
            prime,
            k,
            terms,
            period_cap,
        } => {
            let m = Modulus::new(prime).map_err(usage)?;
            let spec = RecurrenceSpec::kfib(m.elem_u(k)).map_err(usage)?;
            let shown: Vec<String> = spec.iterate(terms).iter().map(|x| x.to_string()).collect();
            println!("terms {}", shown.join(" "));
            match spec.orbit_capped(period_cap).map_err(usage)? {
                Some(orbit) => {
                    println!("period {}", orbit.period());
                    println!("set_card {}", orbit.cardinality());
                }
                None => println!("period > {period_cap}"),
            }
        }
        Cmd::Doubling {
            prime,
            k,
            format,
            period_cap,
            out,
        } => {
            let format: ReportFormat = format.parse()?;
            let row = sweep_cell(prime, k, period_cap)?
                .ok_or_else(|| usage(format!("no cell: K ≡ 0 mod p or period exceeds {period_cap}")))?;
            write_output(out.as_deref(), &emit_report(&[row], format)?)?;
        }
        Cmd::Polygon { prime } => {
            let m = Modulus::new(prime).map_err(usage)?;
            let poly = read_poly(m)?;
            let q = newton_polygon(&poly).map_err(usage)?;
            println!("vertices {:?}", q.vertices());
            println!("edges {:?}", q.edges());
            println!("dilation_gcd {}", q.dilation_gcd());
            for s in minkowski_splits(&q).iter().filter(|s| !s.is_trivial()) {
                println!(
                    "split {:?} {:?} + {:?}",
                    s.kind,
                    s.summand_a.vertices(),
                    s.summand_b.vertices()
                );
            }
        }
        Cmd::Irred {
            prime,
            ext,
            max_slots,
            max_work,
        } => {
            let m = Modulus::new(prime).map_err(usage)?;
            let poly = read_poly(m)?;
            let caps = OracleCaps { max_slots, max_work };
            let verdict = irreducible_oracle(&poly, ext, caps).map_err(usage)?;
            println!("{}", verdict.summary());
        }
        Cmd::Count { prime, order, c0 } => {
            let m = Modulus::new(prime).map_err(usage)?;
            let poly = read_poly(m)?;
            let field = QuadField::new(m).map_err(usage)?;
            let grid = SubgroupGrid::of_order(field, order).map_err(usage)?;
            let verdict = irreducible_oracle(&poly, 2, OracleCaps::default()).map_err(usage)?;
            let status = if verdict.scope() == Some(IrreducibilityScope::Absolute) {
                IrreducibilityStatus::Checked
            } else {
                IrreducibilityStatus::Failed
            };
            let report = count_report(&poly, &grid, c0, status).map_err(usage)?;
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            if !report.bound_respected() {
                return Err(Failure::Invariant(format!(
                    "N = {} exceeds the bound {}",
                    report.solutions, report.bound_value
                )));
            }
        }
        Cmd::Sweep {
            range,
            k,
            format,
            period_cap,
            workers,
            seed,
            hypothesis_only,
            out,
        } => {
            let (lo, hi) = match range.as_slice() {
                [lo, hi] => (*lo, *hi),
                _ => (3, 1000),
            };
            let config = SweepConfig {
                prime_range: (lo, hi),
                k_values: k.parse::<KSelection>()?,
                max_period_cap: period_cap,
                hypothesis_filter: hypothesis_only,
                output_format: format.parse()?,
                seed,
                worker_count: workers,
            };
            let rows = run_sweep(&config)?;
            write_output(out.as_deref(), &emit_report(&rows, config.output_format)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match std::panic::catch_unwind(|| run(cli.cmd)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Failure::Usage(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Ok(Err(Failure::Invariant(msg))) => {
            eprintln!("invariant violated: {msg}");
            ExitCode::from(2)
        }
        Err(_) => ExitCode::from(2),
    }
}
