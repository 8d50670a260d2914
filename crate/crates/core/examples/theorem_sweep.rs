//! Hypothesis primes, Theorem 1 verdicts, and a small CSV sweep.

use recurrent_doubling::harness::{
    emit_report, find_hypothesis_primes, run_sweep, verify_theorem1, KSelection, ReportFormat,
    SweepConfig, DEFAULT_INDEX_CAP, DEFAULT_PERIOD_CAP,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let primes = find_hypothesis_primes(1_000_000, 1, DEFAULT_INDEX_CAP, DEFAULT_PERIOD_CAP)?;
    println!("K=1 hypothesis primes up to 10^6: {primes:?}");
    for p in [59_369, 514_229] {
        let v = verify_theorem1(p, 1)?;
        println!(
            "p={p}: |F|={} |F+F|={} |F.F|={} c_sum={:.3} c_prod={:.3} containments {}",
            v.set_card, v.sum_card, v.prod_card, v.c_sum, v.c_prod, v.containments_hold()
        );
    }
    let config = SweepConfig {
        prime_range: (3, 60),
        k_values: KSelection::List(vec![1, 2]),
        worker_count: 4,
        ..SweepConfig::default()
    };
    let rows = run_sweep(&config)?;
    print!("{}", String::from_utf8(emit_report(&rows, ReportFormat::Csv)?)?);
    Ok(())
}
