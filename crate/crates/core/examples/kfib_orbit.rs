//! Periods and value sets of K-Fibonacci sequences.

use recurrent_doubling::ffield::Modulus;
use recurrent_doubling::recurrence::RecurrenceSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for p in [2, 3, 5, 7, 11, 514_229] {
        let m = Modulus::new(p)?;
        let orbit = RecurrenceSpec::kfib(m.one())?.orbit()?;
        println!("K=1 p={p}: period {}, |X| = {}", orbit.period(), orbit.cardinality());
    }
    let m = Modulus::new(11)?;
    for k in 1..=4 {
        let spec = RecurrenceSpec::kfib(m.elem(k))?;
        let head: Vec<u64> = spec.iterate(10).iter().map(|x| x.value()).collect();
        println!("K={k} p=11: {head:?} ...");
    }
    Ok(())
}
