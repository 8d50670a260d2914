//! Even and odd subsequences via companion matrix powers.

use recurrent_doubling::ffield::Modulus;
use recurrent_doubling::recurrence::RecurrenceSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = Modulus::new(101)?;
    for k in [1, 2, 5] {
        let spec = RecurrenceSpec::kfib(m.elem(k))?;
        let even = spec.decimate(2, 0)?;
        let odd = spec.decimate(2, 1)?;
        println!(
            "K={k}: even coeffs {:?} (printed form would be ({}, {}))",
            even.coeffs().iter().map(|c| c.value()).collect::<Vec<_>>(),
            (k * k + 2) % 101,
            m.elem(-1)
        );
        let full = spec.orbit()?;
        let union = even.orbit()?.value_set().union(odd.orbit()?.value_set())?;
        println!("  union of halves equals X: {}", union == *full.value_set());
    }
    Ok(())
}
