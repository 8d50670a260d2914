//! Writing X_n = c1 mu^(n k1) + c2 mu^(n k2) and checking Lemma 1.

use recurrent_doubling::ffield::Modulus;
use recurrent_doubling::recurrence::{lemma1_check, RecurrenceSpec, SubgroupRepr};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = Modulus::new(1009)?;
    let specs = [
        ("Fibonacci", RecurrenceSpec::kfib(m.one())?),
        ("norm one", RecurrenceSpec::order_two(m.elem(7), m.elem(-1), m.elem(2), m.elem(9))?),
        ("K=3", RecurrenceSpec::kfib(m.elem(3))?),
    ];
    for (name, spec) in specs {
        let roots = spec.char_roots()?;
        println!("{name}: roots {} and {} ({:?})", roots.roots[0], roots.roots[1], roots.class);
        match spec.subgroup_repr()? {
            SubgroupRepr::Representable(desc) => {
                let orbit = spec.orbit()?;
                let lemma = lemma1_check(&orbit, &desc);
                println!(
                    "  mu = {}, |G| = {}, k = {:?}, |X| = {}, sandwich holds: {}",
                    desc.generator,
                    desc.group_order,
                    desc.exponents,
                    orbit.cardinality(),
                    lemma.holds()
                );
            }
            SubgroupRepr::NotRepresentable { reason } => println!("  not representable: {reason}"),
        }
    }
    Ok(())
}
