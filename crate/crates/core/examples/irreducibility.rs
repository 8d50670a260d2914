//! Factor search on P1 and P2, including the r values where P2 splits.

use recurrent_doubling::ffield::Modulus;
use recurrent_doubling::newton::{
    irreducible_oracle, p1_poly, p2_poly, p2_reducible_r, p2_symmetric_factorization, OracleCaps,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = Modulus::new(13)?;
    let caps = OracleCaps::default();
    let one = m.one();
    let p1 = p1_poly(m.elem(2), m.elem(3), m.elem(4), m.elem(5), m.elem(6));
    println!("P1: {}", irreducible_oracle(&p1, 2, caps)?.summary());

    for r in 1..13 {
        let r = m.elem(r);
        let verdict = irreducible_oracle(&p2_poly(one, one, one, one, r), 2, caps)?;
        let note = if p2_reducible_r(one, one, one, one, r) { " (r^2 = 16)" } else { "" };
        println!("P2 r={r}{note}: {}", verdict.summary());
    }
    if let Some((f, g)) = p2_symmetric_factorization(one, one, one, one, m.elem(4))? {
        println!("r=4 symmetric factors: [{f}] * [{g}]");
    }
    Ok(())
}
