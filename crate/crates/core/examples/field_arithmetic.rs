//! Prime field and quadratic extension arithmetic.

use recurrent_doubling::ffield::{smallest_nonresidue, Modulus, QuadField};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = Modulus::new(13)?;
    let a = m.elem(5);
    println!("5^-1 mod 13 = {}", a.inv()?);
    println!("legendre(5 | 13) = {}", a.legendre());
    println!("sqrt(10) mod 13 = {:?}", m.elem(10).sqrt().map(|r| r.value()));
    println!("ord(2) mod 13 = {}", m.elem(2).mult_order()?);

    let f = QuadField::new(m)?;
    println!("F_169 = F_13[w]/(w^2 - {})", smallest_nonresidue(m)?);
    let z = f.elem(m.elem(3), m.elem(4));
    println!("z = {z}, norm {}, order {}", z.norm(), z.mult_order()?);
    println!("sqrt(5) in F_169 = {}", f.sqrt_base(a));
    Ok(())
}
