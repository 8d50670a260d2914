//! Newton polygons of the two polynomial families and their Minkowski splits.

use recurrent_doubling::ffield::Modulus;
use recurrent_doubling::newton::{
    minkowski_splits, newton_polygon, p1_poly, p2_poly, q_construct, SparseBivarPoly,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = Modulus::new(101)?;
    let (a, b, g, d, r) = (m.elem(2), m.elem(3), m.elem(5), m.elem(7), m.elem(11));

    // x + y and xy after substituting x -> a x + b/x, y -> g y + d/y
    let plus = q_construct(
        &SparseBivarPoly::from_terms(m, [((1, 0), m.one()), ((0, 1), m.one())]),
        &[a, b],
        &[g, d],
        &[1, -1],
    )?;
    println!("Q for x + y: {} with shifts ({}, {})", plus.q, plus.l1, plus.l2);

    for (name, poly) in [("P1", p1_poly(a, g, r, d, b)), ("P2", p2_poly(a, b, g, d, r))] {
        let q = newton_polygon(&poly)?;
        println!("{name}: vertices {:?}", q.vertices());
        for s in minkowski_splits(&q).iter().filter(|s| !s.is_trivial()) {
            println!("  {:?}: {:?} + {:?}", s.kind, s.summand_a.vertices(), s.summand_b.vertices());
        }
    }
    Ok(())
}
