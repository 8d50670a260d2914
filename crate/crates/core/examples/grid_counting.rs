//! Zeros of polynomials on subgroup grids against the 12 d1 d2 (d1+d2)^2 |G|^(2/3) bound.

use recurrent_doubling::counting::{count_report, IrreducibilityStatus, SubgroupGrid, DEFAULT_C0};
use recurrent_doubling::ffield::{Modulus, QuadField};
use recurrent_doubling::newton::{irreducible_oracle, p1_poly, IrreducibilityScope, OracleCaps, SparseBivarPoly};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // p^{3/4}/3 ≈ 1875 and p^{3/4}/2 ≈ 2812, so |G| = 1087 and 1288 sit in both windows
    let m = Modulus::new(100_003)?;
    let field = QuadField::new(m)?;
    let polys = [
        ("P1", p1_poly(m.one(), m.elem(2), m.elem(3), m.elem(4), m.elem(5))),
        ("x + y + 1", SparseBivarPoly::from_terms(m, [((1, 0), m.one()), ((0, 1), m.one()), ((0, 0), m.one())])),
        ("x^2 + 3y - 2", SparseBivarPoly::from_terms(m, [((2, 0), m.one()), ((0, 1), m.elem(3)), ((0, 0), m.elem(-2))])),
    ];
    for (name, poly) in &polys {
        let scope = irreducible_oracle(poly, 1, OracleCaps::default())?.scope();
        let status = if scope == Some(IrreducibilityScope::Absolute) {
            IrreducibilityStatus::Checked
        } else {
            IrreducibilityStatus::Failed
        };
        for order in [1087, 1288] {
            let grid = SubgroupGrid::of_order(field, order)?;
            let r = count_report(poly, &grid, DEFAULT_C0, status)?;
            println!(
                "{name:>12} |G|={order}: N = {}, bound {:.0}, applicable {}, failures {:?}",
                r.solutions, r.bound_value, r.bound_applicable, r.hypothesis_failures
            );
            assert!(r.bound_respected());
        }
    }
    Ok(())
}
