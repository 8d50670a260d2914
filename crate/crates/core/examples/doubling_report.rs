//! Sumset, product set and polynomial image of a value set.

use recurrent_doubling::doubling::{poly_image, DoublingReport};
use recurrent_doubling::ffield::Modulus;
use recurrent_doubling::newton::SparseBivarPoly;
use recurrent_doubling::recurrence::RecurrenceSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for p in [59_369, 514_229] {
        let m = Modulus::new(p)?;
        let orbit = RecurrenceSpec::kfib(m.one())?.orbit()?;
        let x2y2 = SparseBivarPoly::from_terms(m, [((2, 0), m.one()), ((0, 2), m.one())]);
        let report = DoublingReport::for_set(orbit.value_set(), Some(&x2y2))?;
        println!("{}", serde_json::to_string_pretty(&report)?);
        let image = poly_image(&x2y2, orbit.value_set(), orbit.value_set())?;
        assert_eq!(Some(image.cardinality()), report.poly_card);
    }
    Ok(())
}
