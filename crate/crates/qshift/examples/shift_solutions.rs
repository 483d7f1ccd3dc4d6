//! Builds the canonical solution of the shift system for `C2~1` and checks
//! every equation symbolically.

use qshift::cartan::CartanData;
use qshift::shiftability::{canonical_solution, verify_solution};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c = CartanData::parse("C2~1")?;
    let sol = canonical_solution(&c)?;
    for (i, phi) in sol.render().iter().enumerate() {
        println!("phi_{i} = {phi}");
    }
    let report = verify_solution(&sol, &c)?;
    for e in &report.checks {
        println!("{:<28} {}", e.name, if e.passed { "ok" } else { &e.residual });
    }
    Ok(())
}
