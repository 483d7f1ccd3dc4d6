//! Checks the defining relations on the oscillator images of `A2~2`, both
//! as symbolic words and as truncated matrices.

use qshift::cartan::CartanData;
use qshift::oscillator::{dj_images, verify_dj_relations, verify_dj_relations_matrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c = CartanData::parse("A2~2")?;
    let img = dj_images(&c)?;
    for (i, x) in img.xp.iter().enumerate() {
        println!("X{i}+ -> {x}");
    }
    let words = verify_dj_relations(&img, &c, 6)?;
    let mats = verify_dj_relations_matrix(&img, &c, 6)?;
    println!("{} word relations, all pass: {}", words.checks.len(), words.passed());
    println!("{} matrix relations, all pass: {}", mats.checks.len(), mats.passed());
    Ok(())
}
