//! Classifies every affine type of rank at most 4 and prints the verdict.

use qshift::cartan::{affine_labels, CartanData};
use qshift::shiftability::classify;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for label in affine_labels(4) {
        let c = CartanData::new(label)?;
        let v = classify(&c)?;
        println!("{:<6} {}", label.to_string(), v.name());
    }
    Ok(())
}
