//! Weight table and highest vectors of a Fock module of `C2~1` with
//! `eps = (1, 1)`, truncated at `M = 4`.

use qshift::cartan::CartanData;
use qshift::oscillator::OscParams;
use qshift::repmodules::fock_module;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c = CartanData::parse("C2~1")?;
    let m = fock_module(&c, &OscParams::with_eps(vec![1, 1]), 4)?;
    for v in m.basis() {
        println!("{v:?} grade {:>3} weight {}", m.grade(&v), m.weight_of_basis(&v)?);
    }
    println!("multiplicity free: {}", m.is_multiplicity_free()?);
    println!("highest vectors: {:?}", m.highest_vectors());
    println!("listed: {:?}", m.expected_highest());
    Ok(())
}
