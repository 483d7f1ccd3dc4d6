//! Expands `X_{delta - alpha_2}` of `C2~1` through the braid group action,
//! compares it with the closed form and applies both to `W^+`.

use qshift::algebra::{represent_on, Algebra};
use qshift::cartan::CartanData;
use qshift::lweights::{root_vector, Method};
use qshift::oscillator::FockVec;
use qshift::repmodules::w_module;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c = CartanData::parse("C2~1")?;
    let alg = Algebra::new(&c)?;
    let braid = root_vector(&alg, 2, 1, Method::Braid)?;
    let closed = root_vector(&alg, 2, 1, Method::Closed)?;
    println!("braid expansion: {} terms", braid.len());
    println!("closed form: {}", closed.render());
    let w = w_module(&c, 6)?;
    let v = FockVec::basis(&[0, 0]);
    println!("braid  . v = {}", represent_on(&braid, &w.images, &v));
    println!("closed . v = {}", represent_on(&closed, &w.images, &v));
    Ok(())
}
