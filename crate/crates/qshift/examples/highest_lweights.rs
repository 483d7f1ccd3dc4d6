//! Highest l-weights of `W^+`, `W^-` for `C3~1` and of `W` for `D3~2`,
//! compared with the closed formula for every valid sign map.

use qshift::cartan::CartanData;
use qshift::lweights::{compare_component, o_sign, Component, Method};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (label, comp) in [("C3~1", Component::Plus), ("C3~1", Component::Minus), ("D3~2", Component::Full)] {
        let c = CartanData::parse(label)?;
        let cmp = compare_component(&c, comp, Method::Braid, 8)?;
        let lw = cmp.computed.specialize(&o_sign(&c));
        println!("{label} {comp:?} at {:?}: matches {}", cmp.vector, cmp.passed());
        for (i, f) in lw.nodes.iter().zip(&lw.f) {
            println!("  f_{i}(z) = {f}");
        }
    }
    Ok(())
}
