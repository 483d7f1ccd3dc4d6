//! Verifies the module relations of `S_z(f)` for every admissible `f` of
//! `D3~2`, together with the auxiliary identities.

use qshift::cartan::CartanData;
use qshift::repmodules::{admissible_tuples, auxiliary_identities, verify_sz_relations, SzModule};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c = CartanData::parse("D3~2")?;
    for f in admissible_tuples(c.slots()) {
        let m = SzModule::new(&c, &f)?;
        let rep = verify_sz_relations(&m)?;
        let tag: String = f.iter().map(|x| x.symbol()).collect();
        println!("f = {tag}: {} relations, all pass: {}", rep.checks.len(), rep.passed());
    }
    let m = SzModule::new(&CartanData::parse("C3~1")?, &admissible_tuples(3)[0])?;
    for a in auxiliary_identities(&m)? {
        println!("{:<24} {}", a.name, a.passed);
    }
    Ok(())
}
