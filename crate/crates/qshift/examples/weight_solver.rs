//! Solves for the highest weights of the weight modules of `A2~1` and
//! `A4~2`.

use qshift::cartan::CartanData;
use qshift::repmodules::cor53_solver;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for label in ["A2~1", "A4~2"] {
        let c = CartanData::parse(label)?;
        for s in cor53_solver(&c)? {
            let lam: Vec<String> = s.lambda.iter().map(|x| x.to_string()).collect();
            let wit: Vec<String> = s.witness.iter().map(|x| x.to_string()).collect();
            println!("{label} lambda(K) = [{}] with m = [{}]", lam.join(", "), wit.join(", "));
        }
    }
    Ok(())
}
