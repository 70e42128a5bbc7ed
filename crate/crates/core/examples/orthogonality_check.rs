//! Orthogonality by divisibility, with a witness when it fails.

use orthopair::mappair::Orthogonality;
use orthopair::{parse, MPoly, MapPair, Signature};

fn main() {
    let sig = Signature::nondegenerate(1, 1);
    let z = |k| MPoly::var(2, k);
    let id = MapPair::identity(sig);
    report("identity", &id);

    let squared = MapPair::diagonal(sig, sig, vec![z(0).pow(2), z(1).pow(2)]).unwrap();
    report("squares", &squared);
}

fn report(name: &str, pair: &MapPair) {
    let vars = parse::pairing_vars(pair.source().dim());
    println!("{name}: g = {}", parse::format_poly(&pair.pairing_polynomial(), &vars));
    match pair.is_orthogonal().unwrap().verdict {
        Orthogonality::Yes { quotient } => println!("  orthogonal, g = ({}) * b", parse::format_poly(&quotient, &vars)),
        Orthogonality::No { witness } => {
            println!("  not orthogonal at z = {:?}, w = {:?}", witness.z, witness.w());
            assert!(witness.verify(pair).unwrap());
        }
    }
}
