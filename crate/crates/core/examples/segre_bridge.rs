//! Heisenberg hypersurfaces: the pairing identity and the translation of
//! Segre-preserving maps into orthogonal pairs.

use orthopair::classify::classify;
use orthopair::segre::{segre_pairing_identity, segre_to_orthogonal};
use orthopair::MPoly;

fn main() {
    for n in 2..=5 {
        println!("n = {n}: identity holds = {}", segre_pairing_identity(n).unwrap().holds());
    }
    let v = |k| MPoly::var(3, k);
    let f1 = vec![v(0), v(1), &(&v(0) * &v(1)) + &v(2).pow(2), v(2)];
    let f2 = vec![v(0), v(1), MPoly::zero(3), v(2)];
    let conv = segre_to_orthogonal(&f1, &f2, 3, 4).unwrap();
    println!("degrees {:?}, orthogonal = {}", conv.degrees, conv.pair.is_orthogonal().unwrap().is_orthogonal());
    println!("classification: {}", classify(&conv.pair).unwrap().tag());
}
