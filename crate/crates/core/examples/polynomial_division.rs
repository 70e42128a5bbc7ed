//! Sparse polynomials: reduction modulo a single divisor and gcds.

use orthopair::poly::{gcd, tuple_gcd};
use orthopair::{MPoly, MonomialOrder};

fn main() {
    let z = |k| MPoly::var(3, k);
    let names = MPoly::default_names(3, "z");
    let b = &(&z(0) * &z(1)) - &z(2).pow(2);
    let p = &(&b * &(&z(0) + &z(2))) + &z(1);
    let (q, r) = p.reduce_mod(&b, MonomialOrder::GrLex).unwrap();
    println!("p = {}", p.display_with(&names));
    println!("p = ({}) * b + ({})", q.display_with(&names), r.display_with(&names));

    let g = gcd(&(&z(0).pow(2) - &z(1).pow(2)), &(&z(0) * &z(2) + &z(1) * &z(2))).unwrap();
    println!("gcd = {}", g.display_with(&names));

    let t = tuple_gcd(&[&z(0) * &z(2), z(2).pow(2), MPoly::zero(3)]).unwrap();
    println!("common factor of the tuple = {}", t.gcd.display_with(&names));
}
