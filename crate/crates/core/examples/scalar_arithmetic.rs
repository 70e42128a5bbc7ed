//! Exact Gaussian-rational arithmetic.

use orthopair::Gr;

fn main() {
    let a: Gr = "1/2+3/4i".parse().unwrap();
    let b = Gr::from_parts((2, 1), (-1, 3));
    println!("a = {a}, b = {b}");
    println!("a + b = {}", &a + &b);
    println!("a * b = {}", &a * &b);
    println!("a / b = {}", a.checked_div(&b).unwrap());
    println!("conj(a) = {}, |a|^2 = {}", a.conj(), a.norm_sqr());
    println!("i^3 = {}", Gr::i().pow(3));
    assert!(Gr::from(0).inv().is_err());
}
