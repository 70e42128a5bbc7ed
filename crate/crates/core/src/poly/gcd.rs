//! Multivariate GCD by recursive content / primitive-part decomposition with
//! primitive pseudo-remainder sequences. Every result is confirmed by exact
//! division before it is returned.

use super::MPoly;
use crate::error::{Error, Result};

/// Greatest common divisor, normalized to leading coefficient 1 (graded lex).
/// `gcd(0, 0)` is an error.
pub fn gcd(a: &MPoly, b: &MPoly) -> Result<MPoly> {
    if a.arity() != b.arity() {
        return Err(Error::ArityMismatch { expected: a.arity(), found: b.arity() });
    }
    match (a.is_zero(), b.is_zero()) {
        (true, true) => Err(Error::AllZero),
        (true, false) => Ok(b.monic()),
        (false, true) => Ok(a.monic()),
        (false, false) => Ok(gcd_rec(a, b).monic()),
    }
}

fn first_var(a: &MPoly, b: &MPoly) -> Option<usize> {
    (0..a.arity()).find(|&v| a.uses_var(v) || b.uses_var(v))
}

fn gcd_rec(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one(a.arity());
    }
    let v = first_var(a, b).expect("non-constant input uses a variable");
    if !a.uses_var(v) {
        return gcd_rec(a, &content(b, v));
    }
    if !b.uses_var(v) {
        return gcd_rec(&content(a, v), b);
    }
    let ca = content(a, v);
    let cb = content(b, v);
    let pa = divide_coeffs(a, v, &ca);
    let pb = divide_coeffs(b, v, &cb);
    let c = gcd_rec(&ca, &cb);
    let g = primitive_prs(pa, pb, v);
    (&c * &g).monic()
}

/// gcd of the coefficients of `p` viewed as a polynomial in `v`.
fn content(p: &MPoly, v: usize) -> MPoly {
    let mut acc: Option<MPoly> = None;
    for c in p.univariate_coeffs(v).into_iter().filter(|c| !c.is_zero()) {
        acc = Some(match acc {
            None => c.monic(),
            Some(g) => gcd_rec(&g, &c),
        });
        if acc.as_ref().is_some_and(|g| g.is_constant()) {
            return MPoly::one(p.arity());
        }
    }
    acc.unwrap_or_else(|| MPoly::zero(p.arity()))
}

fn divide_coeffs(p: &MPoly, v: usize, c: &MPoly) -> MPoly {
    let coeffs: Vec<MPoly> = p
        .univariate_coeffs(v)
        .iter()
        .map(|x| {
            if x.is_zero() {
                x.clone()
            } else {
                x.exact_div(c).ok().flatten().expect("content divides every coefficient")
            }
        })
        .collect();
    MPoly::from_univariate(v, p.arity(), &coeffs)
}

fn primitive_part(p: &MPoly, v: usize) -> MPoly {
    let c = content(p, v);
    divide_coeffs(p, v, &c).monic()
}

fn pseudo_remainder(a: &MPoly, b: &MPoly, v: usize) -> MPoly {
    let bc = b.univariate_coeffs(v);
    let n = bc.len() - 1;
    let lc_b = &bc[n];
    let mut r = a.univariate_coeffs(v);
    while r.len() > n && !r.is_empty() {
        let m = r.len() - 1;
        let lc_r = r[m].clone();
        if lc_r.is_zero() {
            r.pop();
            continue;
        }
        // r <- lc_b * r - lc_r * v^(m-n) * b
        for x in r.iter_mut() {
            *x = &*x * lc_b;
        }
        for (k, bk) in bc.iter().enumerate() {
            let idx = k + m - n;
            r[idx] = &r[idx] - &(&lc_r * bk);
        }
        debug_assert!(r[m].is_zero());
        r.pop();
        while r.last().is_some_and(|x| x.is_zero()) {
            r.pop();
        }
    }
    MPoly::from_univariate(v, a.arity(), &r)
}

fn primitive_prs(a: MPoly, b: MPoly, v: usize) -> MPoly {
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) { (a, b) } else { (b, a) };
    loop {
        if b.is_zero() {
            return primitive_part(&a, v);
        }
        if !b.uses_var(v) {
            return MPoly::one(a.arity());
        }
        let r = pseudo_remainder(&a, &b, v);
        a = b;
        b = if r.is_zero() { r } else { primitive_part(&r, v) };
    }
}

/// Output of [`tuple_gcd`]: `inputs[k] == gcd * primitives[k]` exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleGcd {
    pub gcd: MPoly,
    pub primitives: Vec<MPoly>,
}

/// Extracts the common factor of a tuple of polynomials.
pub fn tuple_gcd(ps: &[MPoly]) -> Result<TupleGcd> {
    let mut acc: Option<MPoly> = None;
    for p in ps.iter().filter(|p| !p.is_zero()) {
        acc = Some(match acc {
            None => p.monic(),
            Some(g) => gcd(&g, p)?,
        });
        if acc.as_ref().is_some_and(|g| g.is_constant()) {
            break;
        }
    }
    let g = acc.ok_or(Error::AllZero)?;
    let arity = g.arity();
    let g = if g.is_constant() { MPoly::one(arity) } else { g };
    let mut primitives = Vec::with_capacity(ps.len());
    for p in ps {
        if p.is_zero() {
            primitives.push(p.clone());
            continue;
        }
        match p.exact_div(&g)? {
            Some(q) => primitives.push(q),
            None => return Err(Error::Precondition("gcd candidate failed exact division".into())),
        }
    }
    debug_assert!(ps.iter().zip(&primitives).all(|(p, q)| &(q * &g) == p));
    Ok(TupleGcd { gcd: g, primitives })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Gr;

    fn v(n: usize, i: usize) -> MPoly {
        MPoly::var(n, i)
    }

    #[test]
    fn common_monomial() {
        let (w1, w2) = (v(2, 0), v(2, 1));
        let sq = &w1 * &w1;
        let out = tuple_gcd(&[&sq * &w1, &sq * &w2]).unwrap();
        assert_eq!(out.gcd, sq);
        assert_eq!(out.primitives, vec![w1, w2]);
    }

    #[test]
    fn common_linear_factor() {
        let (w1, w2) = (v(2, 0), v(2, 1));
        let a = &(&w1 * &w2) + &(&w1 * &w1);
        let b = &(&w1 * &w2) + &(&w2 * &w2);
        let out = tuple_gcd(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(out.gcd, &w1 + &w2);
        assert_eq!(a.exact_div(&out.gcd).unwrap(), Some(w1));
        assert_eq!(b.exact_div(&out.gcd).unwrap(), Some(w2));
    }

    #[test]
    fn coprime() {
        let out = tuple_gcd(&[v(2, 0), v(2, 1)]).unwrap();
        assert_eq!(out.gcd, MPoly::one(2));
    }

    #[test]
    fn all_zero_is_an_error() {
        assert_eq!(tuple_gcd(&[MPoly::zero(2), MPoly::zero(2)]), Err(Error::AllZero));
        assert_eq!(tuple_gcd(&[]), Err(Error::AllZero));
    }

    #[test]
    fn zero_components_are_kept() {
        let (w1, w2) = (v(2, 0), v(2, 1));
        let out = tuple_gcd(&[&w1 * &w2, MPoly::zero(2), &w1 * &w1]).unwrap();
        assert_eq!(out.gcd, w1.clone());
        assert_eq!(out.primitives, vec![w2, MPoly::zero(2), w1]);
    }

    #[test]
    fn multivariate_factor_with_complex_coefficients() {
        let n = 4;
        let i = MPoly::constant(n, Gr::i());
        let phi = &(&v(n, 0) + &(&i * &v(n, 2))) + &v(n, 3);
        let a = &phi * &(&(&v(n, 1) * &v(n, 1)) - &v(n, 3).pow(2));
        let b = &phi * &(&(&v(n, 0) * &v(n, 2)) + &(&i * &v(n, 1).pow(2)));
        let g = gcd(&a, &b).unwrap();
        assert_eq!(g, phi.monic());
    }

    #[test]
    fn repeated_factor() {
        let n = 3;
        let l = &v(n, 0) - &v(n, 1);
        let a = &l.pow(2) * &v(n, 2);
        let b = &l.pow(3) * &(&v(n, 0) + &v(n, 2));
        assert_eq!(gcd(&a, &b).unwrap(), l.pow(2).monic());
    }
}
