//! Sparse multivariate polynomials over the Gaussian rationals.

mod gcd;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Gr;

pub use gcd::{gcd, tuple_gcd, TupleGcd};

/// Exponent vector of a monomial; its length is the arity of the owning polynomial.
pub type Exponents = Vec<u32>;

/// Degree-compatible monomial orders. Variables are ranked by index, so for
/// pairing polynomials the z-block precedes the ξ-block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    /// Graded lexicographic.
    #[default]
    GrLex,
    /// Graded reverse lexicographic.
    GRevLex,
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        let da: u32 = a.iter().sum();
        let db: u32 = b.iter().sum();
        da.cmp(&db).then_with(|| match self {
            MonomialOrder::GrLex => a.cmp(b),
            MonomialOrder::GRevLex => {
                for (x, y) in a.iter().zip(b).rev() {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }
        })
    }
}

/// Result of [`MPoly::homogeneous_degree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homogeneity {
    /// The zero polynomial is homogeneous of every degree.
    Zero,
    Degree(u32),
    Inhomogeneous,
}

/// A polynomial in `arity` variables. Stored coefficients are never zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    arity: usize,
    terms: BTreeMap<Exponents, Gr>,
}

impl MPoly {
    pub fn zero(arity: usize) -> Self {
        MPoly { arity, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, c: Gr) -> Self {
        let mut p = Self::zero(arity);
        p.add_term(vec![0; arity], c);
        p
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, Gr::one())
    }

    /// The variable `x_index` (0-based).
    pub fn var(arity: usize, index: usize) -> Self {
        assert!(index < arity, "variable index {index} out of range for arity {arity}");
        let mut e = vec![0; arity];
        e[index] = 1;
        Self::monomial(e, Gr::one())
    }

    pub fn monomial(exps: Exponents, c: Gr) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging repeats.
    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Exponents, Gr)>) -> Result<Self> {
        let mut p = Self::zero(arity);
        for (e, c) in terms {
            if e.len() != arity {
                return Err(Error::ArityMismatch { expected: arity, found: e.len() });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Gr)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &[u32]) -> Gr {
        self.terms.get(e).cloned().unwrap_or_else(Gr::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_term(&self) -> Gr {
        self.coefficient(&vec![0; self.arity])
    }

    fn add_term(&mut self, e: Exponents, c: Gr) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_arity(&self, other: &MPoly) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: other.arity });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MPoly) -> Result<MPoly> {
        self.check_arity(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_mul(&self, other: &MPoly) -> Result<MPoly> {
        self.check_arity(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    fn mul_unchecked(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero(self.arity);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Gr) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.arity);
        }
        MPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, mut k: u32) -> MPoly {
        let mut base = self.clone();
        let mut acc = MPoly::one(self.arity);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Conjugates every coefficient (the variables are untouched).
    pub fn conj_coeffs(&self) -> MPoly {
        MPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.conj())).collect(),
        }
    }

    pub fn evaluate(&self, point: &[Gr]) -> Result<Gr> {
        if point.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: point.len() });
        }
        let mut acc = Gr::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = &t * &x.pow(k);
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Substitutes `subs[j]` for variable `j`. All substitutes share one arity,
    /// which becomes the arity of the result.
    pub fn compose(&self, subs: &[MPoly]) -> Result<MPoly> {
        if subs.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: subs.len() });
        }
        let out_arity = match subs.first() {
            Some(s) => s.arity,
            None => return Ok(MPoly::constant(0, self.constant_term())),
        };
        if let Some(bad) = subs.iter().find(|s| s.arity != out_arity) {
            return Err(Error::ArityMismatch { expected: out_arity, found: bad.arity });
        }
        // cache powers per variable
        let mut powers: Vec<Vec<MPoly>> = subs.iter().map(|s| vec![MPoly::one(out_arity), s.clone()]).collect();
        let mut out = MPoly::zero(out_arity);
        for (e, c) in &self.terms {
            let mut t = MPoly::constant(out_arity, c.clone());
            for (j, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[j].len() <= k as usize {
                    let next = &powers[j][powers[j].len() - 1] * &subs[j];
                    powers[j].push(next);
                }
                t = &t * &powers[j][k as usize];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Re-embeds into `new_arity` variables, placing variable `j` at `offset + j`.
    pub fn embed(&self, new_arity: usize, offset: usize) -> MPoly {
        assert!(offset + self.arity <= new_arity);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut ne = vec![0; new_arity];
                ne[offset..offset + self.arity].copy_from_slice(e);
                (ne, c.clone())
            })
            .collect();
        MPoly { arity: new_arity, terms }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn homogeneous_degree(&self) -> Homogeneity {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => Homogeneity::Zero,
            Some(d) => {
                if degs.all(|x| x == d) {
                    Homogeneity::Degree(d)
                } else {
                    Homogeneity::Inhomogeneous
                }
            }
        }
    }

    /// Bidegree check for polynomials whose variables split at `split`.
    pub fn is_bihomogeneous(&self, split: usize, d1: u32, d2: u32) -> bool {
        self.terms.keys().all(|e| {
            e[..split].iter().sum::<u32>() == d1 && e[split..].iter().sum::<u32>() == d2
        })
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|e| e[var] > 0)
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Exponents, &Gr)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    /// Divides so that the leading coefficient (graded lex) becomes 1.
    pub fn monic(&self) -> MPoly {
        match self.leading_term(MonomialOrder::GrLex) {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Division by a single polynomial: returns `(q, r)` with `self = q·b + r`
    /// and no monomial of `r` divisible by the leading monomial of `b`.
    pub fn reduce_mod(&self, b: &MPoly, order: MonomialOrder) -> Result<(MPoly, MPoly)> {
        self.check_arity(b)?;
        let (lb_exp, lb_coef) = b.leading_term(order).ok_or(Error::DivisionByZero)?;
        let lb_exp = lb_exp.clone();
        let lb_inv = lb_coef.inv()?;
        let mut p = self.clone();
        let mut q = MPoly::zero(self.arity);
        let mut r = MPoly::zero(self.arity);
        while let Some((e, c)) = p.leading_term(order).map(|(e, c)| (e.clone(), c.clone())) {
            if e.iter().zip(&lb_exp).all(|(x, y)| x >= y) {
                let qe: Exponents = e.iter().zip(&lb_exp).map(|(x, y)| x - y).collect();
                let t = MPoly::monomial(qe, &c * &lb_inv);
                p = &p - &(&t * b);
                q = &q + &t;
            } else {
                p.terms.remove(&e);
                r.add_term(e, c);
            }
        }
        Ok((q, r))
    }

    /// Exact quotient, or `None` when `b` does not divide `self`.
    pub fn exact_div(&self, b: &MPoly) -> Result<Option<MPoly>> {
        let (q, r) = self.reduce_mod(b, MonomialOrder::GrLex)?;
        Ok(if r.is_zero() { Some(q) } else { None })
    }

    /// Coefficients of `self` viewed as a polynomial in `var`; entry `k`
    /// multiplies `var^k` and is free of `var`.
    pub(crate) fn univariate_coeffs(&self, var: usize) -> Vec<MPoly> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![MPoly::zero(self.arity); deg + 1];
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            let mut ne = e.clone();
            ne[var] = 0;
            out[k].add_term(ne, c.clone());
        }
        out
    }

    pub(crate) fn from_univariate(var: usize, arity: usize, coeffs: &[MPoly]) -> MPoly {
        let mut out = MPoly::zero(arity);
        for (k, c) in coeffs.iter().enumerate() {
            for (e, x) in &c.terms {
                let mut ne = e.clone();
                ne[var] += k as u32;
                out.add_term(ne, x.clone());
            }
        }
        out
    }

    /// Writes the polynomial with the given variable names, highest term first.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        DisplayPoly { poly: self, names }
    }

    /// Default variable names `x1..xn`.
    pub fn default_names(arity: usize, prefix: &str) -> Vec<String> {
        (1..=arity).map(|k| format!("{prefix}{k}")).collect()
    }
}

struct DisplayPoly<'a> {
    poly: &'a MPoly,
    names: &'a [String],
}

impl fmt::Display for DisplayPoly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.poly.terms.iter().collect();
        terms.sort_by(|a, b| MonomialOrder::GrLex.cmp(b.0, a.0));
        for (k, (e, c)) in terms.into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(j, &x)| if x == 1 { self.names[j].clone() } else { format!("{}^{}", self.names[j], x) })
                .collect();
            let mono = mono.join("*");
            // sign is pulled out when the coefficient is a signed real or imaginary number
            let negative = (c.is_real() && c.re() < &num_rational::BigRational::zero())
                || (c.re().is_zero() && c.im() < &num_rational::BigRational::zero());
            let mag = if negative { -c } else { c.clone() };
            let sep = match (k, negative) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            let coef = if mag.is_real() || mag.re().is_zero() {
                mag.to_string()
            } else {
                format!("({})", mag)
            };
            if mono.is_empty() {
                write!(f, "{sep}{coef}")?;
            } else if mag.is_one() {
                write!(f, "{sep}{mono}")?;
            } else {
                write!(f, "{sep}{coef}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = MPoly::default_names(self.arity, "x");
        let shown = self.display_with(&names).to_string();
        write!(f, "{}", shown)
    }
}

macro_rules! poly_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl<'a, 'b> $tr<&'b MPoly> for &'a MPoly {
            type Output = MPoly;
            /// Panics on arity mismatch; use the `try_` variants for fallible input.
            fn $method(self, rhs: &'b MPoly) -> MPoly {
                assert_eq!(self.arity, rhs.arity, "polynomial arity mismatch");
                self.$inner(rhs)
            }
        }
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: MPoly) -> MPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

impl MPoly {
    fn sub_unchecked(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

poly_binop!(Add, add, add_unchecked);
poly_binop!(Sub, sub, sub_unchecked);
poly_binop!(Mul, mul, mul_unchecked);

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&-Gr::one())
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

/// Common total degree of a tuple, `None` if components disagree or one is
/// inhomogeneous. Zero components are compatible with any degree; an
/// all-zero tuple reports `Some(0)`.
pub fn tuple_degree(ps: &[MPoly]) -> Option<u32> {
    let mut deg = None;
    for p in ps {
        match p.homogeneous_degree() {
            Homogeneity::Zero => {}
            Homogeneity::Inhomogeneous => return None,
            Homogeneity::Degree(d) => match deg {
                None => deg = Some(d),
                Some(d0) if d0 == d => {}
                Some(_) => return None,
            },
        }
    }
    Some(deg.unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: usize, i: usize) -> MPoly {
        MPoly::var(n, i)
    }

    fn c(n: usize, x: i64) -> MPoly {
        MPoly::constant(n, Gr::from(x))
    }

    #[test]
    fn products() {
        let (z1, z2) = (v(2, 0), v(2, 1));
        assert_eq!(&(&z1 + &z2) * &(&z1 - &z2), &(&z1 * &z1) - &(&z2 * &z2));
        assert!((&z1 * &MPoly::zero(2)).is_zero());
        // (z1ξ1 + z2ξ2)^2 in variables (z1,z2,ξ1,ξ2)
        let (a, b, x, y) = (v(4, 0), v(4, 1), v(4, 2), v(4, 3));
        let s = &(&a * &x) + &(&b * &y);
        let expected = &(&(&(&a * &a) * &(&x * &x)) + &(&c(4, 2) * &(&(&a * &b) * &(&x * &y))))
            + &(&(&b * &b) * &(&y * &y));
        assert_eq!(s.pow(2), expected);
    }

    #[test]
    fn arity_mismatch_is_reported() {
        assert_eq!(
            v(2, 0).try_add(&v(3, 0)),
            Err(Error::ArityMismatch { expected: 2, found: 3 })
        );
        assert!(v(2, 0).evaluate(&[Gr::one()]).is_err());
    }

    #[test]
    fn evaluation() {
        let (z1, z2) = (v(2, 0), v(2, 1));
        let p = &(&z1 * &z1) + &(&z2 * &z2);
        assert!(p.evaluate(&[Gr::one(), Gr::i()]).unwrap().is_zero());
        let q = &(&p + &c(2, 7)) + &z1;
        assert_eq!(q.evaluate(&[Gr::zero(), Gr::zero()]).unwrap(), Gr::from(7));
        let w = &(&v(3, 0) * &v(3, 1)) - &v(3, 2);
        assert_eq!(w.evaluate(&[2.into(), 3.into(), 5.into()]).unwrap(), Gr::one());
    }

    #[test]
    fn homogeneity() {
        let (z1, z2) = (v(2, 0), v(2, 1));
        assert_eq!((&(&z1 * &z1) + &(&z1 * &z2)).homogeneous_degree(), Homogeneity::Degree(2));
        assert_eq!((&z1 + &(&z1 * &z2)).homogeneous_degree(), Homogeneity::Inhomogeneous);
        assert_eq!(MPoly::zero(2).homogeneous_degree(), Homogeneity::Zero);
    }

    fn remark_form() -> (MPoly, MPoly) {
        // variables z1..z4, ξ1..ξ4
        let n = 8;
        let zx = |k: usize| &v(n, k) * &v(n, 4 + k);
        let plus = &zx(0) + &zx(1);
        let minus = &zx(2) + &zx(3);
        (plus, minus)
    }

    #[test]
    fn reduce_difference_of_squares() {
        let (plus, minus) = remark_form();
        let b = &plus - &minus;
        let g = &plus.pow(2) - &minus.pow(2);
        let (q, r) = g.reduce_mod(&b, MonomialOrder::GrLex).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, &plus + &minus);

        let (q, r) = b.reduce_mod(&b, MonomialOrder::GrLex).unwrap();
        assert_eq!(q, MPoly::one(8));
        assert!(r.is_zero());
    }

    #[test]
    fn reduce_detects_non_divisibility() {
        let (plus, minus) = remark_form();
        let b = &plus - &minus;
        let n = 8;
        let sq = |k: usize| (&v(n, k) * &v(n, 4 + k)).pow(2);
        let g = &(&sq(0) + &sq(1)) - &minus.pow(2);
        let (q, r) = g.reduce_mod(&b, MonomialOrder::GrLex).unwrap();
        assert!(!r.is_zero());
        assert_eq!(&(&q * &b) + &r, g);
        // independent check: b vanishes at z=(1,1,0,0), ξ=(1,-1,0,0) while g = 2
        let pt: Vec<Gr> = [1, 1, 0, 0, 1, -1, 0, 0].iter().map(|&x| Gr::from(x)).collect();
        assert!(b.evaluate(&pt).unwrap().is_zero());
        assert_eq!(g.evaluate(&pt).unwrap(), Gr::from(2));
    }

    #[test]
    fn remainder_has_no_divisible_monomials() {
        let (plus, minus) = remark_form();
        let b = &plus - &minus;
        let g = &(&v(8, 0).pow(3) * &v(8, 5)) + &(&v(8, 1) * &v(8, 6));
        let (_, r) = g.reduce_mod(&b, MonomialOrder::GrLex).unwrap();
        let (lb, _) = b.leading_term(MonomialOrder::GrLex).unwrap();
        for (e, _) in r.terms() {
            assert!(!e.iter().zip(lb).all(|(x, y)| x >= y));
        }
    }

    #[test]
    fn reduce_by_zero_fails() {
        assert!(v(2, 0).reduce_mod(&MPoly::zero(2), MonomialOrder::GrLex).is_err());
    }

    #[test]
    fn grevlex_differs_from_grlex() {
        // x1*x3^2 vs x2^3 style tie-break
        let a = [1, 0, 2];
        let b = [0, 2, 1];
        assert_eq!(MonomialOrder::GrLex.cmp(&a, &b), Ordering::Greater);
        assert_eq!(MonomialOrder::GRevLex.cmp(&a, &b), Ordering::Less);
    }

    #[test]
    fn composition() {
        // (x1 + x2)^2 with x1 -> u, x2 -> u + v
        let p = (&v(2, 0) + &v(2, 1)).pow(2);
        let (u, w) = (v(2, 0), v(2, 1));
        let out = p.compose(&[u.clone(), &u + &w]).unwrap();
        assert_eq!(out, (&(&u + &u) + &w).pow(2));
    }

    #[test]
    fn display_is_canonical() {
        let names = MPoly::default_names(3, "z");
        let p = &(&c(3, 2) * &(&v(3, 0) * &v(3, 1)))
            - &MPoly::monomial(vec![0, 0, 2], "1/2+i".parse().unwrap());
        assert_eq!(p.display_with(&names).to_string(), "2*z1*z2 + (-1/2-i)*z3^2");
        let q = &MPoly::monomial(vec![1, 0, 0], "-2i".parse().unwrap()) - &c(3, 1);
        assert_eq!(q.display_with(&names).to_string(), "-2i*z1 - 1");
    }
}
