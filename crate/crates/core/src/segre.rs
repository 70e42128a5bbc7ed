//! Heisenberg hypersurface, its Cayley-type chart in `P^{1,n}`, and the
//! translation of Segre-family preserving maps into orthogonal pairs.
//!
//! Affine Heisenberg coordinates are `(z_1, …, z_{n-1}, ζ)`. The chart is
//! `Ψ(z, ζ) = [1 − iζ, 2z_1, …, 2z_{n-1}, 1 + iζ]`, which satisfies
//! `<Ψ, Ψ>_{1,n} = 4(Im ζ − Σ|z_j|²)`.

use crate::error::{Error, Result};
use crate::hermspace::Signature;
use crate::mappair::{self, MapPair};
use crate::poly::MPoly;
use crate::scalar::Gr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeisenbergChart {
    /// Affine dimension; the chart lands in `P^{1,n}`.
    pub n: usize,
}

impl HeisenbergChart {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Precondition("Heisenberg dimension must be at least 2".into()));
        }
        Ok(HeisenbergChart { n })
    }

    pub fn signature(&self) -> Signature {
        Signature::nondegenerate(1, self.n)
    }

    /// `Ψ` as affine polynomials in `(z, ζ)`.
    pub fn embedding(&self) -> Vec<MPoly> {
        let n = self.n;
        let one = MPoly::one(n);
        let izeta = MPoly::var(n, n - 1).scale(&Gr::i());
        let mut out = vec![&one - &izeta];
        out.extend((0..n - 1).map(|j| MPoly::var(n, j).scale(&Gr::from(2))));
        out.push(&one + &izeta);
        out
    }

    /// Evaluates `Ψ` at a point `(z, ζ)`.
    pub fn point(&self, z: &[Gr], zeta: &Gr) -> Vec<Gr> {
        let mut x: Vec<Gr> = z.to_vec();
        x.push(zeta.clone());
        self.embedding().iter().map(|p| p.evaluate(&x).expect("arity matches")).collect()
    }

    /// The linear map `Z ↦ (T, z, ζ)` inverting the homogeneous chart
    /// `(T, z, ζ) ↦ [T − iζ, 2z, T + iζ]`, as polynomials in `Z`.
    fn inverse(&self) -> Vec<MPoly> {
        let m = self.n + 1;
        let half = Gr::from_frac(1, 2);
        let z = |k: usize| MPoly::var(m, k);
        let t = (&z(0) + &z(self.n)).scale(&half);
        // ζ = (Z_n − Z_0) / (2i) = −(i/2)(Z_n − Z_0)
        let zeta = (&z(self.n) - &z(0)).scale(&Gr::from_parts((0, 1), (-1, 2)));
        let mut out = vec![t];
        out.extend((1..self.n).map(|j| z(j).scale(&half)));
        out.push(zeta);
        out
    }
}

/// `b_{1,n}(Ψ(z,ζ), Ψ̄(ξ,ω))` and `−2i[(ζ − ω) − 2i Σ z_j ξ_j]` in variables
/// `(z, ζ, ξ, ω)`, and their difference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegreIdentity {
    pub lhs: MPoly,
    pub rhs: MPoly,
    pub difference: MPoly,
}

impl SegreIdentity {
    pub fn holds(&self) -> bool {
        self.difference.is_zero()
    }
}

pub fn segre_pairing_identity(n: usize) -> Result<SegreIdentity> {
    let chart = HeisenbergChart::new(n)?;
    let psi = chart.embedding();
    let lhs = mappair::pairing_of_tuples(chart.signature(), &psi, &psi);
    let v = |k: usize| MPoly::var(2 * n, k);
    let zeta = v(n - 1);
    let omega = v(2 * n - 1);
    let sum = (0..n - 1).fold(MPoly::zero(2 * n), |acc, j| &acc + &(&v(j) * &v(n + j)));
    let minus_two_i = Gr::from_parts((0, 1), (-2, 1));
    let inner = &(&zeta - &omega) - &sum.scale(&Gr::from_parts((0, 1), (2, 1)));
    let rhs = inner.scale(&minus_two_i);
    let difference = &lhs - &rhs;
    Ok(SegreIdentity { lhs, rhs, difference })
}

/// `T^D p(x/T)` with `T` as variable 0.
fn homogenize(p: &MPoly, d: u32) -> MPoly {
    let m = p.arity() + 1;
    let t = MPoly::var(m, 0);
    p.terms().fold(MPoly::zero(m), |acc, (e, c)| {
        let deg: u32 = e.iter().sum();
        let mut exps = vec![0];
        exps.extend_from_slice(e);
        &acc + &(&MPoly::monomial(exps, c.clone()) * &t.pow(d - deg))
    })
}

/// A converted pair together with the homogenization degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegreConversion {
    pub pair: MapPair,
    pub degrees: (u32, u32),
}

/// `Ψ_N ∘ f ∘ Ψ^{-1}` written as a homogeneous tuple on `P^{1,n}`.
fn conjugate_by_chart(f: &[MPoly], source: HeisenbergChart, target: HeisenbergChart) -> Result<(Vec<MPoly>, u32)> {
    let n = source.n;
    if f.len() != target.n {
        return Err(Error::DimensionMismatch(format!(
            "affine map has {} components, expected {}",
            f.len(),
            target.n
        )));
    }
    if let Some(p) = f.iter().find(|p| p.arity() != n) {
        return Err(Error::ArityMismatch { expected: n, found: p.arity() });
    }
    let d = f.iter().filter_map(MPoly::total_degree).max().unwrap_or(0);
    let hom: Vec<MPoly> = f.iter().map(|p| homogenize(p, d)).collect();
    let t_pow = MPoly::var(n + 1, 0).pow(d);
    let last = &hom[target.n - 1];
    let ilast = last.scale(&Gr::i());
    let mut out = vec![&t_pow - &ilast];
    out.extend(hom[..target.n - 1].iter().map(|p| p.scale(&Gr::from(2))));
    out.push(&t_pow + &ilast);
    let inv = source.inverse();
    let composed: Vec<MPoly> = out.iter().map(|p| p.compose(&inv)).collect::<Result<_>>()?;
    match crate::poly::tuple_degree(&composed) {
        Some(_) => Ok((composed, d)),
        None => Err(Error::NonPolynomial("converted tuple is not homogeneous".into())),
    }
}

/// Turns a Segre map `(f1(z, ζ), f2(ξ, ω))` between Heisenberg hypersurfaces
/// of dimensions `n` and `big_n` into a pair `P^{1,n} → P^{1,N}`.
///
/// `f2` is written in the conjugate variables `(ξ, ω)` and with the
/// coefficients that appear in the complexified defining equation; the pair's
/// `f2` therefore conjugates them back. The resulting pair is orthogonal iff
/// the map sends Segre varieties into Segre varieties.
pub fn segre_to_orthogonal(f1: &[MPoly], f2: &[MPoly], n: usize, big_n: usize) -> Result<SegreConversion> {
    let source = HeisenbergChart::new(n)?;
    let target = HeisenbergChart::new(big_n)?;
    let (g1, d1) = conjugate_by_chart(f1, source, target)?;
    let f2c: Vec<MPoly> = f2.iter().map(MPoly::conj_coeffs).collect();
    let (g2, d2) = conjugate_by_chart(&f2c, source, target)?;
    let pair = MapPair::new(source.signature(), target.signature(), g1, g2)?;
    Ok(SegreConversion { pair, degrees: (d1, d2) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::classify::{classify, Classification};
    use crate::hermspace::inner_product;
    use crate::sampling::SampleRng;

    fn v(n: usize, k: usize) -> MPoly {
        MPoly::var(n, k)
    }

    fn identity_affine(n: usize) -> Vec<MPoly> {
        (0..n).map(|k| v(n, k)).collect()
    }

    #[test]
    fn identity_holds() {
        for n in [2, 3, 5] {
            assert!(segre_pairing_identity(n).unwrap().holds());
        }
    }

    #[test]
    fn chart_lands_on_null_points() {
        let chart = HeisenbergChart::new(3).unwrap();
        let origin = chart.point(&[Gr::zero(), Gr::zero()], &Gr::zero());
        assert_eq!(inner_product(&origin, &origin, chart.signature()).unwrap(), Gr::zero());
        // Im ζ = |z1|² + |z2|² with z = (1, i), ζ = 3 + 2i
        let p = chart.point(&[Gr::from(1), Gr::i()], &Gr::from_parts((3, 1), (2, 1)));
        assert_eq!(inner_product(&p, &p, chart.signature()).unwrap(), Gr::zero());
        let mut rng = SampleRng::new(1);
        let (z, zeta) = (rng.vector(2), rng.gaussian());
        let q = chart.point(&z, &zeta);
        let expected = zeta.im() - &z.iter().map(|x| x.norm_sqr()).sum::<num_rational::BigRational>();
        assert_eq!(
            inner_product(&q, &q, chart.signature()).unwrap(),
            Gr::from_real(expected * num_rational::BigRational::from_integer(4.into()))
        );
    }

    #[test]
    fn identity_map_converts_to_identity_pair() {
        let f = identity_affine(3);
        let conv = segre_to_orthogonal(&f, &f, 3, 3).unwrap();
        assert_eq!(conv.pair, MapPair::identity(Signature::nondegenerate(1, 3)));
        let Classification::Standard { witness } = classify(&conv.pair).unwrap() else { panic!() };
        assert_eq!(witness.lambda, Gr::from(1));
    }

    #[test]
    fn linear_embedding_is_quasi_standard() {
        let n = 2;
        let f1 = vec![v(n, 0), MPoly::zero(n), v(n, 1)];
        let conv = segre_to_orthogonal(&f1, &f1, 2, 3).unwrap();
        assert!(conv.pair.is_orthogonal().unwrap().is_orthogonal());
        assert_eq!(classify(&conv.pair).unwrap().tag(), "QuasiStandard");
    }

    #[test]
    fn shifted_omega_breaks_the_segre_property() {
        let n = 2;
        let f1 = identity_affine(n);
        let f2 = vec![v(n, 0), &v(n, 1) + &MPoly::one(n)];
        let conv = segre_to_orthogonal(&f1, &f2, n, n).unwrap();
        assert!(!conv.pair.is_orthogonal().unwrap().is_orthogonal());
    }

    #[test]
    fn nonlinear_extension_is_orthogonal() {
        let n = 3;
        let h = &(&v(n, 0) * &v(n, 1)) + &v(n, 2).pow(2);
        let f1 = vec![v(n, 0), v(n, 1), h, v(n, 2)];
        let f2 = vec![v(n, 0), v(n, 1), MPoly::zero(n), v(n, 2)];
        let conv = segre_to_orthogonal(&f1, &f2, n, 4).unwrap();
        assert_eq!(conv.degrees, (2, 1));
        assert!(conv.pair.is_orthogonal().unwrap().is_orthogonal());
    }
}
