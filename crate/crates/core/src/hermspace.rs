//! Hermitian spaces `C^{r,s,t}`, restricted signatures of subspaces,
//! orthogonal complements and projections.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};
use crate::scalar::Gr;

/// Eigenvalue multiplicities `(r; s; t)` of `+1`, `-1` and `0`.
///
/// The standard form lists the positive block first, then the negative
/// block, then the null block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub r: usize,
    pub s: usize,
    #[serde(default)]
    pub t: usize,
}

impl Signature {
    pub const fn new(r: usize, s: usize, t: usize) -> Self {
        Signature { r, s, t }
    }

    pub const fn nondegenerate(r: usize, s: usize) -> Self {
        Signature { r, s, t: 0 }
    }

    pub const fn dim(&self) -> usize {
        self.r + self.s + self.t
    }

    /// `r + s`, the rank of the form.
    pub const fn rank(&self) -> usize {
        self.r + self.s
    }

    /// Projective dimension `r + s + t - 1`.
    pub fn projective_dim(&self) -> i64 {
        self.dim() as i64 - 1
    }

    pub fn is_degenerate(&self) -> bool {
        self.t > 0
    }

    /// True when the projectivization contains a null point.
    pub fn has_null_points(&self) -> bool {
        self.t > 0 || (self.r > 0 && self.s > 0)
    }

    /// Diagonal entry of the standard form at coordinate `i`.
    pub fn weight(&self, i: usize) -> i64 {
        if i < self.r {
            1
        } else if i < self.r + self.s {
            -1
        } else {
            0
        }
    }

    pub fn validate_ambient(&self) -> Result<()> {
        if self.dim() == 0 {
            return Err(Error::DimensionMismatch("signature of dimension zero".into()));
        }
        Ok(())
    }

    /// The matrix `H_{r,s,t}`.
    pub fn matrix(&self) -> Matrix {
        let n = self.dim();
        let mut m = linalg::zeros(n, n);
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Gr::from(self.weight(i));
        }
        m
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};{};{})", self.r, self.s, self.t)
    }
}

/// `Σ_{i≤r} z_i conj(w_i) - Σ_{r<i≤r+s} z_i conj(w_i)`.
pub fn inner_product(z: &[Gr], w: &[Gr], sig: Signature) -> Result<Gr> {
    let n = sig.dim();
    if z.len() != n || w.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "vectors of length {} and {} for signature {}",
            z.len(),
            w.len(),
            sig
        )));
    }
    let mut acc = Gr::zero();
    for i in 0..sig.rank() {
        let t = &z[i] * &w[i].conj();
        if sig.weight(i) > 0 {
            acc += &t;
        } else {
            acc -= &t;
        }
    }
    Ok(acc)
}

/// Congruence diagonalization of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Diagonalization {
    /// Real diagonal entries of `T·M·T^*`.
    pub diagonal: Vec<BigRational>,
    /// Row `k` expresses the `k`-th diagonalizing vector in the input basis.
    pub transform: Matrix,
}

fn is_hermitian(m: &Matrix) -> bool {
    let n = m.len();
    m.iter().all(|r| r.len() == n)
        && (0..n).all(|i| (i..n).all(|j| m[i][j] == m[j][i].conj()))
}

/// Diagonalizes `m` by simultaneous row and column operations.
///
/// A zero pivot with a nonzero off-diagonal entry `m[j][i]` is repaired by
/// adding row/column `j` to `i`, which puts `2·Re(m[j][i])` on the diagonal;
/// when that real part vanishes, the added row is first multiplied by `i`.
pub fn congruence_diagonalize(m: &Matrix) -> Result<Diagonalization> {
    if !is_hermitian(m) {
        return Err(Error::NotHermitian);
    }
    let n = m.len();
    let mut g = m.clone();
    let mut t = linalg::identity(n);

    // row_i += c·row_j on both g (rows and columns) and t
    let combine = |g: &mut Matrix, t: &mut Matrix, i: usize, j: usize, c: &Gr| {
        let row_j = g[j].clone();
        for (x, y) in g[i].iter_mut().zip(&row_j) {
            *x += &(c * y);
        }
        let cc = c.conj();
        for row in g.iter_mut() {
            let y = row[j].clone();
            row[i] += &(&cc * &y);
        }
        let tj = t[j].clone();
        for (x, y) in t[i].iter_mut().zip(&tj) {
            *x += &(c * y);
        }
    };
    let swap = |g: &mut Matrix, t: &mut Matrix, a: usize, b: usize| {
        g.swap(a, b);
        for row in g.iter_mut() {
            row.swap(a, b);
        }
        t.swap(a, b);
    };

    for k in 0..n {
        if g[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !g[j][j].is_zero()) {
                swap(&mut g, &mut t, k, j);
            } else if let Some((i, j)) =
                (k..n).flat_map(|i| (k..n).map(move |j| (i, j))).find(|&(i, j)| i != j && !g[j][i].is_zero())
            {
                let c = if g[j][i].re().is_zero() { Gr::i() } else { Gr::one() };
                combine(&mut g, &mut t, i, j, &c);
                debug_assert!(!g[i][i].is_zero());
                swap(&mut g, &mut t, k, i);
            } else {
                break;
            }
        }
        let pivot_inv = g[k][k].inv()?;
        for j in k + 1..n {
            if g[j][k].is_zero() {
                continue;
            }
            let f = -(&g[j][k] * &pivot_inv);
            combine(&mut g, &mut t, j, k, &f);
        }
    }
    debug_assert!((0..n).all(|i| (0..n).all(|j| i == j || g[i][j].is_zero())));
    let diagonal = (0..n).map(|k| g[k][k].re().clone()).collect();
    Ok(Diagonalization { diagonal, transform: t })
}

/// Counts of positive, negative and zero eigenvalues of a Hermitian matrix.
pub fn signature_of_hermitian(m: &Matrix) -> Result<Signature> {
    let d = congruence_diagonalize(m)?;
    let r = d.diagonal.iter().filter(|x| x.is_positive()).count();
    let s = d.diagonal.iter().filter(|x| x.is_negative()).count();
    Ok(Signature::new(r, s, d.diagonal.len() - r - s))
}

/// A linear subspace of `C^{r,s,t}` given by an independent basis, together
/// with the signature `(a; b; c)` of the restricted form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: Signature,
    basis: Vec<Vector>,
    restricted: Signature,
}

impl Subspace {
    pub fn new(ambient: Signature, basis: Vec<Vector>) -> Result<Self> {
        ambient.validate_ambient()?;
        let n = ambient.dim();
        if let Some(v) = basis.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "basis vector of length {} in ambient dimension {}",
                v.len(),
                n
            )));
        }
        if linalg::rank(&basis) != basis.len() {
            return Err(Error::DependentBasis);
        }
        let restricted = signature_of_hermitian(&gram(ambient, &basis))?;
        let sub = Subspace { ambient, basis, restricted };
        sub.check_bounds()?;
        Ok(sub)
    }

    /// Spans the given vectors after discarding dependent ones.
    pub fn span(ambient: Signature, vectors: &[Vector]) -> Result<Self> {
        Self::new(ambient, linalg::row_space_basis(vectors))
    }

    pub fn whole(ambient: Signature) -> Self {
        let n = ambient.dim();
        Self::coordinate(ambient, &(0..n).collect::<Vec<_>>())
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(ambient: Signature, indices: &[usize]) -> Self {
        let n = ambient.dim();
        let basis = indices.iter().map(|&k| linalg::unit_vector(n, k)).collect();
        Subspace::new(ambient, basis).expect("coordinate subspace is well formed")
    }

    /// The standard `(r, s)` block, i.e. the complement of the null coordinates.
    pub fn nondegenerate_block(ambient: Signature) -> Self {
        Self::coordinate(ambient, &(0..ambient.rank()).collect::<Vec<_>>())
    }

    fn check_bounds(&self) -> Result<()> {
        let (a, b, c) = (self.restricted.r, self.restricted.s, self.restricted.t);
        let amb = self.ambient;
        let ok = a <= amb.r
            && b <= amb.s
            && c <= (amb.r - a).min(amb.s - b) + amb.t
            && a + b + c == self.basis.len();
        if ok {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "restricted signature {} impossible in ambient {}",
                self.restricted, amb
            )))
        }
    }

    pub fn ambient(&self) -> Signature {
        self.ambient
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn restricted_signature(&self) -> Signature {
        self.restricted
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.restricted.t == 0
    }

    /// Gram matrix `G[i][j] = <b_i, b_j>`.
    pub fn restrict_form(&self) -> Matrix {
        gram(self.ambient, &self.basis)
    }

    pub fn contains(&self, v: &[Gr]) -> bool {
        let mut m = self.basis.clone();
        m.push(v.to_vec());
        linalg::rank(&m) == self.basis.len()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Same subspace, possibly with a different basis.
    pub fn same_span(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other)
    }

    /// `{w : <w, b> = 0 for every basis vector b}`.
    pub fn orthogonal_complement(&self) -> Subspace {
        let n = self.ambient.dim();
        // <w, b> = Σ h_i w_i conj(b_i): one linear equation per basis vector
        let rows: Matrix = self
            .basis
            .iter()
            .map(|b| (0..n).map(|i| b[i].conj().scale(&BigRational::from_integer(self.ambient.weight(i).into()))).collect())
            .collect();
        let ker = linalg::kernel(&rows, n);
        Subspace::new(self.ambient, ker).expect("kernel basis is independent")
    }

    /// An `(a, b)`-subspace of `self` spanned by the diagonalizing vectors of
    /// nonzero norm, positive ones first.
    pub fn nondegenerate_part(&self) -> Result<Subspace> {
        let basis: Vec<Vector> = self.orthogonal_pieces()?.into_iter().map(|(v, _)| v).collect();
        Subspace::new(self.ambient, basis)
    }

    fn orthogonal_pieces(&self) -> Result<Vec<(Vector, BigRational)>> {
        let d = congruence_diagonalize(&self.restrict_form())?;
        let n = self.ambient.dim();
        let mut pieces: Vec<(Vector, BigRational)> = d
            .diagonal
            .iter()
            .zip(&d.transform)
            .filter(|(x, _)| !x.is_zero())
            .map(|(x, row)| {
                let mut v = vec![Gr::zero(); n];
                for (c, b) in row.iter().zip(&self.basis) {
                    if !c.is_zero() {
                        v = linalg::add_vec(&v, &linalg::scale_vec(b, c));
                    }
                }
                (v, x.clone())
            })
            .collect();
        if pieces.is_empty() {
            return Err(Error::TotallyNullSpan);
        }
        pieces.sort_by_key(|(_, x)| if x.is_positive() { 0 } else { 1 });
        Ok(pieces)
    }

    /// Orthogonal basis with nonzero norms, positive block first. Requires a
    /// non-degenerate restricted form.
    pub fn orthogonal_basis(&self) -> Result<OrthogonalBasis> {
        if !self.is_nondegenerate() {
            return Err(Error::DegenerateSubspace);
        }
        let pieces = self.orthogonal_pieces()?;
        Ok(OrthogonalBasis {
            ambient: self.ambient,
            vectors: pieces.iter().map(|(v, _)| v.clone()).collect(),
            norms: pieces.into_iter().map(|(_, x)| x).collect(),
        })
    }

    /// Coordinates, in this subspace's basis, of the component of `v` along
    /// `self` in the splitting `C^n = S ⊕ S^⊥`.
    pub fn project(&self, v: &[Gr]) -> Result<Vector> {
        if !self.is_nondegenerate() {
            return Err(Error::DegenerateSubspace);
        }
        if v.len() != self.ambient.dim() {
            return Err(Error::DimensionMismatch("vector length differs from ambient".into()));
        }
        let g = self.restrict_form();
        let rhs: Vector = self
            .basis
            .iter()
            .map(|b| inner_product(v, b, self.ambient))
            .collect::<Result<_>>()?;
        linalg::solve(&linalg::transpose(&g), &rhs)
    }

    /// The vector `Σ x_j b_j` for coordinates `x`.
    pub fn combine(&self, coords: &[Gr]) -> Vector {
        let mut v = vec![Gr::zero(); self.ambient.dim()];
        for (c, b) in coords.iter().zip(&self.basis) {
            v = linalg::add_vec(&v, &linalg::scale_vec(b, c));
        }
        v
    }
}

fn gram(ambient: Signature, basis: &[Vector]) -> Matrix {
    basis
        .iter()
        .map(|bi| basis.iter().map(|bj| inner_product(bi, bj, ambient).expect("lengths checked")).collect())
        .collect()
}

/// Pairwise orthogonal vectors `κ_j` with norms `d_j = <κ_j, κ_j> ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalBasis {
    pub ambient: Signature,
    pub vectors: Vec<Vector>,
    pub norms: Vec<BigRational>,
}

impl OrthogonalBasis {
    /// Signature `(a; b; 0)` of the spanned subspace.
    pub fn signature(&self) -> Signature {
        let a = self.norms.iter().filter(|x| x.is_positive()).count();
        Signature::nondegenerate(a, self.norms.len() - a)
    }

    pub fn to_subspace(&self) -> Subspace {
        Subspace::new(self.ambient, self.vectors.clone()).expect("orthogonal basis is independent")
    }

    pub fn sign(&self, j: usize) -> i64 {
        if self.norms[j].is_positive() {
            1
        } else {
            -1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vecs(rows: &[&[i64]]) -> Vec<Vector> {
        rows.iter().map(|r| r.iter().map(|&x| Gr::from(x)).collect()).collect()
    }

    fn remark_span() -> Subspace {
        let sig = Signature::nondegenerate(3, 4);
        Subspace::new(
            sig,
            vecs(&[
                &[1, 0, 0, 0, 0, 0, 0],
                &[0, 1, 0, 0, 0, 0, 0],
                &[0, 0, 1, 0, 0, 0, 1],
                &[0, 0, 0, 1, 0, 0, 0],
                &[0, 0, 0, 0, 1, 0, 0],
                &[0, 0, 0, 0, 0, 1, 0],
            ]),
        )
        .unwrap()
    }

    #[test]
    fn inner_product_examples() {
        let one = Gr::one();
        let z = [one.clone(), one.clone()];
        assert!(inner_product(&z, &z, Signature::new(1, 1, 0)).unwrap().is_zero());
        let z = [Gr::zero(), Gr::zero(), one.clone()];
        let w = [Gr::from(3), Gr::i(), Gr::from(7)];
        assert!(inner_product(&z, &w, Signature::new(1, 1, 1)).unwrap().is_zero());
        let z = [one.clone(), Gr::from_parts((0, 1), (2, 1))];
        let w = [Gr::from(3), Gr::zero()];
        assert_eq!(inner_product(&z, &w, Signature::new(1, 1, 0)).unwrap(), Gr::from(3));
        assert!(inner_product(&z, &w[..1], Signature::new(1, 1, 0)).is_err());
    }

    #[test]
    fn signature_examples() {
        assert_eq!(signature_of_hermitian(&linalg::identity(2)).unwrap(), Signature::new(2, 0, 0));
        let swap = vecs(&[&[0, 1], &[1, 0]]);
        assert_eq!(signature_of_hermitian(&swap).unwrap(), Signature::new(1, 1, 0));
        assert_eq!(remark_span().restricted_signature(), Signature::new(2, 3, 1));
    }

    #[test]
    fn purely_imaginary_off_diagonal() {
        let mut m = linalg::zeros(2, 2);
        m[0][1] = Gr::i();
        m[1][0] = -Gr::i();
        assert_eq!(signature_of_hermitian(&m).unwrap(), Signature::new(1, 1, 0));
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let m = vecs(&[&[1, 2], &[3, 1]]);
        assert_eq!(signature_of_hermitian(&m), Err(Error::NotHermitian));
        let mut c = linalg::identity(2);
        c[0][0] = Gr::i();
        assert_eq!(signature_of_hermitian(&c), Err(Error::NotHermitian));
    }

    #[test]
    fn restrict_form_examples() {
        let sig = Signature::new(2, 1, 1);
        assert_eq!(Subspace::whole(sig).restrict_form(), sig.matrix());
        let null = Subspace::new(Signature::nondegenerate(1, 1), vecs(&[&[1, 1]])).unwrap();
        assert_eq!(null.restrict_form(), vec![vec![Gr::zero()]]);
        let g = remark_span().restrict_form();
        assert_eq!(signature_of_hermitian(&g).unwrap(), Signature::new(2, 3, 1));
        assert!(g[2][2].is_zero());
    }

    #[test]
    fn complements() {
        let sig = Signature::nondegenerate(1, 1);
        let c = Subspace::coordinate(sig, &[0]).orthogonal_complement();
        assert!(c.same_span(&Subspace::coordinate(sig, &[1])));

        let s = remark_span();
        let perp = s.orthogonal_complement();
        assert_eq!(perp.dim(), 1);
        assert!(perp.contains(&vecs(&[&[0, 0, 1, 0, 0, 0, 1]])[0]));
        assert!(s.contains_subspace(&perp));

        assert_eq!(Subspace::whole(Signature::nondegenerate(2, 3)).orthogonal_complement().dim(), 0);
    }

    #[test]
    fn nondegenerate_parts() {
        let part = remark_span().nondegenerate_part().unwrap();
        assert_eq!(part.restricted_signature(), Signature::new(2, 3, 0));
        assert!(part.same_span(&Subspace::coordinate(Signature::nondegenerate(3, 4), &[0, 1, 3, 4, 5])));

        let sig = Signature::new(1, 2, 0);
        let s = Subspace::coordinate(sig, &[0, 2]);
        assert!(s.nondegenerate_part().unwrap().same_span(&s));

        let sig = Signature::new(1, 1, 1);
        let s = Subspace::new(sig, vecs(&[&[1, 0, 0], &[0, 0, 1]])).unwrap();
        assert!(s.nondegenerate_part().unwrap().same_span(&Subspace::coordinate(sig, &[0])));

        let null = Subspace::new(Signature::nondegenerate(1, 1), vecs(&[&[1, 1]])).unwrap();
        assert_eq!(null.nondegenerate_part(), Err(Error::TotallyNullSpan));
    }

    #[test]
    fn projections() {
        let sig = Signature::nondegenerate(2, 2);
        let s = Subspace::new(sig, vecs(&[&[2, 0, 1, 0], &[0, 1, 0, 0]])).unwrap();
        let v = s.combine(&[Gr::from(2), Gr::i()]);
        assert_eq!(s.project(&v).unwrap(), vec![Gr::from(2), Gr::i()]);
        let perp = s.orthogonal_complement();
        for w in perp.basis() {
            assert!(linalg::is_zero_vec(&s.project(w).unwrap()));
        }
        let degenerate = Subspace::new(sig, vecs(&[&[1, 0, 1, 0]])).unwrap();
        assert_eq!(degenerate.project(&v), Err(Error::DegenerateSubspace));
    }

    #[test]
    fn truncation_is_projection_onto_standard_block() {
        let sig = Signature::new(3, 4, 0);
        let block = Subspace::coordinate(sig, &[0, 1, 2, 3, 4, 5]);
        let v = vecs(&[&[0, 0, 1, 0, 0, 0, 1]]).remove(0);
        let p = block.project(&v).unwrap();
        assert_eq!(p, vecs(&[&[0, 0, 1, 0, 0, 0]])[0]);
    }

    #[test]
    fn dependent_basis_rejected() {
        let sig = Signature::nondegenerate(1, 1);
        assert_eq!(Subspace::new(sig, vecs(&[&[1, 1], &[2, 2]])), Err(Error::DependentBasis));
    }
}
