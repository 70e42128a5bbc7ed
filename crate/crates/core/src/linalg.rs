//! Exact dense linear algebra over `Q(i)`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Gr;

pub type Vector = Vec<Gr>;
/// Row-major dense matrix.
pub type Matrix = Vec<Vec<Gr>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Gr::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (k, row) in m.iter_mut().enumerate() {
        row[k] = Gr::one();
    }
    m
}

pub fn unit_vector(n: usize, k: usize) -> Vector {
    let mut v = vec![Gr::zero(); n];
    v[k] = Gr::one();
    v
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner, "matrix shape mismatch");
            (0..cols)
                .map(|j| {
                    let mut acc = Gr::zero();
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            acc += &(x * &b[k][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Matrix, v: &[Gr]) -> Vector {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn transpose(a: &Matrix) -> Matrix {
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn conj(a: &Matrix) -> Matrix {
    a.iter().map(|r| r.iter().map(Gr::conj).collect()).collect()
}

pub fn conj_transpose(a: &Matrix) -> Matrix {
    conj(&transpose(a))
}

pub fn scale_vec(v: &[Gr], c: &Gr) -> Vector {
    v.iter().map(|x| x * c).collect()
}

pub fn add_vec(a: &[Gr], b: &[Gr]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Gr], b: &[Gr]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn is_zero_vec(v: &[Gr]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Reduced row echelon form; returns the reduced matrix and pivot columns.
pub fn rref(a: &Matrix) -> (Matrix, Vec<usize>) {
    let mut m = a.clone();
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(a: &Matrix) -> usize {
    rref(a).1.len()
}

/// Basis of the row space, as the nonzero rows of the reduced echelon form.
pub fn row_space_basis(vectors: &[Vector]) -> Vec<Vector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let (m, pivots) = rref(&vectors.to_vec());
    m.into_iter().take(pivots.len()).collect()
}

/// Basis of `{x : a·x = 0}`; `cols` is needed when `a` has no rows.
pub fn kernel(a: &Matrix, cols: usize) -> Vec<Vector> {
    if a.is_empty() {
        return (0..cols).map(|k| unit_vector(cols, k)).collect();
    }
    let (m, pivots) = rref(a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Gr::zero(); cols];
            v[f] = Gr::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -&m[row][f];
            }
            v
        })
        .collect()
}

/// Solves `a·x = b` for square invertible `a`.
pub fn solve(a: &Matrix, b: &[Gr]) -> Result<Vector> {
    let n = a.len();
    if b.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("solve expects a square system".into()));
    }
    let aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, x)| {
            let mut r = row.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let (m, pivots) = rref(&aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(k, &p)| p != k) {
        return Err(Error::DivisionByZero);
    }
    Ok(m.into_iter().map(|r| r[n].clone()).collect())
}

pub fn inverse(a: &Matrix) -> Result<Matrix> {
    let n = a.len();
    let aug: Matrix = a
        .iter()
        .enumerate()
        .map(|(k, row)| {
            let mut r = row.clone();
            r.extend(unit_vector(n, k));
            r
        })
        .collect();
    let (m, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::DivisionByZero);
    }
    Ok(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| Gr::from(x)).collect()).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank(&a), 2);
        let k = kernel(&a, 3);
        assert_eq!(k.len(), 1);
        assert!(is_zero_vec(&mat_vec(&a, &k[0])));
    }

    #[test]
    fn inverse_roundtrip() {
        let mut a = m(&[&[2, 1], &[1, 1]]);
        a[0][1] = Gr::i();
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(2));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_err());
    }

    #[test]
    fn solve_system() {
        let a = m(&[&[1, 1], &[1, -1]]);
        let x = solve(&a, &[Gr::from(3), Gr::from(1)]).unwrap();
        assert_eq!(x, vec![Gr::from(2), Gr::from(1)]);
    }
}
