//! Dense linear algebra over the coefficient fields: determinants, row
//! reduction, null spaces, exact signatures, and a few nalgebra bridges.

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::scalar::{Coeff, Rational, C64};

pub type Mat<C> = Vec<Vec<C>>;

fn negligible<C: Coeff>(c: &C, tol: f64) -> bool {
    if C::EXACT {
        c.is_zero()
    } else {
        c.magnitude() <= tol
    }
}

/// Determinant by Gaussian elimination with largest-magnitude pivoting.
pub fn det<C: Coeff>(m: &[Vec<C>]) -> C {
    let n = m.len();
    let mut a: Mat<C> = m.to_vec();
    let mut d = C::one();
    for col in 0..n {
        let piv = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .max_by(|&x, &y| a[x][col].magnitude().total_cmp(&a[y][col].magnitude()));
        let Some(piv) = piv else { return C::zero() };
        if piv != col {
            a.swap(piv, col);
            d = -d;
        }
        let p = a[col][col].clone();
        d = d * p.clone();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone() / p.clone();
            for c in col..n {
                let v = a[col][c].clone();
                a[r][c] = a[r][c].clone() - f.clone() * v;
            }
        }
    }
    d
}

/// In-place reduced row echelon form; returns pivot columns. Entries with
/// magnitude at most `tol` times the largest entry count as zero (ignored in
/// exact mode).
pub fn rref<C: Coeff>(a: &mut Mat<C>, tol: f64) -> Vec<usize> {
    let rows = a.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = a[0].len();
    let scale = a
        .iter()
        .flatten()
        .map(|c| c.magnitude())
        .fold(0.0, f64::max);
    let tol = tol * scale;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let piv = (r..rows)
            .filter(|&i| !negligible(&a[i][c], tol))
            .max_by(|&x, &y| a[x][c].magnitude().total_cmp(&a[y][c].magnitude()));
        let Some(piv) = piv else {
            for row in a.iter_mut().skip(r) {
                row[c] = C::zero();
            }
            continue;
        };
        a.swap(piv, r);
        let inv = C::one() / a[r][c].clone();
        for k in c..cols {
            a[r][k] = a[r][k].clone() * inv.clone();
        }
        for i in 0..rows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for k in c..cols {
                let v = a[r][k].clone();
                a[i][k] = a[i][k].clone() - f.clone() * v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<C: Coeff>(m: &[Vec<C>], tol: f64) -> usize {
    let mut a = m.to_vec();
    rref(&mut a, tol).len()
}

/// Basis of the right null space, one vector per free column.
pub fn nullspace<C: Coeff>(m: &[Vec<C>], ncols: usize, tol: f64) -> Vec<Vec<C>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a, tol);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![C::zero(); ncols];
            v[f] = C::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

/// Solve `A x = b` for a consistent (possibly over- or underdetermined)
/// system; free variables are set to zero.
pub fn solve<C: Coeff>(a: &[Vec<C>], b: &[C], tol: f64) -> Result<Vec<C>> {
    let ncols = a.first().map_or(0, |r| r.len());
    let mut aug: Mat<C> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, tol);
    if pivots.last() == Some(&ncols) {
        return Err(Error::Inconsistent(
            "right-hand side outside the column space".into(),
        ));
    }
    let mut x = vec![C::zero(); ncols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug[r][ncols].clone();
    }
    Ok(x)
}

pub fn mat_mul<C: Coeff>(a: &[Vec<C>], b: &[Vec<C>]) -> Mat<C> {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter().zip(b).fold(C::zero(), |acc, (x, brow)| {
                        acc + x.clone() * brow[j].clone()
                    })
                })
                .collect()
        })
        .collect()
}

pub fn transpose<C: Clone>(a: &[Vec<C>]) -> Mat<C> {
    let n = a.first().map_or(0, |r| r.len());
    (0..n)
        .map(|j| a.iter().map(|r| r[j].clone()).collect())
        .collect()
}

pub fn identity<C: Coeff>(n: usize) -> Mat<C> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { C::one() } else { C::zero() })
                .collect()
        })
        .collect()
}

/// `T^t M T`.
pub fn congruence<C: Coeff>(m: &[Vec<C>], t: &[Vec<C>]) -> Mat<C> {
    mat_mul(&mat_mul(&transpose(t), m), t)
}

pub fn inverse<C: Coeff>(m: &[Vec<C>], tol: f64) -> Result<Mat<C>> {
    let n = m.len();
    let mut aug: Mat<C> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { C::one() } else { C::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug, tol);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::SingularTransform);
    }
    Ok(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn is_symmetric<C: Coeff>(m: &[Vec<C>]) -> bool {
    m.iter()
        .enumerate()
        .all(|(i, row)| row.len() == m.len() && (0..i).all(|j| row[j] == m[j][i]))
}

/// Inertia of a real symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
}

impl Signature {
    pub fn rank(&self) -> usize {
        self.pos + self.neg
    }

    pub fn is_semidefinite(&self) -> bool {
        self.pos == 0 || self.neg == 0
    }
}

/// Exact inertia via symmetric pivoting: 1x1 pivots on nonzero diagonal
/// entries, 2x2 hyperbolic pivots when the diagonal vanishes.
pub fn signature(m: &[Vec<Rational>]) -> Signature {
    let mut a: Mat<Rational> = m.to_vec();
    let (mut pos, mut neg) = (0, 0);
    let n0 = a.len();
    while !a.is_empty() {
        let n = a.len();
        if let Some(i) = (0..n).find(|&i| !a[i][i].is_zero()) {
            let p = a[i][i].clone();
            if p.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            let rest: Vec<usize> = (0..n).filter(|&k| k != i).collect();
            a = rest
                .iter()
                .map(|&r| {
                    rest.iter()
                        .map(|&c| a[r][c].clone() - a[r][i].clone() * a[i][c].clone() / p.clone())
                        .collect()
                })
                .collect();
        } else if let Some((i, j)) = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| !a[i][j].is_zero())
        {
            // [[0, b], [b, 0]] has inertia (1, 1); inverse is [[0, 1/b], [1/b, 0]]
            pos += 1;
            neg += 1;
            let b = a[i][j].clone();
            let rest: Vec<usize> = (0..n).filter(|&k| k != i && k != j).collect();
            a = rest
                .iter()
                .map(|&r| {
                    rest.iter()
                        .map(|&c| {
                            let corr = (a[r][i].clone() * a[j][c].clone()
                                + a[r][j].clone() * a[i][c].clone())
                                / b.clone();
                            a[r][c].clone() - corr
                        })
                        .collect()
                })
                .collect();
        } else {
            break;
        }
    }
    Signature {
        pos,
        neg,
        zero: n0 - pos - neg,
    }
}

/// Inertia of a real symmetric float matrix, eigenvalues below `tol` times
/// the spectral radius counted as zero.
pub fn signature_f64(m: &[Vec<f64>], tol: f64) -> Signature {
    let (vals, _) = sym_eigen(m);
    let scale = vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let mut s = Signature {
        pos: 0,
        neg: 0,
        zero: 0,
    };
    for v in vals {
        if v > tol * scale {
            s.pos += 1;
        } else if v < -tol * scale {
            s.neg += 1;
        } else {
            s.zero += 1;
        }
    }
    s
}

pub fn to_dmatrix_c64<C: Coeff>(m: &[Vec<C>]) -> DMatrix<C64> {
    let r = m.len();
    let c = m.first().map_or(0, |x| x.len());
    DMatrix::from_fn(r, c, |i, j| m[i][j].to_c64())
}

pub fn from_dmatrix(m: &DMatrix<C64>) -> Mat<C64> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// Eigenvalues ascending with matching eigenvector columns.
pub fn sym_eigen(m: &[Vec<f64>]) -> (Vec<f64>, Mat<f64>) {
    let n = m.len();
    let dm = DMatrix::from_fn(n, n, |i, j| 0.5 * (m[i][j] + m[j][i]));
    let e = SymmetricEigen::new(dm);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
    let vals = idx.iter().map(|&i| e.eigenvalues[i]).collect();
    let vecs = (0..n)
        .map(|r| idx.iter().map(|&i| e.eigenvectors[(r, i)]).collect())
        .collect();
    (vals, vecs)
}

/// Singular values descending.
pub fn singular_values(m: &[Vec<C64>]) -> Vec<f64> {
    let dm = to_dmatrix_c64(m);
    let mut s: Vec<f64> = dm.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank: singular values above `tol` times the largest.
pub fn numerical_rank(m: &[Vec<C64>], tol: f64) -> usize {
    let s = singular_values(m);
    let top = s.first().copied().unwrap_or(0.0);
    s.iter().filter(|&&v| v > tol * top).count()
}

/// Orthonormal basis of the `k` least significant right singular directions,
/// i.e. an approximate null space of dimension `k`.
pub fn smallest_right_singular_vectors(m: &[Vec<C64>], ncols: usize, k: usize) -> Vec<Vec<C64>> {
    let a = to_dmatrix_c64(m);
    let h = a.adjoint() * &a;
    let h = DMatrix::from_fn(ncols, ncols, |i, j| h[(i, j)]);
    let e = SymmetricEigen::new(h);
    let mut idx: Vec<usize> = (0..ncols).collect();
    idx.sort_by(|&x, &y| e.eigenvalues[x].total_cmp(&e.eigenvalues[y]));
    idx.iter()
        .take(k)
        .map(|&i| (0..ncols).map(|r| e.eigenvectors[(r, i)]).collect())
        .collect()
}

/// Least-squares solution of a complex system via SVD.
pub fn lstsq_c64(a: &[Vec<C64>], b: &[C64]) -> Result<Vec<C64>> {
    let am = to_dmatrix_c64(a);
    let bm = DMatrix::from_fn(b.len(), 1, |i, _| b[i]);
    let svd = am.svd(true, true);
    let x = svd
        .solve(&bm, 1e-14)
        .map_err(|e| Error::Degenerate(format!("least squares failed: {e}")))?;
    Ok((0..x.nrows()).map(|i| x[(i, 0)]).collect())
}

pub fn max_abs<C: Coeff>(m: &[Vec<C>]) -> f64 {
    m.iter()
        .flatten()
        .map(|c| c.magnitude())
        .fold(0.0, f64::max)
}

pub fn rational_identity(n: usize) -> Mat<Rational> {
    identity(n)
}

pub fn is_identity<C: Coeff>(m: &[Vec<C>]) -> bool {
    m.iter().enumerate().all(|(i, row)| {
        row.iter()
            .enumerate()
            .all(|(j, v)| if i == j { v.is_one() } else { v.is_zero() })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::scalar::{int, rat};

    fn q(rows: &[&[i64]]) -> Mat<Rational> {
        rows.iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect()
    }

    #[test]
    fn determinant() {
        assert_eq!(det(&q(&[&[1, 2], &[3, 4]])), int(-2));
        assert_eq!(det(&q(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 5]])), int(-5));
        assert_eq!(det(&q(&[&[1, 2], &[2, 4]])), int(0));
        let c: Mat<C64> = vec![
            vec![C64::new(0.0, 1.0), C64::new(1.0, 0.0)],
            vec![C64::new(2.0, 0.0), C64::new(0.0, 0.0)],
        ];
        assert!((det(&c) - C64::new(-2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn null_space_and_solve() {
        let a = q(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = nullspace(&a, 3, 0.0);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(mat_mul(&a, &transpose(std::slice::from_ref(v)))
                .iter()
                .flatten()
                .all(|x| x.is_zero()));
        }
        let x = solve(
            &q(&[&[2, 0], &[0, 4], &[1, 1]]),
            &[int(2), int(2), rat(3, 2)],
            0.0,
        )
        .unwrap();
        assert_eq!(x, vec![int(1), rat(1, 2)]);
        assert!(solve(&q(&[&[1, 0], &[1, 0]]), &[int(1), int(2)], 0.0).is_err());
        let inv = inverse(&q(&[&[2, 1], &[1, 1]]), 0.0).unwrap();
        assert_eq!(inv, q(&[&[1, -1], &[-1, 2]]));
    }

    #[test]
    fn inertia() {
        let s = signature(&rational_identity(4));
        assert_eq!(
            s,
            Signature {
                pos: 4,
                neg: 0,
                zero: 0
            }
        );
        let d = q(&[&[1, 0, 0, 0], &[0, -1, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0]]);
        assert_eq!(
            signature(&d),
            Signature {
                pos: 1,
                neg: 1,
                zero: 2
            }
        );
        let h = q(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 2], &[0, 0, 2, 3]]);
        assert_eq!(
            signature(&h),
            Signature {
                pos: 2,
                neg: 2,
                zero: 0
            }
        );
        let fl: Vec<Vec<f64>> = h
            .iter()
            .map(|r| r.iter().map(crate::poly::scalar::rational_to_f64).collect())
            .collect();
        assert_eq!(signature_f64(&fl, 1e-12), signature(&h));
    }
}
