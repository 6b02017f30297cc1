//! Univariate root finding: companion-matrix eigenvalues, Newton polishing,
//! and clustering into multiple roots.

use nalgebra::DMatrix;
use num_traits::Zero;

use super::scalar::{Coeff, C64};
use super::uni::UniPoly;
use crate::error::{Error, Result};

pub const CLUSTER_RADIUS: f64 = 1e-6;

/// Outer radius within which a group of roots is accepted as one multiple
/// root only if the Taylor expansion at its centroid confirms it.
const MULTIPLE_ROOT_RADIUS: f64 = 1e-3;
const TAYLOR_TOL: f64 = 1e-5;

#[derive(Clone, Debug, PartialEq)]
pub struct Root {
    pub value: C64,
    pub multiplicity: usize,
}

/// All complex roots with multiplicities. Runs in floating point whatever the
/// coefficient field.
pub fn univariate_roots<C: Coeff>(p: &UniPoly<C>) -> Result<Vec<Root>> {
    univariate_roots_with(p, CLUSTER_RADIUS)
}

pub fn univariate_roots_with<C: Coeff>(p: &UniPoly<C>, cluster_radius: f64) -> Result<Vec<Root>> {
    let p = p.to_c64();
    let n = p.degree().ok_or(Error::ZeroPolynomial)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    // cluster before polishing: raw eigenvalue centroids of a multiple root
    // are far more accurate than individually Newton-polished members
    let raw = companion_eigenvalues(&p)?;
    Ok(cluster(&p, raw, cluster_radius))
}

fn companion_eigenvalues(p: &UniPoly<C64>) -> Result<Vec<C64>> {
    // Unshifted QR can stall on highly symmetric spectra such as roots of
    // unity; retry on p(t + delta) for a few fixed complex shifts.
    const SHIFTS: [(f64, f64); 4] = [
        (0.0, 0.0),
        (0.1234, 0.0567),
        (-0.0711, 0.1913),
        (0.3, -0.27),
    ];
    for (re, im) in SHIFTS {
        let delta = C64::new(re, im) * root_scale(p);
        let shifted = if re == 0.0 && im == 0.0 {
            p.clone()
        } else {
            UniPoly::new(taylor(p, delta))
        };
        if let Some(vals) = companion_eigenvalues_unshifted(&shifted) {
            return Ok(vals.into_iter().map(|z| z + delta).collect());
        }
    }
    Err(Error::NotFound(
        "companion eigenvalue iteration did not converge".into(),
    ))
}

/// Rough modulus of the roots (a power of two).
fn root_scale(p: &UniPoly<C64>) -> f64 {
    let n = p.degree().unwrap();
    let lc = p.leading().unwrap().norm();
    let s = (0..n)
        .filter(|&k| !p.coeff(k).is_zero())
        .map(|k| (p.coeff(k).norm() / lc).powf(1.0 / (n - k) as f64))
        .fold(0.0, f64::max);
    if s > 0.0 {
        2f64.powi(s.log2().round() as i32)
    } else {
        1.0
    }
}

fn companion_eigenvalues_unshifted(p: &UniPoly<C64>) -> Option<Vec<C64>> {
    let n = p.degree().unwrap();
    let lc = *p.leading().unwrap();
    let a: Vec<C64> = p.coeffs().iter().map(|c| c / lc).collect();
    if n == 1 {
        return Some(vec![-a[0]]);
    }
    // scale t = s u so the monic coefficients are balanced
    let s = root_scale(p);
    let mut m = DMatrix::<C64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for k in 0..n {
        m[(k, n - 1)] = -a[k] / s.powi((n - k) as i32);
    }
    let schur = nalgebra::Schur::try_new(m, f64::EPSILON, 10_000)?;
    let (_, t) = schur.unpack();
    Some((0..n).map(|i| t[(i, i)] * s).collect())
}

fn eval_scale(p: &UniPoly<C64>, z: C64) -> f64 {
    let r = z.norm();
    p.coeffs()
        .iter()
        .rev()
        .fold(0.0, |acc, c| acc * r + c.norm())
}

fn polish(p: &UniPoly<C64>, z0: C64) -> C64 {
    let dp = p.derivative();
    let mut z = z0;
    let mut res = p.eval(&z).norm();
    for _ in 0..50 {
        if res <= 1e-15 * eval_scale(p, z) {
            break;
        }
        let d = dp.eval(&z);
        if d.is_zero() {
            break;
        }
        let cand = z - p.eval(&z) / d;
        let r = p.eval(&cand).norm();
        if !(r < res) || (cand - z0).norm() > MULTIPLE_ROOT_RADIUS * (1.0 + z0.norm()) {
            break;
        }
        z = cand;
        res = r;
    }
    z
}

/// Taylor coefficients of `p` at `c`: `p(c + h) = sum b_j h^j`.
fn taylor(p: &UniPoly<C64>, c: C64) -> Vec<C64> {
    let mut a: Vec<C64> = p.coeffs().to_vec();
    let n = a.len();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        for i in (k..n - 1).rev() {
            let hi = a[i + 1];
            a[i] += c * hi;
        }
        out.push(a[k]);
    }
    // repeated synthetic division leaves b_k in a[k]
    out
}

fn is_multiple_root(p: &UniPoly<C64>, c: C64, k: usize) -> bool {
    let b = taylor(p, c);
    if b.len() <= k {
        return false;
    }
    let d0 = MULTIPLE_ROOT_RADIUS * (1.0 + c.norm());
    let top = b[k].norm() * d0.powi(k as i32);
    if top == 0.0 {
        return false;
    }
    (0..k).all(|j| b[j].norm() * d0.powi(j as i32) <= TAYLOR_TOL * top)
}

fn refine_multiple(p: &UniPoly<C64>, c: C64, m: usize) -> C64 {
    let mut d = p.clone();
    for _ in 0..m - 1 {
        d = d.derivative();
    }
    polish(&d, c)
}

fn cluster(p: &UniPoly<C64>, roots: Vec<C64>, radius: f64) -> Vec<Root> {
    let groups = single_linkage(&roots, |z| radius * z.norm().max(1.0));
    let mut merged: Vec<(C64, usize)> = groups
        .into_iter()
        .map(|g| {
            let c = g.iter().map(|&i| roots[i]).sum::<C64>() / g.len() as f64;
            (c, g.len())
        })
        .collect();

    // second pass: wider groups that the Taylor test certifies as one root
    let centers: Vec<C64> = merged.iter().map(|m| m.0).collect();
    let wide = single_linkage(&centers, |z| MULTIPLE_ROOT_RADIUS * z.norm().max(1.0));
    let mut out = Vec::new();
    for g in wide {
        if g.len() > 1 {
            let total: usize = g.iter().map(|&i| merged[i].1).sum();
            let c = g
                .iter()
                .map(|&i| merged[i].0 * merged[i].1 as f64)
                .sum::<C64>()
                / total as f64;
            if is_multiple_root(p, c, total) {
                out.push(Root {
                    value: c,
                    multiplicity: total,
                });
                continue;
            }
        }
        for &i in &g {
            out.push(Root {
                value: merged[i].0,
                multiplicity: merged[i].1,
            });
        }
    }
    for r in &mut out {
        r.value = if r.multiplicity > 1 {
            refine_multiple(p, r.value, r.multiplicity)
        } else {
            polish(p, r.value)
        };
    }
    merged.clear();
    out.sort_by(|a, b| {
        a.value
            .re
            .total_cmp(&b.value.re)
            .then(a.value.im.total_cmp(&b.value.im))
    });
    out
}

fn single_linkage(points: &[C64], radius: impl Fn(C64) -> f64) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (points[i] - points[j]).norm() < radius(points[i]).max(radius(points[j])) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut index = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if index[r] == usize::MAX {
            index[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[index[r]].push(i);
    }
    groups
}

/// Real roots (|Im| below `tol` relative to magnitude) sorted ascending,
/// repeated by multiplicity.
pub fn real_roots_sorted(roots: &[Root], tol: f64) -> Option<Vec<f64>> {
    let mut out = Vec::new();
    for r in roots {
        if r.value.im.abs() > tol * r.value.norm().max(1.0) {
            return None;
        }
        for _ in 0..r.multiplicity {
            out.push(r.value.re);
        }
    }
    out.sort_by(f64::total_cmp);
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::scalar::{int, Rational};

    fn q(c: &[i64]) -> UniPoly<Rational> {
        UniPoly::new(c.iter().map(|&x| int(x)).collect())
    }

    fn has_root(rs: &[Root], z: C64, m: usize) -> bool {
        rs.iter()
            .any(|r| (r.value - z).norm() < 1e-8 && r.multiplicity == m)
    }

    #[test]
    fn difference_of_squares() {
        let rs = univariate_roots(&q(&[-1, 0, 1])).unwrap();
        assert_eq!(rs.len(), 2);
        assert!(has_root(&rs, C64::new(1.0, 0.0), 1));
        assert!(has_root(&rs, C64::new(-1.0, 0.0), 1));
    }

    #[test]
    fn repeated_conjugate_pair() {
        let p = q(&[1, 0, 3, 0, 3, 0, 1]);
        let rs = univariate_roots(&p).unwrap();
        assert_eq!(rs.len(), 2, "{rs:?}");
        assert!(has_root(&rs, C64::new(0.0, 1.0), 3));
        assert!(has_root(&rs, C64::new(0.0, -1.0), 3));
    }

    #[test]
    fn sixth_roots_of_unity() {
        let rs = univariate_roots(&q(&[-1, 0, 0, 0, 0, 0, 1])).unwrap();
        assert_eq!(rs.len(), 6);
        for k in 0..6 {
            let z = C64::from_polar(1.0, std::f64::consts::PI * k as f64 / 3.0);
            assert!(has_root(&rs, z, 1));
        }
    }

    #[test]
    fn close_but_distinct_roots_stay_apart() {
        let p = UniPoly::from_roots(&[
            C64::new(1.0, 0.0),
            C64::new(1.0 + 1e-4, 0.0),
            C64::new(-2.0, 0.0),
        ]);
        let rs = univariate_roots(&p).unwrap();
        assert_eq!(rs.len(), 3);
    }

    #[test]
    fn zero_polynomial_is_an_error() {
        assert!(univariate_roots(&UniPoly::<Rational>::zero()).is_err());
    }

    #[test]
    fn wide_coefficient_range() {
        let p =
            UniPoly::from_roots(&[C64::new(1e3, 0.0), C64::new(1e-3, 0.0), C64::new(-7.0, 2.0)]);
        let rs = univariate_roots(&p).unwrap();
        assert!(has_root(&rs, C64::new(1e-3, 0.0), 1));
        assert!(has_root(&rs, C64::new(1e3, 0.0), 1));
    }
}
