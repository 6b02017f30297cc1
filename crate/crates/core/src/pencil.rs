//! Symmetric 4×4 linear pencils `A(x) = A0 x0 + A1 x1 + A2 x2 + A3 x3`.

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
pub use crate::linalg::Signature;
use crate::linalg::{self, det, sym_eigen, Mat};
use crate::poly::scalar::{format_rational, parse_rational, rational_to_f64, Coeff, Rational, C64};
use crate::poly::{MultiPoly, ProjPoint};

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricPencil<C> {
    matrices: [Mat<C>; 4],
}

pub type QPencil = SymmetricPencil<Rational>;
pub type CPencil = SymmetricPencil<C64>;

impl<C: Coeff> SymmetricPencil<C> {
    /// Validates shape, symmetry, and that `det A(x)` is not identically zero.
    pub fn new(matrices: [Mat<C>; 4]) -> Result<Self> {
        for m in &matrices {
            if m.len() != 4 || m.iter().any(|r| r.len() != 4) {
                return Err(Error::DimensionMismatch {
                    expected: 4,
                    got: m.len(),
                });
            }
            if !linalg::is_symmetric(m) {
                return Err(Error::NotSymmetric);
            }
        }
        let p = SymmetricPencil { matrices };
        if !p.determinant_nonzero() {
            return Err(Error::DegeneratePencil);
        }
        Ok(p)
    }

    /// Construct without the determinant check (shape and symmetry still enforced).
    pub fn new_unchecked(matrices: [Mat<C>; 4]) -> Self {
        SymmetricPencil { matrices }
    }

    pub fn matrices(&self) -> &[Mat<C>; 4] {
        &self.matrices
    }

    fn determinant_nonzero(&self) -> bool {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let scale = self.max_entry().max(1e-300);
        for _ in 0..5 {
            let x: Vec<C> = (0..4).map(|_| C::from_i64(rng.gen_range(-9..=9))).collect();
            let d = det(&self.at(&x));
            if C::EXACT {
                if !d.is_zero() {
                    return true;
                }
            } else if d.magnitude() > 1e-12 * (9.0 * 4.0 * scale).powi(4) {
                return true;
            }
        }
        false
    }

    pub fn max_entry(&self) -> f64 {
        self.matrices
            .iter()
            .map(|m| linalg::max_abs(m))
            .fold(0.0, f64::max)
    }

    /// The matrix `A(x)`.
    pub fn at(&self, x: &[C]) -> Mat<C> {
        (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| {
                        (0..4).fold(C::zero(), |acc, k| {
                            acc + self.matrices[k][i][j].clone() * x[k].clone()
                        })
                    })
                    .collect()
            })
            .collect()
    }

    pub fn at_c64(&self, x: &[C64]) -> Mat<C64> {
        (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| (0..4).map(|k| self.matrices[k][i][j].to_c64() * x[k]).sum())
                    .collect()
            })
            .collect()
    }

    /// Entries of `A(x)` as linear forms in four variables.
    pub fn linear_entries(&self) -> Mat<MultiPoly<C>> {
        (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| {
                        MultiPoly::linear(
                            &(0..4)
                                .map(|k| self.matrices[k][i][j].clone())
                                .collect::<Vec<_>>(),
                        )
                    })
                    .collect()
            })
            .collect()
    }

    /// `det A(x)` by cofactor expansion over the polynomial ring.
    pub fn determinant(&self) -> MultiPoly<C> {
        poly_det(&self.linear_entries())
    }

    /// Adjugate of `A(x)`: entries are cubic forms.
    pub fn adjugate(&self) -> Mat<MultiPoly<C>> {
        poly_adjugate(&self.linear_entries())
    }

    /// Replace each `Ai` by `T^t Ai T`.
    pub fn congruence_apply(&self, t: &[Vec<C>]) -> Result<Self> {
        if t.len() != 4 || t.iter().any(|r| r.len() != 4) {
            return Err(Error::DimensionMismatch {
                expected: 4,
                got: t.len(),
            });
        }
        let d = det(t);
        if d.is_zero() || (!C::EXACT && d.magnitude() < 1e-14 * linalg::max_abs(t).powi(4)) {
            return Err(Error::SingularTransform);
        }
        Ok(SymmetricPencil {
            matrices: self.matrices.clone().map(|m| linalg::congruence(&m, t)),
        })
    }

    /// Pencil `B(y) = A(S y)`.
    pub fn change_coordinates(&self, s: &[Vec<C>]) -> Self {
        let matrices = std::array::from_fn(|j| {
            (0..4)
                .map(|r| {
                    (0..4)
                        .map(|c| {
                            (0..4).fold(C::zero(), |acc, i| {
                                acc + s[i][j].clone() * self.matrices[i][r][c].clone()
                            })
                        })
                        .collect()
                })
                .collect()
        });
        SymmetricPencil { matrices }
    }

    pub fn to_c64(&self) -> CPencil {
        SymmetricPencil {
            matrices: self.matrices.clone().map(|m| {
                m.iter()
                    .map(|r| r.iter().map(Coeff::to_c64).collect())
                    .collect()
            }),
        }
    }

    /// Real parts of the entries, if all imaginary parts are negligible.
    pub fn to_f64(&self) -> Option<[Mat<f64>; 4]> {
        let scale = self.max_entry().max(1e-300);
        let mut out: [Mat<f64>; 4] = Default::default();
        for (k, m) in self.matrices.iter().enumerate() {
            let mut rows = Vec::with_capacity(4);
            for r in m {
                let mut row = Vec::with_capacity(4);
                for c in r {
                    let z = c.to_c64();
                    if z.im.abs() > 1e-12 * scale {
                        return None;
                    }
                    row.push(z.re);
                }
                rows.push(row);
            }
            out[k] = rows;
        }
        Some(out)
    }

    pub fn is_real(&self) -> bool {
        self.to_f64().is_some()
    }
}

pub fn poly_det<C: Coeff>(m: &[Vec<MultiPoly<C>>]) -> MultiPoly<C> {
    let n = m.len();
    let nvars = m[0][0].nvars();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = MultiPoly::zero(nvars);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor = minor_of(m, 0, j);
        let term = &m[0][j] * &poly_det(&minor);
        acc = if j % 2 == 0 {
            &acc + &term
        } else {
            &acc - &term
        };
    }
    acc
}

pub fn minor_of<T: Clone>(m: &[Vec<T>], row: usize, col: usize) -> Vec<Vec<T>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != col)
                .map(|(_, v)| v.clone())
                .collect()
        })
        .collect()
}

/// Signed cofactor `(-1)^(i+j) det(minor_ij)`.
pub fn poly_cofactor<C: Coeff>(m: &[Vec<MultiPoly<C>>], i: usize, j: usize) -> MultiPoly<C> {
    let d = poly_det(&minor_of(m, i, j));
    if (i + j).is_multiple_of(2) {
        d
    } else {
        -&d
    }
}

pub fn poly_adjugate<C: Coeff>(m: &[Vec<MultiPoly<C>>]) -> Mat<MultiPoly<C>> {
    let n = m.len();
    (0..n)
        .map(|i| (0..n).map(|j| poly_cofactor(m, j, i)).collect())
        .collect()
}

/// Exact inertia of a rational symmetric matrix.
pub fn matrix_signature(m: &[Vec<Rational>]) -> Result<Signature> {
    if !linalg::is_symmetric(m) {
        return Err(Error::NotSymmetric);
    }
    Ok(linalg::signature(m))
}

/// Outcome of the search for a point with `A(e)` positive definite.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum InteriorSearch {
    Interior {
        point: Vec<f64>,
        min_eigenvalue: f64,
    },
    /// No start produced a definite matrix; `margin` is the best minimum
    /// eigenvalue reached (probabilistic, not a certificate of emptiness).
    EmptyWithMargin { margin: f64, best_point: Vec<f64> },
}

impl InteriorSearch {
    pub fn point(&self) -> Option<&[f64]> {
        match self {
            InteriorSearch::Interior { point, .. } => Some(point),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, InteriorSearch::EmptyWithMargin { .. })
    }
}

pub const INTERIOR_MARGIN: f64 = 1e-8;

fn eval_f64(mats: &[Mat<f64>; 4], x: &[f64]) -> Mat<f64> {
    (0..4)
        .map(|i| {
            (0..4)
                .map(|j| (0..4).map(|k| mats[k][i][j] * x[k]).sum())
                .collect()
        })
        .collect()
}

fn normalize4(x: &mut [f64]) {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter_mut().for_each(|v| *v /= n);
}

/// `(λ_min, unit eigenvector)` of `A(x)`.
fn min_eig(mats: &[Mat<f64>; 4], x: &[f64]) -> (f64, Vec<f64>) {
    let (vals, vecs) = sym_eigen(&eval_f64(mats, x));
    (vals[0], (0..4).map(|r| vecs[r][0]).collect())
}

/// Multistart projected gradient ascent of `λ_min(A(x))` on the unit sphere.
/// The pencil is scaled so its largest entry is one before margins are compared.
pub fn find_interior_point<C: Coeff>(
    p: &SymmetricPencil<C>,
    seed: u64,
    starts: usize,
) -> Result<InteriorSearch> {
    let mut mats = p
        .to_f64()
        .ok_or_else(|| Error::Unsupported("interior point of a complex pencil".into()))?;
    let scale = mats
        .iter()
        .flatten()
        .flatten()
        .fold(0.0f64, |a, v| a.max(v.abs()));
    for m in mats.iter_mut() {
        for v in m.iter_mut().flatten() {
            *v /= scale;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1b7e_1510_9a3f_c0de);
    let mut best = (f64::NEG_INFINITY, vec![0.0; 4]);
    for _ in 0..starts.max(1) {
        let mut x: Vec<f64> = (0..4).map(|_| rng.sample(StandardNormal)).collect();
        normalize4(&mut x);
        // A(-x) = -A(x): start on the better side
        let (lo, _) = min_eig(&mats, &x);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        if min_eig(&mats, &neg).0 > lo {
            x = neg;
        }
        let (mut val, mut v) = min_eig(&mats, &x);
        let mut step = 0.5;
        for _ in 0..400 {
            let grad: Vec<f64> = (0..4)
                .map(|k| {
                    (0..4)
                        .map(|i| (0..4).map(|j| v[i] * mats[k][i][j] * v[j]).sum::<f64>())
                        .sum()
                })
                .collect();
            let mut cand: Vec<f64> = x.iter().zip(&grad).map(|(a, g)| a + step * g).collect();
            normalize4(&mut cand);
            let (cv, cvec) = min_eig(&mats, &cand);
            if cv > val {
                x = cand;
                val = cv;
                v = cvec;
                step = (step * 1.5).min(1.0);
            } else {
                step *= 0.5;
                if step < 1e-12 {
                    break;
                }
            }
        }
        if val > best.0 {
            best = (val, x.clone());
        }
        if val > INTERIOR_MARGIN && leading_minors_positive(&eval_f64(&mats, &x)) {
            return Ok(InteriorSearch::Interior {
                point: x,
                min_eigenvalue: val,
            });
        }
    }
    Ok(InteriorSearch::EmptyWithMargin {
        margin: best.0,
        best_point: best.1,
    })
}

fn leading_minors_positive(m: &[Vec<f64>]) -> bool {
    (1..=4).all(|k| {
        let sub: Vec<Vec<f64>> = m[..k].iter().map(|r| r[..k].to_vec()).collect();
        det(&sub
            .iter()
            .map(|r| r.iter().map(|&v| C64::new(v, 0.0)).collect())
            .collect::<Vec<_>>())
        .re > 0.0
    })
}

// ---------- JSON ----------

fn entry_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::from_integer(i.into()))
            } else {
                parse_rational(&n.to_string())
            }
        }
        Value::String(s) => parse_rational(s),
        other => Err(Error::Parse(format!(
            "matrix entry must be a number or \"p/q\" string, got {other}"
        ))),
    }
}

fn entry_to_json(q: &Rational) -> Value {
    if q.is_integer() {
        if let Some(i) = q.to_integer().to_i64() {
            return Value::from(i);
        }
    }
    Value::String(format_rational(q))
}

impl QPencil {
    pub fn from_ints(m: [[[i64; 4]; 4]; 4]) -> Result<Self> {
        Self::new(m.map(|a| {
            a.iter()
                .map(|r| {
                    r.iter()
                        .map(|&v| Rational::from_integer(v.into()))
                        .collect()
                })
                .collect()
        }))
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let mats = v
            .get("matrices")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("expected {\"matrices\": [...]}".into()))?;
        if mats.len() != 4 {
            return Err(Error::Parse(format!(
                "expected 4 matrices, got {}",
                mats.len()
            )));
        }
        let mut out: [Mat<Rational>; 4] = Default::default();
        for (k, m) in mats.iter().enumerate() {
            let rows = m
                .as_array()
                .ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
            if rows.len() != 4 {
                return Err(Error::Parse("matrices must be 4x4".into()));
            }
            for r in rows {
                let r = r
                    .as_array()
                    .ok_or_else(|| Error::Parse("row must be an array".into()))?;
                if r.len() != 4 {
                    return Err(Error::Parse("matrices must be 4x4".into()));
                }
                out[k].push(r.iter().map(entry_from_json).collect::<Result<Vec<_>>>()?);
            }
        }
        Self::new(out)
    }

    pub fn to_json(&self) -> Value {
        let mats: Vec<Value> = self
            .matrices
            .iter()
            .map(|m| {
                Value::Array(
                    m.iter()
                        .map(|r| Value::Array(r.iter().map(entry_to_json).collect()))
                        .collect(),
                )
            })
            .collect();
        serde_json::json!({ "matrices": mats })
    }

    /// `A(x)` at a real float point.
    pub fn at_f64(&self, x: &[f64]) -> Mat<f64> {
        (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| {
                        (0..4)
                            .map(|k| rational_to_f64(&self.matrices[k][i][j]) * x[k])
                            .sum()
                    })
                    .collect()
            })
            .collect()
    }
}

impl CPencil {
    /// JSON with entries as `{"re": .., "im": ..}` objects.
    pub fn to_json(&self) -> Value {
        let mats: Vec<Value> = self
            .matrices
            .iter()
            .map(|m| {
                Value::Array(
                    m.iter()
                        .map(|r| {
                            Value::Array(
                                r.iter()
                                    .map(|c| serde_json::json!({"re": c.re, "im": c.im}))
                                    .collect(),
                            )
                        })
                        .collect(),
                )
            })
            .collect();
        serde_json::json!({ "matrices": mats })
    }
}

/// Point of the interior as a projective point.
pub fn interior_point(search: &InteriorSearch) -> Option<ProjPoint> {
    search.point().and_then(|x| ProjPoint::from_real(x).ok())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::poly::scalar::int;

    pub fn diagonal() -> QPencil {
        let mut m = [[[0i64; 4]; 4]; 4];
        for (k, mat) in m.iter_mut().enumerate() {
            mat[k][k] = 1;
        }
        QPencil::from_ints(m).unwrap()
    }

    #[test]
    fn diagonal_determinant_and_adjugate() {
        let p = diagonal();
        assert_eq!(p.determinant(), parse_poly(4, "x0*x1*x2*x3").unwrap());
        let adj = p.adjugate();
        assert_eq!(adj[0][0], parse_poly(4, "x1*x2*x3").unwrap());
        assert_eq!(adj[3][3], parse_poly(4, "x0*x1*x2").unwrap());
        assert!(adj[0][1].is_zero());
    }

    #[test]
    fn congruence_scaling() {
        let p = diagonal();
        let two: Mat<Rational> = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| if i == j { int(2) } else { int(0) })
                    .collect()
            })
            .collect();
        let q = p.congruence_apply(&two).unwrap();
        assert_eq!(q.determinant(), p.determinant().scale(&int(256)));
        let id = linalg::identity::<Rational>(4);
        assert_eq!(p.congruence_apply(&id).unwrap(), p);
        let sing: Mat<Rational> = vec![vec![int(0); 4]; 4];
        assert!(matches!(
            p.congruence_apply(&sing),
            Err(Error::SingularTransform)
        ));
    }

    #[test]
    fn validation() {
        let mut m = [[[0i64; 4]; 4]; 4];
        m[0][0][1] = 1;
        assert!(matches!(QPencil::from_ints(m), Err(Error::NotSymmetric)));
        let zero = [[[0i64; 4]; 4]; 4];
        assert!(matches!(
            QPencil::from_ints(zero),
            Err(Error::DegeneratePencil)
        ));
    }

    #[test]
    fn json_round_trip() {
        let p = diagonal();
        let v = p.to_json();
        assert_eq!(QPencil::from_json(&v).unwrap(), p);
        let with_fraction = serde_json::json!({"matrices": [
            [["1/2",0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]],
            [[0,0,0,0],[0,1,0,0],[0,0,0,0],[0,0,0,0]],
            [[0,0,0,0],[0,0,0,0],[0,0,1,0],[0,0,0,0]],
            [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,1]]]});
        let q = QPencil::from_json(&with_fraction).unwrap();
        assert_eq!(q.matrices()[0][0][0], crate::poly::scalar::rat(1, 2));
        assert!(QPencil::from_json(&serde_json::json!({"matrices": [1, 2]})).is_err());
    }

    #[test]
    fn interior_of_diagonal_pencil() {
        let p = diagonal();
        let r = find_interior_point(&p, 0, 64).unwrap();
        let x = r.point().expect("orthant interior");
        assert!(x.iter().all(|&v| v > 0.0) || x.iter().all(|&v| v < 0.0));
    }
}
