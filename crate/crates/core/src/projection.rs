//! Projection of the symmetroid from a rank-2 node.
//!
//! After moving the node to `e0` and putting `A(e0)` into the hyperbolic block
//! `kappa (E12 + E21)`, the quartic reads `-kappa^2 q x0^2 + 2 kappa g x0 + Delta`
//! with `q`, `g`, `Delta` forms in `(x1, x2, x3)`. The branch sextic
//! `g^2 + q Delta` splits as `F11 F22`, the two diagonal cofactors of the
//! remaining linear block, and the other rank-2 nodes lie over `F11 = F22 = 0`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result, StageExt};
use crate::linalg::{
    self, lstsq_c64, numerical_rank, singular_values, smallest_right_singular_vectors, sym_eigen,
    Mat,
};
use crate::nodes::{classify_node, Node, NodeSystem, DEDUP_RADIUS};
use crate::pencil::{poly_cofactor, poly_det, CPencil, SymmetricPencil};
use crate::poly::intersect::{plane_curve_intersections_with, IntersectOptions};
use crate::poly::json::cpoly_to_json;
use crate::poly::point::dedup_points;
use crate::poly::roots::real_roots_sorted;
use crate::poly::scalar::{Coeff, C64};
use crate::poly::{
    curve_singular_points, monomials_of_degree, univariate_roots, CPoly, MultiPoly, ProjPoint,
    UniPoly,
};

/// Relative size below which `q`, `g`, `Delta` count as vanishing at an image point.
const VANISH_TOL: f64 = 1e-6;
/// `|q(y)|` below this (relative) switches the lift to the `Delta` branch.
const Q_BRANCH_TOL: f64 = 1e-8;
const IDENTITY_TOL: f64 = 1e-9;
const FORM_TOL: f64 = 1e-7;

/// Shape of `A(e0)` after normalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalForm {
    /// `E12 + E21`, from a real `(1,1)` node.
    Hyperbolic,
    /// `diag(1/2, 1/2, 0, 0)`, from a `(2,0)` node.
    HalfDiagonal,
    /// `diag(-1/2, -1/2, 0, 0)`, from a `(0,2)` node.
    NegHalfDiagonal,
    /// `E12 + E21` reached by a complex congruence (non-real node).
    ComplexHyperbolic,
}

impl NormalForm {
    fn target(self) -> Mat<C64> {
        let mut m = vec![vec![C64::new(0.0, 0.0); 4]; 4];
        match self {
            NormalForm::Hyperbolic | NormalForm::ComplexHyperbolic => {
                m[0][1] = C64::new(1.0, 0.0);
                m[1][0] = C64::new(1.0, 0.0);
            }
            NormalForm::HalfDiagonal | NormalForm::NegHalfDiagonal => {
                let h = if self == NormalForm::HalfDiagonal {
                    0.5
                } else {
                    -0.5
                };
                m[0][0] = C64::new(h, 0.0);
                m[1][1] = C64::new(h, 0.0);
            }
        }
        m
    }
}

/// A pencil normalized at a node: `pencil(y) = T^t A(S y) T` with `S e0` the node.
#[derive(Clone, Debug)]
pub struct Normalization {
    pub pencil: CPencil,
    pub s: Mat<C64>,
    pub t: Mat<C64>,
    pub form: NormalForm,
}

fn cvec_dot(a: &[C64], m: &[Vec<C64>], b: &[C64]) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..a.len() {
        for j in 0..b.len() {
            acc += a[i] * m[i][j] * b[j];
        }
    }
    acc
}

fn columns_to_mat(cols: &[Vec<C64>]) -> Mat<C64> {
    (0..4)
        .map(|r| cols.iter().map(|c| c[r]).collect())
        .collect()
}

/// Move a rank-2 node to `e0` and bring `A(node)` into normal form.
pub fn normalize_at_node<C: Coeff>(
    p: &SymmetricPencil<C>,
    node: &ProjPoint,
) -> Result<Normalization> {
    if node.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: node.dim(),
        });
    }
    let pc = p.to_c64();
    let real = node.is_real() && pc.is_real();
    let x: Vec<C64> = if real {
        node.real_coords()
            .into_iter()
            .map(|v| C64::new(v, 0.0))
            .collect()
    } else {
        node.coords().to_vec()
    };
    let piv = node.pivot();
    let mut cols = vec![x.clone()];
    for k in (0..4).filter(|&k| k != piv) {
        let mut e = vec![C64::new(0.0, 0.0); 4];
        e[k] = C64::new(1.0, 0.0);
        cols.push(e);
    }
    let s = columns_to_mat(&cols);
    let b = pc.change_coordinates(&s);
    let a = b.matrices()[0].clone();
    let scale = linalg::max_abs(&a).max(1e-300);
    let rank = numerical_rank(&a, FORM_TOL);
    if rank != 2 {
        return Err(Error::RankMismatch {
            expected: 2,
            found: rank,
        });
    }

    // already in a normal form: nothing to do
    for form in [
        NormalForm::Hyperbolic,
        NormalForm::HalfDiagonal,
        NormalForm::NegHalfDiagonal,
    ] {
        if linalg::max_abs(&sub(&a, &form.target())) < 1e-12 {
            let form = if real || form != NormalForm::Hyperbolic {
                form
            } else {
                NormalForm::ComplexHyperbolic
            };
            return finish(b, s, linalg::identity(4), form);
        }
    }

    let (t_cols, form) = if real {
        let ar: Mat<f64> = a.iter().map(|r| r.iter().map(|z| z.re).collect()).collect();
        let (vals, vecs) = sym_eigen(&ar);
        let mut idx: Vec<usize> = (0..4).collect();
        idx.sort_by(|&i, &j| vals[j].abs().total_cmp(&vals[i].abs()));
        let (big, small) = (&idx[..2], &idx[2..]);
        let col = |i: usize| -> Vec<C64> { (0..4).map(|r| C64::new(vecs[r][i], 0.0)).collect() };
        let kernel: Vec<Vec<C64>> = small.iter().map(|&i| col(i)).collect();
        let signs: Vec<bool> = big.iter().map(|&i| vals[i] > 0.0).collect();
        if signs[0] != signs[1] {
            let (ip, ineg) = if signs[0] {
                (big[0], big[1])
            } else {
                (big[1], big[0])
            };
            let a1: Vec<C64> = col(ip).iter().map(|v| v / vals[ip].sqrt()).collect();
            let b1: Vec<C64> = col(ineg).iter().map(|v| v / (-vals[ineg]).sqrt()).collect();
            let r2 = std::f64::consts::FRAC_1_SQRT_2;
            let u: Vec<C64> = a1.iter().zip(&b1).map(|(x, y)| (x + y) * r2).collect();
            let w: Vec<C64> = a1.iter().zip(&b1).map(|(x, y)| (x - y) * r2).collect();
            (
                vec![u, w, kernel[0].clone(), kernel[1].clone()],
                NormalForm::Hyperbolic,
            )
        } else {
            let form = if signs[0] {
                NormalForm::HalfDiagonal
            } else {
                NormalForm::NegHalfDiagonal
            };
            let mut cols: Vec<Vec<C64>> = big
                .iter()
                .map(|&i| {
                    col(i)
                        .iter()
                        .map(|v| v / (2.0 * vals[i].abs()).sqrt())
                        .collect()
                })
                .collect();
            cols.extend(kernel);
            (cols, form)
        }
    } else {
        (
            complex_hyperbolic_basis(&a, scale)?,
            NormalForm::ComplexHyperbolic,
        )
    };
    let t = columns_to_mat(&t_cols);
    let np = b.congruence_apply(&t)?;
    finish(np, s, t, form)
}

fn sub(a: &[Vec<C64>], b: &[Vec<C64>]) -> Mat<C64> {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect())
        .collect()
}

/// Check `A(e0)` against the target form and replace it by the exact target.
fn finish(np: CPencil, s: Mat<C64>, t: Mat<C64>, form: NormalForm) -> Result<Normalization> {
    let target = form.target();
    let m = np.matrices();
    let scale = np.max_entry().max(1.0);
    let err = linalg::max_abs(&sub(&m[0], &target));
    if err > FORM_TOL * scale {
        return Err(Error::IdentityFailed {
            what: "normal form at the node".into(),
            residual: err,
        });
    }
    let pencil = SymmetricPencil::new_unchecked([target, m[1].clone(), m[2].clone(), m[3].clone()]);
    Ok(Normalization { pencil, s, t, form })
}

/// Columns `u, w, k1, k2` with `u^t A u = w^t A w = 0`, `u^t A w = 1`, `A k = 0`.
fn complex_hyperbolic_basis(a: &[Vec<C64>], scale: f64) -> Result<Vec<Vec<C64>>> {
    let kernel = smallest_right_singular_vectors(a, 4, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(0x6e6f_726d);
    let mut gauss = || -> Vec<C64> {
        (0..4)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect()
    };
    for _ in 0..16 {
        let r = gauss();
        let alpha = cvec_dot(&r, a, &r);
        if alpha.norm() < 1e-3 * scale {
            continue;
        }
        let av: Vec<C64> = r.iter().map(|v| v / alpha.sqrt()).collect();
        let s0 = gauss();
        let proj = cvec_dot(&s0, a, &av);
        let b0: Vec<C64> = s0.iter().zip(&av).map(|(x, y)| x - proj * y).collect();
        let beta = cvec_dot(&b0, a, &b0);
        if beta.norm() < 1e-3 * scale {
            continue;
        }
        let bv: Vec<C64> = b0.iter().map(|v| v / beta.sqrt()).collect();
        let r2 = std::f64::consts::FRAC_1_SQRT_2;
        let i = C64::new(0.0, 1.0);
        let u: Vec<C64> = av.iter().zip(&bv).map(|(x, y)| (x + i * y) * r2).collect();
        let w: Vec<C64> = av.iter().zip(&bv).map(|(x, y)| (x - i * y) * r2).collect();
        return Ok(vec![u, w, kernel[0].clone(), kernel[1].clone()]);
    }
    Err(Error::Degenerate(
        "no congruence to hyperbolic form found".into(),
    ))
}

/// Turn a half-diagonal normal form into the hyperbolic one with the complex
/// congruence `u1 = ±(1, i, 0, 0)`, `u2 = (1, -i, 0, 0)`.
pub fn hyperbolize(n: &Normalization) -> Result<Normalization> {
    let sign = match n.form {
        NormalForm::Hyperbolic | NormalForm::ComplexHyperbolic => return Ok(n.clone()),
        NormalForm::HalfDiagonal => 1.0,
        NormalForm::NegHalfDiagonal => -1.0,
    };
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let u = vec![
        vec![one * sign, one, z, z],
        vec![i * sign, -i, z, z],
        vec![z, z, one, z],
        vec![z, z, z, one],
    ];
    let np = n.pencil.congruence_apply(&u)?;
    let t = linalg::mat_mul(&n.t, &u);
    let mut out = finish(np, n.s.clone(), t, NormalForm::Hyperbolic)?;
    out.form = n.form;
    Ok(out)
}

/// The forms `q`, `g`, `Delta`, `F11`, `F22` of a pencil whose `A0` is
/// `kappa (E12 + E21)`; all are polynomials in `(x1, x2, x3)`.
#[derive(Clone, Debug)]
pub struct Ramification<C: Coeff> {
    pub kappa: C,
    pub q: MultiPoly<C>,
    pub g: MultiPoly<C>,
    pub delta: MultiPoly<C>,
    pub f11: MultiPoly<C>,
    pub f22: MultiPoly<C>,
    /// Largest coefficient of `F11 F22 - g^2 - q Delta`, relative.
    pub identity_residual: f64,
}

impl<C: Coeff> Ramification<C> {
    /// `-kappa^2 q x0^2 + 2 kappa g x0 + Delta` as a quartic in four variables.
    pub fn quartic(&self) -> MultiPoly<C> {
        let x0 = MultiPoly::var(4, 0);
        let k = self.kappa.clone();
        let quad = self.q.insert_var(0).scale(&(-(k.clone() * k.clone()))) * x0.pow(2);
        let lin = self.g.insert_var(0).scale(&(C::from_i64(2) * k)) * x0;
        quad + lin + self.delta.insert_var(0)
    }

    /// The branch sextic `g^2 + q Delta`.
    pub fn sextic(&self) -> MultiPoly<C> {
        &(&self.g * &self.g) + &(&self.q * &self.delta)
    }
}

/// Read off the projection data of a normalized pencil.
pub fn ramification_data<C: Coeff>(p_norm: &SymmetricPencil<C>) -> Result<Ramification<C>> {
    let m = p_norm.matrices();
    let a0 = &m[0];
    let kappa = a0[0][1].clone();
    let tol = if C::EXACT {
        0.0
    } else {
        1e-9 * p_norm.max_entry().max(1.0)
    };
    let off = (0..4)
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .filter(|&(i, j)| !matches!((i, j), (0, 1) | (1, 0)))
        .map(|(i, j)| a0[i][j].magnitude())
        .fold((a0[0][1].clone() - a0[1][0].clone()).magnitude(), f64::max);
    if off > tol || kappa.magnitude() <= tol {
        return Err(Error::Degenerate(
            "pencil is not in hyperbolic form at (1:0:0:0)".into(),
        ));
    }
    let lin: Mat<MultiPoly<C>> = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| {
                    MultiPoly::linear(&[m[1][i][j].clone(), m[2][i][j].clone(), m[3][i][j].clone()])
                })
                .collect()
        })
        .collect();
    let q = &(&lin[2][2] * &lin[3][3]) - &(&lin[2][3] * &lin[2][3]);
    let g = poly_cofactor(&lin, 0, 1);
    let delta = poly_det(&lin);
    let f11 = poly_cofactor(&lin, 0, 0);
    let f22 = poly_cofactor(&lin, 1, 1);
    let diff = &(&f11 * &f22) - &(&(&g * &g) + &(&q * &delta));
    let identity_residual = if C::EXACT {
        if diff.is_zero() {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        let scale = (f11.max_coeff() * f22.max_coeff())
            .max(g.max_coeff().powi(2))
            .max(1e-300);
        diff.max_coeff() / scale
    };
    if identity_residual > IDENTITY_TOL {
        return Err(Error::IdentityFailed {
            what: "F11 F22 = g^2 + q Delta".into(),
            residual: identity_residual,
        });
    }
    let ram = Ramification {
        kappa,
        q,
        g,
        delta,
        f11,
        f22,
        identity_residual,
    };
    let expansion = &ram.quartic() - &p_norm.determinant();
    let rel = if C::EXACT {
        if expansion.is_zero() {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        expansion.max_coeff() / ram.delta.max_coeff().max(1e-300)
    };
    if rel > IDENTITY_TOL {
        return Err(Error::IdentityFailed {
            what: "x0-expansion of the determinant".into(),
            residual: rel,
        });
    }
    Ok(ram)
}

/// An intersection point of the two cubics.
#[derive(Clone, Debug, Serialize)]
pub struct ImagePoint {
    pub point: ProjPoint,
    pub multiplicity: usize,
    pub residual: f64,
}

/// Projection data from one node.
#[derive(Clone, Debug)]
pub struct NodalProjection {
    pub base: Node,
    pub normalization: Normalization,
    pub q: CPoly,
    pub g: CPoly,
    pub delta: CPoly,
    pub f11: CPoly,
    pub f22: CPoly,
    pub nine_points: Vec<ImagePoint>,
    pub cubics_real: bool,
    pub cubics_conjugate: bool,
    pub conic_real_point: Option<ProjPoint>,
    pub identity_residual: f64,
    /// Points of the intersection with multiplicity above one.
    pub tangencies: usize,
}

/// Scale so the coefficient at `m` (the largest coefficient of `reference`) is one.
fn scaled_at_largest(p: &CPoly, reference: &CPoly) -> Option<CPoly> {
    let (m, _) = reference
        .terms()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))?;
    let c = p.coeff(m);
    if c.norm() < 1e-12 * p.max_coeff() {
        return None;
    }
    Some(p.scale(&(C64::new(1.0, 0.0) / c)))
}

fn real_up_to_scalar(p: &CPoly) -> bool {
    scaled_at_largest(p, p).is_some_and(|s| s.max_imag() < 1e-8)
}

fn conjugate_up_to_scalar(a: &CPoly, b: &CPoly) -> bool {
    match (scaled_at_largest(a, a), scaled_at_largest(b, a)) {
        (Some(x), Some(y)) => y.distance(&x.conj()) < 1e-8,
        _ => false,
    }
}

/// A real point on the conic `q = 0`, found on random real lines.
pub fn conic_real_point(q: &CPoly, seed: u64, tries: usize) -> Option<ProjPoint> {
    let q = scaled_at_largest(q, q)?;
    if q.max_imag() > 1e-8 {
        return None;
    }
    let qr = q.real_part();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x636f_6e69);
    for _ in 0..tries {
        let a: Vec<f64> = (0..3).map(|_| rng.sample(StandardNormal)).collect();
        let b: Vec<f64> = (0..3).map(|_| rng.sample(StandardNormal)).collect();
        let at = |t: f64| -> f64 {
            let x: Vec<C64> = a
                .iter()
                .zip(&b)
                .map(|(u, v)| C64::new(u + t * v, 0.0))
                .collect();
            qr.eval_c64(&x).re
        };
        let c0 = at(0.0);
        let (p1, m1) = (at(1.0), at(-1.0));
        let c2 = 0.5 * (p1 + m1) - c0;
        let c1 = 0.5 * (p1 - m1);
        let disc = c1 * c1 - 4.0 * c2 * c0;
        if disc < 0.0 || c2.abs() < 1e-12 {
            continue;
        }
        let t = (-c1 + disc.sqrt()) / (2.0 * c2);
        let x: Vec<f64> = a.iter().zip(&b).map(|(u, v)| u + t * v).collect();
        if let Ok(p) = ProjPoint::from_real(&x) {
            return Some(p);
        }
    }
    None
}

/// Normalize at `node`, read off the ramification data, and intersect the cubics.
pub fn project_from_node<C: Coeff>(
    p: &SymmetricPencil<C>,
    node: &ProjPoint,
    seed: u64,
) -> Result<NodalProjection> {
    let base = classify_node(p, node).stage("classify")?;
    if base.rank != 2 {
        return Err(Error::Unsupported(format!(
            "projection from a rank-{} node",
            base.rank
        )));
    }
    let normalization = normalize_at_node(p, node).stage("normalize")?;
    let hyper = hyperbolize(&normalization).stage("normalize")?;
    let ram = ramification_data(&hyper.pencil).stage("ramification")?;
    let opts = IntersectOptions {
        seed,
        ..Default::default()
    };
    let nine: Vec<ImagePoint> = plane_curve_intersections_with(&ram.f11, &ram.f22, &opts)
        .stage("intersect")?
        .into_iter()
        .map(|i| ImagePoint {
            point: i.point,
            multiplicity: i.multiplicity,
            residual: i.residual,
        })
        .collect();
    let cubics_real = real_up_to_scalar(&ram.f11) && real_up_to_scalar(&ram.f22);
    let cubics_conjugate = !cubics_real && conjugate_up_to_scalar(&ram.f11, &ram.f22);
    let conic_real_point = conic_real_point(&ram.q, seed, 200);
    let tangencies = nine.iter().filter(|p| p.multiplicity > 1).count();
    Ok(NodalProjection {
        base,
        normalization: hyper,
        q: ram.q,
        g: ram.g,
        delta: ram.delta,
        f11: ram.f11,
        f22: ram.f22,
        nine_points: nine,
        cubics_real,
        cubics_conjugate,
        conic_real_point,
        identity_residual: ram.identity_residual,
        tangencies,
    })
}

impl NodalProjection {
    /// Point of the original space over the image `y` at height `t`.
    fn to_original(&self, t: C64, y: &[C64]) -> Vec<C64> {
        let v = [t, y[0], y[1], y[2]];
        let s = &self.normalization.s;
        (0..4)
            .map(|r| (0..4).map(|c| s[r][c] * v[c]).sum())
            .collect()
    }

    /// Candidate preimages of an image point: the double root of the
    /// quadratic in `x0`, or the nodes on the line through the base when the
    /// whole line lies in the surface.
    fn lift_candidates(&self, y: &ProjPoint, sys: &NodeSystem) -> Vec<Vec<C64>> {
        let u = y.unit();
        let rel = |p: &CPoly| p.eval_c64(&u).norm() / p.max_coeff().max(1e-300);
        let (qv, gv, dv) = (rel(&self.q), rel(&self.g), rel(&self.delta));
        if qv < VANISH_TOL && gv < VANISH_TOL && dv < VANISH_TOL {
            return self.line_candidates(&u, sys);
        }
        let (q, g, d) = (
            self.q.eval_c64(&u),
            self.g.eval_c64(&u),
            self.delta.eval_c64(&u),
        );
        let t = if qv >= Q_BRANCH_TOL { g / q } else { -d / g };
        vec![self.to_original(t, &u)]
    }

    /// Nodes on the line through the base node and `S (0, y)`: roots of a
    /// random combination of the partials restricted to the line.
    fn line_candidates(&self, y: &[C64], sys: &NodeSystem) -> Vec<Vec<C64>> {
        let base = self.to_original(C64::new(1.0, 0.0), &[C64::new(0.0, 0.0); 3]);
        let far = self.to_original(C64::new(0.0, 0.0), y);
        let nb = base.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let nf = far.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let base: Vec<C64> = base.iter().map(|v| v / nb).collect();
        let far: Vec<C64> = far.iter().map(|v| v / nf).collect();
        let weights = [
            C64::new(0.83, -0.21),
            C64::new(-0.37, 0.64),
            C64::new(0.52, 0.33),
            C64::new(-0.18, -0.71),
        ];
        let nodes = C64::interpolation_nodes(4);
        let values: Vec<C64> = nodes
            .iter()
            .map(|&t| {
                let x: Vec<C64> = base.iter().zip(&far).map(|(b, f)| b * t + f).collect();
                sys.gradient_at(&x)
                    .iter()
                    .zip(&weights)
                    .map(|(g, w)| g * w)
                    .sum()
            })
            .collect();
        // the base node is the root at infinity: drop the cubic coefficient
        let mut coeffs = C64::interpolate(&nodes, &values);
        coeffs.truncate(3);
        let h = UniPoly::new(coeffs);
        let roots = match h.degree() {
            Some(d) if d >= 1 => univariate_roots(&h).unwrap_or_default(),
            _ => Vec::new(),
        };
        roots
            .iter()
            .map(|r| {
                base.iter()
                    .zip(&far)
                    .map(|(b, f)| b * r.value + f)
                    .collect()
            })
            .collect()
    }
}

/// Lift the intersection points to nodes of the surface, polishing each with
/// Newton's method. Every image point must yield at least one node.
pub fn lift_nine_nodes(proj: &NodalProjection, sys: &NodeSystem) -> Result<Vec<ProjPoint>> {
    let mut out = Vec::new();
    for ip in &proj.nine_points {
        let mut found = 0;
        for x in proj.lift_candidates(&ip.point, sys) {
            if let Some(n) = sys.newton(&x, 40) {
                if n.distance(&proj.base.point) > DEDUP_RADIUS {
                    out.push(n);
                    found += 1;
                }
            }
        }
        if found == 0 {
            let x = proj
                .lift_candidates(&ip.point, sys)
                .into_iter()
                .next()
                .unwrap_or_else(|| vec![C64::new(0.0, 0.0); 4]);
            let (f, grad) = ProjPoint::new(x)
                .map(|p| sys.residuals(&p))
                .unwrap_or((f64::INFINITY, f64::INFINITY));
            return Err(Error::ResidualGate { f, grad });
        }
    }
    Ok(dedup_points(out, DEDUP_RADIUS)
        .into_iter()
        .map(|(p, _)| p)
        .collect())
}

/// Extra nodes over singular points of either cubic (rank-3 nodes project
/// there). Candidates that fail the gates are dropped.
pub fn lift_singular_images(proj: &NodalProjection, sys: &NodeSystem, seed: u64) -> Vec<ProjPoint> {
    let mut out = Vec::new();
    for c in [&proj.f11, &proj.f22] {
        let Ok(sing) = curve_singular_points(c, seed, 1e-7) else {
            continue;
        };
        for y in sing {
            for x in proj.lift_candidates(&y, sys) {
                if let Some(n) = sys.newton(&x, 40) {
                    if n.distance(&proj.base.point) > DEDUP_RADIUS {
                        out.push(n);
                    }
                }
            }
        }
    }
    out
}

/// All nodes other than `node` reachable by projecting from it.
pub fn nodes_from_projection<C: Coeff>(
    p: &SymmetricPencil<C>,
    node: &ProjPoint,
    sys: &NodeSystem,
    seed: u64,
) -> Result<Vec<ProjPoint>> {
    let proj = project_from_node(p, node, seed)?;
    let mut pts = lift_nine_nodes(&proj, sys).stage("lift")?;
    pts.extend(lift_singular_images(&proj, sys, seed));
    Ok(dedup_points(pts, DEDUP_RADIUS)
        .into_iter()
        .map(|(p, _)| p)
        .collect())
}

/// True iff every intersection of the conic with the cubic has even multiplicity.
pub fn total_tangency_check<C: Coeff>(q: &MultiPoly<C>, c: &MultiPoly<C>) -> Result<bool> {
    let pts = plane_curve_intersections_with(q, c, &IntersectOptions::default())?;
    Ok(pts.iter().all(|p| p.multiplicity % 2 == 0))
}

/// Split the branch sextic into its two cubic factors given its nine singular points.
pub fn factor_ramification_sextic(
    s: &CPoly,
    sing: &[ProjPoint],
    seed: u64,
) -> Result<(CPoly, CPoly)> {
    if s.nvars() != 3 || s.degree() != Some(6) {
        return Err(Error::DegreeMismatch("expected a plane sextic".into()));
    }
    let mons = monomials_of_degree(3, 3);
    let rows: Mat<C64> = sing
        .iter()
        .map(|p| {
            let u = p.unit();
            mons.iter().map(|m| m.eval(&u)).collect()
        })
        .collect();
    let sv = singular_values(&rows);
    let top = sv.first().copied().unwrap_or(0.0);
    let rank = sv.iter().filter(|&&v| v > 1e-8 * top).count();
    if rank != 8 {
        return Err(Error::NullSpaceDimension {
            what: "cubics through the singular points".into(),
            dim: 10 - rank,
        });
    }
    let basis = smallest_right_singular_vectors(&rows, 10, 2);
    let cubic = |v: &[C64]| CPoly::from_coeff_vector(3, 3, v);
    let (c1, c2) = (cubic(&basis[0]), cubic(&basis[1]));

    // points of V(s) on random lines: each lies on exactly one factor, which
    // fixes the ratio (lambda : mu) of the member lambda c1 + mu c2 through it
    let sn = s.normalized();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7365_7874);
    let mut ratios: Vec<(C64, C64)> = Vec::new();
    for _ in 0..3 {
        let a: Vec<C64> = (0..3)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let b: Vec<C64> = (0..3)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let nodes = C64::interpolation_nodes(7);
        let vals: Vec<C64> = nodes
            .iter()
            .map(|&t| sn.eval_c64(&a.iter().zip(&b).map(|(x, y)| x + t * y).collect::<Vec<_>>()))
            .collect();
        let h = UniPoly::new(C64::interpolate(&nodes, &vals));
        for r in univariate_roots(&h)? {
            let z: Vec<C64> = a.iter().zip(&b).map(|(x, y)| x + r.value * y).collect();
            let (v1, v2) = (c1.eval_c64(&z), c2.eval_c64(&z));
            let n = (v1.norm_sqr() + v2.norm_sqr()).sqrt();
            if n > 0.0 {
                ratios.push((v2 / n, -v1 / n));
            }
        }
    }
    let same = |x: &(C64, C64), y: &(C64, C64)| (x.0 * y.1 - x.1 * y.0).norm() < 1e-6;
    let mut groups: Vec<((C64, C64), usize)> = Vec::new();
    for r in &ratios {
        match groups.iter_mut().find(|(g, _)| same(g, r)) {
            Some(g) => g.1 += 1,
            None => groups.push((*r, 1)),
        }
    }
    groups.sort_by_key(|g| std::cmp::Reverse(g.1));
    if groups.len() < 2 || groups[0].1 + groups[1].1 != ratios.len() {
        return Err(Error::NotFound(
            "no pair of cubics through the singular points divides the sextic".into(),
        ));
    }
    let member = |(l, m): (C64, C64)| &c1.scale(&l) + &c2.scale(&m);
    let (fa, fb) = (
        member(groups[0].0).normalized(),
        member(groups[1].0).normalized(),
    );
    let prod = &fa * &fb;
    let pv = prod.coeff_vector(6);
    let sv6 = s.coeff_vector(6);
    let c = lstsq_c64(&pv.iter().map(|v| vec![*v]).collect::<Vec<_>>(), &sv6)?[0];
    let res = (&prod.scale(&c) - s).max_coeff() / s.max_coeff();
    if res > 1e-9 {
        return Err(Error::IdentityFailed {
            what: "F11 F22 = sextic".into(),
            residual: res,
        });
    }
    Ok((fa.scale(&c), fb))
}

/// Outcome of a Monte Carlo interlacing test.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Interlacing {
    Pass {
        samples: usize,
    },
    Fail {
        witness: Vec<f64>,
        f_roots: Vec<f64>,
        h_roots: Vec<f64>,
        reason: String,
    },
}

impl Interlacing {
    pub fn passed(&self) -> bool {
        matches!(self, Interlacing::Pass { .. })
    }
}

/// Coefficients of `p(t e + x)` as a polynomial in `t`.
fn restrict_to_line<C: Coeff>(p: &MultiPoly<C>, e: &[f64], x: &[f64]) -> UniPoly<C64> {
    let d = p.degree().unwrap_or(0) as usize;
    let nodes = C64::interpolation_nodes(d + 1);
    let vals: Vec<C64> = nodes
        .iter()
        .map(|&t| {
            let pt: Vec<C64> = e.iter().zip(x).map(|(a, b)| t * *a + *b).collect();
            p.eval_c64(&pt)
        })
        .collect();
    let coeffs = C64::interpolate(&nodes, &vals);
    UniPoly::new(coeffs.into_iter().map(|c| C64::new(c.re, 0.0)).collect())
}

/// Check that the roots of `h(t e + x)` separate those of `f(t e + x)` on
/// `samples` random real lines.
pub fn interlacing_check<C: Coeff>(
    f: &MultiPoly<C>,
    h: &MultiPoly<C>,
    e: &[f64],
    samples: usize,
    seed: u64,
) -> Result<Interlacing> {
    let n = f.nvars();
    let d = f.degree().unwrap_or(0);
    if h.nvars() != n || e.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: h.nvars().min(e.len()),
        });
    }
    if !(3..=4).contains(&d) || h.degree() != Some(d - 1) {
        return Err(Error::DegreeMismatch(format!(
            "need deg f in {{3,4}} and deg h = deg f - 1, got {d} and {:?}",
            h.degree()
        )));
    }
    let ec: Vec<C64> = e.iter().map(|&v| C64::new(v, 0.0)).collect();
    if f.eval_c64(&ec).norm() < 1e-12 * f.to_c64().max_coeff() {
        return Err(Error::Degenerate("f vanishes at the base point".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x696e_746c);
    for _ in 0..samples {
        let x: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let fr = real_line_roots(&restrict_to_line(f, e, &x));
        let hr = real_line_roots(&restrict_to_line(h, e, &x));
        let fail = |reason: &str, fr: Vec<f64>, hr: Vec<f64>| Interlacing::Fail {
            witness: x.clone(),
            f_roots: fr,
            h_roots: hr,
            reason: reason.into(),
        };
        let (Some(fr), Some(hr)) = (fr, hr) else {
            return Ok(fail("non-real roots", Vec::new(), Vec::new()));
        };
        if fr.len() != d as usize || hr.len() + 1 != fr.len() {
            return Ok(fail("root count", fr, hr));
        }
        let scale = fr.iter().chain(&hr).fold(1.0f64, |a, v| a.max(v.abs()));
        let tie = 1e-9 * scale;
        let ordered = hr
            .iter()
            .enumerate()
            .all(|(k, b)| fr[k] <= b + tie && *b <= fr[k + 1] + tie);
        if !ordered {
            return Ok(fail("roots do not interlace", fr, hr));
        }
    }
    Ok(Interlacing::Pass { samples })
}

fn real_line_roots(p: &UniPoly<C64>) -> Option<Vec<f64>> {
    if p.degree().unwrap_or(0) == 0 {
        return Some(Vec::new());
    }
    let roots = univariate_roots(p).ok()?;
    real_roots_sorted(&roots, 1e-7)
}

impl NodalProjection {
    pub fn to_json(&self) -> Value {
        json!({
            "base": self.base,
            "form": self.normalization.form,
            "q": cpoly_to_json(&self.q),
            "g": cpoly_to_json(&self.g),
            "Delta": cpoly_to_json(&self.delta),
            "F11": cpoly_to_json(&self.f11),
            "F22": cpoly_to_json(&self.f22),
            "nine_points": self.nine_points,
            "cubics_real": self.cubics_real,
            "cubics_conjugate": self.cubics_conjugate,
            "conic_real_point": self.conic_real_point,
            "identity_residual": self.identity_residual,
            "tangencies": self.tangencies,
            "tolerances": { "identity": IDENTITY_TOL, "vanish": VANISH_TOL, "q_branch": Q_BRANCH_TOL },
        })
    }
}
