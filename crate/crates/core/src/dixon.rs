//! Symmetric determinantal representations rebuilt from the view from a node
//! by Dixon's method.
//!
//! With the node at `(1:0:0:0)` the quartic reads `-q x0^2 + 2 g x0 + Delta`,
//! and a ramification cubic `F11` satisfies `F11 F22 = g^2 + q Delta`. The
//! cubics through the half intersection `Z_Delta` of `F11` and `Delta` form a
//! four-dimensional space. Products of its basis members reduce modulo
//! `<F11, Delta>` to a symmetric matrix of cubics `F` with `det F = c Delta^3`,
//! and `adj(F) / Delta^2` is the linear part of the pencil.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result, StageExt};
use crate::linalg::{self, lstsq_c64, singular_values, smallest_right_singular_vectors, Mat};
use crate::nodes::{multistart_nodes, NodeOptions, NodeSystem, F_GATE, GRAD_GATE};
use crate::pencil::{poly_adjugate, poly_det, SymmetricPencil};
use crate::poly::intersect::{plane_curve_intersections, polish_common_zero, Intersection};
use crate::poly::json::{cpoly_to_json, poly_to_json};
use crate::poly::multi::{monomials_of_degree, CPoly, MultiPoly, QPoly};
use crate::poly::point::ProjPoint;
use crate::poly::scalar::{format_rational, rationalize, Coeff, Rational, C64};
use crate::projection::factor_ramification_sextic;

/// Relative residual gate for every identity checked in floating point.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Relative singular value below which a float matrix loses rank.
const RANK_TOL: f64 = 1e-8;
/// Largest denominator tried when snapping a float cubic to rationals.
const SNAP_DEN: i64 = 1_000_000;
/// Residual ratio separating true sextic nodes from shallow spurious minima.
const NODE_GAP: f64 = 1e3;
/// Gate for the ideal membership cross-check in floating point. The sextic
/// coefficient system is far worse conditioned than the point evaluation it
/// checks; the final determinant identity keeps the strict gate.
const CROSS_TOL: f64 = 1e-6;
/// Relative value below which a form vanishes at a computed point.
const SPLIT_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "COMPLEX")]
    Complex,
    /// `F11` real; the node is not on the spectrahedron.
    #[serde(rename = "REAL_11")]
    Real11,
    /// `F11` and `F22` complex conjugate; the pencil is semidefinite at the node.
    #[serde(rename = "REAL_20")]
    Real20,
}

/// `q`, `g`, `Delta` of a quartic with a node at `(1:0:0:0)`, in `(x1, x2, x3)`.
#[derive(Clone, Debug)]
pub struct NodeForms<C: Coeff> {
    pub q: MultiPoly<C>,
    pub g: MultiPoly<C>,
    pub delta: MultiPoly<C>,
}

impl<C: Coeff> NodeForms<C> {
    /// `-q x0^2 + 2 g x0 + Delta` in four variables.
    pub fn quartic(&self) -> MultiPoly<C> {
        let x0 = MultiPoly::var(4, 0);
        let quad = &(-&self.q.insert_var(0)) * &x0.pow(2);
        let lin = &self.g.insert_var(0).scale(&C::from_i64(2)) * &x0;
        &(&quad + &lin) + &self.delta.insert_var(0)
    }

    /// The branch sextic `g^2 + q Delta`.
    pub fn sextic(&self) -> MultiPoly<C> {
        &(&self.g * &self.g) + &(&self.q * &self.delta)
    }
}

/// Split a quartic singular at `(1:0:0:0)` into its `x0`-coefficients.
pub fn node_forms<C: Coeff>(f: &MultiPoly<C>) -> Result<NodeForms<C>> {
    if f.nvars() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: f.nvars(),
        });
    }
    if f.degree() != Some(4) || !f.is_homogeneous() {
        return Err(Error::DegreeMismatch("expected a quartic form".into()));
    }
    let coeffs = f.coefficients_in(0);
    let scale = f.max_coeff();
    for (k, c) in coeffs.iter().enumerate().skip(3) {
        let excess = if C::EXACT {
            if c.is_zero() {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            c.max_coeff() / scale
        };
        if excess > RESIDUAL_TOL {
            return Err(Error::Degenerate(format!(
                "(1:0:0:0) is not a node: x0^{k} occurs"
            )));
        }
    }
    let part = |k: usize| -> Result<MultiPoly<C>> {
        match coeffs.get(k) {
            Some(c) => c.drop_var(0),
            None => Ok(MultiPoly::zero(3)),
        }
    };
    let half = C::one() / C::from_i64(2);
    Ok(NodeForms {
        q: -&part(2)?,
        g: part(1)?.scale(&half),
        delta: part(0)?,
    })
}

/// A basis of the cubics through `Z_Delta` that starts with `F11` and `g`.
#[derive(Clone, Debug)]
pub struct CubicBasis<C: Coeff> {
    pub f11: MultiPoly<C>,
    pub f12: MultiPoly<C>,
    pub f13: MultiPoly<C>,
    pub f14: MultiPoly<C>,
}

impl<C: Coeff> CubicBasis<C> {
    pub fn members(&self) -> [&MultiPoly<C>; 4] {
        [&self.f11, &self.f12, &self.f13, &self.f14]
    }

    /// Rank of the 4 x 10 coefficient matrix.
    pub fn rank(&self) -> usize {
        let rows: Mat<C> = self.members().iter().map(|p| p.coeff_vector(3)).collect();
        matrix_rank(&rows)
    }
}

/// The six points of `Z_Delta`.
///
/// On `F11 = g = 0` the identity `F11 F22 = g^2 + q Delta` forces
/// `q Delta = 0`, so the nine transverse points of `V(F11, g)` split into
/// `Z_Delta` and three points on the conic `q`. When that split is clean it is
/// used directly; otherwise `Z_Delta` is read off `V(F11, Delta)` with every
/// multiplicity halved.
pub fn z_delta_points<C: Coeff>(
    f11: &MultiPoly<C>,
    g: &MultiPoly<C>,
    q: &MultiPoly<C>,
    delta: &MultiPoly<C>,
) -> Result<Vec<Intersection>> {
    if let Some(z) = z_delta_transverse(f11, g, q, delta) {
        return Ok(z);
    }
    let pts = plane_curve_intersections(f11, delta)?;
    let mut out = Vec::with_capacity(pts.len());
    for p in pts {
        if p.multiplicity % 2 != 0 {
            return Err(Error::Degenerate(format!(
                "F11 meets Delta with odd multiplicity {} at {:?}",
                p.multiplicity, p.point
            )));
        }
        let point = if p.multiplicity == 2 {
            polish_common_zero(f11, g, &p.point)
        } else {
            p.point
        };
        out.push(Intersection {
            multiplicity: p.multiplicity / 2,
            point,
            residual: p.residual,
        });
    }
    let total: usize = out.iter().map(|p| p.multiplicity).sum();
    if total != 6 {
        return Err(Error::Degenerate(format!(
            "Z_Delta has length {total}, expected 6"
        )));
    }
    Ok(out)
}

/// `Z_Delta` from nine simple points of `V(F11, g)`, or `None` when the
/// intersection is not reduced or a point does not sit on exactly one of
/// `Delta` and `q`.
fn z_delta_transverse<C: Coeff>(
    f11: &MultiPoly<C>,
    g: &MultiPoly<C>,
    q: &MultiPoly<C>,
    delta: &MultiPoly<C>,
) -> Option<Vec<Intersection>> {
    let pts = plane_curve_intersections(f11, g).ok()?;
    if pts.len() != 9 || pts.iter().any(|p| p.multiplicity != 1) {
        return None;
    }
    let rel = |p: &MultiPoly<C>, x: &ProjPoint| p.eval_c64(&x.unit()).norm() / p.coeff_norm();
    let mut z = Vec::with_capacity(6);
    let mut on_q = 0;
    for p in pts {
        let (d, c) = (rel(delta, &p.point), rel(q, &p.point));
        match (d < SPLIT_TOL, c < SPLIT_TOL) {
            (true, false) => z.push(p),
            (false, true) => on_q += 1,
            _ => return None,
        }
    }
    (z.len() == 6 && on_q == 3).then_some(z)
}

/// Cubics through `Z_Delta`, extended from `F11` and `g` by the rows of the
/// reduced row echelon form of the space (descending graded-lex columns).
pub fn cubic_space_basis<C: Coeff>(
    f11: &MultiPoly<C>,
    g: &MultiPoly<C>,
    delta: &MultiPoly<C>,
    z: &[Intersection],
) -> Result<CubicBasis<C>> {
    let reduced = z.len() == 6 && z.iter().all(|p| p.multiplicity == 1);
    if reduced {
        let conics: Mat<C64> = z
            .iter()
            .map(|p| {
                let u = p.point.unit();
                monomials_of_degree(3, 2)
                    .iter()
                    .map(|m| m.eval(&u))
                    .collect()
            })
            .collect();
        if float_rank(&conics) < 6 {
            return Err(Error::Degenerate("Z_Delta lies on a conic".into()));
        }
    }
    // Exact inputs use the exact description of the space; floats use the
    // points when they are reduced. The other route then checks the result.
    let mut space: Mat<C> = if C::EXACT || !reduced {
        ideal_quotient_space(f11, g, delta)?
    } else {
        let rows: Mat<C64> = z
            .iter()
            .map(|p| {
                let u = p.point.unit();
                monomials_of_degree(3, 3)
                    .iter()
                    .map(|m| m.eval(&u))
                    .collect()
            })
            .collect();
        smallest_right_singular_vectors(&rows, 10, 4)
            .into_iter()
            .map(|v| from_c64_vec(&v))
            .collect::<Result<_>>()?
    };
    let tol = if C::EXACT { 0.0 } else { RESIDUAL_TOL };
    let pivots = linalg::rref(&mut space, tol);
    space.truncate(pivots.len());
    if space.len() != 4 {
        return Err(Error::NullSpaceDimension {
            what: "cubics through Z_Delta".into(),
            dim: space.len(),
        });
    }
    if !C::EXACT {
        for row in space.iter_mut() {
            for v in row.iter_mut() {
                if v.magnitude() < 1e-13 {
                    *v = C::zero();
                }
            }
        }
    }
    let cubics: Vec<MultiPoly<C>> = space
        .iter()
        .map(|v| MultiPoly::from_coeff_vector(3, 3, v))
        .collect();

    for c in &cubics {
        if reduced {
            let r = point_residual(c, z);
            if r > RESIDUAL_TOL {
                return Err(Error::IdentityFailed {
                    what: "basis cubic vanishing on Z_Delta".into(),
                    residual: r,
                });
            }
        }
        let r = ideal_residual(&(c * g), f11, delta)?;
        if r > CROSS_TOL {
            return Err(Error::IdentityFailed {
                what: "basis cubic times g in <F11, Delta>".into(),
                residual: r,
            });
        }
    }
    for (name, p) in [("F11", f11), ("g", g)] {
        let r = span_residual(&space, &p.coeff_vector(3));
        if r > RESIDUAL_TOL {
            return Err(Error::IdentityFailed {
                what: format!("{name} in the space of cubics through Z_Delta"),
                residual: r,
            });
        }
    }

    let mut chosen: Mat<C> = vec![f11.coeff_vector(3), g.coeff_vector(3)];
    if matrix_rank(&chosen) != 2 {
        return Err(Error::Degenerate("F11 and g are proportional".into()));
    }
    for row in &space {
        if chosen.len() == 4 {
            break;
        }
        chosen.push(row.clone());
        if matrix_rank(&chosen) != chosen.len() {
            chosen.pop();
        }
    }
    let basis = CubicBasis {
        f11: f11.clone(),
        f12: g.clone(),
        f13: MultiPoly::from_coeff_vector(3, 3, &chosen[2]),
        f14: MultiPoly::from_coeff_vector(3, 3, &chosen[3]),
    };
    Ok(basis)
}

/// Cubics `C` with `C g` in `<F11, Delta>` in degree six, i.e. the kernel of
/// `(C, a, b) -> C g - a F11 - b Delta` projected to `C`.
fn ideal_quotient_space<C: Coeff>(
    f11: &MultiPoly<C>,
    g: &MultiPoly<C>,
    delta: &MultiPoly<C>,
) -> Result<Mat<C>> {
    let cubic = monomials_of_degree(3, 3);
    let conic = monomials_of_degree(3, 2);
    let mono = |m: &crate::poly::multi::Monomial| MultiPoly::monomial(3, &m.exps(3), C::one());
    let mut cols: Vec<Vec<C>> = Vec::new();
    for m in &cubic {
        cols.push((&mono(m) * g).coeff_vector(6));
    }
    for m in &cubic {
        cols.push((-&(&mono(m) * f11)).coeff_vector(6));
    }
    for m in &conic {
        cols.push((-&(&mono(m) * delta)).coeff_vector(6));
    }
    let a = linalg::transpose(&cols);
    let kernel: Mat<C> = if C::EXACT {
        linalg::nullspace(&a, cols.len(), 0.0)
    } else {
        let ac: Mat<C64> = a
            .iter()
            .map(|r| r.iter().map(Coeff::to_c64).collect())
            .collect();
        let sv = singular_values(&ac);
        let top = sv.first().copied().unwrap_or(0.0);
        let rank = sv.iter().filter(|&&v| v > RANK_TOL * top).count();
        smallest_right_singular_vectors(&ac, cols.len(), cols.len() - rank)
            .into_iter()
            .map(|v| from_c64_vec(&v))
            .collect::<Result<_>>()?
    };
    Ok(kernel.into_iter().map(|v| v[..10].to_vec()).collect())
}

/// Write `p` (degree six) as `a F11 + b Delta` with `a` a cubic and `b` a conic.
pub fn reduce_modulo<C: Coeff>(
    p: &MultiPoly<C>,
    f11: &MultiPoly<C>,
    delta: &MultiPoly<C>,
) -> Result<(MultiPoly<C>, MultiPoly<C>)> {
    let (cubic, conic, r) = reduce_with_residual(p, f11, delta)?;
    if r > RESIDUAL_TOL {
        return Err(Error::Inconsistent(format!(
            "product not in <F11, Delta> (residual {r:.3e})"
        )));
    }
    Ok((cubic, conic))
}

/// Best `a F11 + b Delta` approximation of `p` with its relative residual.
fn reduce_with_residual<C: Coeff>(
    p: &MultiPoly<C>,
    f11: &MultiPoly<C>,
    delta: &MultiPoly<C>,
) -> Result<(MultiPoly<C>, MultiPoly<C>, f64)> {
    let a = reduction_matrix(f11, delta);
    let rhs = p.coeff_vector(6);
    let x = if C::EXACT {
        match linalg::solve(&a, &rhs, 0.0) {
            Ok(x) => x,
            Err(Error::Inconsistent(_)) => {
                return Ok((MultiPoly::zero(3), MultiPoly::zero(3), f64::INFINITY))
            }
            Err(e) => return Err(e),
        }
    } else {
        let ac: Mat<C64> = a
            .iter()
            .map(|r| r.iter().map(Coeff::to_c64).collect())
            .collect();
        let bc: Vec<C64> = rhs.iter().map(Coeff::to_c64).collect();
        from_c64_vec(&lstsq_c64(&ac, &bc)?)?
    };
    let cubic = MultiPoly::from_coeff_vector(3, 3, &x[..10]);
    let conic = MultiPoly::from_coeff_vector(3, 2, &x[10..]);
    let back = &(&cubic * f11) + &(&conic * delta);
    let r = relative(&(&back - p), p);
    Ok((cubic, conic, r))
}

fn reduction_matrix<C: Coeff>(f11: &MultiPoly<C>, delta: &MultiPoly<C>) -> Mat<C> {
    let mut cols: Vec<Vec<C>> = Vec::new();
    for m in monomials_of_degree(3, 3) {
        cols.push((&MultiPoly::monomial(3, &m.exps(3), C::one()) * f11).coeff_vector(6));
    }
    for m in monomials_of_degree(3, 2) {
        cols.push((&MultiPoly::monomial(3, &m.exps(3), C::one()) * delta).coeff_vector(6));
    }
    linalg::transpose(&cols)
}

fn ideal_residual<C: Coeff>(
    p: &MultiPoly<C>,
    f11: &MultiPoly<C>,
    delta: &MultiPoly<C>,
) -> Result<f64> {
    reduce_with_residual(p, f11, delta).map(|(_, _, r)| r)
}

/// The symmetric matrices of cubics `F` and conics `Q` with
/// `F1j F1k = F11 Fjk + Qjk Delta`.
pub fn complete_cubic_matrix<C: Coeff>(
    basis: &CubicBasis<C>,
    delta: &MultiPoly<C>,
) -> Result<(Mat<MultiPoly<C>>, Mat<MultiPoly<C>>)> {
    let b = basis.members();
    let mut f = vec![vec![MultiPoly::zero(3); 4]; 4];
    let mut q = vec![vec![MultiPoly::zero(3); 4]; 4];
    for j in 0..4 {
        f[0][j] = b[j].clone();
        f[j][0] = b[j].clone();
    }
    for j in 1..4 {
        for k in j..4 {
            let (fjk, qjk) = reduce_modulo(&(b[j] * b[k]), &basis.f11, delta)?;
            f[j][k] = fjk.clone();
            f[k][j] = fjk;
            q[j][k] = qjk.clone();
            q[k][j] = qjk;
        }
    }
    Ok((f, q))
}

/// Relative residuals of the identities checked during assembly.
#[derive(Clone, Debug, Default, Serialize)]
pub struct DixonResiduals {
    pub det_f: f64,
    pub adjugate_division: f64,
    pub det_m: f64,
    pub adj_m: f64,
    pub det_m34: f64,
    pub det_a: f64,
}

impl DixonResiduals {
    pub fn max(&self) -> f64 {
        [
            self.det_f,
            self.adjugate_division,
            self.det_m,
            self.adj_m,
            self.det_m34,
            self.det_a,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug)]
pub struct DixonResult<C: Coeff> {
    /// Symmetric matrix of cubics.
    pub f: Mat<MultiPoly<C>>,
    /// `adj(F) / Delta^2`, a symmetric matrix of linear forms.
    pub m: Mat<MultiPoly<C>>,
    pub c: C,
    /// `det A = det_scale * f`: `c^3`, or `-4 c^3` after the real congruence
    /// of the conjugate case.
    pub det_scale: C,
    pub pencil: SymmetricPencil<C>,
    pub variant: Variant,
    pub residuals: DixonResiduals,
}

/// Assemble `A(x) = M(x) + c x0 (E12 + E21)` and verify every identity.
pub fn assemble_representation<C: Coeff>(
    f: &Mat<MultiPoly<C>>,
    forms: &NodeForms<C>,
    variant: Variant,
) -> Result<DixonResult<C>> {
    let delta = &forms.delta;
    let mut residuals = DixonResiduals::default();

    let det_f = poly_det(f);
    let delta3 = delta.pow(3);
    let c = proportionality(&det_f, &delta3)?;
    if c.magnitude() <= RESIDUAL_TOL * det_f.max_coeff().max(1.0) / delta3.max_coeff() {
        return Err(Error::Degenerate("det F vanishes: c = 0".into()));
    }
    residuals.det_f = relative(&(&det_f - &delta3.scale(&c)), &det_f);
    gate("det F = c Delta^3", residuals.det_f)?;

    let delta2 = delta.pow(2);
    let adj = poly_adjugate(f);
    let mut m = vec![vec![MultiPoly::zero(3); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let (quo, r) = divide(&adj[i][j], &delta2)?;
            residuals.adjugate_division = residuals.adjugate_division.max(r);
            if !quo.is_zero() && (quo.degree() != Some(1) || !quo.is_homogeneous()) {
                return Err(Error::DegreeMismatch(
                    "adj(F) / Delta^2 is not linear".into(),
                ));
            }
            m[i][j] = quo;
        }
    }
    gate("Delta^2 divides adj(F)", residuals.adjugate_division)?;

    let c2 = c.clone() * c.clone();
    let c3 = c2.clone() * c.clone();
    let det_m = poly_det(&m);
    residuals.det_m = relative(&(&det_m - &delta.scale(&c3)), &det_m);
    gate("det M = c^3 Delta", residuals.det_m)?;
    let adj_m = poly_adjugate(&m);
    for i in 0..4 {
        for j in 0..4 {
            let r = relative(&(&adj_m[i][j] - &f[i][j].scale(&c2)), &adj_m[i][j]);
            residuals.adj_m = residuals.adj_m.max(r);
        }
    }
    gate("adj M = c^2 F", residuals.adj_m)?;
    let m34 = &(&m[2][2] * &m[3][3]) - &(&m[2][3] * &m[2][3]);
    residuals.det_m34 = relative(&(&m34 - &forms.q.scale(&c)), &m34);
    gate("det M34 = c q", residuals.det_m34)?;

    let mut mats: [Mat<C>; 4] = std::array::from_fn(|_| vec![vec![C::zero(); 4]; 4]);
    mats[0][0][1] = c.clone();
    mats[0][1][0] = c.clone();
    for i in 0..4 {
        for j in 0..4 {
            for v in 0..3 {
                let mut e = [0u32; 3];
                e[v] = 1;
                mats[v + 1][i][j] = m[i][j].coeff_of(&e);
            }
        }
    }
    let mut det_scale = c3.clone();
    match variant {
        Variant::Complex => {}
        Variant::Real11 => make_real(&mut mats)?,
        Variant::Real20 => {
            let u = conjugate_congruence::<C>()?;
            for a in mats.iter_mut() {
                *a = linalg::congruence(a, &u);
            }
            make_real(&mut mats)?;
            det_scale = -(C::from_i64(4) * c3);
        }
    }
    let pencil = SymmetricPencil::new_unchecked(mats);
    let det_a = pencil.determinant();
    residuals.det_a = relative(&(&det_a - &forms.quartic().scale(&det_scale)), &det_a);
    gate("det A = det_scale f", residuals.det_a)?;

    Ok(DixonResult {
        f: f.to_vec(),
        m,
        c,
        det_scale,
        pencil,
        variant,
        residuals,
    })
}

/// `U` with columns `e1 + e2`, `i (e1 - e2)`, `e3`, `e4`: it turns the
/// hyperbolic block of a conjugation-symmetric `A` into a real one.
fn conjugate_congruence<C: Coeff>() -> Result<Mat<C>> {
    let z = |re: f64, im: f64| {
        C::from_c64(C64::new(re, im))
            .ok_or_else(|| Error::Unsupported("the conjugate case needs complex arithmetic".into()))
    };
    Ok(vec![
        vec![z(1.0, 0.0)?, z(0.0, 1.0)?, z(0.0, 0.0)?, z(0.0, 0.0)?],
        vec![z(1.0, 0.0)?, z(0.0, -1.0)?, z(0.0, 0.0)?, z(0.0, 0.0)?],
        vec![z(0.0, 0.0)?, z(0.0, 0.0)?, z(1.0, 0.0)?, z(0.0, 0.0)?],
        vec![z(0.0, 0.0)?, z(0.0, 0.0)?, z(0.0, 0.0)?, z(1.0, 0.0)?],
    ])
}

/// Drop imaginary parts that are rounding noise; fail if any is not.
fn make_real<C: Coeff>(mats: &mut [Mat<C>; 4]) -> Result<()> {
    if C::EXACT {
        return Ok(());
    }
    let scale = mats.iter().map(|m| linalg::max_abs(m)).fold(0.0, f64::max);
    let mut worst: f64 = 0.0;
    for m in mats.iter_mut() {
        for row in m.iter_mut() {
            for v in row.iter_mut() {
                let z = v.to_c64();
                worst = worst.max(z.im.abs());
                *v = C::from_c64(C64::new(z.re, 0.0)).expect("float field");
            }
        }
    }
    let r = worst / scale.max(1e-300);
    if r > RESIDUAL_TOL.sqrt() {
        return Err(Error::IdentityFailed {
            what: "real structure of the representation".into(),
            residual: r,
        });
    }
    Ok(())
}

/// For `F11`, `F22` complex conjugate: replace `F13`, `F14` by cubics `C`
/// whose partner `F2j`, defined by `g C = F11 F2j + q2j Delta`, is `conj(C)`.
/// Then `F` satisfies `conj(F_ij) = F_s(i)s(j)` for the swap `s = (1 2)`.
pub fn conjugate_structured_basis(
    basis: &CubicBasis<C64>,
    delta: &CPoly,
) -> Result<CubicBasis<C64>> {
    let b = basis.members();
    let partners: Vec<CPoly> = b
        .iter()
        .map(|c| reduce_modulo(&(&basis.f12 * *c), &basis.f11, delta).map(|r| r.0))
        .collect::<Result<_>>()?;
    // alpha = a + i b in C^4; sum alpha_k phi(v_k) - conj(alpha_k) conj(v_k) = 0
    let mut sys = DMatrix::<f64>::zeros(20, 8);
    for k in 0..4 {
        let phi = partners[k].coeff_vector(3);
        let v = b[k].coeff_vector(3);
        for r in 0..10 {
            // real coefficient a_k
            let ca = phi[r] - v[r].conj();
            // imaginary coefficient b_k: i phi + i conj(v)
            let cb = C64::i() * (phi[r] + v[r].conj());
            sys[(r, k)] = ca.re;
            sys[(r + 10, k)] = ca.im;
            sys[(r, k + 4)] = cb.re;
            sys[(r + 10, k + 4)] = cb.im;
        }
    }
    let scale = sys.amax().max(1e-300);
    let svd = sys.svd(false, true);
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::NotFound("SVD failed".into()))?;
    let mut order: Vec<usize> = (0..8).collect();
    order.sort_by(|&x, &y| svd.singular_values[x].total_cmp(&svd.singular_values[y]));
    let null: Vec<Vec<C64>> = order
        .iter()
        .filter(|&&i| svd.singular_values[i] <= RANK_TOL * scale)
        .map(|&i| {
            (0..4)
                .map(|k| C64::new(v_t[(i, k)], v_t[(i, k + 4)]))
                .collect()
        })
        .collect();
    if null.len() != 4 {
        return Err(Error::NullSpaceDimension {
            what: "conjugation-compatible cubics".into(),
            dim: null.len(),
        });
    }
    let mut chosen: Mat<C64> = vec![basis.f11.coeff_vector(3), basis.f12.coeff_vector(3)];
    for alpha in &null {
        if chosen.len() == 4 {
            break;
        }
        let c = b
            .iter()
            .zip(alpha)
            .fold(CPoly::zero(3), |acc, (p, a)| &acc + &p.scale(a));
        chosen.push(c.coeff_vector(3));
        if float_rank(&chosen) != chosen.len() {
            chosen.pop();
        }
    }
    if chosen.len() != 4 {
        return Err(Error::Degenerate(
            "no conjugation-compatible basis extension".into(),
        ));
    }
    Ok(CubicBasis {
        f11: basis.f11.clone(),
        f12: basis.f12.clone(),
        f13: CPoly::from_coeff_vector(3, 3, &chosen[2]),
        f14: CPoly::from_coeff_vector(3, 3, &chosen[3]),
    })
}

/// A reconstruction in whichever field the data allowed.
#[derive(Clone, Debug)]
pub enum Representation {
    Exact(DixonResult<Rational>),
    Approx(DixonResult<C64>),
}

impl Representation {
    pub fn variant(&self) -> Variant {
        match self {
            Representation::Exact(r) => r.variant,
            Representation::Approx(r) => r.variant,
        }
    }

    pub fn pencil_c64(&self) -> SymmetricPencil<C64> {
        match self {
            Representation::Exact(r) => r.pencil.to_c64(),
            Representation::Approx(r) => r.pencil.clone(),
        }
    }

    pub fn c(&self) -> C64 {
        match self {
            Representation::Exact(r) => r.c.to_c64(),
            Representation::Approx(r) => r.c,
        }
    }

    pub fn det_scale(&self) -> C64 {
        match self {
            Representation::Exact(r) => r.det_scale.to_c64(),
            Representation::Approx(r) => r.det_scale,
        }
    }

    pub fn residuals(&self) -> &DixonResiduals {
        match self {
            Representation::Exact(r) => &r.residuals,
            Representation::Approx(r) => &r.residuals,
        }
    }

    pub fn to_json(&self) -> Value {
        let scalar_q = |q: &Rational| Value::String(format_rational(q));
        let scalar_c = |z: &C64| json!({"re": z.re, "im": z.im});
        match self {
            Representation::Exact(r) => json!({
                "exact": true,
                "variant": r.variant,
                "pencil": r.pencil.to_json(),
                "c": scalar_q(&r.c),
                "det_scale": scalar_q(&r.det_scale),
                "cubics": r.f.iter().map(|row| row.iter().map(poly_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "residuals": r.residuals,
            }),
            Representation::Approx(r) => json!({
                "exact": false,
                "variant": r.variant,
                "pencil": r.pencil.to_json(),
                "c": scalar_c(&r.c),
                "det_scale": scalar_c(&r.det_scale),
                "cubics": r.f.iter().map(|row| row.iter().map(cpoly_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "residuals": r.residuals,
            }),
        }
    }
}

/// Rebuild a symmetric determinantal representation of the quartic `f` from
/// its node. `f11`, if given, is a ramification cubic in the coordinates
/// `(x1, x2, x3)` of the frame that moves the node to `(1:0:0:0)` (the
/// identity frame when the node already is `(1:0:0:0)`).
pub fn reconstruct<C: Coeff>(
    f: &MultiPoly<C>,
    node: &ProjPoint,
    f11: Option<&MultiPoly<C>>,
    seed: u64,
) -> Result<Representation> {
    if node.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: node.dim(),
        });
    }
    if C::EXACT {
        let fq: QPoly = f.map(|c| c.to_rational().expect("exact field"));
        let f11q: Option<QPoly> = f11.map(|p| p.map(|c| c.to_rational().expect("exact field")));
        if let Some(x) = node
            .is_real()
            .then(|| crate::nodes::rational_point(node))
            .flatten()
        {
            let s = node_frame(&x);
            let local = fq.substitute_linear(&s);
            let forms = node_forms(&local).stage("translate")?;
            let f11_exact = match f11q {
                Some(p) => Some(p),
                None => {
                    let (a, _) = factor_sextic(&forms.sextic().to_c64(), seed)?;
                    snap_factor(&a, &forms.sextic())
                }
            };
            if let Some(f11_exact) = f11_exact {
                let mut r = reconstruct_local(&forms, &f11_exact, Variant::Real11)?;
                r.pencil = r.pencil.change_coordinates(&linalg::inverse(&s, 0.0)?);
                check_against(&r.pencil, &fq, &r.det_scale, &mut r.residuals)?;
                return Ok(Representation::Exact(r));
            }
        }
    }
    let fc = f.to_c64();
    let x: Vec<C64> = if node.is_real() && is_real_poly(&fc) {
        node.real_coords()
            .iter()
            .map(|&v| C64::new(v, 0.0))
            .collect()
    } else {
        node.coords().to_vec()
    };
    let s = node_frame(&x);
    let local = fc.substitute_linear(&s);
    let forms = node_forms(&local).stage("translate")?;
    let sextic = forms.sextic();
    let f11c = match f11 {
        Some(p) => p.to_c64(),
        None => factor_sextic(&sextic, seed)?.0,
    };
    let real = is_real_poly(&local);
    let (variant, f11c) = choose_variant(&f11c, &sextic, real)?;
    let mut r = reconstruct_local(&forms, &f11c, variant)?;
    r.pencil = r
        .pencil
        .change_coordinates(&linalg::inverse(&s, RESIDUAL_TOL)?);
    check_against(&r.pencil, &fc, &r.det_scale, &mut r.residuals)?;
    Ok(Representation::Approx(r))
}

/// Dixon's construction for a quartic already in node position.
pub fn reconstruct_local<C: Coeff>(
    forms: &NodeForms<C>,
    f11: &MultiPoly<C>,
    variant: Variant,
) -> Result<DixonResult<C>> {
    let sextic = forms.sextic();
    f11_cofactor(f11, &sextic).stage("ramification")?;
    let z = z_delta_points(f11, &forms.g, &forms.q, &forms.delta).stage("z_delta")?;
    let mut basis = cubic_space_basis(f11, &forms.g, &forms.delta, &z).stage("basis")?;
    if variant == Variant::Real20 {
        let bc = CubicBasis {
            f11: basis.f11.to_c64(),
            f12: basis.f12.to_c64(),
            f13: basis.f13.to_c64(),
            f14: basis.f14.to_c64(),
        };
        let structured = conjugate_structured_basis(&bc, &forms.delta.to_c64()).stage("basis")?;
        basis = CubicBasis {
            f11: from_c64_poly(&structured.f11)?,
            f12: from_c64_poly(&structured.f12)?,
            f13: from_c64_poly(&structured.f13)?,
            f14: from_c64_poly(&structured.f14)?,
        };
    }
    let (f, _) = complete_cubic_matrix(&basis, &forms.delta).stage("complete")?;
    assemble_representation(&f, forms, variant).stage("assemble")
}

/// Quotient of homogeneous forms with its relative residual. Floats solve
/// the multiplication map by least squares, since long division amplifies
/// rounding whenever the leading coefficient of the divisor is small.
fn divide<C: Coeff>(num: &MultiPoly<C>, den: &MultiPoly<C>) -> Result<(MultiPoly<C>, f64)> {
    if C::EXACT {
        let (quo, rem) = num.div_rem(den)?;
        return Ok((quo, if rem.is_zero() { 0.0 } else { f64::INFINITY }));
    }
    if num.is_zero() {
        return Ok((MultiPoly::zero(num.nvars()), 0.0));
    }
    let nv = num.nvars();
    let (dn, dd) = match (num.degree(), den.degree()) {
        (Some(a), Some(b)) if a >= b => (a, b),
        _ => {
            return Err(Error::DegreeMismatch(
                "division by a form of higher degree".into(),
            ))
        }
    };
    let den = den.to_c64();
    let cols: Vec<Vec<C64>> = monomials_of_degree(nv, dn - dd)
        .iter()
        .map(|m| {
            let mut t = CPoly::zero(nv);
            t.add_term(*m, C64::new(1.0, 0.0));
            (&t * &den).coeff_vector(dn)
        })
        .collect();
    let rhs = num.to_c64().coeff_vector(dn);
    let sol = lstsq_c64(&linalg::transpose(&cols), &rhs)?;
    let quo = CPoly::from_coeff_vector(nv, dn - dd, &sol);
    let r = (&num.to_c64() - &(&quo * &den)).max_coeff() / num.max_coeff().max(1e-300);
    Ok((from_c64_poly(&quo)?, r))
}

/// `F22` with `F11 F22 = g^2 + q Delta`.
fn f11_cofactor<C: Coeff>(f11: &MultiPoly<C>, sextic: &MultiPoly<C>) -> Result<MultiPoly<C>> {
    let (quo, r) = divide(sextic, f11)?;
    if r > RESIDUAL_TOL {
        return Err(Error::IdentityFailed {
            what: "F11 divides g^2 + q Delta".into(),
            residual: r,
        });
    }
    Ok(quo)
}

/// Split the branch sextic into two cubics through its nine nodes, found by
/// multistart Newton on the gradient.
fn factor_sextic(sextic: &CPoly, seed: u64) -> Result<(CPoly, CPoly)> {
    let s = sextic.normalized();
    let sys = NodeSystem::new(&s);
    let opts = NodeOptions {
        seed,
        ..NodeOptions::default()
    };
    let found = multistart_nodes(&sys, &[], &opts, is_real_poly(&s));
    // Near-coincident branch points leave shallow spurious minima of the
    // gradient; the true nodes sit orders of magnitude lower.
    let mut scored: Vec<(f64, ProjPoint)> = found
        .isolated
        .into_iter()
        .map(|x| {
            let (f, g) = sys.residuals(&x);
            ((f / F_GATE).max(g / GRAD_GATE), x)
        })
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    let separated = scored.len() == 9 || (scored.len() > 9 && scored[9].0 > NODE_GAP * scored[8].0);
    if scored.len() < 9 || !separated {
        return Err(Error::Degenerate(format!(
            "branch sextic has {} isolated singular point candidates, expected 9 nodes",
            scored.len()
        )))
        .stage("factor");
    }
    let sing: Vec<ProjPoint> = scored.into_iter().take(9).map(|(_, x)| x).collect();
    factor_ramification_sextic(&s, &sing, seed)
        .map(|(a, b)| (a, b.scale(&C64::new(sextic.max_coeff(), 0.0))))
        .stage("factor")
}

/// Snap a float factor of an exact sextic to a rational cubic, if it is one.
fn snap_factor(a: &CPoly, sextic: &QPoly) -> Option<QPoly> {
    let (_, lead) = a.terms().max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))?;
    let a = a.scale(&(C64::new(1.0, 0.0) / *lead));
    if a.max_imag() > 1e-9 {
        return None;
    }
    let mut terms = Vec::new();
    for (m, c) in a.terms() {
        if c.norm() < 1e-12 {
            continue;
        }
        terms.push((m.exps(3), rationalize(c.re, SNAP_DEN, 1e-9)?));
    }
    let q = QPoly::from_terms(3, terms);
    sextic.exact_div(&q).ok().map(|_| q)
}

/// Decide the real structure from `F11` and rescale it accordingly.
fn choose_variant(f11: &CPoly, sextic: &CPoly, real: bool) -> Result<(Variant, CPoly)> {
    if !real {
        return Ok((Variant::Complex, f11.clone()));
    }
    let Some((_, lead)) = f11.terms().max_by(|x, y| x.1.norm().total_cmp(&y.1.norm())) else {
        return Err(Error::ZeroPolynomial);
    };
    let rotated = f11.scale(&(C64::new(lead.norm(), 0.0) / *lead));
    if rotated.max_imag() <= RESIDUAL_TOL.sqrt() * rotated.max_coeff() {
        return Ok((Variant::Real11, rotated.real_part()));
    }
    // F22 = r conj(F11) for a real r > 0 after rescaling F11 by sqrt(r)
    let f22 = f11_cofactor(f11, sextic)?;
    let cf = f11.conj().coeff_vector(3);
    let col: Mat<C64> = cf.iter().map(|v| vec![*v]).collect();
    let r = lstsq_c64(&col, &f22.coeff_vector(3))?[0];
    let fit = (&f11.conj().scale(&r) - &f22).max_coeff() / f22.max_coeff();
    if fit > RESIDUAL_TOL.sqrt() {
        return Ok((Variant::Complex, f11.clone()));
    }
    if r.re <= 0.0 || r.im.abs() > RESIDUAL_TOL.sqrt() * r.norm() {
        return Err(Error::Degenerate(
            "conjugate ramification cubics with -F11 F22 = g^2 + q Delta".into(),
        ));
    }
    Ok((Variant::Real20, f11.scale(&C64::new(r.re.sqrt(), 0.0))))
}

/// Columns: the node, then the standard basis without the node's pivot.
fn node_frame<C: Coeff>(x: &[C]) -> Mat<C> {
    let piv = x
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.magnitude().total_cmp(&b.1.magnitude()))
        .map_or(0, |(i, _)| i);
    let mut cols = vec![x.to_vec()];
    for k in (0..4).filter(|&k| k != piv) {
        let mut e = vec![C::zero(); 4];
        e[k] = C::one();
        cols.push(e);
    }
    linalg::transpose(&cols)
}

fn check_against<C: Coeff>(
    pencil: &SymmetricPencil<C>,
    f: &MultiPoly<C>,
    scale: &C,
    residuals: &mut DixonResiduals,
) -> Result<()> {
    let d = pencil.determinant();
    let r = relative(&(&d - &f.scale(scale)), &d);
    residuals.det_a = residuals.det_a.max(r);
    gate("det A = det_scale f in the input frame", r)
}

fn is_real_poly(p: &CPoly) -> bool {
    p.max_imag() <= RESIDUAL_TOL * p.max_coeff()
}

/// The scalar `c` with `a = c b`, read at the largest coefficient of `b`.
fn proportionality<C: Coeff>(a: &MultiPoly<C>, b: &MultiPoly<C>) -> Result<C> {
    let (m, cb) = b
        .terms()
        .max_by(|x, y| x.1.magnitude().total_cmp(&y.1.magnitude()))
        .ok_or(Error::ZeroPolynomial)?;
    Ok(a.coeff(m) / cb.clone())
}

/// `|d|` relative to `|p|`; exact fields report zero or infinity.
fn relative<C: Coeff>(d: &MultiPoly<C>, p: &MultiPoly<C>) -> f64 {
    if C::EXACT {
        if d.is_zero() {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        d.max_coeff() / p.max_coeff().max(1e-300)
    }
}

fn gate(what: &str, residual: f64) -> Result<()> {
    if residual > RESIDUAL_TOL {
        return Err(Error::IdentityFailed {
            what: what.into(),
            residual,
        });
    }
    Ok(())
}

fn point_residual<C: Coeff>(c: &MultiPoly<C>, z: &[Intersection]) -> f64 {
    let c = c.to_c64().normalized();
    z.iter()
        .map(|p| c.eval_c64(&p.point.unit()).norm())
        .fold(0.0, f64::max)
}

/// Distance of `v` from the row span of `rows`, relative to `|v|`.
fn span_residual<C: Coeff>(rows: &Mat<C>, v: &[C]) -> f64 {
    if C::EXACT {
        let mut m = rows.clone();
        m.push(v.to_vec());
        return if matrix_rank(&m) == rows.len() {
            0.0
        } else {
            f64::INFINITY
        };
    }
    let a: Mat<C64> = linalg::transpose(rows)
        .iter()
        .map(|r| r.iter().map(Coeff::to_c64).collect())
        .collect();
    let b: Vec<C64> = v.iter().map(Coeff::to_c64).collect();
    let Ok(x) = lstsq_c64(&a, &b) else {
        return f64::INFINITY;
    };
    let norm = b.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    a.iter()
        .zip(&b)
        .map(|(row, bi)| (row.iter().zip(&x).map(|(p, q)| p * q).sum::<C64>() - bi).norm())
        .fold(0.0, f64::max)
        / norm
}

fn matrix_rank<C: Coeff>(m: &Mat<C>) -> usize {
    if C::EXACT {
        linalg::rank(m, 0.0)
    } else {
        float_rank(
            &m.iter()
                .map(|r| r.iter().map(Coeff::to_c64).collect())
                .collect::<Mat<C64>>(),
        )
    }
}

/// Numerical rank after scaling rows to unit norm, so that forms of very
/// different sizes count equally.
fn float_rank(m: &Mat<C64>) -> usize {
    let rows: Mat<C64> = m
        .iter()
        .filter_map(|r| {
            let n = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            (n > 0.0).then(|| r.iter().map(|z| z / n).collect())
        })
        .collect();
    linalg::numerical_rank(&rows, RANK_TOL)
}

fn from_c64_vec<C: Coeff>(v: &[C64]) -> Result<Vec<C>> {
    v.iter()
        .map(|z| {
            C::from_c64(*z).ok_or_else(|| Error::Unsupported("float data in an exact field".into()))
        })
        .collect()
}

fn from_c64_poly<C: Coeff>(p: &CPoly) -> Result<MultiPoly<C>> {
    let mut terms = Vec::new();
    for (m, c) in p.terms() {
        let v = C::from_c64(*c)
            .ok_or_else(|| Error::Unsupported("float data in an exact field".into()))?;
        terms.push((m.exps(3), v));
    }
    Ok(MultiPoly::from_terms(3, terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    #[test]
    fn node_forms_split_by_x0_degree() {
        let f = parse_poly(4, "-(x1^2 - x2^2)*x0^2 + 2*x3^3*x0 + x1^4 + x3^4").unwrap();
        let nf = node_forms(&f).unwrap();
        assert_eq!(nf.q, parse_poly(3, "x0^2 - x1^2").unwrap());
        assert_eq!(nf.g, parse_poly(3, "x2^3").unwrap());
        assert_eq!(nf.quartic(), f);
    }

    #[test]
    fn non_node_is_rejected() {
        let f = parse_poly(4, "x0^3*x1 + x2^4 + x3^4").unwrap();
        assert!(node_forms(&f).is_err());
    }
}
