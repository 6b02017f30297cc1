//! Nodes of the symmetroid `det A(x) = 0`: search, classification, and the
//! `(rho, sigma)` census.
//!
//! Two independent paths locate nodes. Projecting from one rank-2 node and
//! lifting the intersection points of the ramification cubics is complete for
//! transversal inputs. Multistart Newton on `grad f = 0` supplies the base node
//! and must land inside the projected set; any point it finds outside that set
//! is reported as a disagreement instead of being merged silently.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::census::CENSUS;
use crate::error::{Error, Result};
use crate::linalg::{self, lstsq_c64, numerical_rank, signature_f64, sym_eigen, Mat, Signature};
use crate::pencil::{find_interior_point, InteriorSearch, SymmetricPencil};
use crate::poly::point::dedup_points;
use crate::poly::resultant::univariate_resultant;
use crate::poly::scalar::{rationalize, Coeff, Rational, C64};
use crate::poly::{univariate_roots, CPoly, MultiPoly, ProjPoint, UniPoly};
use crate::projection::nodes_from_projection;

pub const F_GATE: f64 = 1e-10;
pub const GRAD_GATE: f64 = 1e-8;
pub const DEDUP_RADIUS: f64 = 1e-6;
pub const RANK_TOL: f64 = 1e-8;
/// Relative singular-value threshold for the Hessian rank at a singular point.
const HESSIAN_TOL: f64 = 1e-9;
/// `|f|` on a line point below which the line counts as lying in the surface.
const LINE_TOL: f64 = 1e-8;
const MAX_NONISOLATED_SAMPLES: usize = 64;
/// Rank-2 nodes tried in turn as projection base before the route is abandoned.
const MAX_BASES: usize = 10;

#[derive(Clone, Debug)]
pub struct NodeOptions {
    pub seed: u64,
    pub starts: usize,
    /// Multistart stops after this many consecutive starts with no new node.
    pub patience: usize,
    /// Fail with `MissingNodes` when fewer than ten nodes are found.
    pub transversal_expected: bool,
}

impl Default for NodeOptions {
    fn default() -> Self {
        NodeOptions {
            seed: 0,
            starts: 500,
            patience: 200,
            transversal_expected: false,
        }
    }
}

impl NodeOptions {
    pub fn with_seed(seed: u64) -> Self {
        NodeOptions {
            seed,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Node {
    pub point: ProjPoint,
    pub rank: usize,
    /// Inertia of `A(x)`; real nodes only.
    pub signature: Option<Signature>,
    pub is_real: bool,
    pub on_spectrahedron: bool,
    pub residual_f: f64,
    pub residual_grad: f64,
}

/// The quartic with its gradient and Hessian, normalized to unit largest coefficient.
#[derive(Clone, Debug)]
pub struct NodeSystem {
    f: CPoly,
    grad: Vec<CPoly>,
    hess: Vec<Vec<CPoly>>,
}

fn norm(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

impl NodeSystem {
    pub fn new<C: Coeff>(f: &MultiPoly<C>) -> Self {
        let f = f.to_c64().normalized();
        let grad = f.gradient();
        let hess = grad.iter().map(|g| g.gradient()).collect();
        NodeSystem { f, grad, hess }
    }

    pub fn quartic(&self) -> &CPoly {
        &self.f
    }

    pub fn nvars(&self) -> usize {
        self.f.nvars()
    }

    pub fn gradient_at(&self, x: &[C64]) -> Vec<C64> {
        self.grad.iter().map(|d| d.eval_c64(x)).collect()
    }

    fn hessian_at(&self, x: &[C64]) -> Mat<C64> {
        self.hess
            .iter()
            .map(|row| row.iter().map(|h| h.eval_c64(x)).collect())
            .collect()
    }

    /// `(|f|, |grad f|)` at the unit-norm representative.
    pub fn residuals(&self, x: &ProjPoint) -> (f64, f64) {
        let u = x.unit();
        (self.f.eval_c64(&u).norm(), norm(&self.gradient_at(&u)))
    }

    pub fn passes_gates(&self, x: &ProjPoint) -> bool {
        let (f, g) = self.residuals(x);
        f < F_GATE && g < GRAD_GATE
    }

    pub fn check_gates(&self, x: &ProjPoint) -> Result<(f64, f64)> {
        let (f, grad) = self.residuals(x);
        if f < F_GATE && grad < GRAD_GATE {
            Ok((f, grad))
        } else {
            Err(Error::ResidualGate { f, grad })
        }
    }

    /// Rank of the Hessian; `n - 1` in `n` variables at an isolated ordinary
    /// node, less along a singular curve.
    pub fn hessian_rank(&self, x: &ProjPoint) -> usize {
        numerical_rank(&self.hessian_at(&x.unit()), HESSIAN_TOL)
    }

    /// Newton's method on `grad f = 0` in the chart `conj(x0) . x = 1`.
    /// Returns the limit if it passes the residual gates.
    pub fn newton(&self, x0: &[C64], max_iter: usize) -> Option<ProjPoint> {
        let n0 = norm(x0);
        if !(n0 > 0.0) {
            return None;
        }
        let mut x: Vec<C64> = x0.iter().map(|v| v / n0).collect();
        let c: Vec<C64> = x.iter().map(|v| v.conj()).collect();
        for _ in 0..max_iter {
            let mut jac = self.hessian_at(&x);
            jac.push(c.clone());
            let mut r = self.gradient_at(&x);
            r.push(c.iter().zip(&x).map(|(a, b)| a * b).sum::<C64>() - 1.0);
            let dx = lstsq_c64(&jac, &r).ok()?;
            for (xi, di) in x.iter_mut().zip(&dx) {
                *xi -= di;
            }
            let nx = norm(&x);
            if !nx.is_finite() || nx > 1e8 {
                return None;
            }
            if norm(&dx) < 1e-15 * nx {
                break;
            }
        }
        let p = ProjPoint::new(x).ok()?;
        self.passes_gates(&p).then_some(p)
    }
}

/// Outcome of multistart Newton.
#[derive(Clone, Debug, Default)]
pub struct Multistart {
    pub isolated: Vec<ProjPoint>,
    /// Samples of positive-dimensional singular locus (Hessian rank below three).
    pub nonisolated: Vec<ProjPoint>,
    pub starts_used: usize,
}

/// Complex Gaussian starts (alternating with real ones when `real_starts`),
/// seeded additionally with `seeds`.
pub fn multistart_nodes(
    sys: &NodeSystem,
    seeds: &[ProjPoint],
    opts: &NodeOptions,
    real_starts: bool,
) -> Multistart {
    let mut out = Multistart::default();
    let insert = |out: &mut Multistart, p: ProjPoint| -> bool {
        if sys.hessian_rank(&p) == sys.nvars() - 1 {
            if out.isolated.iter().any(|q| q.distance(&p) < DEDUP_RADIUS) {
                return false;
            }
            out.isolated.push(p);
            true
        } else {
            if out.nonisolated.len() < MAX_NONISOLATED_SAMPLES
                && !out
                    .nonisolated
                    .iter()
                    .any(|q| q.distance(&p) < DEDUP_RADIUS)
            {
                out.nonisolated.push(p);
            }
            false
        }
    };
    for s in seeds {
        if let Some(p) = sys.newton(s.coords(), 40) {
            insert(&mut out, p);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x6d75_6c74_6973);
    let mut idle = 0;
    for k in 0..opts.starts {
        out.starts_used = k + 1;
        let n = sys.nvars();
        let x: Vec<C64> = if real_starts && k % 2 == 1 {
            (0..n)
                .map(|_| C64::new(rng.sample(StandardNormal), 0.0))
                .collect()
        } else {
            (0..n)
                .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect()
        };
        let new = sys.newton(&x, 60).is_some_and(|p| insert(&mut out, p));
        if new {
            idle = 0;
        } else {
            idle += 1;
            if idle >= opts.patience {
                break;
            }
        }
    }
    out
}

/// Nelder–Mead minimization in the plane.
fn nelder_mead(
    f: &impl Fn([f64; 2]) -> f64,
    x0: [f64; 2],
    step: f64,
    iters: usize,
) -> ([f64; 2], f64) {
    let mut s: Vec<([f64; 2], f64)> = [x0, [x0[0] + step, x0[1]], [x0[0], x0[1] + step]]
        .iter()
        .map(|&p| (p, f(p)))
        .collect();
    let lerp =
        |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    for _ in 0..iters {
        s.sort_by(|a, b| a.1.total_cmp(&b.1));
        if s[2].1 - s[0].1 < 1e-16
            && (s[2].0[0] - s[0].0[0]).abs() + (s[2].0[1] - s[0].0[1]).abs() < 1e-14
        {
            break;
        }
        let c = [(s[0].0[0] + s[1].0[0]) / 2.0, (s[0].0[1] + s[1].0[1]) / 2.0];
        let r = lerp(c, s[2].0, -1.0);
        let fr = f(r);
        if fr < s[0].1 {
            let e = lerp(c, s[2].0, -2.0);
            let fe = f(e);
            s[2] = if fe < fr { (e, fe) } else { (r, fr) };
        } else if fr < s[1].1 {
            s[2] = (r, fr);
        } else {
            let k = lerp(c, s[2].0, 0.5);
            let fk = f(k);
            if fk < s[2].1 {
                s[2] = (k, fk);
            } else {
                let best = s[0].0;
                for v in s.iter_mut().skip(1) {
                    v.0 = lerp(best, v.0, 0.5);
                    v.1 = f(v.0);
                }
            }
        }
    }
    s.sort_by(|a, b| a.1.total_cmp(&b.1));
    s[0]
}

fn eval_f64(mats: &[Mat<f64>; 4], x: &[f64]) -> Mat<f64> {
    (0..4)
        .map(|i| {
            (0..4)
                .map(|j| (0..4).map(|k| mats[k][i][j] * x[k]).sum())
                .collect()
        })
        .collect()
}

fn mat_mul_f64(a: &[Vec<f64>], b: &[Vec<f64>]) -> Mat<f64> {
    (0..a.len())
        .map(|i| {
            (0..b[0].len())
                .map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn smallest_gap(vals: &[f64]) -> (f64, f64) {
    (0..vals.len() - 1)
        .map(|i| (vals[i + 1] - vals[i], 0.5 * (vals[i + 1] + vals[i])))
        .fold((f64::INFINITY, 0.0), |a, b| if b.0 < a.0 { b } else { a })
}

/// A real node from a repeated eigenvalue. With `A(e)` definite, whiten so
/// that `A(e) = I`; then `A(c + s e) = B(c) + s I` and a double eigenvalue
/// `lambda` of `B(c)` gives the rank-2 point `c - lambda e`.
pub fn find_real_node<C: Coeff>(p: &SymmetricPencil<C>, e: &[f64], seed: u64) -> Result<ProjPoint> {
    let sys = NodeSystem::new(&p.determinant());
    find_real_node_with(p, &sys, e, seed)
}

fn find_real_node_with<C: Coeff>(
    p: &SymmetricPencil<C>,
    sys: &NodeSystem,
    e: &[f64],
    seed: u64,
) -> Result<ProjPoint> {
    let mats = p
        .to_f64()
        .ok_or_else(|| Error::Unsupported("real node search on a complex pencil".into()))?;
    let ne = e.iter().map(|v| v * v).sum::<f64>().sqrt();
    let e: Vec<f64> = e.iter().map(|v| v / ne).collect();
    let (vals, vecs) = sym_eigen(&eval_f64(&mats, &e));
    if !(vals[0] > 0.0) {
        return Err(Error::Degenerate("A(e) is not positive definite".into()));
    }
    let l: Mat<f64> = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| {
                    (0..4)
                        .map(|k| vecs[i][k] * vecs[j][k] / vals[k].sqrt())
                        .sum()
                })
                .collect()
        })
        .collect();
    let proj: Mat<f64> = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| f64::from(u8::from(i == j)) - e[i] * e[j])
                .collect()
        })
        .collect();
    let (_, pv) = sym_eigen(&proj);
    let basis: Vec<Vec<f64>> = (1..4).map(|k| (0..4).map(|r| pv[r][k]).collect()).collect();
    let whiten = |m: &Mat<f64>| -> Mat<f64> {
        let lm = mat_mul_f64(&l, m);
        mat_mul_f64(&lm, &l)
    };
    let b: Vec<Mat<f64>> = basis.iter().map(|v| whiten(&eval_f64(&mats, v))).collect();
    let dir = |a: [f64; 2]| [a[0].sin() * a[1].cos(), a[0].sin() * a[1].sin(), a[0].cos()];
    let bmat = |c: [f64; 3]| -> Mat<f64> {
        (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| (0..3).map(|k| c[k] * b[k][i][j]).sum())
                    .collect()
            })
            .collect()
    };
    let gap = |a: [f64; 2]| smallest_gap(&sym_eigen(&bmat(dir(a))).0).0;

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6761_7073);
    let mut best_gap = f64::INFINITY;
    for _ in 0..48 {
        let a0 = [
            rng.gen_range(0.0..std::f64::consts::PI),
            rng.gen_range(0.0..2.0 * std::f64::consts::PI),
        ];
        let (a, g) = nelder_mead(&gap, a0, 0.3, 600);
        best_gap = best_gap.min(g);
        if g > 1e-5 {
            continue;
        }
        let c = dir(a);
        let (_, lambda) = smallest_gap(&sym_eigen(&bmat(c)).0);
        let x: Vec<C64> = (0..4)
            .map(|r| {
                C64::new(
                    (0..3).map(|k| c[k] * basis[k][r]).sum::<f64>() - lambda * e[r],
                    0.0,
                )
            })
            .collect();
        let Some(node) = sys.newton(&x, 40) else {
            continue;
        };
        if !node.is_real() {
            continue;
        }
        // repeated eigenvalue of the whitened matrix at the polished point
        let xr = node.real_coords();
        let nx = xr.iter().map(|v| v * v).sum::<f64>().sqrt();
        let w = whiten(&eval_f64(
            &mats,
            &xr.iter().map(|v| v / nx).collect::<Vec<_>>(),
        ));
        let wv = sym_eigen(&w).0;
        let spread = wv.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if smallest_gap(&wv).0 < 1e-9 * spread.max(1.0) {
            return Ok(node);
        }
    }
    Err(Error::NotFound(format!(
        "no repeated eigenvalue found (smallest gap {best_gap:.3e})"
    )))
}

pub(crate) fn rational_point(x: &ProjPoint) -> Option<Vec<Rational>> {
    x.real_coords()
        .iter()
        .map(|&v| rationalize(v, 1000, 1e-11))
        .collect()
}

/// Rank, realness, inertia and spectrahedron membership of a node.
pub fn classify_node<C: Coeff>(p: &SymmetricPencil<C>, x: &ProjPoint) -> Result<Node> {
    let sys = NodeSystem::new(&p.determinant());
    classify_with(p, &sys, x)
}

fn classify_with<C: Coeff>(
    p: &SymmetricPencil<C>,
    sys: &NodeSystem,
    x: &ProjPoint,
) -> Result<Node> {
    if x.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: x.dim(),
        });
    }
    let (residual_f, residual_grad) = sys.check_gates(x)?;
    let is_real = x.is_real() && p.is_real();
    let mut exact: Option<(usize, Signature)> = None;
    if is_real {
        if let (Some(q), Some(rp)) = (rational_point(x), rational_pencil(p)) {
            let m: Mat<Rational> = (0..4)
                .map(|i| {
                    (0..4)
                        .map(|j| {
                            (0..4).fold(Rational::from_integer(0.into()), |acc, k| {
                                acc + &rp[k][i][j] * &q[k]
                            })
                        })
                        .collect()
                })
                .collect();
            let r = linalg::rank(&m, 0.0);
            if r < 4 {
                exact = Some((r, linalg::signature(&m)));
            }
        }
    }
    let (rank, signature) = match exact {
        Some((r, s)) => (r, Some(s)),
        None => {
            let u = x.unit();
            let rank = numerical_rank(&p.at_c64(&u), RANK_TOL);
            let signature = is_real.then(|| {
                let xr = x.real_coords();
                let n = xr.iter().map(|v| v * v).sum::<f64>().sqrt();
                let xr: Vec<C64> = xr.iter().map(|v| C64::new(v / n, 0.0)).collect();
                let m: Mat<f64> = p
                    .at_c64(&xr)
                    .iter()
                    .map(|r| r.iter().map(|z| z.re).collect())
                    .collect();
                signature_f64(&m, RANK_TOL)
            });
            (rank, signature)
        }
    };
    let on_spectrahedron = is_real && signature.is_some_and(|s| s.is_semidefinite());
    Ok(Node {
        point: x.clone(),
        rank,
        signature,
        is_real,
        on_spectrahedron,
        residual_f,
        residual_grad,
    })
}

fn rational_pencil<C: Coeff>(p: &SymmetricPencil<C>) -> Option<Vec<Mat<Rational>>> {
    p.matrices()
        .iter()
        .map(|m| {
            m.iter()
                .map(|r| r.iter().map(Coeff::to_rational).collect())
                .collect()
        })
        .collect()
}

/// Restrictions of `f` to two random integer lines; `f` is reduced iff a
/// generic restriction is squarefree.
fn check_reduced<C: Coeff>(f: &MultiPoly<C>, seed: u64) -> Result<()> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)? as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7265_6475);
    for _ in 0..3 {
        let a: Vec<C> = (0..4).map(|_| C::from_i64(rng.gen_range(-9..=9))).collect();
        let b: Vec<C> = (0..4).map(|_| C::from_i64(rng.gen_range(-9..=9))).collect();
        let nodes = C::interpolation_nodes(d + 1);
        let vals: Vec<C> = nodes
            .iter()
            .map(|t| {
                let x: Vec<C> = a
                    .iter()
                    .zip(&b)
                    .map(|(u, v)| u.clone() + t.clone() * v.clone())
                    .collect();
                f.eval(&x)
            })
            .collect::<Result<_>>()?;
        let h = UniPoly::new(C::interpolate(&nodes, &vals));
        if h.degree() != Some(d) {
            continue;
        }
        let squarefree = if C::EXACT {
            !univariate_resultant(h.coeffs(), h.derivative().coeffs()).is_zero()
        } else {
            univariate_roots(&h)?.iter().all(|r| r.multiplicity == 1)
        };
        if squarefree {
            return Ok(());
        }
    }
    Err(Error::NonReduced)
}

/// Full node search: reducedness check, multistart, projection from a base
/// node, and the cross-check between the two.
#[derive(Clone, Debug)]
pub struct NodeSearch {
    pub nodes: Vec<Node>,
    pub nonisolated: Vec<ProjPoint>,
    pub base: Option<ProjPoint>,
    pub interior: Option<InteriorSearch>,
    /// Error from the projection path when it was abandoned.
    pub projection_error: Option<String>,
}

fn dist_to_set(p: &ProjPoint, set: &[ProjPoint]) -> f64 {
    set.iter()
        .map(|q| p.distance(q))
        .fold(f64::INFINITY, f64::min)
}

/// Projection bases in order of preference: real rank-2 nodes (for a real
/// pencil) before non-real ones, each group by decreasing distance to the others.
fn base_candidates<C: Coeff>(p: &SymmetricPencil<C>, pts: &[ProjPoint]) -> Vec<ProjPoint> {
    let isolation = |x: &ProjPoint| {
        pts.iter()
            .filter(|y| *y != x)
            .map(|y| x.distance(y))
            .fold(f64::INFINITY, f64::min)
    };
    let prefer_real = p.is_real();
    let mut cands: Vec<(bool, f64, ProjPoint)> = pts
        .iter()
        .filter(|x| numerical_rank(&p.at_c64(&x.unit()), RANK_TOL) == 2)
        .map(|x| (prefer_real && !x.is_real(), isolation(x), x.clone()))
        .collect();
    cands.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.total_cmp(&a.1)));
    cands.into_iter().map(|(_, _, x)| x).collect()
}

pub fn search_nodes<C: Coeff>(p: &SymmetricPencil<C>, opts: &NodeOptions) -> Result<NodeSearch> {
    let f = p.determinant();
    check_reduced(&f, opts.seed)?;
    let sys = NodeSystem::new(&f);
    let real = p.is_real();

    let mut seeds = Vec::new();
    let mut interior = None;
    if real {
        let search = find_interior_point(p, opts.seed, 64)?;
        if let Some(e) = search.point() {
            if let Ok(x) = find_real_node_with(p, &sys, e, opts.seed) {
                seeds.push(x);
            }
        }
        interior = Some(search);
    }
    let mut ms = multistart_nodes(&sys, &seeds, opts, real);
    // Near a tight cluster of nodes f and its gradient are tiny even where
    // A(x) is invertible; a singular point must have a singular matrix.
    let singular = |x: &ProjPoint| numerical_rank(&p.at_c64(&x.unit()), RANK_TOL) < 4;
    ms.isolated.retain(|x| singular(x));
    ms.nonisolated.retain(|x| singular(x));
    // slow convergence can stop a start just inside the gates; polish before comparing paths
    let polished: Vec<ProjPoint> = ms
        .isolated
        .iter()
        .map(|x| sys.newton(x.coords(), 40).unwrap_or_else(|| x.clone()))
        .collect();
    ms.isolated = dedup_points(polished, DEDUP_RADIUS)
        .into_iter()
        .map(|(x, _)| x)
        .collect();
    let bases = base_candidates(p, &ms.isolated);

    let mut base = None;
    let mut projection_error = None;
    // nodes lifted from bases whose projection was incomplete
    let mut partial: Vec<ProjPoint> = Vec::new();
    let mut full = None;
    // a failure or an incomplete lift at one base says nothing about the others
    for b in bases.iter().take(MAX_BASES) {
        let lifted = match nodes_from_projection(p, b, &sys, opts.seed) {
            Ok(lifted) => lifted,
            Err(e) => {
                projection_error.get_or_insert(e.in_stage("projection"));
                continue;
            }
        };
        let mut all = vec![b.clone()];
        all.extend(
            lifted
                .into_iter()
                .filter(|x| x.distance(b) > DEDUP_RADIUS && singular(x)),
        );
        let all: Vec<ProjPoint> = dedup_points(all, DEDUP_RADIUS)
            .into_iter()
            .map(|(x, _)| x)
            .collect();
        let rank2 = all
            .iter()
            .all(|x| numerical_rank(&p.at_c64(&x.unit()), RANK_TOL) == 2);
        base.get_or_insert_with(|| b.clone());
        if all.len() == 10 && rank2 {
            base = Some(b.clone());
            full = Some(all);
            break;
        }
        for x in all {
            if dist_to_set(&x, &partial) > DEDUP_RADIUS {
                partial.push(x);
            }
        }
    }
    if full.is_some() || !partial.is_empty() {
        projection_error = None;
    }
    let mut pts: Vec<ProjPoint> = match full {
        Some(all) => {
            // an ill-conditioned Hessian at a genuine node is not a curve
            ms.nonisolated
                .retain(|x| dist_to_set(x, &all) > DEDUP_RADIUS);
            let extra: Vec<&ProjPoint> = ms
                .isolated
                .iter()
                .filter(|x| dist_to_set(x, &all) > DEDUP_RADIUS)
                .collect();
            if ms.nonisolated.is_empty() {
                if let Some(x) = extra.first() {
                    return Err(Error::PathDisagreement(format!(
                        "multistart node {x:?} is not among the projected nodes"
                    )));
                }
                all
            } else {
                let mut merged = all.clone();
                merged.extend(extra.into_iter().cloned());
                merged
            }
        }
        None if !partial.is_empty() => {
            ms.nonisolated
                .retain(|x| dist_to_set(x, &partial) > DEDUP_RADIUS);
            let extra: Vec<ProjPoint> = ms
                .isolated
                .iter()
                .filter(|x| dist_to_set(x, &partial) > DEDUP_RADIUS)
                .cloned()
                .collect();
            partial.extend(extra);
            partial
        }
        None => match projection_error.take() {
            Some(e) if opts.transversal_expected => return Err(e),
            Some(e) => {
                projection_error = Some(e);
                ms.isolated.clone()
            }
            None => {
                projection_error = Some(Error::NotFound(
                    "no rank-2 node available as projection base".into(),
                ));
                ms.isolated.clone()
            }
        },
    };
    if real {
        // the conjugate of a node of a real quartic is a node
        let missing: Vec<ProjPoint> = pts
            .iter()
            .filter(|x| !x.is_real())
            .map(ProjPoint::conj)
            .filter(|c| dist_to_set(c, &pts) > DEDUP_RADIUS)
            .filter(|c| sys.passes_gates(c) && singular(c))
            .collect();
        pts.extend(missing);
        symmetrize_conjugates(&mut pts);
    }
    if opts.transversal_expected && pts.len() < 10 {
        return Err(Error::MissingNodes(pts.len()));
    }
    let mut nodes: Vec<Node> = pts
        .iter()
        .map(|x| classify_with(p, &sys, x))
        .collect::<Result<_>>()?;
    sort_nodes(&mut nodes);
    Ok(NodeSearch {
        nodes,
        nonisolated: ms.nonisolated,
        base,
        interior,
        projection_error: projection_error.map(|e| e.to_string()),
    })
}

/// All isolated singular points of the symmetroid.
pub fn find_all_nodes<C: Coeff>(p: &SymmetricPencil<C>, opts: &NodeOptions) -> Result<Vec<Node>> {
    Ok(search_nodes(p, opts)?.nodes)
}

/// Replace each non-real node's partner by its exact conjugate.
fn symmetrize_conjugates(pts: &mut [ProjPoint]) {
    for i in 0..pts.len() {
        if pts[i].is_real() {
            continue;
        }
        let c = pts[i].conj();
        if let Some(j) = (i + 1..pts.len()).find(|&j| pts[j].distance(&c) < DEDUP_RADIUS) {
            pts[j] = c;
        }
    }
}

fn sort_nodes(nodes: &mut [Node]) {
    let key =
        |n: &Node| -> Vec<f64> { n.point.coords().iter().flat_map(|c| [c.re, c.im]).collect() };
    nodes.sort_by(|a, b| {
        b.is_real.cmp(&a.is_real).then_with(|| {
            key(a)
                .iter()
                .zip(key(b))
                .map(|(x, y)| x.total_cmp(&y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });
}

/// Whether the line through `a` and `b` lies in `V(f)` (five test points).
pub fn line_in_surface(sys: &NodeSystem, a: &ProjPoint, b: &ProjPoint) -> bool {
    let (ua, ub) = (a.unit(), b.unit());
    [0.3, -0.7, 1.3, -2.1, 0.55].iter().all(|&t| {
        let x: Vec<C64> = ua.iter().zip(&ub).map(|(p, q)| p + q * t).collect();
        let n = norm(&x);
        let u: Vec<C64> = x.iter().map(|v| v / n).collect();
        sys.quartic().eval_c64(&u).norm() < LINE_TOL
    })
}

fn collinear(a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> bool {
    let m: Mat<C64> = vec![a.unit(), b.unit(), c.unit()];
    let s = linalg::singular_values(&m);
    s[2] < 1e-7 * s[0]
}

/// Lines in the surface spanned by pairs of nodes, each given by the indices
/// of all nodes on it.
pub fn surface_lines(sys: &NodeSystem, nodes: &[Node]) -> Vec<Vec<usize>> {
    let mut lines: Vec<Vec<usize>> = Vec::new();
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            if lines.iter().any(|l| l.contains(&i) && l.contains(&j)) {
                continue;
            }
            let (a, b) = (&nodes[i].point, &nodes[j].point);
            if !line_in_surface(sys, a, b) {
                continue;
            }
            let on: Vec<usize> = (0..nodes.len())
                .filter(|&k| k == i || k == j || collinear(a, b, &nodes[k].point))
                .collect();
            lines.push(on);
        }
    }
    lines
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetroidProfile {
    pub nodes: Vec<Node>,
    pub rho: usize,
    pub sigma: usize,
    pub transversal: bool,
    pub lines_detected: bool,
    pub lines: Vec<Vec<usize>>,
    /// A curve of singular points was met (for example a double line).
    pub nonisolated_singularities: bool,
    pub base_node: Option<ProjPoint>,
    pub interior: Option<InteriorSearch>,
    pub projection_error: Option<String>,
    pub tolerances: Tolerances,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Tolerances {
    pub f_gate: f64,
    pub grad_gate: f64,
    pub dedup_radius: f64,
    pub rank_tol: f64,
}

pub const TOLERANCES: Tolerances = Tolerances {
    f_gate: F_GATE,
    grad_gate: GRAD_GATE,
    dedup_radius: DEDUP_RADIUS,
    rank_tol: RANK_TOL,
};

pub fn symmetroid_profile<C: Coeff>(
    p: &SymmetricPencil<C>,
    opts: &NodeOptions,
) -> Result<SymmetroidProfile> {
    let search = search_nodes(p, opts)?;
    let sys = NodeSystem::new(&p.determinant());
    let lines = surface_lines(&sys, &search.nodes);
    let nodes = search.nodes;
    let rho = nodes.iter().filter(|n| n.is_real).count();
    let sigma = nodes.iter().filter(|n| n.on_spectrahedron).count();
    let transversal =
        nodes.len() == 10 && nodes.iter().all(|n| n.rank == 2) && search.nonisolated.is_empty();
    Ok(SymmetroidProfile {
        rho,
        sigma,
        transversal,
        lines_detected: !lines.is_empty(),
        lines,
        nonisolated_singularities: !search.nonisolated.is_empty(),
        base_node: search.base,
        interior: search.interior,
        projection_error: search.projection_error,
        nodes,
        tolerances: TOLERANCES,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusRow {
    pub label: (usize, usize),
    pub computed: Option<(usize, usize)>,
    pub transversal: bool,
    pub pass: bool,
    pub error: Option<String>,
}

/// Profile every embedded census quadruple and compare with its label.
pub fn census_verify(seed: u64) -> Vec<CensusRow> {
    CENSUS
        .iter()
        .map(|entry| {
            let label = entry.label();
            let opts = NodeOptions {
                seed,
                transversal_expected: true,
                ..Default::default()
            };
            match entry.pencil().and_then(|p| symmetroid_profile(&p, &opts)) {
                Ok(prof) => {
                    let computed = (prof.rho, prof.sigma);
                    CensusRow {
                        label,
                        computed: Some(computed),
                        transversal: prof.transversal,
                        pass: prof.transversal && computed == label,
                        error: None,
                    }
                }
                Err(e) => CensusRow {
                    label,
                    computed: None,
                    transversal: false,
                    pass: false,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census;
    use crate::pencil::QPencil;

    #[test]
    fn diagonal_pencil_repeated_entry() {
        // diag(x0 + x3, x0 + x3, x3 - x0, x3): rank 2 at (1:0:0:-1)
        let m = |d: [i64; 4]| -> [[i64; 4]; 4] {
            let mut a = [[0; 4]; 4];
            for i in 0..4 {
                a[i][i] = d[i];
            }
            a
        };
        let p =
            QPencil::from_ints([m([1, 1, -1, 0]), m([0; 4]), m([0; 4]), m([1, 1, 1, 1])]).unwrap();
        // x1, x2 do not appear: the surface is a cone, so only check the node itself
        let x = ProjPoint::from_real(&[1.0, 0.0, 0.0, -1.0]).unwrap();
        let a = p.at_c64(&x.unit());
        assert_eq!(numerical_rank(&a, RANK_TOL), 2);
    }

    #[test]
    fn census_two_two() {
        let p = census::entry(2, 2).unwrap().pencil().unwrap();
        let prof = symmetroid_profile(
            &p,
            &NodeOptions {
                transversal_expected: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(prof.transversal);
        assert_eq!((prof.rho, prof.sigma), (2, 2));
    }

    #[test]
    fn real_node_search_finds_a_semidefinite_node() {
        let p = census::entry(10, 10).unwrap().pencil().unwrap();
        let e = find_interior_point(&p, 0, 64).unwrap();
        let x = find_real_node(&p, e.point().unwrap(), 0).unwrap();
        let n = classify_node(&p, &x).unwrap();
        assert!(n.is_real && n.rank == 2 && n.on_spectrahedron);
    }
}
