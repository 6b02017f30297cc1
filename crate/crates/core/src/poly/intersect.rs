//! Intersections of plane projective curves by elimination.
//!
//! Each pass applies a random complex change of coordinates `x = T y`,
//! eliminates `y2`, finds the roots of the resulting binary form in the chart
//! `y0 = 1`, recovers `y2` from the two univariate restrictions, and polishes
//! with Newton's method. Two passes with independent transforms must agree on
//! the points and their multiplicities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::multi::{CPoly, MultiPoly};
use super::point::ProjPoint;
use super::resultant::elimination_resultant;
use super::roots::{univariate_roots, Root};
use super::scalar::{Coeff, C64};
use super::uni::UniPoly;
use crate::error::{Error, Result};
use crate::linalg::lstsq_c64;

/// A point of `V(f) ∩ V(g)` with its intersection multiplicity.
#[derive(Clone, Debug)]
pub struct Intersection {
    pub point: ProjPoint,
    pub multiplicity: usize,
    /// `max(|f|, |g|)` at the unit-norm representative, for normalized `f`, `g`.
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct IntersectOptions {
    pub seed: u64,
    /// Points from the two passes are matched within this distance.
    pub match_radius: f64,
    /// Relative size below which a resultant counts as identically zero.
    pub zero_tol: f64,
}

impl Default for IntersectOptions {
    fn default() -> Self {
        IntersectOptions {
            seed: 0,
            match_radius: 1e-5,
            zero_tol: 1e-9,
        }
    }
}

pub fn plane_curve_intersections<C: Coeff>(
    f: &MultiPoly<C>,
    g: &MultiPoly<C>,
) -> Result<Vec<Intersection>> {
    plane_curve_intersections_with(f, g, &IntersectOptions::default())
}

pub fn plane_curve_intersections_with<C: Coeff>(
    f: &MultiPoly<C>,
    g: &MultiPoly<C>,
    opts: &IntersectOptions,
) -> Result<Vec<Intersection>> {
    for p in [f, g] {
        if p.nvars() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                got: p.nvars(),
            });
        }
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if !p.is_homogeneous() {
            return Err(Error::DegreeMismatch(
                "plane curves must be homogeneous".into(),
            ));
        }
    }
    if C::EXACT && exact_common_factor(f, g, opts.seed)? {
        return Err(Error::CommonComponent);
    }
    let fc = f.to_c64().normalized();
    let gc = g.to_c64().normalized();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e37_79b9_7f4a_7c15);

    let first = intersection_pass(&fc, &gc, &mut rng, opts)?;
    let second = intersection_pass(&fc, &gc, &mut rng, opts)?;
    match (first, second) {
        (None, None) => Err(Error::CommonComponent),
        (Some(a), None) | (None, Some(a)) => {
            // one chart degenerated numerically; confirm with a third
            let third =
                intersection_pass(&fc, &gc, &mut rng, opts)?.ok_or(Error::CommonComponent)?;
            compare_votes(a, &third, opts.match_radius)
        }
        (Some(a), Some(b)) => match compare_votes(a.clone(), &b, opts.match_radius) {
            Ok(v) => Ok(v),
            Err(first_err) => {
                // break the tie with a third chart
                let Some(c) = intersection_pass(&fc, &gc, &mut rng, opts)? else {
                    return Err(first_err);
                };
                compare_votes(a, &c, opts.match_radius)
                    .or_else(|_| compare_votes(b, &c, opts.match_radius))
                    .map_err(|_| first_err)
            }
        },
    }
}

fn compare_votes(
    a: Vec<Intersection>,
    b: &[Intersection],
    radius: f64,
) -> Result<Vec<Intersection>> {
    for p in &a {
        let partner = b.iter().min_by(|x, y| {
            x.point
                .distance(&p.point)
                .total_cmp(&y.point.distance(&p.point))
        });
        match partner {
            Some(q) if q.point.distance(&p.point) < radius.max(p.residual.sqrt()) => {
                if q.multiplicity != p.multiplicity {
                    return Err(Error::MultiplicityDisagreement(format!(
                        "point {:?}: {} vs {}",
                        p.point, p.multiplicity, q.multiplicity
                    )));
                }
            }
            _ => {
                return Err(Error::MultiplicityDisagreement(format!(
                    "point {:?} missing from second chart",
                    p.point
                )));
            }
        }
    }
    if a.len() != b.len() {
        return Err(Error::MultiplicityDisagreement(format!(
            "{} vs {} distinct points",
            a.len(),
            b.len()
        )));
    }
    Ok(a)
}

/// Exact check for a common factor: the resultant in a random integral
/// chart vanishes identically.
fn exact_common_factor<C: Coeff>(f: &MultiPoly<C>, g: &MultiPoly<C>, seed: u64) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5bd1_e995);
    let t: Vec<Vec<C>> = loop {
        let t: Vec<Vec<C>> = (0..3)
            .map(|_| (0..3).map(|_| C::from_i64(rng.gen_range(-7..=7))).collect())
            .collect();
        if !crate::linalg::det(&t).is_zero() {
            break t;
        }
    };
    let ft = f.substitute_linear(&t);
    let gt = g.substitute_linear(&t);
    let r = elimination_resultant(&ft, &gt, 2)?;
    Ok(r.is_zero())
}

fn random_transform(rng: &mut ChaCha8Rng) -> Vec<Vec<C64>> {
    loop {
        let t: Vec<Vec<C64>> = (0..3)
            .map(|_| {
                (0..3)
                    .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                    .collect()
            })
            .collect();
        let d = crate::linalg::det(&t).norm();
        let scale: f64 = t.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
        if d > 0.1 * scale.powi(3) {
            return t;
        }
    }
}

/// One elimination pass. `Ok(None)` means the resultant vanished numerically.
fn intersection_pass(
    f: &CPoly,
    g: &CPoly,
    rng: &mut ChaCha8Rng,
    opts: &IntersectOptions,
) -> Result<Option<Vec<Intersection>>> {
    let d = f.degree().unwrap() as usize;
    let e = g.degree().unwrap() as usize;
    for _attempt in 0..8 {
        let t = random_transform(rng);
        let ft = f.substitute_linear(&t).normalized();
        let gt = g.substitute_linear(&t).normalized();
        let res = elimination_resultant(&ft, &gt, 2)?;
        // res(y0, y1) is a binary form of degree d*e; restrict to y0 = 1
        let coeffs: Vec<C64> = (0..=d * e)
            .map(|k| res.coeff_of(&[(d * e - k) as u32, k as u32, 0]))
            .collect();
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale < opts.zero_tol {
            return Ok(None);
        }
        if coeffs[d * e].norm() < 1e-6 * scale {
            continue; // intersection point near y0 = 0; redraw the chart
        }
        let r = UniPoly::new(coeffs);
        let roots = univariate_roots(&r)?;
        let mut out = Vec::with_capacity(roots.len());
        let mut root_y1 = Vec::with_capacity(roots.len());
        for Root {
            value: y1,
            multiplicity,
        } in roots
        {
            root_y1.push(y1);
            let (y1, y2) = back_substitute(&ft, &gt, y1, multiplicity)?;
            let y = [C64::new(1.0, 0.0), y1, y2];
            let x: Vec<C64> = (0..3)
                .map(|i| (0..3).map(|j| t[i][j] * y[j]).sum())
                .collect();
            let point = ProjPoint::new(x)?;
            let residual = joint_residual(f, g, &point);
            out.push(Intersection {
                point,
                multiplicity,
                residual,
            });
        }
        if misattached(&out, &root_y1) {
            continue; // two separate roots polished onto one point; redraw the chart
        }
        let out = merge_coincident(out, f, g);
        let total: usize = out.iter().map(|p| p.multiplicity).sum();
        if total != d * e {
            return Err(Error::MultiplicityDisagreement(format!(
                "multiplicities sum to {total}, expected {}",
                d * e
            )));
        }
        return Ok(Some(out));
    }
    Err(Error::Degenerate(
        "no admissible chart found for curve intersection".into(),
    ))
}

/// Points closer than this after polishing are one point of higher multiplicity.
const MERGE_RADIUS: f64 = 1e-5;
/// Resultant roots farther apart than this (relative) are not halves of one
/// numerically split multiple root.
const SPLIT_ROOT_GAP: f64 = 1e-4;

/// True when two well separated roots of the resultant back-substituted to the
/// same point, so that one of them was attached to the wrong intersection.
fn misattached(points: &[Intersection], y1: &[C64]) -> bool {
    (0..points.len()).any(|i| {
        (i + 1..points.len()).any(|j| {
            points[i].point.distance(&points[j].point) < MERGE_RADIUS
                && (y1[i] - y1[j]).norm() > SPLIT_ROOT_GAP * (1.0 + y1[i].norm().max(y1[j].norm()))
        })
    })
}

/// A multiple root of the resultant can split in floating point; its halves
/// back-substitute to the same point, which is merged here.
fn merge_coincident(points: Vec<Intersection>, f: &CPoly, g: &CPoly) -> Vec<Intersection> {
    let mut out: Vec<Intersection> = Vec::with_capacity(points.len());
    for p in points {
        match out
            .iter_mut()
            .find(|q| q.point.distance(&p.point) < MERGE_RADIUS)
        {
            Some(q) => {
                let (mq, mp) = (q.multiplicity as f64, p.multiplicity as f64);
                let coords: Vec<C64> = {
                    let (a, b) = (q.point.unit(), p.point.unit());
                    // align phases before averaging
                    let k = a.iter().zip(&b).map(|(x, y)| x.conj() * y).sum::<C64>();
                    let phase = if k.norm() > 0.0 {
                        k.conj() / k.norm()
                    } else {
                        C64::new(1.0, 0.0)
                    };
                    a.iter()
                        .zip(&b)
                        .map(|(x, y)| (x * mq + y * phase * mp) / (mq + mp))
                        .collect()
                };
                if let Ok(point) = ProjPoint::new(coords) {
                    q.residual = joint_residual(f, g, &point);
                    q.point = point;
                }
                q.multiplicity += p.multiplicity;
            }
            None => out.push(p),
        }
    }
    out
}

/// Residual below which a polished back substitution counts as converged.
const BACK_SUB_CONVERGED: f64 = 1e-11;

/// Find `y2` with `f(1, y1, y2) = g(1, y1, y2) = 0` and polish the point.
fn back_substitute(f: &CPoly, g: &CPoly, y1: C64, multiplicity: usize) -> Result<(C64, C64)> {
    let restrict = |p: &CPoly| -> UniPoly<C64> {
        let dp = p.degree().unwrap() as usize;
        UniPoly::new(
            (0..=dp)
                .map(|k| {
                    let mut acc = C64::new(0.0, 0.0);
                    for j in 0..=(dp - k) {
                        acc += p.coeff_of(&[(dp - k - j) as u32, j as u32, k as u32])
                            * y1.powu(j as u32);
                    }
                    acc
                })
                .collect(),
        )
    };
    let fr = restrict(f);
    let gr = restrict(g);
    let rf = univariate_roots(&fr)?;
    let rg = univariate_roots(&gr)?;
    // closest pair of roots of the two restrictions
    let mut best: Option<(C64, f64)> = None;
    for a in &rf {
        for b in &rg {
            let dist = (a.value - b.value).norm() / (1.0 + a.value.norm());
            if best.is_none_or(|(_, bd)| dist < bd) {
                let mid = (a.value * a.multiplicity as f64 + b.value * b.multiplicity as f64)
                    / (a.multiplicity + b.multiplicity) as f64;
                best = Some((mid, dist));
            }
        }
    }
    let (y2, _) =
        best.ok_or_else(|| Error::NotFound("back substitution found no common root".into()))?;
    if multiplicity > 1 {
        return Ok((y1, y2));
    }
    // A slightly inaccurate y1 can make the closest pair the wrong one when
    // images cluster, so polish from every root of the f restriction too.
    // Among converged candidates keep the one whose y1 moved least, so that
    // the point stays attached to this root of the resultant.
    let one = C64::new(1.0, 0.0);
    let y1_init = y1;
    let score = |c: (C64, C64)| {
        let r = residual_at(f, g, &[one, c.0, c.1]);
        let shift = (c.0 - y1_init).norm();
        (r >= BACK_SUB_CONVERGED, shift, r)
    };
    let mut out = newton_2d(f, g, y1, y2);
    let mut best_score = score(out);
    for a in &rf {
        let cand = newton_2d(f, g, y1, a.value);
        let s = score(cand);
        if s.partial_cmp(&best_score) == Some(std::cmp::Ordering::Less) {
            out = cand;
            best_score = s;
        }
    }
    Ok(out)
}

/// Polish a simple common zero of `f` and `g` by Newton's method in the
/// affine chart of its largest coordinate. Returns the input unchanged when
/// Newton does not improve the residual.
pub fn polish_common_zero<C: Coeff>(
    f: &MultiPoly<C>,
    g: &MultiPoly<C>,
    p: &ProjPoint,
) -> ProjPoint {
    let (fc, gc) = (f.to_c64().normalized(), g.to_c64().normalized());
    let u = p.unit();
    let piv = (0..3)
        .max_by(|&a, &b| u[a].norm().total_cmp(&u[b].norm()))
        .unwrap_or(0);
    let others: Vec<usize> = (0..3).filter(|&k| k != piv).collect();
    // reorder variables so the pivot comes first
    let perm = |q: &CPoly| -> CPoly {
        let mut t = vec![vec![C64::new(0.0, 0.0); 3]; 3];
        t[piv][0] = C64::new(1.0, 0.0);
        t[others[0]][1] = C64::new(1.0, 0.0);
        t[others[1]][2] = C64::new(1.0, 0.0);
        q.substitute_linear(&t)
    };
    let (fp, gp) = (perm(&fc), perm(&gc));
    let (y1, y2) = newton_2d(&fp, &gp, u[others[0]] / u[piv], u[others[1]] / u[piv]);
    let mut x = vec![C64::new(0.0, 0.0); 3];
    x[piv] = C64::new(1.0, 0.0);
    x[others[0]] = y1;
    x[others[1]] = y2;
    match ProjPoint::new(x) {
        Ok(q) if joint_residual(&fc, &gc, &q) <= joint_residual(&fc, &gc, p) => q,
        _ => p.clone(),
    }
}

/// Damped Newton on the affine system `f(1, y1, y2) = g(1, y1, y2) = 0`.
fn newton_2d(f: &CPoly, g: &CPoly, mut y1: C64, mut y2: C64) -> (C64, C64) {
    let (f1, f2, g1, g2) = (f.partial(1), f.partial(2), g.partial(1), g.partial(2));
    let one = C64::new(1.0, 0.0);
    let mut res = residual_at(f, g, &[one, y1, y2]);
    for _ in 0..40 {
        if res < 1e-15 {
            break;
        }
        let x = [one, y1, y2];
        let jac = vec![
            vec![f1.eval_c64(&x), f2.eval_c64(&x)],
            vec![g1.eval_c64(&x), g2.eval_c64(&x)],
        ];
        let rhs = vec![-f.eval_c64(&x), -g.eval_c64(&x)];
        let Ok(step) = lstsq_c64(&jac, &rhs) else {
            break;
        };
        let mut damping = 1.0;
        let mut moved = false;
        for _ in 0..6 {
            let cand = [one, y1 + step[0] * damping, y2 + step[1] * damping];
            let r = residual_at(f, g, &cand);
            if r < res {
                y1 = cand[1];
                y2 = cand[2];
                res = r;
                moved = true;
                break;
            }
            damping *= 0.5;
        }
        if !moved {
            break;
        }
    }
    (y1, y2)
}

fn residual_at(f: &CPoly, g: &CPoly, x: &[C64]) -> f64 {
    f.eval_c64(x).norm().max(g.eval_c64(x).norm())
}

fn joint_residual(f: &CPoly, g: &CPoly, p: &ProjPoint) -> f64 {
    let u = p.unit();
    residual_at(f, g, &u)
}

/// Singular points of a plane curve: common zeros of two generic
/// combinations of the partials that also annihilate the third.
pub fn curve_singular_points<C: Coeff>(
    h: &MultiPoly<C>,
    seed: u64,
    tol: f64,
) -> Result<Vec<ProjPoint>> {
    let hc = h.to_c64().normalized();
    let grad: Vec<CPoly> = hc.gradient();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x2545_f491);
    let mut combo = || {
        let w: Vec<C64> = (0..3)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        grad.iter()
            .zip(&w)
            .fold(CPoly::zero(3), |acc, (p, c)| &acc + &p.scale(c))
    };
    let (a, b) = (combo(), combo());
    if a.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let pts = plane_curve_intersections_with(
        &a,
        &b,
        &IntersectOptions {
            seed,
            ..Default::default()
        },
    )?;
    Ok(pts
        .into_iter()
        .filter(|p| {
            let u = p.point.unit();
            hc.eval_c64(&u).norm() < tol && grad.iter().all(|d| d.eval_c64(&u).norm() < tol)
        })
        .map(|p| p.point)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::multi::parse_poly;

    fn p3(s: &str) -> MultiPoly<crate::poly::scalar::Rational> {
        parse_poly(3, s).unwrap()
    }

    #[test]
    fn two_lines() {
        let pts = plane_curve_intersections(&p3("x0 - x1"), &p3("x1 - 2*x2")).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].multiplicity, 1);
        let expect = ProjPoint::from_real(&[2.0, 2.0, 1.0]).unwrap();
        assert!(pts[0].point.distance(&expect) < 1e-10);
    }

    #[test]
    fn conic_and_tangent_line() {
        let pts = plane_curve_intersections(&p3("x0^2 + x1^2 - x2^2"), &p3("x1 - x2")).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].multiplicity, 2);
        let expect = ProjPoint::from_real(&[0.0, 1.0, 1.0]).unwrap();
        assert!(pts[0].point.distance(&expect) < 1e-7);
    }

    #[test]
    fn two_cubics_meet_in_nine_points() {
        let f = p3("x0^3 - 2*x0*x1^2 + x1*x2^2 + 3*x2^3 - x0*x1*x2");
        let g = p3("x1^3 + x0^2*x2 - 4*x0*x2^2 + x0^2*x1 + 2*x2^3");
        let pts = plane_curve_intersections(&f, &g).unwrap();
        assert_eq!(pts.len(), 9);
        for p in &pts {
            assert_eq!(p.multiplicity, 1);
            assert!(p.residual < 1e-10, "{}", p.residual);
        }
    }

    #[test]
    fn common_component_is_rejected() {
        let f = p3("(x0 - x1)*(x0 + x2)");
        let g = p3("(x0 - x1)*(x1 + x2)");
        assert!(matches!(
            plane_curve_intersections(&f, &g),
            Err(Error::CommonComponent)
        ));
        assert!(matches!(
            plane_curve_intersections(&f.to_c64(), &g.to_c64()),
            Err(Error::CommonComponent)
        ));
    }

    #[test]
    fn singular_points_of_nodal_cubic() {
        // x1^2 x2 = x0^2 (x0 + x2) has a node at (0:0:1)
        let h = p3("x1^2*x2 - x0^3 - x0^2*x2");
        let s = curve_singular_points(&h, 3, 1e-8).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s[0].distance(&ProjPoint::from_real(&[0.0, 0.0, 1.0]).unwrap()) < 1e-6);
        let smooth = p3("x0^3 + x1^3 + x2^3");
        assert!(curve_singular_points(&smooth, 3, 1e-8).unwrap().is_empty());
    }
}
