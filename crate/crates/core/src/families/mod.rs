//! Special spectrahedra: Toeplitz, pillow, Sylvester, a non-spectrahedral
//! quartic without real nodes, and the Kummer/Gram family in [`gram`].

pub mod gram;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::nodes::{multistart_nodes, Node, NodeOptions, NodeSystem};
use crate::pencil::{QPencil, Signature};
use crate::poly::multi::{MultiPoly, QPoly};
use crate::poly::point::ProjPoint;
use crate::poly::scalar::{int, Rational, C64};

/// Pencil whose `(i, j)` entry is the linear form with coefficients `m[i][j]`
/// on `x0..x3`.
pub fn pencil_from_forms(m: &[[[i64; 4]; 4]; 4]) -> Result<QPencil> {
    let mut mats = [[[0i64; 4]; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                mats[k][i][j] = m[i][j][k];
            }
        }
    }
    QPencil::from_ints(mats)
}

const X0: [i64; 4] = [1, 0, 0, 0];
const X1: [i64; 4] = [0, 1, 0, 0];
const X2: [i64; 4] = [0, 0, 1, 0];
const X3: [i64; 4] = [0, 0, 0, 1];
const ZERO: [i64; 4] = [0; 4];

fn neg(v: [i64; 4]) -> [i64; 4] {
    v.map(|c| -c)
}

/// The Toeplitz pencil: constant diagonal `x0`, then `x1`, `x2`, `x3` on the
/// successive off-diagonals.
pub fn toeplitz_pencil() -> QPencil {
    pencil_from_forms(&[
        [X0, X1, X2, X3],
        [X1, X0, X1, X2],
        [X2, X1, X0, X1],
        [X3, X2, X1, X0],
    ])
    .expect("Toeplitz pencil is symmetric")
}

/// The two quadrics whose product is the Toeplitz determinant, homogenized
/// with `x0` and written in `x1, x2, x3`.
pub fn toeplitz_quadrics() -> (QPoly, QPoly) {
    let a = crate::poly::parse_poly(4, "x1^2 + 2*x1*x2 + x2^2 - x1*x3 - x0*x1 - x0*x3 - x0^2")
        .expect("valid literal");
    let b = crate::poly::parse_poly(4, "x1^2 - 2*x1*x2 + x2^2 - x1*x3 + x0*x1 + x0*x3 - x0^2")
        .expect("valid literal");
    (a, b)
}

/// The point `(1 : cos t : cos 2t : cos 3t)` of the cosine moment curve.
pub fn cosine_curve(theta: f64) -> [f64; 4] {
    [1.0, theta.cos(), (2.0 * theta).cos(), (3.0 * theta).cos()]
}

/// The pillow pencil.
pub fn pillow_pencil() -> QPencil {
    pencil_from_forms(&[
        [X0, X1, ZERO, X1],
        [X1, X0, X2, ZERO],
        [ZERO, X2, X0, X3],
        [X1, ZERO, X3, X0],
    ])
    .expect("pillow pencil is symmetric")
}

/// The quartic pencil with a nonempty real symmetroid, no real nodes and an
/// empty spectrahedron.
pub fn nodeless_pencil() -> QPencil {
    pencil_from_forms(&[
        [X0, X1, X2, X3],
        [X1, X2, neg(X0), X3],
        [X2, neg(X0), neg(X3), X2],
        [X3, X3, X2, neg(X1)],
    ])
    .expect("pencil is symmetric")
}

/// Five linear forms, each given by its coefficients on `x0..x3`.
pub type Forms = [[Rational; 4]; 5];

pub fn forms_from_ints(f: [[i64; 4]; 5]) -> Forms {
    f.map(|l| l.map(int))
}

/// The triangular prism `x1, x2 >= 0`, `x1 + x2 <= x0`, `0 <= x3 <= x0`.
pub fn prism_forms() -> Forms {
    forms_from_ints([X1, X2, [1, -1, -1, 0], X3, [1, 0, 0, -1]])
}

fn linear_form(l: &[Rational; 4]) -> QPoly {
    QPoly::linear(l)
}

/// Whether some four of the forms are linearly dependent.
fn forms_degenerate(forms: &Forms) -> bool {
    (0..5).any(|skip| {
        let m: Mat<Rational> = (0..5)
            .filter(|&i| i != skip)
            .map(|i| forms[i].to_vec())
            .collect();
        linalg::det(&m) == int(0)
    })
}

/// The Sylvester pencil `diag(l1, l2, l3, l4) + l5 J` with `J` the all-ones
/// matrix: the Hessian of `l1^3 + ... + l5^3` in coordinates where
/// `l1..l4` are the coordinate functions, up to a constant. Its determinant
/// `(1/l1 + ... + 1/l5) l1 l2 l3 l4 l5` is verified exactly.
pub fn sylvester_pencil(forms: &Forms) -> Result<QPencil> {
    if forms_degenerate(forms) {
        return Err(Error::Degenerate(
            "four of the five linear forms are linearly dependent".into(),
        ));
    }
    let mut mats: [Mat<Rational>; 4] = Default::default();
    for (k, m) in mats.iter_mut().enumerate() {
        *m = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| {
                        let d = if i == j { forms[i][k].clone() } else { int(0) };
                        d + forms[4][k].clone()
                    })
                    .collect()
            })
            .collect();
    }
    let p = QPencil::new(mats)?;
    let det = p.determinant();
    let expected = sylvester_quartic(forms);
    if det != expected {
        return Err(Error::IdentityFailed {
            what: "Sylvester determinant".into(),
            residual: f64::INFINITY,
        });
    }
    Ok(p)
}

/// `sum_i prod_{j != i} l_j`.
pub fn sylvester_quartic(forms: &Forms) -> QPoly {
    let ls: Vec<QPoly> = forms.iter().map(linear_form).collect();
    let mut sum = MultiPoly::zero(4);
    for i in 0..5 {
        let mut prod = MultiPoly::constant(4, int(1));
        for (j, l) in ls.iter().enumerate() {
            if j != i {
                prod = &prod * l;
            }
        }
        sum = &sum + &prod;
    }
    sum
}

/// The ten points `l_i = l_j = l_k = 0`, keyed by the triple.
pub fn sylvester_vertices(forms: &Forms) -> Result<Vec<([usize; 3], ProjPoint)>> {
    let mut out = Vec::with_capacity(10);
    for i in 0..5 {
        for j in i + 1..5 {
            for k in j + 1..5 {
                let m: Mat<Rational> =
                    vec![forms[i].to_vec(), forms[j].to_vec(), forms[k].to_vec()];
                let ker = linalg::nullspace(&m, 4, 0.0);
                if ker.len() != 1 {
                    return Err(Error::Degenerate(format!(
                        "forms {i}, {j}, {k} do not meet in a point"
                    )));
                }
                let x: Vec<f64> = ker[0]
                    .iter()
                    .map(crate::poly::scalar::rational_to_f64)
                    .collect();
                out.push(([i, j, k], ProjPoint::from_real(&x)?));
            }
        }
    }
    Ok(out)
}

/// Signature pattern allowed for the three nodes on a real line of a very
/// real nodal symmetroid: three `(1,1)`-nodes, or one `(1,1)` and two
/// semidefinite nodes of the same sign.
pub fn line_signature_pattern_allowed(sigs: &[Signature]) -> bool {
    if sigs.len() != 3 || sigs.iter().any(|s| s.rank() != 2) {
        return false;
    }
    let mixed = sigs.iter().filter(|s| s.pos == 1 && s.neg == 1).count();
    let pos = sigs.iter().filter(|s| s.pos == 2).count();
    let neg = sigs.iter().filter(|s| s.neg == 2).count();
    mixed == 3 || (mixed == 1 && (pos == 2 || neg == 2))
}

/// Number of singular points of the section of `V(f)` by a random plane.
/// For a reduced quartic this is the degree of the curve of singular points
/// of the surface, since a general plane section is smooth elsewhere.
pub fn singular_curve_degree(f: &QPoly, seed: u64) -> Result<usize> {
    if f.nvars() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: f.nvars(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b: Mat<Rational> = (0..4)
        .map(|_| (0..3).map(|_| int(rng.gen_range(-9..=9))).collect())
        .collect();
    let section = f.substitute_linear(&b);
    if section.is_zero() {
        return Err(Error::Degenerate("plane lies in the surface".into()));
    }
    let sys = NodeSystem::new(&section);
    let opts = NodeOptions::with_seed(seed);
    let found = multistart_nodes(&sys, &[], &opts, true);
    if !found.nonisolated.is_empty() {
        return Err(Error::Degenerate(
            "plane section has a multiple component".into(),
        ));
    }
    Ok(found.isolated.len())
}

/// A reduced quartic surface that factors has a singular curve of degree at
/// least three (the intersection of two of its components), so a singular
/// curve of degree at most two certifies irreducibility over the complex
/// numbers. Returns `None` when the test is inconclusive.
pub fn irreducible_by_singular_curve(f: &QPoly, seed: u64) -> Result<Option<bool>> {
    let d = singular_curve_degree(f, seed)?;
    Ok(if d < 3 { Some(true) } else { None })
}

/// Whether the points lie on a common plane (relative tolerance on the
/// smallest singular value of the stacked coordinates).
pub fn coplanar(points: &[ProjPoint], tol: f64) -> bool {
    if points.len() < 4 {
        return true;
    }
    let m: Mat<C64> = points.iter().map(|p| p.unit()).collect();
    let s = linalg::singular_values(&m);
    s[3] <= tol * s[0]
}

/// Affine real nodes (off the plane `x0 = 0`).
pub fn affine_real_nodes(nodes: &[Node]) -> Vec<&Node> {
    nodes
        .iter()
        .filter(|n| n.is_real && n.point.coords()[0].norm() > 1e-8)
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyInfo {
    pub name: &'static str,
    pub pencil: serde_json::Value,
}

/// Pencil of a named family with default parameters.
pub fn family_pencil(name: &str) -> Result<QPencil> {
    match name {
        "toeplitz" => Ok(toeplitz_pencil()),
        "pillow" => Ok(pillow_pencil()),
        "sylvester" => sylvester_pencil(&prism_forms()),
        "kummer" => Ok(gram::kummer_pencil(&gram::SexticCoeffs::from_unipoly(
            &gram::default_sextic(),
        )?)),
        "nodeless" => Ok(nodeless_pencil()),
        other => Err(Error::Unsupported(format!("unknown family {other:?}"))),
    }
}

pub const FAMILY_NAMES: [&str; 5] = ["toeplitz", "pillow", "sylvester", "kummer", "nodeless"];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::numerical_rank;

    #[test]
    fn toeplitz_determinant_factors() {
        let (a, b) = toeplitz_quadrics();
        assert_eq!(toeplitz_pencil().determinant(), &a * &b);
    }

    #[test]
    fn toeplitz_origin_is_identity() {
        let p = toeplitz_pencil();
        let m = p.at(&[int(1), int(0), int(0), int(0)]);
        assert!(linalg::is_identity(&m));
    }

    #[test]
    fn cosine_curve_ranks() {
        let p = toeplitz_pencil().to_c64();
        let rank = |t: f64| {
            let x: Vec<C64> = cosine_curve(t).iter().map(|&v| C64::new(v, 0.0)).collect();
            numerical_rank(&p.at_c64(&x), 1e-9)
        };
        assert_eq!(rank(0.0), 1);
        assert_eq!(rank(std::f64::consts::PI), 1);
        assert_eq!(rank(0.7), 2);
    }

    #[test]
    fn sylvester_identity_holds_for_prism() {
        assert!(sylvester_pencil(&prism_forms()).is_ok());
    }

    #[test]
    fn dependent_forms_are_rejected() {
        let f = forms_from_ints([X1, X2, [0, 1, 1, 0], X3, X0]);
        assert!(sylvester_pencil(&f).is_err());
    }

    #[test]
    fn nodeless_pencil_is_symmetric() {
        let p = nodeless_pencil();
        assert!(p.matrices().iter().all(|m| linalg::is_symmetric(m)));
    }

    #[test]
    fn line_patterns() {
        let s = |pos, neg| Signature {
            pos,
            neg,
            zero: 4 - pos - neg,
        };
        assert!(line_signature_pattern_allowed(&[s(1, 1), s(1, 1), s(1, 1)]));
        assert!(line_signature_pattern_allowed(&[s(2, 0), s(1, 1), s(2, 0)]));
        assert!(!line_signature_pattern_allowed(&[
            s(2, 0),
            s(2, 0),
            s(2, 0)
        ]));
        assert!(!line_signature_pattern_allowed(&[
            s(2, 0),
            s(1, 1),
            s(0, 2)
        ]));
    }

    #[test]
    fn reducible_quartic_has_singular_quartic_curve() {
        let f = toeplitz_pencil().determinant();
        assert_eq!(singular_curve_degree(&f, 3).unwrap(), 4);
    }

    #[test]
    fn pillow_is_irreducible() {
        let f = pillow_pencil().determinant();
        assert_eq!(irreducible_by_singular_curve(&f, 3).unwrap(), Some(true));
    }
}
