//! Kummer symmetroids from binary sextics and Gram spectrahedra.
//!
//! A sextic `p(t)` is stored through `a0..a6` with
//! `p = a0 - 6 a1 t + 15 a2 t^2 - 20 a3 t^3 + 15 a4 t^4 - 6 a5 t^5 + a6 t^6`.
//! Baker's pencil `A(x) = x0 A0 + x1 A1 + x2 A2 + x3 A3` has `A0, A1, A2`
//! spanning the kernel of `psi(M) = v M v^T`, `v = (t^3, t^2, t, 1)`, and
//! `psi(A3) = p`, so its spectrahedron at `x3 = 1` is the Gram spectrahedron.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{self, numerical_rank, sym_eigen, Mat};
use crate::nodes::{search_nodes, Node, NodeOptions};
use crate::pencil::{find_interior_point, InteriorSearch, QPencil};
use crate::poly::point::{point_set_distance, ProjPoint};
use crate::poly::roots::univariate_roots;
use crate::poly::scalar::{format_rational, int, rational_to_f64, Coeff, Rational, C64};
use crate::poly::uni::{CUni, QUni, UniPoly};

/// Relative residual gate for float identities in this module.
pub const GRAM_TOL: f64 = 1e-8;
/// Imaginary parts below this (relative) count as real.
const REAL_TOL: f64 = 1e-8;
/// Eigenvalues above `-PSD_TOL * scale` count as nonnegative.
const PSD_TOL: f64 = 1e-9;
/// Point-set distance accepted when matching node lists.
const MATCH_TOL: f64 = 1e-6;

const BINOM6: [i64; 7] = [1, 6, 15, 20, 15, 6, 1];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SexticCoeffs {
    pub a: [Rational; 7],
}

impl SexticCoeffs {
    pub fn new(a: [Rational; 7]) -> Self {
        SexticCoeffs { a }
    }

    /// Coefficient of `t^k` is `(-1)^k binom(6, k) a_k`.
    pub fn to_unipoly(&self) -> QUni {
        UniPoly::new(
            (0..7)
                .map(|k| {
                    let s = if k % 2 == 0 { BINOM6[k] } else { -BINOM6[k] };
                    self.a[k].clone() * int(s)
                })
                .collect(),
        )
    }

    pub fn from_unipoly(p: &QUni) -> Result<Self> {
        if p.degree().is_some_and(|d| d > 6) {
            return Err(Error::DegreeMismatch("sextic of degree above 6".into()));
        }
        let mut a: [Rational; 7] = Default::default();
        for (k, ak) in a.iter_mut().enumerate() {
            let s = if k % 2 == 0 { BINOM6[k] } else { -BINOM6[k] };
            *ak = p.coeff(k) / int(s);
        }
        Ok(SexticCoeffs { a })
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.a
                .iter()
                .map(|q| Value::String(format_rational(q)))
                .collect(),
        )
    }
}

/// `t^6 - 1`.
pub fn default_sextic() -> QUni {
    let mut c = vec![int(0); 7];
    c[0] = int(-1);
    c[6] = int(1);
    UniPoly::new(c)
}

fn sym(entries: &[((usize, usize), Rational)]) -> Mat<Rational> {
    let mut m = vec![vec![int(0); 4]; 4];
    for ((i, j), v) in entries {
        m[*i][*j] = v.clone();
        m[*j][*i] = v.clone();
    }
    m
}

/// The three kernel matrices `A0, A1, A2` of Baker's pencil.
pub fn kummer_kernel() -> [Mat<Rational>; 3] {
    [
        sym(&[((1, 3), int(1)), ((2, 2), int(-2))]),
        sym(&[((0, 3), int(-1)), ((1, 2), int(1))]),
        sym(&[((0, 2), int(1)), ((1, 1), int(-2))]),
    ]
}

/// The matrix `A3` of Baker's pencil, with `psi(A3) = p`.
pub fn kummer_a3(s: &SexticCoeffs) -> Mat<Rational> {
    let a = |k: usize, c: i64| s.a[k].clone() * int(c);
    sym(&[
        ((0, 0), a(6, 1)),
        ((0, 1), a(5, -3)),
        ((0, 2), a(4, 3)),
        ((0, 3), a(3, -1)),
        ((1, 1), a(4, 9)),
        ((1, 2), a(3, -9)),
        ((1, 3), a(2, 3)),
        ((2, 2), a(2, 9)),
        ((2, 3), a(1, -3)),
        ((3, 3), a(0, 1)),
    ])
}

/// Baker's pencil of the sextic.
pub fn kummer_pencil(s: &SexticCoeffs) -> QPencil {
    let [a0, a1, a2] = kummer_kernel();
    QPencil::new_unchecked([a0, a1, a2, kummer_a3(s)])
}

/// `psi(M) = (t^3, t^2, t, 1) M (t^3, t^2, t, 1)^T`.
pub fn gram_map_psi<C: Coeff>(m: &[Vec<C>]) -> UniPoly<C> {
    let mut c = vec![C::zero(); 7];
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            c[6 - i - j] = c[6 - i - j].clone() + v.clone();
        }
    }
    UniPoly::new(c)
}

/// Coordinates `(x0 : x1 : x2 : 1)` with `A(x) = g` on Baker's pencil, read
/// off the entries where exactly one kernel matrix is supported, together
/// with the residual of the full matrix identity relative to `|g|`.
pub fn kummer_coordinates(s: &SexticCoeffs, g: &[Vec<C64>]) -> (ProjPoint, f64) {
    let a3 = kummer_a3(s);
    let d = |i: usize, j: usize| g[i][j] - C64::new(rational_to_f64(&a3[i][j]), 0.0);
    let x = [d(1, 3), -d(0, 3), d(0, 2), C64::new(1.0, 0.0)];
    let p = kummer_pencil(s).to_c64();
    let a = p.at_c64(&x);
    let scale = linalg::max_abs(g).max(1.0);
    let mut r: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            r = r.max((a[i][j] - g[i][j]).norm() / scale);
        }
    }
    let point = ProjPoint::new(x.to_vec()).expect("last coordinate is one");
    (point, r)
}

#[derive(Clone, Debug, Serialize)]
pub struct GramDecomposition {
    /// Root indices of the two triples.
    pub partition: ([usize; 3], [usize; 3]),
    /// `p = lead ((q/2)^2 - (r/2)^2)`.
    #[serde(skip)]
    pub q: CUni,
    #[serde(skip)]
    pub r: CUni,
    #[serde(skip)]
    pub gram: Mat<C64>,
    pub rank: usize,
    pub is_real: bool,
    pub is_psd: bool,
    /// `|psi(G) - p|` relative to `|p|`.
    pub psi_residual: f64,
    /// The matching point of Baker's pencil.
    pub kummer_point: ProjPoint,
    pub kummer_residual: f64,
}

fn elementary(u: &[C64]) -> (C64, C64, C64) {
    let e1 = u[0] + u[1] + u[2];
    let e2 = u[0] * u[1] + u[0] * u[2] + u[1] * u[2];
    let e3 = u[0] * u[1] * u[2];
    (e1, e2, e3)
}

/// Coefficient vector of a cubic in the basis `(t^3, t^2, t, 1)`.
fn cubic_vector(c: &CUni) -> [C64; 4] {
    [c.coeff(3), c.coeff(2), c.coeff(1), c.coeff(0)]
}

fn rel_uni_distance(a: &CUni, b: &CUni) -> f64 {
    let n = a.coeffs().len().max(b.coeffs().len());
    let scale = b
        .coeffs()
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max)
        .max(1e-300);
    (0..n)
        .map(|k| (a.coeff(k) - b.coeff(k)).norm())
        .fold(0.0, f64::max)
        / scale
}

/// The six roots of a sextic, which must be simple.
pub fn simple_roots<C: Coeff>(p: &UniPoly<C>) -> Result<Vec<C64>> {
    if p.degree() != Some(6) {
        return Err(Error::DegreeMismatch(
            "expected a sextic of degree 6".into(),
        ));
    }
    let roots = univariate_roots(p)?;
    if roots.len() != 6 || roots.iter().any(|r| r.multiplicity != 1) {
        return Err(Error::RepeatedRoots);
    }
    Ok(roots.into_iter().map(|r| r.value).collect())
}

fn is_real_matrix(m: &[Vec<C64>]) -> bool {
    let scale = linalg::max_abs(m).max(1e-300);
    m.iter().flatten().all(|z| z.im.abs() <= REAL_TOL * scale)
}

fn is_psd(m: &[Vec<C64>]) -> bool {
    let re: Mat<f64> = m.iter().map(|r| r.iter().map(|z| z.re).collect()).collect();
    let (vals, _) = sym_eigen(&re);
    let scale = vals.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1e-300);
    vals.iter().all(|&v| v >= -PSD_TOL * scale)
}

/// The ten representations `p = lead ((q/2)^2 - (r/2)^2)`, one for each
/// partition of the roots into two triples, with their rank-two Gram
/// matrices `lead (a a^T - b b^T)` for the coefficient vectors `a`, `b` of
/// `q/2` and `r/2`.
pub fn gram_rank2_decompositions(s: &SexticCoeffs) -> Result<Vec<GramDecomposition>> {
    let p = s.to_unipoly();
    let u = simple_roots(&p)?;
    let lead = p.coeff(6).to_c64();
    let pc = p.to_c64();
    let mut out = Vec::with_capacity(10);
    for i in 1..6 {
        for j in i + 1..6 {
            let first = [0, i, j];
            let rest: Vec<usize> = (1..6).filter(|&k| k != i && k != j).collect();
            let second = [rest[0], rest[1], rest[2]];
            let (a1, a2, a3) = elementary(&first.map(|k| u[k]));
            let (b1, b2, b3) = elementary(&second.map(|k| u[k]));
            let two = C64::new(2.0, 0.0);
            let q = UniPoly::new(vec![-(a3 + b3), a2 + b2, -(a1 + b1), two]);
            let r = UniPoly::new(vec![a3 - b3, -(a2 - b2), a1 - b1]);
            let half = C64::new(0.5, 0.0);
            let va = cubic_vector(&q.scale(&half));
            let vb = cubic_vector(&r.scale(&half));
            let gram: Mat<C64> = (0..4)
                .map(|k| {
                    (0..4)
                        .map(|l| lead * (va[k] * va[l] - vb[k] * vb[l]))
                        .collect()
                })
                .collect();
            let psi_residual = rel_uni_distance(&gram_map_psi(&gram), &pc);
            let is_real = is_real_matrix(&gram);
            let is_psd = is_real && is_psd(&gram);
            let (kummer_point, kummer_residual) = kummer_coordinates(s, &gram);
            out.push(GramDecomposition {
                partition: (first, second),
                rank: numerical_rank(&gram, 1e-9),
                q,
                r,
                gram,
                is_real,
                is_psd,
                psi_residual,
                kummer_point,
                kummer_residual,
            });
        }
    }
    Ok(out)
}

fn uni<C: Coeff>(c: &[C]) -> UniPoly<C> {
    UniPoly::new(c.to_vec())
}

/// The four representations of
/// `((t-a)^2 + b^2)((t-c)^2 + d^2)((t-e)^2 + f^2)` as a sum of two squares
/// over the reals. Each pair is verified to expand to the product.
pub fn gram_four_real_sos<C: Coeff>(
    a: &C,
    b: &C,
    c: &C,
    d: &C,
    e: &C,
    f: &C,
) -> Result<[(UniPoly<C>, UniPoly<C>); 4]> {
    if b.is_zero() || d.is_zero() || f.is_zero() {
        return Err(Error::Degenerate(
            "b, d, f must be nonzero for a positive sextic".into(),
        ));
    }
    let lin = |r: &C| uni(&[-r.clone(), C::one()]);
    let k = |v: &C| UniPoly::constant(v.clone());
    let (ta, tc, te) = (lin(a), lin(c), lin(e));
    let (kb, kd, kf) = (k(b), k(d), k(f));
    let bdf = k(&(b.clone() * d.clone() * f.clone()));
    let ace = &(&ta * &tc) * &te;
    // Terms of the first and second squares; the four sign patterns
    // follow the four real partitions of the roots.
    let adf = &(&ta * &kd) * &kf;
    let cbf = &(&tc * &kb) * &kf;
    let bde = &(&kb * &kd) * &te;
    let bce = &(&kb * &tc) * &te;
    let ade = &(&ta * &kd) * &te;
    let acf = &(&ta * &tc) * &kf;
    let signs: [[i64; 6]; 4] = [
        [-1, -1, -1, -1, -1, -1],
        [-1, 1, 1, -1, 1, 1],
        [1, -1, 1, 1, -1, 1],
        [1, 1, -1, 1, 1, -1],
    ];
    let sc = |p: &UniPoly<C>, s: i64| p.scale(&C::from_i64(s));
    let quad = |r: &UniPoly<C>, s: &UniPoly<C>| &(r * r) + &(s * s);
    let target = &(&quad(&ta, &kb) * &quad(&tc, &kd)) * &quad(&te, &kf);
    let mut out: Vec<(UniPoly<C>, UniPoly<C>)> = Vec::with_capacity(4);
    for s in signs {
        let g1 = &(&(&ace + &sc(&adf, s[0])) + &sc(&cbf, s[1])) + &sc(&bde, s[2]);
        let g2 = &(&(&bdf + &sc(&bce, s[3])) + &sc(&ade, s[4])) + &sc(&acf, s[5]);
        let back = quad(&g1, &g2);
        let r = uni_residual(&back, &target);
        if r > GRAM_TOL {
            return Err(Error::IdentityFailed {
                what: "sum of two squares expands to p".into(),
                residual: r,
            });
        }
        out.push((g1, g2));
    }
    Ok(out.try_into().expect("four pairs"))
}

fn uni_residual<C: Coeff>(a: &UniPoly<C>, b: &UniPoly<C>) -> f64 {
    if C::EXACT {
        return if a == b { 0.0 } else { f64::INFINITY };
    }
    rel_uni_distance(&a.to_c64(), &b.to_c64())
}

/// Gram matrix `v1 v1^T + v2 v2^T` of a sum of two squares of cubics.
pub fn sos_gram<C: Coeff>(g1: &UniPoly<C>, g2: &UniPoly<C>) -> Mat<C> {
    let v = |g: &UniPoly<C>| [g.coeff(3), g.coeff(2), g.coeff(1), g.coeff(0)];
    let (a, b) = (v(g1), v(g2));
    (0..4)
        .map(|i| {
            (0..4)
                .map(|j| a[i].clone() * a[j].clone() + b[i].clone() * b[j].clone())
                .collect()
        })
        .collect()
}

/// Nodes of the Kummer symmetroid against the two predictions: rank-three
/// nodes at `(u^2 : u : 1 : 0)` and rank-two nodes at the Gram matrices.
#[derive(Clone, Debug, Serialize)]
pub struct KummerCensus {
    pub nodes: Vec<Node>,
    pub rank2: usize,
    pub rank3: usize,
    pub rank3_in_plane: bool,
    pub rank3_distance: f64,
    pub rank2_distance: f64,
    pub real_nodes: usize,
    pub consistent: bool,
}

pub fn kummer_census(
    s: &SexticCoeffs,
    decompositions: &[GramDecomposition],
    seed: u64,
) -> Result<KummerCensus> {
    let p = s.to_unipoly();
    let u = simple_roots(&p)?;
    let pencil = kummer_pencil(s);
    let found = search_nodes(&pencil, &NodeOptions::with_seed(seed))?;
    let nodes = found.nodes;
    let r3: Vec<ProjPoint> = nodes
        .iter()
        .filter(|n| n.rank == 3)
        .map(|n| n.point.clone())
        .collect();
    let r2: Vec<ProjPoint> = nodes
        .iter()
        .filter(|n| n.rank == 2)
        .map(|n| n.point.clone())
        .collect();
    let predicted3: Vec<ProjPoint> = u
        .iter()
        .map(|&v| ProjPoint::new(vec![v * v, v, C64::new(1.0, 0.0), C64::new(0.0, 0.0)]))
        .collect::<Result<_>>()?;
    let predicted2: Vec<ProjPoint> = decompositions
        .iter()
        .map(|d| d.kummer_point.clone())
        .collect();
    let rank3_distance = point_set_distance(&r3, &predicted3);
    let rank2_distance = point_set_distance(&r2, &predicted2);
    let rank3_in_plane = r3.iter().all(|x| x.coords()[3].norm() < 1e-8);
    let consistent = nodes.len() == 16
        && r3.len() == 6
        && r2.len() == 10
        && rank3_in_plane
        && rank3_distance < MATCH_TOL
        && rank2_distance < MATCH_TOL;
    Ok(KummerCensus {
        rank2: r2.len(),
        rank3: r3.len(),
        real_nodes: nodes.iter().filter(|n| n.is_real).count(),
        nodes,
        rank3_in_plane,
        rank3_distance,
        rank2_distance,
        consistent,
    })
}

/// Whether `p` is nonnegative on the real line: even degree, positive
/// leading coefficient, and even multiplicity at every real root.
pub fn is_nonnegative(p: &QUni) -> Result<bool> {
    let Some(d) = p.degree() else {
        return Ok(true);
    };
    let lead = rational_to_f64(&p.coeff(d));
    if d == 0 {
        return Ok(lead >= 0.0);
    }
    if d % 2 == 1 || lead < 0.0 {
        return Ok(false);
    }
    let roots = univariate_roots(p)?;
    Ok(roots
        .iter()
        .filter(|r| r.value.im.abs() <= REAL_TOL * r.value.norm().max(1.0))
        .all(|r| r.multiplicity % 2 == 0))
}

#[derive(Clone, Debug, Serialize)]
pub struct GramReport {
    #[serde(skip)]
    pub coeffs: SexticCoeffs,
    #[serde(skip)]
    pub kernel_basis: [Mat<Rational>; 3],
    pub kernel_psi_zero: bool,
    pub psi_a3_is_p: bool,
    pub nonnegative: bool,
    pub simple_roots: bool,
    #[serde(skip)]
    pub roots: Vec<C64>,
    pub decompositions: Vec<GramDecomposition>,
    pub real_count: usize,
    pub real_sos_count: usize,
    /// Gram matrices of the four real sums of two squares of a positive
    /// sextic, and their distance to the PSD decompositions.
    #[serde(skip)]
    pub four_real_sos: Option<Vec<Mat<C64>>>,
    pub four_real_sos_distance: Option<f64>,
    pub node_census: Option<KummerCensus>,
    pub interior: InteriorSearch,
    /// Gram spectrahedron nonempty iff `p` is nonnegative; for simple roots
    /// a positive sextic has exactly four real PSD decompositions.
    pub theorem_consistent: bool,
}

fn matrix_distance(a: &[Vec<C64>], b: &[Vec<C64>]) -> f64 {
    let scale = linalg::max_abs(b).max(1e-300);
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
        / scale
}

/// Max over `a` of the distance to the nearest member of `b`, symmetrized.
fn matrix_set_distance(a: &[Mat<C64>], b: &[Mat<C64>]) -> f64 {
    let one = |a: &[Mat<C64>], b: &[Mat<C64>]| {
        a.iter()
            .map(|x| {
                b.iter()
                    .map(|y| matrix_distance(x, y))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    one(a, b).max(one(b, a))
}

/// Four real sums of squares from the roots of a positive sextic.
fn four_sos_from_roots(lead: f64, u: &[C64]) -> Result<Vec<Mat<C64>>> {
    let mut upper: Vec<C64> = u.iter().copied().filter(|z| z.im > 0.0).collect();
    if upper.len() != 3 {
        return Err(Error::Degenerate("sextic has real roots".into()));
    }
    upper.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    let re = |z: C64| C64::new(z.re, 0.0);
    let im = |z: C64| C64::new(z.im, 0.0);
    let pairs = gram_four_real_sos(
        &re(upper[0]),
        &im(upper[0]),
        &re(upper[1]),
        &im(upper[1]),
        &re(upper[2]),
        &im(upper[2]),
    )?;
    let s = C64::new(lead.sqrt(), 0.0);
    Ok(pairs
        .iter()
        .map(|(g1, g2)| sos_gram(&g1.scale(&s), &g2.scale(&s)))
        .collect())
}

pub fn gram_report(p: &QUni, seed: u64, with_nodes: bool) -> Result<GramReport> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let coeffs = SexticCoeffs::from_unipoly(p)?;
    let kernel_basis = kummer_kernel();
    let kernel_psi_zero = kernel_basis.iter().all(|m| gram_map_psi(m).is_zero());
    let psi_a3_is_p = gram_map_psi(&kummer_a3(&coeffs)) == *p;
    let nonnegative = is_nonnegative(p)?;
    let roots = simple_roots(p);
    let simple = roots.is_ok();
    let pencil = kummer_pencil(&coeffs);
    let interior = find_interior_point(&pencil, seed, 64)?;

    let (decompositions, roots) = match roots {
        Ok(u) => (gram_rank2_decompositions(&coeffs)?, u),
        Err(Error::RepeatedRoots) | Err(Error::DegreeMismatch(_)) => (Vec::new(), Vec::new()),
        Err(e) => return Err(e),
    };
    let real_count = decompositions.iter().filter(|d| d.is_real).count();
    let real_sos_count = decompositions.iter().filter(|d| d.is_psd).count();
    let (four_real_sos, four_real_sos_distance) = if simple && nonnegative {
        let lead = rational_to_f64(&p.coeff(6));
        let sos = four_sos_from_roots(lead, &roots)?;
        let psd: Vec<Mat<C64>> = decompositions
            .iter()
            .filter(|d| d.is_psd)
            .map(|d| d.gram.clone())
            .collect();
        let dist = matrix_set_distance(&sos, &psd);
        (Some(sos), Some(dist))
    } else {
        (None, None)
    };
    let node_census = if simple && with_nodes {
        Some(kummer_census(&coeffs, &decompositions, seed)?)
    } else {
        None
    };
    let theorem_consistent = if simple {
        let sos_ok = if nonnegative {
            real_sos_count == 4 && four_real_sos_distance.is_some_and(|d| d < MATCH_TOL)
        } else {
            real_sos_count == 0
        };
        sos_ok && nonnegative == !interior.is_empty()
    } else {
        // a nonnegative sextic with repeated roots may have a Gram
        // spectrahedron of lower dimension; only emptiness is decided
        nonnegative || interior.is_empty()
    };
    Ok(GramReport {
        coeffs,
        kernel_basis,
        kernel_psi_zero,
        psi_a3_is_p,
        nonnegative,
        simple_roots: simple,
        roots,
        decompositions,
        real_count,
        real_sos_count,
        four_real_sos,
        four_real_sos_distance,
        node_census,
        interior,
        theorem_consistent,
    })
}

impl GramReport {
    pub fn to_json(&self) -> Value {
        let c = |z: &C64| json!({"re": z.re, "im": z.im});
        let uni = |u: &CUni| Value::Array(u.coeffs().iter().map(c).collect());
        let mat = |m: &Mat<C64>| {
            Value::Array(
                m.iter()
                    .map(|r| Value::Array(r.iter().map(c).collect()))
                    .collect(),
            )
        };
        let qmat = |m: &Mat<Rational>| {
            Value::Array(
                m.iter()
                    .map(|r| {
                        Value::Array(
                            r.iter()
                                .map(|q| Value::String(format_rational(q)))
                                .collect(),
                        )
                    })
                    .collect(),
            )
        };
        let decs: Vec<Value> = self
            .decompositions
            .iter()
            .map(|d| {
                let mut v = serde_json::to_value(d).expect("serializable");
                v["q"] = uni(&d.q);
                v["r"] = uni(&d.r);
                v["gram"] = mat(&d.gram);
                v
            })
            .collect();
        let mut out = serde_json::to_value(self).expect("serializable");
        out["coeffs"] = self.coeffs.to_json();
        out["kernel_basis"] = Value::Array(self.kernel_basis.iter().map(qmat).collect());
        out["roots"] = Value::Array(self.roots.iter().map(c).collect());
        out["decompositions"] = Value::Array(decs);
        if let Some(sos) = &self.four_real_sos {
            out["four_real_sos"] = Value::Array(sos.iter().map(mat).collect());
        }
        out["tolerances"] = json!({
            "gram": GRAM_TOL, "real": REAL_TOL, "psd": PSD_TOL, "match": MATCH_TOL
        });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::scalar::rat;

    fn q(c: &[i64]) -> QUni {
        UniPoly::new(c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn psi_of_identity() {
        let m = linalg::rational_identity(4);
        assert_eq!(gram_map_psi(&m), q(&[1, 0, 1, 0, 1, 0, 1]));
    }

    #[test]
    fn baker_pencil_matches_sextic() {
        let p = q(&[3, -1, 4, 1, -5, 9, 2]);
        let s = SexticCoeffs::from_unipoly(&p).unwrap();
        assert_eq!(s.to_unipoly(), p);
        assert_eq!(gram_map_psi(&kummer_a3(&s)), p);
        for m in kummer_kernel() {
            assert!(gram_map_psi(&m).is_zero());
        }
    }

    #[test]
    fn repeated_roots_are_rejected() {
        let p = q(&[1, 0, 3, 0, 3, 0, 1]);
        let s = SexticCoeffs::from_unipoly(&p).unwrap();
        assert!(matches!(
            gram_rank2_decompositions(&s),
            Err(Error::RepeatedRoots)
        ));
    }

    #[test]
    fn decompositions_of_t6_minus_1() {
        let s = SexticCoeffs::from_unipoly(&default_sextic()).unwrap();
        let d = gram_rank2_decompositions(&s).unwrap();
        assert_eq!(d.len(), 10);
        for x in &d {
            assert!(x.psi_residual < 1e-12);
            assert!(x.kummer_residual < 1e-12);
            assert!(x.rank <= 2);
        }
        assert_eq!(d.iter().filter(|x| x.is_psd).count(), 0);
    }

    #[test]
    fn four_sos_of_cube_of_t2_plus_1() {
        let (z, o) = (int(0), int(1));
        let pairs = gram_four_real_sos(&z, &o, &z, &o, &z, &o).unwrap();
        assert_eq!(pairs[0], (q(&[0, -3, 0, 1]), q(&[1, 0, -3])));
        assert!(pairs
            .iter()
            .any(|(a, b)| (a, b) == (&q(&[0, 1, 0, 1]), &q(&[1, 0, 1]))));
    }

    #[test]
    fn four_sos_rational_instance() {
        let pairs = gram_four_real_sos(&rat(1, 2), &int(2), &int(-1), &rat(1, 3), &int(3), &int(1))
            .unwrap();
        for (a, b) in &pairs {
            let g = sos_gram(a, b);
            assert_eq!(&(a * a) + &(b * b), gram_map_psi(&g));
        }
    }
}
