//! Property suites: congruence invariance of nodes, conjugation closure,
//! exact polynomial identities and Bezout sums.

use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::test_runner::{Config, FileFailurePersistence, RngSeed};
use symmetroid::census;
use symmetroid::error::Error;
use symmetroid::linalg::{det, inverse, transpose, Mat};
use symmetroid::nodes::{find_all_nodes, Node, NodeOptions};
use symmetroid::pencil::{poly_adjugate, poly_det, QPencil};
use symmetroid::poly::intersect::plane_curve_intersections;
use symmetroid::poly::multi::QPoly;
use symmetroid::poly::point::point_set_distance;
use symmetroid::poly::{MultiPoly, Rational};

const ENTRIES: [(usize, usize); 3] = [(10, 10), (6, 2), (4, 0)];

fn config(cases: u32) -> Config {
    Config {
        cases,
        failure_persistence: Some(Box::new(FileFailurePersistence::Off)),
        rng_seed: RngSeed::Fixed(0x5eed),
        ..Config::default()
    }
}

fn q(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

fn int_matrix(v: &[i64]) -> Mat<Rational> {
    v.chunks(4)
        .map(|r| r.iter().map(|&x| q(x)).collect())
        .collect()
}

fn reference_nodes() -> &'static Vec<Vec<Node>> {
    static NODES: OnceLock<Vec<Vec<Node>>> = OnceLock::new();
    NODES.get_or_init(|| {
        ENTRIES
            .iter()
            .map(|&(r, s)| {
                let p = census::entry(r, s).unwrap().pencil().unwrap();
                find_all_nodes(&p, &NodeOptions::default()).unwrap()
            })
            .collect()
    })
}

fn points(nodes: &[Node]) -> Vec<symmetroid::poly::point::ProjPoint> {
    nodes.iter().map(|n| n.point.clone()).collect()
}

fn conjugation_closed(nodes: &[Node]) -> bool {
    nodes.iter().filter(|n| !n.is_real).all(|n| {
        let c = n.point.conj();
        nodes.iter().any(|m| m.point.distance(&c) < 1e-6)
    })
}

fn symmetric_pencil(v: &[i64]) -> Option<QPencil> {
    let mats: [Mat<Rational>; 4] = std::array::from_fn(|k| {
        let mut m = vec![vec![q(0); 4]; 4];
        let mut it = v[10 * k..10 * (k + 1)].iter();
        for i in 0..4 {
            for j in i..4 {
                let x = q(*it.next().unwrap());
                m[i][j] = x.clone();
                m[j][i] = x;
            }
        }
        m
    });
    QPencil::new(mats).ok()
}

fn scale_poly_matrix(m: &Mat<QPoly>, c: &Rational) -> Mat<QPoly> {
    m.iter()
        .map(|r| r.iter().map(|p| p.scale(c)).collect())
        .collect()
}

fn poly_mat_mul(a: &Mat<QPoly>, b: &Mat<QPoly>) -> Mat<QPoly> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(MultiPoly::zero(4), |acc, k| &acc + &(&a[i][k] * &b[k][j])))
                .collect()
        })
        .collect()
}

fn constant_matrix(m: &Mat<Rational>) -> Mat<QPoly> {
    m.iter()
        .map(|r| {
            r.iter()
                .map(|c| MultiPoly::constant(4, c.clone()))
                .collect()
        })
        .collect()
}

fn ternary_form(d: u32, coeffs: &[i64]) -> QPoly {
    let c: Vec<Rational> = coeffs.iter().map(|&x| q(x)).collect();
    MultiPoly::from_coeff_vector(3, d, &c)
}

/// Random pairs may share a factor; that is the only permitted failure.
fn shares_component<T>(r: &Result<T, Error>) -> bool {
    matches!(r, Err(e) if matches!(e.root(), Error::CommonComponent))
}

fn form_size(d: u32) -> usize {
    ((d + 1) * (d + 2) / 2) as usize
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn nodes_are_congruence_invariant(
        idx in 0usize..3,
        t in proptest::collection::vec(-3i64..=3, 16),
    ) {
        let t = int_matrix(&t);
        prop_assume!(det(&t) != q(0));
        let (r, s) = ENTRIES[idx];
        let p = census::entry(r, s).unwrap().pencil().unwrap();
        let moved = p.congruence_apply(&t).unwrap();
        let nodes = find_all_nodes(&moved, &NodeOptions::default()).unwrap();
        let reference = &reference_nodes()[idx];
        prop_assert_eq!(nodes.len(), reference.len());
        prop_assert!(point_set_distance(&points(&nodes), &points(reference)) < 1e-6);
        for n in &nodes {
            let m = reference
                .iter()
                .min_by(|a, b| a.point.distance(&n.point).total_cmp(&b.point.distance(&n.point)))
                .unwrap();
            prop_assert_eq!(n.signature, m.signature);
            prop_assert_eq!(n.on_spectrahedron, m.on_spectrahedron);
            prop_assert_eq!(n.rank, m.rank);
        }
    }
}

proptest! {
    #![proptest_config(config(40))]

    #[test]
    fn node_lists_are_closed_under_conjugation(
        idx in 0usize..20,
        s in proptest::collection::vec(-2i64..=2, 16),
    ) {
        let s = int_matrix(&s);
        prop_assume!(det(&s) != q(0));
        let p = census::CENSUS[idx].pencil().unwrap().change_coordinates(&s);
        let nodes = find_all_nodes(&p, &NodeOptions::default()).unwrap();
        prop_assert_eq!(nodes.len(), 10);
        prop_assert!(conjugation_closed(&nodes));
    }

    #[test]
    fn random_pencils_have_conjugation_closed_nodes(
        v in proptest::collection::vec(-3i64..=3, 40),
    ) {
        let p = symmetric_pencil(&v);
        prop_assume!(p.is_some());
        let found = find_all_nodes(&p.unwrap(), &NodeOptions::default());
        prop_assume!(found.is_ok());
        prop_assert!(conjugation_closed(&found.unwrap()));
    }

    #[test]
    fn adjugate_identity_is_exact(v in proptest::collection::vec(-5i64..=5, 40)) {
        let p = symmetric_pencil(&v);
        prop_assume!(p.is_some());
        let p = p.unwrap();
        let a = p.linear_entries();
        let prod = poly_mat_mul(&a, &p.adjugate());
        let f = p.determinant();
        for (i, row) in prod.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let want = if i == j { f.clone() } else { MultiPoly::zero(4) };
                prop_assert_eq!(e, &want);
            }
        }
    }

    #[test]
    fn congruence_covariance_is_exact(
        v in proptest::collection::vec(-5i64..=5, 40),
        t in proptest::collection::vec(-3i64..=3, 16),
    ) {
        let p = symmetric_pencil(&v);
        let t = int_matrix(&t);
        let dt = det(&t);
        prop_assume!(p.is_some() && dt != q(0));
        let p = p.unwrap();
        let moved = p.congruence_apply(&t).unwrap();
        prop_assert_eq!(moved.determinant(), p.determinant().scale(&(dt.clone() * dt.clone())));
        // adj(T^t A T) = adj(T) adj(A) adj(T)^t
        let adj_t = constant_matrix(&inverse(&t, 0.0).unwrap().iter()
            .map(|r| r.iter().map(|x| x.clone() * dt.clone()).collect())
            .collect());
        let want = poly_mat_mul(&poly_mat_mul(&adj_t, &p.adjugate()), &transpose(&adj_t));
        prop_assert_eq!(moved.adjugate(), want);
        let scaled = scale_poly_matrix(&moved.linear_entries(), &q(2));
        prop_assert_eq!(poly_det(&scaled), moved.determinant().scale(&q(16)));
        prop_assert_eq!(poly_adjugate(&scaled), scale_poly_matrix(&moved.adjugate(), &q(8)));
    }
}

proptest! {
    #![proptest_config(config(25))]

    #[test]
    fn generic_pairs_meet_in_product_of_degrees(
        d1 in 1u32..=3,
        d2 in 1u32..=3,
        a in proptest::collection::vec(-4i64..=4, 10),
        b in proptest::collection::vec(-4i64..=4, 10),
    ) {
        let f = ternary_form(d1, &a[..form_size(d1)]);
        let g = ternary_form(d2, &b[..form_size(d2)]);
        prop_assume!(f.degree() == Some(d1) && g.degree() == Some(d2));
        let pts = plane_curve_intersections(&f, &g);
        prop_assume!(!shares_component(&pts));
        let total: usize = pts.unwrap().iter().map(|p| p.multiplicity).sum();
        prop_assert_eq!(total, (d1 * d2) as usize);
    }

    #[test]
    fn line_meets_curve_with_forced_contact(
        d in 2u32..=3,
        l in proptest::collection::vec(-4i64..=4, 3),
        n in proptest::collection::vec(-4i64..=4, 3),
        m in proptest::collection::vec(-4i64..=4, 6),
    ) {
        // on the line L the curve L M + N^d restricts to N^d: one point of contact d
        let line = ternary_form(1, &l);
        let nn = ternary_form(1, &n);
        let mm = ternary_form(d - 1, &m[..form_size(d - 1)]);
        let curve = &(&line * &mm) + &nn.pow(d);
        prop_assume!(line.degree() == Some(1) && nn.degree() == Some(1));
        let pts = plane_curve_intersections(&line, &curve);
        prop_assume!(!shares_component(&pts));
        let pts = pts.unwrap();
        prop_assert_eq!(pts.iter().map(|p| p.multiplicity).sum::<usize>(), d as usize);
        prop_assert_eq!(pts.len(), 1);
    }
}
