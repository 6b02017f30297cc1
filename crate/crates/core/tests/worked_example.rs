//! The worked reconstruction example, checked stage by stage in exact arithmetic.

mod common;

use common::{ternary, worked};
use symmetroid::dixon::{
    assemble_representation, complete_cubic_matrix, cubic_space_basis, node_forms, reduce_modulo,
    z_delta_points, CubicBasis, Variant,
};
use symmetroid::linalg::{rank, signature_f64};
use symmetroid::nodes::{find_all_nodes, NodeOptions};
use symmetroid::pencil::poly_det;
use symmetroid::poly::multi::QPoly;
use symmetroid::poly::point::point_set_distance;
use symmetroid::poly::Rational;
use symmetroid::projection::ramification_data;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// `a` divided by its leading coefficient, as floats, compared with `b` likewise.
fn proportional_to_1e9(a: &QPoly, b: &QPoly) -> bool {
    let (ma, ca) = a.leading_term().unwrap();
    let (mb, cb) = b.leading_term().unwrap();
    if ma != mb {
        return false;
    }
    let an = a
        .scale(&(Rational::from_integer(1.into()) / ca.clone()))
        .to_c64();
    let bn = b
        .scale(&(Rational::from_integer(1.into()) / cb.clone()))
        .to_c64();
    an.distance(&bn) < 1e-9
}

fn printed_basis() -> CubicBasis<Rational> {
    CubicBasis {
        f11: ternary(worked::F11),
        f12: ternary(worked::G),
        f13: ternary(worked::F13),
        f14: ternary(worked::F14),
    }
}

#[test]
fn quadric_in_cubics_identity() {
    let lhs = &ternary(worked::F11) * &ternary(worked::F22);
    let g = ternary(worked::G);
    let rhs = &(&g * &g) + &(&ternary(worked::Q) * &ternary(worked::DELTA));
    assert_eq!(lhs, rhs);
}

#[test]
fn node_forms_of_the_quartic() {
    let forms = node_forms(&worked::quartic()).unwrap();
    assert_eq!(forms.q, ternary(worked::Q));
    assert_eq!(forms.g, ternary(worked::G));
    assert_eq!(forms.delta, ternary(worked::DELTA));
}

#[test]
fn printed_pencil_represents_scaled_quartic() {
    let p = worked::printed_pencil();
    let s = rat(9, 16);
    let scale = s.clone() * s.clone() * s;
    assert_eq!(p.determinant(), worked::quartic().scale(&scale));
}

#[test]
fn ramification_data_recovers_printed_forms() {
    let ram = ramification_data(&worked::printed_pencil()).unwrap();
    assert!(proportional_to_1e9(&ram.q, &ternary(worked::Q)));
    let (a, b) = (ternary(worked::F11), ternary(worked::F22));
    let direct = proportional_to_1e9(&ram.f11, &a) && proportional_to_1e9(&ram.f22, &b);
    let swapped = proportional_to_1e9(&ram.f11, &b) && proportional_to_1e9(&ram.f22, &a);
    assert!(direct || swapped);
}

#[test]
fn printed_cubics_lie_in_the_cubic_space() {
    let forms = node_forms(&worked::quartic()).unwrap();
    let f11 = ternary(worked::F11);
    let z = z_delta_points(&f11, &forms.g, &forms.q, &forms.delta).unwrap();
    assert_eq!(z.iter().map(|p| p.multiplicity).sum::<usize>(), 6);
    let basis = cubic_space_basis(&f11, &forms.g, &forms.delta, &z).unwrap();
    assert_eq!(basis.rank(), 4);
    let rows = |extra: &QPoly| -> usize {
        let mut m: Vec<Vec<Rational>> = basis.members().iter().map(|p| p.coeff_vector(3)).collect();
        m.push(extra.coeff_vector(3));
        rank(&m, 0.0)
    };
    assert_eq!(rows(&ternary(worked::F13)), 4);
    assert_eq!(rows(&ternary(worked::F14)), 4);
}

#[test]
fn product_reduces_to_printed_coefficients() {
    let (a, b) = reduce_modulo(
        &(&ternary(worked::G) * &ternary(worked::F13)),
        &ternary(worked::F11),
        &ternary(worked::DELTA),
    )
    .unwrap();
    assert_eq!(a, ternary(worked::F23));
    assert_eq!(b, ternary(worked::Q23));
}

#[test]
fn cubic_matrix_determinant_is_nine_sixteenths_delta_cubed() {
    let delta = ternary(worked::DELTA);
    let (f, _) = complete_cubic_matrix(&printed_basis(), &delta).unwrap();
    assert_eq!(poly_det(&f), delta.pow(3).scale(&rat(9, 16)));
}

#[test]
fn assembled_pencil_matches_printed_one() {
    let forms = node_forms(&worked::quartic()).unwrap();
    let (f, _) = complete_cubic_matrix(&printed_basis(), &forms.delta).unwrap();
    let r = assemble_representation(&f, &forms, Variant::Real11).unwrap();
    assert_eq!(r.c, rat(9, 16));
    let s = rat(9, 16);
    let cube = s.clone() * s.clone() * s;
    assert_eq!(r.det_scale, cube);
    assert_eq!(r.pencil.determinant(), worked::quartic().scale(&cube));

    // congruent pencils share node positions and node signatures
    let opts = NodeOptions::default();
    let ours = find_all_nodes(&r.pencil, &opts).unwrap();
    let printed_pencil = worked::printed_pencil();
    let theirs = find_all_nodes(&printed_pencil, &opts).unwrap();
    assert_eq!(ours.len(), theirs.len());
    let pts = |v: &[symmetroid::nodes::Node]| v.iter().map(|n| n.point.clone()).collect::<Vec<_>>();
    assert!(point_set_distance(&pts(&ours), &pts(&theirs)) < 1e-6);
    for n in ours.iter().filter(|n| n.is_real) {
        let m = theirs
            .iter()
            .min_by(|a, b| {
                a.point
                    .distance(&n.point)
                    .total_cmp(&b.point.distance(&n.point))
            })
            .unwrap();
        assert_eq!(n.signature, m.signature);
    }
    // the node (1:0:0:0) itself is a (1,1) node of both pencils
    let e0 = [1.0, 0.0, 0.0, 0.0];
    let sig = |m: Vec<Vec<f64>>| signature_f64(&m, 1e-9);
    assert_eq!(sig(r.pencil.at_f64(&e0)), sig(printed_pencil.at_f64(&e0)));
}
