//! Polynomial arithmetic over exact rationals and complex doubles.

pub mod intersect;
pub mod json;
pub mod multi;
pub mod point;
pub mod resultant;
pub mod roots;
pub mod scalar;
pub mod uni;

pub use intersect::{curve_singular_points, plane_curve_intersections, Intersection};
pub use multi::{monomials_of_degree, parse_poly, CPoly, Monomial, MultiPoly, QPoly};
pub use point::{point_set_distance, ProjPoint};
pub use resultant::elimination_resultant;
pub use roots::{univariate_roots, Root};
pub use scalar::{Coeff, Rational, C64};
pub use uni::{CUni, QUni, UniPoly};

use crate::error::Result;

/// Value of `f` at the normalized representative of `x`.
pub fn eval_poly<C: Coeff>(f: &MultiPoly<C>, x: &ProjPoint) -> Result<C64> {
    if x.dim() != f.nvars() {
        return Err(crate::error::Error::DimensionMismatch {
            expected: f.nvars(),
            got: x.dim(),
        });
    }
    Ok(f.eval_c64(x.coords()))
}
