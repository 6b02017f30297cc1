//! Shared fixtures for the integration tests.
#![allow(dead_code)]

use symmetroid::pencil::QPencil;
use symmetroid::poly::multi::{parse_poly, QPoly};
use symmetroid::poly::Rational;

/// A form in `(x1, x2, x3)`, written with those names.
pub fn ternary(s: &str) -> QPoly {
    parse_poly(4, s).unwrap().drop_var(0).unwrap()
}

pub fn quaternary(s: &str) -> QPoly {
    parse_poly(4, s).unwrap()
}

/// Worked example: a quartic with a node at `(1:0:0:0)`.
pub mod worked {
    use super::*;

    pub const Q: &str = "x1^2 - x2^2 - x3^2";
    pub const G: &str = "8*x3^3 - 6*x1^2*x3";
    pub const DELTA: &str = "x1^4 - 41*x1^2*x2^2 + 16*x2^4 + 12*x1^3*x3 - 36*x1*x2^2*x3 \
        - 5*x1^2*x3^2 + 44*x2^2*x3^2 - 36*x1*x3^3 + 28*x3^4";
    pub const F11: &str = "x1^3 + 6*x1^2*x2 - 3*x1*x2^2 - 4*x2^3 + 6*x1^2*x3 - 6*x2^2*x3 \
        - 3*x1*x3^2 - 12*x2*x3^2 - 6*x3^3";
    pub const F22: &str = "x1^3 - 6*x1^2*x2 - 3*x1*x2^2 + 4*x2^3 + 6*x1^2*x3 - 6*x2^2*x3 \
        - 3*x1*x3^2 + 12*x2*x3^2 - 6*x3^3";
    pub const F13: &str = "3*x1*x2*x3 + 12*x2^2*x3 - 9*x1*x3^2 + 18*x2*x3^2 + 10*x3^3";
    pub const F14: &str = "x1^2*x2 + 7*x1*x2^2 + 4*x2^3 - 18*x2^2*x3 + 23*x1*x3^2 \
        - 32*x2*x3^2 - 26*x3^3";
    /// Coefficient of `F11` in `g F13 = a F11 + b Delta`.
    pub const F23: &str = "1/4*(-x1^3 + 45*x1*x2^2 - 28*x2^3 - 6*x1^2*x3 - 36*x1*x2*x3 \
        + 42*x2^2*x3 + 33*x1*x3^2 - 36*x2*x3^2 - 30*x3^3)";
    pub const Q23: &str = "1/4*(x1^2 + 6*x1*x2 - 7*x2^2 + 5*x3^2)";

    /// `f = -q x0^2 + 2 g x0 + Delta`.
    pub fn quartic() -> QPoly {
        let x0 = quaternary("x0");
        let q = quaternary(Q);
        let g = quaternary(G);
        let d = quaternary(DELTA);
        &(&(&(-&q) * &(&x0 * &x0)) + &(&(&g * &x0) * &quaternary("2"))) + &d
    }

    /// The displayed representation of `(9/16)^3 f`, entries over 32.
    pub fn printed_pencil() -> QPencil {
        // entry (i, j) as its (x0, x1, x2, x3) coefficients
        let e: [[[i64; 4]; 4]; 4] = [
            [
                [0, 18, -108, 108],
                [18, 0, 0, 114],
                [0, 0, -72, 24],
                [0, 0, -36, 0],
            ],
            [
                [18, 0, 0, 114],
                [0, 19, 121, 108],
                [0, 4, 28, 60],
                [0, 0, 0, 30],
            ],
            [
                [0, 0, -72, 24],
                [0, 4, 28, 60],
                [0, 160, -128, -96],
                [0, 72, -72, -24],
            ],
            [
                [0, 0, -36, 0],
                [0, 0, 0, 30],
                [0, 72, -72, -24],
                [0, 36, -36, 0],
            ],
        ];
        let mats: [Vec<Vec<Rational>>; 4] = std::array::from_fn(|k| {
            (0..4)
                .map(|i| {
                    (0..4)
                        .map(|j| Rational::new(e[i][j][k].into(), 32.into()))
                        .collect()
                })
                .collect()
        });
        QPencil::new(mats).unwrap()
    }
}
