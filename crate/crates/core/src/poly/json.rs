//! JSON form of polynomials: `{"nvars": n, "terms": [{"exp": [...], "re": "p/q", "im": "r/s"}]}`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::multi::{CPoly, Monomial, MultiPoly, QPoly};
use super::scalar::{format_rational, parse_rational, rational_to_f64, Rational, C64};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub re: String,
    #[serde(default = "zero_string")]
    pub im: String,
}

fn zero_string() -> String {
    "0".into()
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PolyJson {
    pub nvars: usize,
    pub terms: Vec<TermJson>,
}

/// Shortest round-trip decimal; `parse_rational` reads it back exactly.
pub fn format_f64(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x}")
    }
}

impl From<&QPoly> for PolyJson {
    fn from(p: &QPoly) -> Self {
        PolyJson {
            nvars: p.nvars(),
            terms: p
                .terms()
                .map(|(m, c)| TermJson {
                    exp: m.exps(p.nvars()),
                    re: format_rational(c),
                    im: "0".into(),
                })
                .collect(),
        }
    }
}

impl From<&CPoly> for PolyJson {
    fn from(p: &CPoly) -> Self {
        PolyJson {
            nvars: p.nvars(),
            terms: p
                .terms()
                .map(|(m, c)| TermJson {
                    exp: m.exps(p.nvars()),
                    re: format_f64(c.re),
                    im: format_f64(c.im),
                })
                .collect(),
        }
    }
}

impl PolyJson {
    fn check(&self) -> Result<()> {
        if !(1..=4).contains(&self.nvars) {
            return Err(Error::Parse(format!(
                "nvars must be 1..=4, got {}",
                self.nvars
            )));
        }
        for t in &self.terms {
            if t.exp.len() != self.nvars {
                return Err(Error::Parse(format!(
                    "exponent {:?} has wrong length",
                    t.exp
                )));
            }
            if t.exp.iter().sum::<u32>() > super::multi::MAX_DEGREE {
                return Err(Error::Parse("total degree above 12".into()));
            }
        }
        Ok(())
    }

    /// Exact polynomial; fails if any imaginary part is nonzero.
    pub fn to_rational(&self) -> Result<QPoly> {
        self.check()?;
        let mut p = MultiPoly::zero(self.nvars);
        for t in &self.terms {
            if !parse_rational(&t.im)?.is_zero() {
                return Err(Error::Parse(
                    "complex coefficient in a rational polynomial".into(),
                ));
            }
            p.add_term(Monomial::new(&t.exp), parse_rational(&t.re)?);
        }
        Ok(p)
    }

    pub fn to_complex(&self) -> Result<CPoly> {
        self.check()?;
        let mut p = MultiPoly::zero(self.nvars);
        for t in &self.terms {
            let re: Rational = parse_rational(&t.re)?;
            let im: Rational = parse_rational(&t.im)?;
            p.add_term(
                Monomial::new(&t.exp),
                C64::new(rational_to_f64(&re), rational_to_f64(&im)),
            );
        }
        Ok(p)
    }

    pub fn is_real(&self) -> bool {
        self.terms
            .iter()
            .all(|t| parse_rational(&t.im).map(|v| v.is_zero()).unwrap_or(false))
    }
}

pub fn poly_to_json(p: &QPoly) -> serde_json::Value {
    serde_json::to_value(PolyJson::from(p)).expect("serializable")
}

pub fn cpoly_to_json(p: &CPoly) -> serde_json::Value {
    serde_json::to_value(PolyJson::from(p)).expect("serializable")
}

pub fn poly_from_json(v: &serde_json::Value) -> Result<QPoly> {
    let pj: PolyJson = serde_json::from_value(v.clone())?;
    pj.to_rational()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::multi::parse_poly;

    #[test]
    fn round_trip_rational() {
        let p = parse_poly(4, "x0^4 - 41/3*x1^2*x2^2 + 7*x3").unwrap();
        let v = poly_to_json(&p);
        assert_eq!(v["nvars"], 4);
        assert_eq!(poly_from_json(&v).unwrap(), p);
        let text = serde_json::to_string(&v).unwrap();
        assert!(text.contains("\"-41/3\""));
    }

    #[test]
    fn round_trip_complex() {
        let mut p = CPoly::zero(3);
        p.add_term(Monomial::new(&[1, 2, 0]), C64::new(0.1, -1.0 / 3.0));
        p.add_term(Monomial::new(&[0, 0, 3]), C64::new(-2.5e-17, 0.0));
        let pj = PolyJson::from(&p);
        assert!(!pj.is_real());
        assert_eq!(pj.to_complex().unwrap(), p);
        assert!(pj.to_rational().is_err());
    }

    #[test]
    fn malformed_input() {
        let bad = serde_json::json!({"nvars": 2, "terms": [{"exp": [1, 2, 3], "re": "1"}]});
        assert!(poly_from_json(&bad).is_err());
        let bad = serde_json::json!({"nvars": 2, "terms": [{"exp": [1, 1], "re": "x"}]});
        assert!(poly_from_json(&bad).is_err());
    }
}
