use std::fmt;

use num_traits::{One, Zero};
use serde::ser::{Serialize, SerializeSeq, Serializer};

use super::scalar::C64;
use crate::error::{Error, Result};

/// Realness threshold on normalized coordinates.
pub const REAL_TOL: f64 = 1e-8;

/// Point of complex projective space, stored with its largest-modulus
/// coordinate scaled to exactly one.
#[derive(Clone, PartialEq)]
pub struct ProjPoint {
    coords: Vec<C64>,
}

impl ProjPoint {
    pub fn new(coords: Vec<C64>) -> Result<Self> {
        let (imax, vmax) =
            coords
                .iter()
                .enumerate()
                .map(|(i, c)| (i, c.norm()))
                .fold(
                    (0, 0.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        if !(vmax > 0.0) || !vmax.is_finite() {
            return Err(Error::Degenerate(
                "zero or non-finite projective point".into(),
            ));
        }
        let s = C64::one() / coords[imax];
        let mut coords: Vec<C64> = coords.iter().map(|c| c * s).collect();
        coords[imax] = C64::one();
        Ok(ProjPoint { coords })
    }

    pub fn from_real(x: &[f64]) -> Result<Self> {
        Self::new(x.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    pub fn coords(&self) -> &[C64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_real(&self) -> bool {
        self.is_real_within(REAL_TOL)
    }

    pub fn is_real_within(&self, tol: f64) -> bool {
        self.coords.iter().all(|c| c.im.abs() < tol)
    }

    /// Real parts of the normalized coordinates.
    pub fn real_coords(&self) -> Vec<f64> {
        self.coords.iter().map(|c| c.re).collect()
    }

    pub fn conj(&self) -> ProjPoint {
        ProjPoint {
            coords: self.coords.iter().map(|c| c.conj()).collect(),
        }
    }

    /// Index of the unit coordinate.
    pub fn pivot(&self) -> usize {
        self.coords
            .iter()
            .position(|c| *c == C64::one())
            .unwrap_or(0)
    }

    /// Representative with unit Euclidean norm.
    pub fn unit(&self) -> Vec<C64> {
        let n = self.coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        self.coords.iter().map(|c| c / n).collect()
    }

    /// Distance between projective points: sup-norm difference after scaling
    /// both to the same chart, symmetrized. Equals zero iff the points agree.
    pub fn distance(&self, other: &ProjPoint) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        chart_distance(self, other).max(chart_distance(other, self))
    }
}

fn chart_distance(a: &ProjPoint, b: &ProjPoint) -> f64 {
    let i = a.pivot();
    let bi = b.coords[i];
    if bi.norm() < 1e-3 {
        return 1.0;
    }
    a.coords
        .iter()
        .zip(&b.coords)
        .map(|(x, y)| (x - y / bi).norm())
        .fold(0.0, f64::max)
}

/// Hausdorff distance between two point sets (infinite if sizes differ).
pub fn point_set_distance(a: &[ProjPoint], b: &[ProjPoint]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let one_sided = |x: &[ProjPoint], y: &[ProjPoint]| {
        x.iter()
            .map(|p| {
                y.iter()
                    .map(|q| p.distance(q))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    one_sided(a, b).max(one_sided(b, a))
}

/// Merge points closer than `radius`; returns representatives with counts.
pub fn dedup_points(points: Vec<ProjPoint>, radius: f64) -> Vec<(ProjPoint, usize)> {
    let mut out: Vec<(ProjPoint, usize)> = Vec::new();
    for p in points {
        match out.iter_mut().find(|(q, _)| q.distance(&p) < radius) {
            Some(slot) => slot.1 += 1,
            None => out.push((p, 1)),
        }
    }
    out
}

/// Serialized as a list of `[re, im]` pairs of the normalized coordinates.
impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coords.len()))?;
        for c in &self.coords {
            seq.serialize_element(&[clean(c.re), clean(c.im)])?;
        }
        seq.end()
    }
}

/// Drops signed zeros and sub-rounding noise so output is stable.
fn clean(v: f64) -> f64 {
    if v.abs() < 1e-15 {
        0.0
    } else {
        v
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|c| {
                if c.im.is_zero() {
                    format!("{:.6}", c.re)
                } else {
                    format!("{:.6}{:+.6}i", c.re, c.im)
                }
            })
            .collect();
        write!(f, "({})", parts.join(" : "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        let p = ProjPoint::from_real(&[2.0, -4.0, 1.0]).unwrap();
        assert_eq!(p.real_coords(), vec![-0.5, 1.0, -0.25]);
        assert!(p.is_real());
        assert!(ProjPoint::from_real(&[0.0, 0.0]).is_err());
        let q = ProjPoint::new(vec![C64::new(0.0, 1.0), C64::new(1.0, 0.0)]).unwrap();
        assert!(!q.is_real());
        assert!(q.distance(&q.conj()) > 1.0);
    }

    #[test]
    fn distance_is_projective() {
        let p = ProjPoint::from_real(&[1.0, 2.0, 3.0]).unwrap();
        let scaled = ProjPoint::new(vec![
            C64::new(0.0, 5.0),
            C64::new(0.0, 10.0),
            C64::new(0.0, 15.0),
        ])
        .unwrap();
        assert!(p.distance(&scaled) < 1e-15);
        let r = ProjPoint::from_real(&[1.0, 2.0, 3.0 + 1e-5]).unwrap();
        assert!(p.distance(&r) > 1e-7 && p.distance(&r) < 1e-5);
        let d = dedup_points(vec![p.clone(), scaled, r], 1e-6);
        assert_eq!(d.len(), 2);
        assert_eq!(d[0].1, 2);
    }
}
