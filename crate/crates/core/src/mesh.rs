//! Scalar-field export of a symmetroid for external plotting.
//!
//! The quartic `det A(x)` is sampled on a regular grid in an affine chart
//! `x_chart = 1` and written as little-endian float32 behind a JSON header.
//! An optional triangle mesh of the zero level set is written as Wavefront OBJ.

use std::io::Write;

use lin_alg::f32::Vec3;
use mcubes::{MarchingCubes, MeshSide};
use nalgebra::Matrix4;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::Signature;
use crate::nodes::Node;
use crate::pencil::QPencil;
use crate::poly::scalar::rational_to_f64;

pub const DEFAULT_GRID: usize = 96;
pub const MAX_GRID: usize = 256;
pub const DEFAULT_BOX: (f64, f64) = (-3.0, 3.0);
/// Below this `|x_chart|` (relative to the largest coordinate) a node lies at infinity of the chart.
const CHART_TOL: f64 = 1e-9;
const MAGIC: &[u8; 8] = b"SYMGRID1";

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GridSpec {
    /// Homogeneous coordinate fixed to one.
    pub chart: usize,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            chart: 0,
            lo: DEFAULT_BOX.0,
            hi: DEFAULT_BOX.1,
            n: DEFAULT_GRID,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.chart > 3 {
            return Err(Error::Parse(format!(
                "chart must be 0..=3, got {}",
                self.chart
            )));
        }
        if !(2..=MAX_GRID).contains(&self.n) {
            return Err(Error::Parse(format!(
                "grid must be between 2 and {MAX_GRID}, got {}",
                self.n
            )));
        }
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(Error::Parse(format!("bad box [{}, {}]", self.lo, self.hi)));
        }
        Ok(())
    }

    /// Homogeneous coordinates that vary along the grid axes, in axis order.
    pub fn axes(&self) -> [usize; 3] {
        let mut out = [0; 3];
        let mut k = 0;
        for v in 0..4 {
            if v != self.chart {
                out[k] = v;
                k += 1;
            }
        }
        out
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.n - 1) as f64
    }

    fn homogeneous(&self, i: usize, j: usize, k: usize) -> [f64; 4] {
        let mut x = [0.0; 4];
        x[self.chart] = 1.0;
        let h = self.step();
        for (axis, idx) in self.axes().into_iter().zip([i, j, k]) {
            x[axis] = self.lo + h * idx as f64;
        }
        x
    }
}

/// Samples of the quartic, first axis fastest.
#[derive(Clone, Debug)]
pub struct ScalarGrid {
    pub spec: GridSpec,
    pub values: Vec<f32>,
}

/// Evaluate `det A(x)` at every grid point of the chart.
pub fn sample_grid(p: &QPencil, spec: &GridSpec) -> Result<ScalarGrid> {
    spec.validate()?;
    let mats: Vec<Matrix4<f64>> = p
        .matrices()
        .iter()
        .map(|m| Matrix4::from_fn(|i, j| rational_to_f64(&m[i][j])))
        .collect();
    let n = spec.n;
    let mut values = Vec::with_capacity(n * n * n);
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                let x = spec.homogeneous(i, j, k);
                let a = mats
                    .iter()
                    .zip(x)
                    .fold(Matrix4::zeros(), |acc, (m, t)| acc + m * t);
                values.push(a.determinant() as f32);
            }
        }
    }
    Ok(ScalarGrid {
        spec: *spec,
        values,
    })
}

fn signature_label(s: &Signature) -> String {
    format!("({},{})", s.pos, s.neg)
}

/// Node annotation for the header: affine position in the chart when real and finite.
pub fn annotate_nodes(nodes: &[Node], spec: &GridSpec) -> Vec<Value> {
    nodes
        .iter()
        .map(|n| {
            let c = n.point.coords();
            let scale = c.iter().fold(0.0f64, |a, z| a.max(z.norm()));
            let pivot = c[spec.chart];
            let affine = (n.is_real && pivot.norm() > CHART_TOL * scale).then(|| {
                spec.axes()
                    .iter()
                    .map(|&a| (c[a] / pivot).re)
                    .collect::<Vec<f64>>()
            });
            let inside = affine
                .as_ref()
                .is_some_and(|a| a.iter().all(|v| (spec.lo..=spec.hi).contains(v)));
            json!({
                "homogeneous": n.point,
                "affine": affine,
                "in_box": inside,
                "rank": n.rank,
                "is_real": n.is_real,
                "signature": n.signature.as_ref().map(signature_label),
                "semidefinite": n.on_spectrahedron,
            })
        })
        .collect()
}

pub fn grid_header(grid: &ScalarGrid, nodes: &[Node], seed: u64) -> Value {
    let (min, max) = grid
        .values
        .iter()
        .fold((f32::INFINITY, f32::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    let n = grid.spec.n;
    json!({
        "format": "float32-le",
        "order": "first axis fastest",
        "dims": [n, n, n],
        "chart": grid.spec.chart,
        "axes": grid.spec.axes(),
        "box": [grid.spec.lo, grid.spec.hi],
        "step": grid.spec.step(),
        "value_range": [min, max],
        "seed": seed,
        "nodes": annotate_nodes(nodes, &grid.spec),
    })
}

/// Write `MAGIC`, the header length as u64 LE, the JSON header, then the samples.
pub fn write_grid<W: Write>(out: &mut W, grid: &ScalarGrid, header: &Value) -> Result<()> {
    let text = serde_json::to_vec(header)?;
    out.write_all(MAGIC)?;
    out.write_all(&(text.len() as u64).to_le_bytes())?;
    out.write_all(&text)?;
    for v in &grid.values {
        out.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

/// Inverse of `write_grid`: header and samples.
pub fn read_grid(bytes: &[u8]) -> Result<(Value, Vec<f32>)> {
    let bad = |m: &str| Error::Parse(format!("grid file: {m}"));
    if bytes.len() < 16 || &bytes[..8] != MAGIC {
        return Err(bad("missing magic"));
    }
    let len = u64::from_le_bytes(bytes[8..16].try_into().expect("8 bytes")) as usize;
    let body = bytes
        .get(16..16 + len)
        .ok_or_else(|| bad("truncated header"))?;
    let header: Value = serde_json::from_slice(body)?;
    let data = &bytes[16 + len..];
    if !data.len().is_multiple_of(4) {
        return Err(bad("sample block is not a multiple of 4 bytes"));
    }
    let values = data
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().expect("4 bytes")))
        .collect();
    Ok((header, values))
}

#[derive(Clone, Debug)]
pub struct TriangleMesh {
    pub vertices: Vec<[f32; 3]>,
    pub normals: Vec<[f32; 3]>,
    pub triangles: Vec<[usize; 3]>,
}

/// Zero level set by marching cubes. The field is divided by its largest
/// magnitude first so the level is well scaled.
pub fn zero_level_mesh(grid: &ScalarGrid) -> Result<TriangleMesh> {
    let n = grid.spec.n;
    let peak = grid.values.iter().fold(0.0f32, |a, v| a.max(v.abs()));
    let values: Vec<f32> = if peak > 0.0 {
        grid.values.iter().map(|v| v / peak).collect()
    } else {
        grid.values.clone()
    };
    let h = grid.spec.step() as f32;
    let lo = grid.spec.lo as f32;
    let mc = MarchingCubes::new(
        (n, n, n),
        (h, h, h),
        (1.0, 1.0, 1.0),
        Vec3::new(lo, lo, lo),
        values,
        0.0,
    )?;
    let mesh = mc.generate(MeshSide::OutsideOnly);
    let vertices = mesh
        .vertices
        .iter()
        .map(|v| [v.posit.x, v.posit.y, v.posit.z])
        .collect();
    let normals = mesh
        .vertices
        .iter()
        .map(|v| [v.normal.x, v.normal.y, v.normal.z])
        .collect();
    let triangles = mesh
        .indices
        .chunks_exact(3)
        .map(|t| [t[0], t[1], t[2]])
        .collect();
    Ok(TriangleMesh {
        vertices,
        normals,
        triangles,
    })
}

/// Wavefront OBJ with per-vertex normals.
pub fn write_obj<W: Write>(out: &mut W, mesh: &TriangleMesh, comment: &str) -> Result<()> {
    for line in comment.lines() {
        writeln!(out, "# {line}")?;
    }
    for v in &mesh.vertices {
        writeln!(out, "v {} {} {}", v[0], v[1], v[2])?;
    }
    for v in &mesh.normals {
        writeln!(out, "vn {} {} {}", v[0], v[1], v[2])?;
    }
    for t in &mesh.triangles {
        let [a, b, c] = t.map(|i| i + 1);
        writeln!(out, "f {a}//{a} {b}//{b} {c}//{c}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane_product_pencil() -> QPencil {
        // diag(x0 - x1, x0 + x1, x0 - x2, x0 + x3): four planes
        let mut m = [[[0i64; 4]; 4]; 4];
        m[0] = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];
        m[1][0][0] = -1;
        m[1][1][1] = 1;
        m[2][2][2] = -1;
        m[3][3][3] = 1;
        QPencil::from_ints(m).unwrap()
    }

    #[test]
    fn grid_values_match_determinant() {
        let p = plane_product_pencil();
        let spec = GridSpec {
            n: 5,
            ..Default::default()
        };
        let g = sample_grid(&p, &spec).unwrap();
        assert_eq!(g.values.len(), 125);
        let f = p.determinant().to_c64();
        for (idx, v) in g.values.iter().enumerate() {
            let (i, j, k) = (idx % 5, (idx / 5) % 5, idx / 25);
            let x = spec.homogeneous(i, j, k);
            let want = f.eval_c64(&x.map(|t| crate::poly::C64::new(t, 0.0))).re;
            assert!((*v as f64 - want).abs() <= 1e-5 * want.abs().max(1.0));
        }
    }

    #[test]
    fn grid_round_trip() {
        let p = plane_product_pencil();
        let spec = GridSpec {
            n: 4,
            chart: 2,
            ..Default::default()
        };
        let g = sample_grid(&p, &spec).unwrap();
        let header = grid_header(&g, &[], 7);
        let mut buf = Vec::new();
        write_grid(&mut buf, &g, &header).unwrap();
        let (h, v) = read_grid(&buf).unwrap();
        assert_eq!(h, header);
        assert_eq!(v, g.values);
        assert_eq!(h["axes"], json!([0, 1, 3]));
    }

    #[test]
    fn rejects_oversized_grid() {
        let spec = GridSpec {
            n: MAX_GRID + 1,
            ..Default::default()
        };
        assert!(spec.validate().is_err());
    }

    #[test]
    fn mesh_vertices_lie_near_surface() {
        let p = plane_product_pencil();
        let spec = GridSpec {
            n: 24,
            ..Default::default()
        };
        let g = sample_grid(&p, &spec).unwrap();
        let m = zero_level_mesh(&g).unwrap();
        assert!(!m.triangles.is_empty());
        // the surface is a union of planes x1 = 1, x1 = -1, x2 = 1, x3 = -1
        let h = spec.step() as f32;
        for v in &m.vertices {
            let d = [
                (v[0] - 1.0).abs(),
                (v[0] + 1.0).abs(),
                (v[1] - 1.0).abs(),
                (v[2] + 1.0).abs(),
            ]
            .into_iter()
            .fold(f32::INFINITY, f32::min);
            assert!(d <= h, "vertex {v:?} is {d} from the surface");
        }
    }
}
