//! Flat sheet → cylinder → ring torus, with closed-form and quadrature
//! surface measures, and worldsheet antipodality.

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{antipodal_disjoint, Point, StringPath, Worldsheet, DEFAULT_RESOLUTION};

const TAU: f64 = 2.0 * PI;

/// A `width × height` rectangle rastered by `strings` horizontal strings.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatSheet {
    width: f64,
    height: f64,
    strings: usize,
    samples_per_string: usize,
}

impl FlatSheet {
    pub fn new(width: f64, height: f64, strings: usize) -> Result<Self> {
        for (name, v) in [("width", width), ("height", height)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!("sheet {name} must be positive")));
            }
        }
        if strings < 2 {
            return Err(Error::InvalidArgument("a sheet needs at least 2 strings".into()));
        }
        Ok(Self {
            width,
            height,
            strings,
            samples_per_string: 64,
        })
    }

    pub fn with_samples(mut self, samples_per_string: usize) -> Result<Self> {
        if samples_per_string < 2 {
            return Err(Error::InvalidArgument("need at least 2 samples per string".into()));
        }
        self.samples_per_string = samples_per_string;
        Ok(self)
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    /// Raster coordinates `(s, t)`: string `j` at height `t_j`, sample `i`
    /// at `s_i`, both evenly spaced including the sheet edges.
    pub fn raster(&self) -> Vec<Vec<(f64, f64)>> {
        let n = self.samples_per_string;
        (0..self.strings)
            .map(|j| {
                let t = self.height * j as f64 / (self.strings - 1) as f64;
                (0..n)
                    .map(|i| (self.width * i as f64 / (n - 1) as f64, t))
                    .collect()
            })
            .collect()
    }

    /// The raster as a planar worldsheet.
    pub fn worldsheet(&self) -> Result<Worldsheet> {
        let strings = self
            .raster()
            .into_iter()
            .map(|row| {
                let params = row.iter().map(|&(s, _)| s).collect();
                let vertices = row
                    .into_iter()
                    .map(|(s, t)| Point::new(vec![s, t]))
                    .collect::<Result<Vec<_>>>()?;
                StringPath::new(vertices, params)
            })
            .collect::<Result<Vec<_>>>()?;
        Worldsheet::from_strings(strings, DEFAULT_RESOLUTION)
    }
}

/// A sheet rolled so its left and right edges meet.
#[derive(Clone, Debug)]
pub struct Cylinder {
    radius: f64,
    height: f64,
    points: Vec<Point>,
}

impl Cylinder {
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    /// Images of the sheet raster, string by string.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// `2πrh`.
    pub fn lateral_area(&self) -> f64 {
        TAU * self.radius * self.height
    }

    /// `(s, t) ↦ (r cos(s/r), r sin(s/r), t)`.
    pub fn map(&self, s: f64, t: f64) -> Point {
        let a = s / self.radius;
        Point::new(vec![self.radius * a.cos(), self.radius * a.sin(), t])
            .expect("finite inputs give finite coordinates")
    }

    /// Surface distance between two points on the same horizontal string,
    /// measured along the circle.
    pub fn arc_distance(&self, s1: f64, s2: f64) -> f64 {
        self.radius * ((s2 - s1) / self.radius).abs()
    }
}

/// Rolls a sheet into a cylinder of radius `w / 2π` and height `h`.
pub fn roll_to_cylinder(sheet: &FlatSheet) -> Cylinder {
    let mut cyl = Cylinder {
        radius: sheet.width / TAU,
        height: sheet.height,
        points: Vec::new(),
    };
    cyl.points = sheet
        .raster()
        .into_iter()
        .flatten()
        .map(|(s, t)| cyl.map(s, t))
        .collect();
    cyl
}

/// Ring torus with centre-to-tube distance `c` and tube radius `r`, `c > r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RingTorus {
    c: f64,
    r: f64,
}

impl RingTorus {
    pub fn new(c: f64, r: f64) -> Result<Self> {
        if !(c.is_finite() && r.is_finite() && r > 0.0 && c > r) {
            return Err(Error::NotRingTorus { c, r });
        }
        Ok(Self { c, r })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// `(√(x² + y²) − c)² + z² − r²`; zero on the surface.
    pub fn implicit_residual(&self, p: &Point) -> f64 {
        let q = p.coords();
        let rho = (q[0] * q[0] + q[1] * q[1]).sqrt();
        (rho - self.c).powi(2) + q[2] * q[2] - self.r * self.r
    }
}

/// Bends a cylinder of radius `r` and height `h` until its ends meet,
/// giving a ring torus with `c = h / 2π`. Requires `h > 2πr`.
pub fn bend_to_torus(radius: f64, height: f64) -> Result<RingTorus> {
    let c = height / TAU;
    if height <= TAU * radius || height.is_nan() {
        return Err(Error::NotRingTorus { c, r: radius });
    }
    RingTorus::new(c, radius)
}

/// `((c + r cos v) cos u, (c + r cos v) sin u, r sin v)`. The third
/// coordinate is sometimes written `twist(r, v) = r sin v`.
pub fn torus_point(u: f64, v: f64, t: &RingTorus) -> Point {
    let ring = t.c + t.r * v.cos();
    Point::new(vec![ring * u.cos(), ring * u.sin(), t.r * v.sin()])
        .expect("finite inputs give finite coordinates")
}

/// `4π²cr`.
pub fn torus_surface_area(t: &RingTorus) -> f64 {
    4.0 * PI * PI * t.c * t.r
}

/// `2π²cr²`.
pub fn torus_volume(t: &RingTorus) -> f64 {
    2.0 * PI * PI * t.c * t.r * t.r
}

/// Neumaier-compensated running sum.
#[derive(Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.carry
    }
}

fn midpoints(n: usize, length: f64) -> Vec<f64> {
    let h = length / n as f64;
    (0..n).map(|i| (i as f64 + 0.5) * h).collect()
}

fn cross_norm(a: [f64; 3], b: [f64; 3]) -> f64 {
    let c = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt()
}

/// Midpoint-rule integral of `‖∂P/∂u × ∂P/∂v‖` over `[0, 2π]²` on an
/// `n × n` grid. Rows are summed in parallel, each with compensated
/// summation, then combined in row order.
pub fn torus_area_quadrature(t: &RingTorus, n: usize) -> Result<f64> {
    if n < 16 {
        return Err(Error::InvalidArgument(format!("quadrature grid must be >= 16, got {n}")));
    }
    let (c, r) = (t.c, t.r);
    let us = midpoints(n, TAU);
    let vs = midpoints(n, TAU);
    let h = TAU / n as f64;
    let rows: Vec<f64> = us
        .par_iter()
        .map(|&u| {
            let (su, cu) = u.sin_cos();
            let mut acc = CompensatedSum::default();
            for &v in &vs {
                let (sv, cv) = v.sin_cos();
                let ring = c + r * cv;
                let du = [-ring * su, ring * cu, 0.0];
                let dv = [-r * sv * cu, -r * sv * su, r * cv];
                acc.add(cross_norm(du, dv));
            }
            acc.value()
        })
        .collect();
    let mut total = CompensatedSum::default();
    for row in rows {
        total.add(row);
    }
    Ok(total.value() * h * h)
}

/// Midpoint-rule integral of the solid-torus Jacobian over
/// `(u, v, ρ) ∈ [0, 2π]² × [0, r]` on an `n³` grid.
pub fn torus_volume_quadrature(t: &RingTorus, n: usize) -> Result<f64> {
    if n < 16 {
        return Err(Error::InvalidArgument(format!("quadrature grid must be >= 16, got {n}")));
    }
    let (c, r) = (t.c, t.r);
    let trig = |xs: Vec<f64>| -> Vec<(f64, f64)> { xs.into_iter().map(f64::sin_cos).collect() };
    let us = trig(midpoints(n, TAU));
    let vs = trig(midpoints(n, TAU));
    let rhos = midpoints(n, r);
    let cell = (TAU / n as f64) * (TAU / n as f64) * (r / n as f64);
    let rows: Vec<f64> = us
        .par_iter()
        .map(|&(su, cu)| {
            let mut acc = CompensatedSum::default();
            for &(sv, cv) in &vs {
                for &rho in &rhos {
                    let ring = c + rho * cv;
                    // Columns: ∂/∂u, ∂/∂v, ∂/∂ρ of the solid parametrisation.
                    let du = [-ring * su, ring * cu, 0.0];
                    let dv = [-rho * sv * cu, -rho * sv * su, rho * cv];
                    let drho = [cv * cu, cv * su, sv];
                    let det = du[0] * (dv[1] * drho[2] - dv[2] * drho[1])
                        - du[1] * (dv[0] * drho[2] - dv[2] * drho[0])
                        + du[2] * (dv[0] * drho[1] - dv[1] * drho[0]);
                    acc.add(det.abs());
                }
            }
            acc.value()
        })
        .collect();
    let mut total = CompensatedSum::default();
    for row in rows {
        total.add(row);
    }
    Ok(total.value() * cell)
}

/// One vertex of a `(u, v)` torus mesh.
#[derive(Clone, Debug, PartialEq)]
pub struct MeshVertex {
    pub u: f64,
    pub v: f64,
    pub point: Point,
}

/// `nu × nv` grid over `[0, 2π)²`, row-major in `u` then `v`.
pub fn torus_mesh(t: &RingTorus, nu: usize, nv: usize) -> Result<Vec<MeshVertex>> {
    if nu == 0 || nv == 0 {
        return Err(Error::InvalidArgument("mesh needs nu, nv >= 1".into()));
    }
    let mut out = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        let u = TAU * i as f64 / nu as f64;
        for j in 0..nv {
            let v = TAU * j as f64 / nv as f64;
            out.push(MeshVertex {
                u,
                v,
                point: torus_point(u, v, t),
            });
        }
    }
    Ok(out)
}

/// Writes `u,v,x,y,z` rows with round-trip float formatting.
pub fn write_mesh_csv<W: Write>(mesh: &[MeshVertex], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["u", "v", "x", "y", "z"])?;
    for m in mesh {
        let c = m.point.coords();
        w.write_record([m.u, m.v, c[0], c[1], c[2]].iter().map(f64::to_string))?;
    }
    w.flush()?;
    Ok(())
}

/// True iff some string of `w1` shares no point with some string of `w2`.
pub fn antipodal_worldsheets(w1: &Worldsheet, w2: &Worldsheet) -> Result<bool> {
    if w1.dim() != w2.dim() {
        return Err(Error::DimensionMismatch {
            expected: w1.dim(),
            found: w2.dim(),
        });
    }
    let r2: Vec<_> = w2.strings().iter().map(StringPath::to_region).collect();
    for s1 in w1.strings() {
        let r1 = s1.to_region();
        for b in &r2 {
            if antipodal_disjoint(&r1, b)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
