//! Planar EEG traces as strings: loading, the twist embedding into 3-space,
//! wrapping trace families onto a ring torus, and antipodal matching.

use std::f64::consts::TAU;
use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::but::{find_matching_antipodal, MatchResult, RegionFamily};
use crate::error::{Error, Result};
use crate::geometry::{Point, StringPath, Worldsheet, DEFAULT_RESOLUTION};
use crate::proximity::ProximityConfig;
use crate::worldsheet::{torus_point, RingTorus};

/// Largest implicit-equation residual allowed for wrapped vertices.
pub const TORUS_RESIDUAL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub x: f64,
    pub z: f64,
}

/// An ordered `(t, x, z)` trace with strictly increasing `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct EegTrace {
    source: String,
    samples: Vec<Sample>,
}

impl EegTrace {
    pub fn new(source: impl Into<String>, samples: Vec<Sample>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "a trace needs at least 2 samples, got {}",
                samples.len()
            )));
        }
        for (i, s) in samples.iter().enumerate() {
            if !(s.t.is_finite() && s.x.is_finite() && s.z.is_finite()) {
                return Err(Error::NonFinite);
            }
            if i > 0 && s.t <= samples[i - 1].t {
                return Err(Error::NonMonotoneParams(i));
            }
        }
        Ok(Self {
            source: source.into(),
            samples,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn t_range(&self) -> (f64, f64) {
        (self.samples[0].t, self.samples[self.samples.len() - 1].t)
    }

    /// The trace as a string in the xz-plane, parametrized by `t`.
    pub fn to_string_path(&self) -> Result<StringPath> {
        let vertices = self
            .samples
            .iter()
            .map(|s| Point::new(vec![s.x, s.z]))
            .collect::<Result<Vec<_>>>()?;
        StringPath::new(vertices, self.samples.iter().map(|s| s.t).collect())
    }
}

/// Reads a `t,x,z` CSV. Columns are matched by name, so any order works.
pub fn read_trace<R: Read>(input: R, origin: &Path) -> Result<EegTrace> {
    let mut rdr = csv::Reader::from_reader(input);
    let header: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();
    let column = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| parse_err(origin, 1, format!("missing column `{name}`")))
    };
    let (ti, xi, zi) = (column("t")?, column("x")?, column("z")?);
    let mut samples = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let line = row as u64 + 2;
        let rec = rec.map_err(|e| parse_err(origin, line, e.to_string()))?;
        let field = |i: usize| -> Result<f64> {
            let raw = rec.get(i).ok_or_else(|| parse_err(origin, line, "missing field".into()))?;
            let v: f64 = raw
                .trim()
                .parse()
                .map_err(|_| parse_err(origin, line, format!("not a number: `{raw}`")))?;
            if !v.is_finite() {
                return Err(parse_err(origin, line, format!("non-finite value `{raw}`")));
            }
            Ok(v)
        };
        let s = Sample {
            t: field(ti)?,
            x: field(xi)?,
            z: field(zi)?,
        };
        if let Some(prev) = samples.last().map(|p: &Sample| p.t) {
            if s.t <= prev {
                return Err(parse_err(origin, line, format!("t must increase strictly ({} after {prev})", s.t)));
            }
        }
        samples.push(s);
    }
    if samples.len() < 2 {
        return Err(parse_err(origin, 1, format!("need at least 2 data rows, got {}", samples.len())));
    }
    let source = origin
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    EegTrace::new(source, samples)
}

pub fn load_trace(path: &Path) -> Result<EegTrace> {
    read_trace(std::fs::File::open(path)?, path)
}

fn parse_err(path: &Path, line: u64, message: String) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    }
}

/// `1.2 (1 − z cos 2.5x) cos 5x`.
pub fn twist(x: f64, z: f64) -> f64 {
    1.2 * (1.0 - z * (2.5 * x).cos()) * (5.0 * x).cos()
}

/// `1.2 (1 − cos 2.5t) cos 5t`, the one-parameter variant.
pub fn twist_of_time(t: f64) -> f64 {
    1.2 * (1.0 - (2.5 * t).cos()) * (5.0 * t).cos()
}

/// `(x, z, twist(x, z))` for every sample, in order.
pub fn embed3d_points(trace: &EegTrace) -> Vec<Point> {
    trace
        .samples
        .iter()
        .map(|s| Point::new(vec![s.x, s.z, twist(s.x, s.z)]).expect("finite samples"))
        .collect()
}

/// The lifted trace as a string in ℝ³ with `t` as the parameter. A trace
/// whose lift has zero length (e.g. constant samples) is rejected; use
/// [`embed3d_points`] for those.
pub fn embed3d(trace: &EegTrace) -> Result<StringPath> {
    StringPath::new(embed3d_points(trace), trace.samples.iter().map(|s| s.t).collect())
}

/// Writes `t,x,z,twist` rows for a trace.
pub fn write_embedded_csv<W: Write>(trace: &EegTrace, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "x", "z", "twist"])?;
    for (s, v) in trace.samples.iter().zip(embed3d_points(trace)) {
        let c = v.coords();
        w.write_record([s.t.to_string(), c[0].to_string(), c[1].to_string(), c[2].to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// The torus curve of trace `i` of `n`: `u` sweeps `[0, 2π]` with time,
/// `v = 2πi/n` is fixed.
pub fn torus_curve(trace: &EegTrace, index: usize, count: usize, torus: &RingTorus) -> Result<StringPath> {
    let (t0, t1) = trace.t_range();
    let v = TAU * index as f64 / count as f64;
    let vertices = trace
        .samples
        .iter()
        .map(|s| torus_point(TAU * (s.t - t0) / (t1 - t0), v, torus))
        .collect();
    StringPath::new(vertices, trace.samples.iter().map(|s| s.t).collect())
}

/// One latitude circle of the tube per trace, gathered into a worldsheet.
pub fn wrap_traces_on_torus(traces: &[EegTrace], torus: &RingTorus) -> Result<Worldsheet> {
    if traces.is_empty() {
        return Err(Error::Empty("traces"));
    }
    let n = traces.len();
    let strings = traces
        .par_iter()
        .enumerate()
        .map(|(i, tr)| torus_curve(tr, i, n, torus))
        .collect::<Result<Vec<_>>>()?;
    for s in &strings {
        for p in s.vertices() {
            let res = torus.implicit_residual(p);
            if res > TORUS_RESIDUAL_TOL {
                return Err(Error::InvalidArgument(format!(
                    "wrapped vertex {p} is off the torus by {res:e}"
                )));
            }
        }
    }
    Worldsheet::from_strings(strings, DEFAULT_RESOLUTION)
}

/// Writes `t,u,v,x,y,z` rows for one wrapped trace.
pub fn write_torus_curve_csv<W: Write>(
    trace: &EegTrace,
    index: usize,
    count: usize,
    torus: &RingTorus,
    out: W,
) -> Result<()> {
    let curve = torus_curve(trace, index, count, torus)?;
    let (t0, t1) = trace.t_range();
    let v = TAU * index as f64 / count as f64;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "u", "v", "x", "y", "z"])?;
    for (t, p) in curve.params().iter().zip(curve.vertices()) {
        let u = TAU * (t - t0) / (t1 - t0);
        let mut row = vec![t.to_string(), u.to_string(), v.to_string()];
        row.extend(p.coords().iter().map(f64::to_string));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// `(x, z) ↦ (−x, −z)` at every sample.
pub fn mirror_trace(trace: &EegTrace) -> EegTrace {
    EegTrace {
        source: format!("{}-mirror", trace.source),
        samples: trace
            .samples
            .iter()
            .map(|s| Sample {
                t: s.t,
                x: -s.x,
                z: -s.z,
            })
            .collect(),
    }
}

/// Matching-antipodal search over traces viewed as xz-plane strings.
pub fn match_antipodal_traces(traces: &[EegTrace], cfg: &ProximityConfig) -> Result<MatchResult> {
    if traces.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 traces, got {}",
            traces.len()
        )));
    }
    let strings = traces
        .iter()
        .map(EegTrace::to_string_path)
        .collect::<Result<Vec<_>>>()?;
    find_matching_antipodal(&RegionFamily::from_strings(strings)?, cfg)
}

/// `(t, sin t, cos t)` at `n` evenly spaced times `t = k·dt`.
pub fn synthetic_trace(n: usize, dt: f64) -> Result<EegTrace> {
    let samples = (0..n)
        .map(|k| {
            let t = k as f64 * dt;
            Sample {
                t,
                x: t.sin(),
                z: t.cos(),
            }
        })
        .collect();
    EegTrace::new("synthetic", samples)
}
