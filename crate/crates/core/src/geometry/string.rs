use super::point::Point;
use super::region::{Region, DEFAULT_RESOLUTION};
use crate::error::{Error, Result};

/// A string: a zero-width polyline with strictly increasing parameter
/// values. Unbounded strings are represented by finite truncations.
#[derive(Clone, Debug)]
pub struct StringPath {
    vertices: Vec<Point>,
    params: Vec<f64>,
    resolution: f64,
}

impl StringPath {
    pub fn new(vertices: Vec<Point>, params: Vec<f64>) -> Result<Self> {
        Self::with_resolution(vertices, params, DEFAULT_RESOLUTION)
    }

    pub fn with_resolution(vertices: Vec<Point>, params: Vec<f64>, resolution: f64) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidArgument(
                "a string needs at least two vertices".into(),
            ));
        }
        if vertices.len() != params.len() {
            return Err(Error::InvalidArgument(format!(
                "{} vertices but {} parameters",
                vertices.len(),
                params.len()
            )));
        }
        let dim = vertices[0].dim();
        if let Some(bad) = vertices.iter().find(|v| v.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        if params.iter().any(|t| !t.is_finite()) {
            return Err(Error::NonFinite);
        }
        if let Some(i) = params.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::NonMonotoneParams(i + 1));
        }
        if !(resolution.is_finite() && resolution > 0.0) {
            return Err(Error::InvalidArgument("resolution must be positive".into()));
        }
        let path = Self {
            vertices,
            params,
            resolution,
        };
        if path.arc_length() <= 0.0 {
            return Err(Error::InvalidArgument("string has zero length".into()));
        }
        Ok(path)
    }

    /// Parameters default to the vertex index.
    pub fn from_vertices(vertices: Vec<Point>) -> Result<Self> {
        let params = (0..vertices.len()).map(|i| i as f64).collect();
        Self::new(vertices, params)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn arc_length(&self) -> f64 {
        self.vertices
            .windows(2)
            .map(|w| w[0].distance(&w[1]))
            .sum()
    }

    pub fn segments(&self) -> impl Iterator<Item = (&Point, &Point)> {
        self.vertices.windows(2).map(|w| (&w[0], &w[1]))
    }

    /// The vertex set as a region at the string's resolution.
    pub fn to_region(&self) -> Region {
        Region::with_dim(self.vertices.clone(), self.dim(), self.resolution)
            .expect("vertices validated at construction")
    }

    /// Pointwise negation of every vertex; parameters are kept.
    pub fn negated(&self) -> Self {
        Self {
            vertices: self.vertices.iter().map(Point::negated).collect(),
            params: self.params.clone(),
            resolution: self.resolution,
        }
    }
}

/// Euclidean distance from `p` to the closed segment `[a, b]`.
pub fn point_segment_distance(p: &Point, a: &Point, b: &Point) -> f64 {
    let ab: Vec<f64> = a.coords().iter().zip(b.coords()).map(|(x, y)| y - x).collect();
    let ap: Vec<f64> = a.coords().iter().zip(p.coords()).map(|(x, y)| y - x).collect();
    let len2: f64 = ab.iter().map(|c| c * c).sum();
    let t = if len2 == 0.0 {
        0.0
    } else {
        (ab.iter().zip(&ap).map(|(u, v)| u * v).sum::<f64>() / len2).clamp(0.0, 1.0)
    };
    ap.iter()
        .zip(&ab)
        .map(|(v, u)| (v - t * u) * (v - t * u))
        .sum::<f64>()
        .sqrt()
}
