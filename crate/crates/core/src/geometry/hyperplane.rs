use super::point::Point;
use crate::error::{Error, Result};

const UNIT_TOL: f64 = 1e-12;

/// The affine hyperplane `{x : x·normal = offset}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hyperplane {
    normal: Point,
    offset: f64,
}

impl Hyperplane {
    /// `normal` must already be a unit vector.
    pub fn new(normal: Point, offset: f64) -> Result<Self> {
        if (normal.norm() - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidArgument(format!(
                "hyperplane normal has norm {}",
                normal.norm()
            )));
        }
        if !offset.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self { normal, offset })
    }

    /// Normalises `direction` first; fails on the zero vector.
    pub fn through(direction: &Point, point: &Point) -> Result<Self> {
        let norm = direction.norm();
        if norm == 0.0 {
            return Err(Error::InvalidArgument("zero normal".into()));
        }
        let normal = Point::new(direction.coords().iter().map(|c| c / norm).collect())?;
        let offset = normal.dot(point);
        Self::new(normal, offset)
    }

    pub fn normal(&self) -> &Point {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn signed_distance(&self, p: &Point) -> f64 {
        self.normal.dot(p) - self.offset
    }

    pub fn contains(&self, p: &Point, tol: f64) -> bool {
        self.signed_distance(p).abs() <= tol
    }

    /// Parallel (normals equal up to sign) and distinct after aligning the
    /// normals.
    pub fn is_disjoint_parallel(&self, other: &Self) -> bool {
        let d = self.normal.dot(&other.normal);
        if (d.abs() - 1.0).abs() > UNIT_TOL {
            return false;
        }
        let other_offset = if d < 0.0 { -other.offset } else { other.offset };
        (self.offset - other_offset).abs() > UNIT_TOL
    }
}
