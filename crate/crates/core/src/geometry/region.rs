use std::collections::HashSet;
use std::fmt;

use super::point::{CellKey, Point};
use crate::error::{Error, Result};

/// Grid pitch used when a caller does not pick one.
pub const DEFAULT_RESOLUTION: f64 = 1e-9;

/// A finite set of points sharing one dimension, together with the grid
/// pitch used for point equality and for the interior operator.
///
/// Points that snap to the same grid cell are the same point; the first one
/// supplied is kept. Points are stored in lexicographic order.
#[derive(Clone, Debug)]
pub struct Region {
    points: Vec<Point>,
    cells: HashSet<CellKey>,
    dim: usize,
    resolution: f64,
}

impl Region {
    /// Builds a nonempty region.
    pub fn new(points: Vec<Point>, resolution: f64) -> Result<Self> {
        let dim = points.first().ok_or(Error::Empty("region"))?.dim();
        Self::with_dim(points, dim, resolution)
    }

    /// The empty region of dimension `dim`. Only results of set operations
    /// and the axiom harness need this form.
    pub fn empty(dim: usize, resolution: f64) -> Result<Self> {
        Self::with_dim(Vec::new(), dim, resolution)
    }

    /// Builds a possibly empty region of a fixed dimension.
    pub fn with_dim(points: Vec<Point>, dim: usize, resolution: f64) -> Result<Self> {
        check_resolution(resolution)?;
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be >= 1".into()));
        }
        let mut cells = HashSet::with_capacity(points.len());
        let mut kept = Vec::with_capacity(points.len());
        for p in points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
            if cells.insert(p.cell(resolution)) {
                kept.push(p);
            }
        }
        kept.sort_by(Point::lex_cmp);
        Ok(Self {
            points: kept,
            cells,
            dim,
            resolution,
        })
    }

    /// Convenience constructor from fixed-size coordinate arrays.
    pub fn from_coords<const N: usize>(coords: &[[f64; N]], resolution: f64) -> Result<Self> {
        let points = coords
            .iter()
            .map(|c| Point::from_slice(c))
            .collect::<Result<Vec<_>>>()?;
        Self::with_dim(points, N, resolution)
    }

    /// Axis-aligned block of grid points `origin + i * resolution` for
    /// every index `i` in `0..counts[k]` along each axis.
    pub fn grid_block(origin: &[f64], counts: &[usize], resolution: f64) -> Result<Self> {
        if origin.len() != counts.len() {
            return Err(Error::DimensionMismatch {
                expected: origin.len(),
                found: counts.len(),
            });
        }
        let mut points = Vec::new();
        let mut idx = vec![0usize; counts.len()];
        if counts.iter().all(|&c| c > 0) {
            'outer: loop {
                let coords = origin
                    .iter()
                    .zip(&idx)
                    .map(|(o, &i)| o + i as f64 * resolution)
                    .collect();
                points.push(Point::new(coords)?);
                for axis in (0..idx.len()).rev() {
                    idx[axis] += 1;
                    if idx[axis] < counts[axis] {
                        continue 'outer;
                    }
                    idx[axis] = 0;
                }
                break;
            }
        }
        Self::with_dim(points, origin.len(), resolution)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    /// Occupied grid cells at this region's own resolution.
    pub fn cells(&self) -> &HashSet<CellKey> {
        &self.cells
    }

    /// Occupied grid cells at an arbitrary pitch.
    pub fn cells_at(&self, resolution: f64) -> HashSet<CellKey> {
        if resolution == self.resolution {
            return self.cells.clone();
        }
        self.points.iter().map(|p| p.cell(resolution)).collect()
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.dim && self.cells.contains(&p.cell(self.resolution))
    }

    pub fn is_singleton(&self) -> bool {
        self.points.len() == 1
    }

    pub(crate) fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    /// Set union. Both regions must share dimension; the coarser pitch wins.
    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let res = self.resolution.max(other.resolution);
        let points = self.points.iter().chain(&other.points).cloned().collect();
        Self::with_dim(points, self.dim, res)
    }

    /// Set intersection under grid snapping at the coarser pitch.
    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let res = self.resolution.max(other.resolution);
        let theirs = other.cells_at(res);
        let points = self
            .points
            .iter()
            .filter(|p| theirs.contains(&p.cell(res)))
            .cloned()
            .collect();
        Self::with_dim(points, self.dim, res)
    }

    /// The sub-region of points satisfying `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Point) -> bool) -> Self {
        let points: Vec<Point> = self.points.iter().filter(|p| keep(p)).cloned().collect();
        let cells = points.iter().map(|p| p.cell(self.resolution)).collect();
        Self {
            points,
            cells,
            dim: self.dim,
            resolution: self.resolution,
        }
    }

    /// `{-x : x in self}`.
    pub fn negated(&self) -> Self {
        let points = self.points.iter().map(Point::negated).collect();
        // Snapping is odd-symmetric, so no two points collapse.
        Self::with_dim(points, self.dim, self.resolution).expect("negation preserves validity")
    }

    /// Set equality under grid snapping at the coarser pitch.
    pub fn set_eq(&self, other: &Self) -> bool {
        if self.dim != other.dim || self.len() != other.len() {
            return false;
        }
        let res = self.resolution.max(other.resolution);
        self.cells_at(res) == other.cells_at(res)
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let res = self.resolution.max(other.resolution);
        let theirs = other.cells_at(res);
        self.points.iter().all(|p| theirs.contains(&p.cell(res)))
    }
}

fn check_resolution(resolution: f64) -> Result<()> {
    if !(resolution.is_finite() && resolution > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "resolution must be positive and finite, got {resolution}"
        )));
    }
    Ok(())
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}
