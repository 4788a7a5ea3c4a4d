use super::point::Point;
use super::region::Region;
use super::string::{point_segment_distance, StringPath};
use crate::error::{Error, Result};

/// A finite family of strings covering a carrier region.
#[derive(Clone, Debug)]
pub struct Worldsheet {
    strings: Vec<StringPath>,
    carrier: Region,
}

impl Worldsheet {
    /// Fails with [`Error::Uncovered`] unless [`cover_check`] holds.
    pub fn new(strings: Vec<StringPath>, carrier: Region) -> Result<Self> {
        if strings.is_empty() {
            return Err(Error::Empty("worldsheet strings"));
        }
        if carrier.is_empty() {
            return Err(Error::Empty("worldsheet carrier"));
        }
        if let Some(s) = strings.iter().find(|s| s.dim() != carrier.dim()) {
            return Err(Error::DimensionMismatch {
                expected: carrier.dim(),
                found: s.dim(),
            });
        }
        if !covers(&strings, &carrier) {
            return Err(Error::Uncovered);
        }
        Ok(Self { strings, carrier })
    }

    /// Carrier = the union of all string vertices at `resolution`.
    pub fn from_strings(strings: Vec<StringPath>, resolution: f64) -> Result<Self> {
        let first = strings.first().ok_or(Error::Empty("worldsheet strings"))?;
        let points: Vec<Point> = strings
            .iter()
            .flat_map(|s| s.vertices().iter().cloned())
            .collect();
        let carrier = Region::with_dim(points, first.dim(), resolution)?;
        Self::new(strings, carrier)
    }

    pub fn strings(&self) -> &[StringPath] {
        &self.strings
    }

    pub fn carrier(&self) -> &Region {
        &self.carrier
    }

    pub fn dim(&self) -> usize {
        self.carrier.dim()
    }

    /// All string vertices as one region at the carrier's resolution.
    pub fn vertex_region(&self) -> Region {
        let points = self
            .strings
            .iter()
            .flat_map(|s| s.vertices().iter().cloned())
            .collect();
        Region::with_dim(points, self.dim(), self.carrier.resolution())
            .expect("dimensions validated at construction")
    }

    pub fn total_length(&self) -> f64 {
        self.strings.iter().map(StringPath::arc_length).sum()
    }

    pub fn negated(&self) -> Self {
        Self {
            strings: self.strings.iter().map(StringPath::negated).collect(),
            carrier: self.carrier.negated(),
        }
    }

    /// Appends a string. Coverage can only grow, so the invariant holds.
    pub fn with_string(mut self, s: StringPath) -> Result<Self> {
        if s.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: s.dim(),
            });
        }
        self.strings.push(s);
        Ok(self)
    }
}

/// Finite coverage test: every occupied carrier cell lies within one grid
/// pitch of a vertex or segment of some string. "Every subregion contains a
/// string" is approximated by "every grid cell is touched by a string".
pub fn cover_check(w: &Worldsheet) -> bool {
    covers(&w.strings, &w.carrier)
}

fn covers(strings: &[StringPath], carrier: &Region) -> bool {
    let pitch = carrier.resolution();
    carrier.points().iter().all(|p| {
        strings.iter().any(|s| {
            s.vertices().iter().any(|v| v.distance(p) <= pitch)
                || s.segments().any(|(a, b)| point_segment_distance(p, a, b) <= pitch)
        })
    })
}
