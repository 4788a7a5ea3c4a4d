//! Feature pipelines mapping points and regions to ℝᵏ.
//!
//! A [`DescriptorPipeline`] is an ordered list of [`Extractor`]s; its output
//! is the concatenation of each extractor's output. Points are described by
//! [`phi_point`], whole shapes by the aggregate [`describe_region`].

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CellKey, Point, Region, StringPath, Worldsheet};

/// A point in feature space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureVector(Vec<f64>);

impl FeatureVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty("feature vector"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// ∞-norm distance. Vectors of different length are infinitely far.
    pub fn linf_distance(&self, other: &Self) -> f64 {
        if self.0.len() != other.0.len() {
            return f64::INFINITY;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    fn bit_key(&self) -> Vec<u64> {
        // -0.0 and 0.0 describe the same thing.
        self.0.iter().map(|v| (v + 0.0).to_bits()).collect()
    }
}

impl fmt::Display for FeatureVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// One named feature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extractor {
    /// Polyline length; 0 for points and plain regions.
    ArcLength,
    /// Occupied grid cells times cell volume; 1 for a single point.
    AreaCount,
    /// Largest pairwise distance.
    Diameter,
    /// Coordinate mean (n components).
    Centroid,
    /// Constant 1: every finite input is bounded.
    Boundedness,
    /// Adjacency level of the tiling cell holding the centroid.
    CornerLevel,
}

impl Extractor {
    pub fn name(self) -> &'static str {
        match self {
            Self::ArcLength => "arc_length",
            Self::AreaCount => "area_count",
            Self::Diameter => "diameter",
            Self::Centroid => "centroid",
            Self::Boundedness => "boundedness",
            Self::CornerLevel => "corner_level",
        }
    }

    /// True for features unchanged by rigid motions and by negation.
    pub fn is_isometry_invariant(self) -> bool {
        matches!(
            self,
            Self::ArcLength | Self::AreaCount | Self::Diameter | Self::Boundedness
        )
    }

    fn dim(self, ambient: usize) -> usize {
        match self {
            Self::Centroid => ambient,
            _ => 1,
        }
    }
}

impl FromStr for Extractor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "arc_length" | "length" => Self::ArcLength,
            "area_count" | "area" => Self::AreaCount,
            "diameter" => Self::Diameter,
            "centroid" => Self::Centroid,
            "boundedness" | "bounded" | "constant" => Self::Boundedness,
            "corner_level" | "corner" => Self::CornerLevel,
            other => return Err(Error::UnknownDescriptor(other.to_string())),
        })
    }
}

/// Rectangular tiling of the plane into `rows × cols` square cells of side
/// `cell_size`, lower-left corner at `origin` (default `(0, 0)`).
/// Adjacency means a shared edge.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tiling {
    rows: usize,
    cols: usize,
    cell_size: f64,
    origin: [f64; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellId {
    pub row: usize,
    pub col: usize,
}

impl Tiling {
    /// Both sides need at least 2 cells so corners have exactly 2
    /// neighbours, edges 3 and inner cells 4.
    pub fn new(rows: usize, cols: usize, cell_size: f64) -> Result<Self> {
        if rows < 2 || cols < 2 {
            return Err(Error::InvalidArgument(format!(
                "tiling must be at least 2x2, got {rows}x{cols}"
            )));
        }
        if !(cell_size.is_finite() && cell_size > 0.0) {
            return Err(Error::InvalidArgument("cell size must be positive".into()));
        }
        Ok(Self {
            rows,
            cols,
            cell_size,
            origin: [0.0, 0.0],
        })
    }

    pub fn with_origin(mut self, origin: [f64; 2]) -> Self {
        self.origin = origin;
        self
    }

    pub fn origin(&self) -> [f64; 2] {
        self.origin
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    /// Cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = CellId> + '_ {
        (0..self.rows).flat_map(move |row| (0..self.cols).map(move |col| CellId { row, col }))
    }

    pub fn contains(&self, id: CellId) -> bool {
        id.row < self.rows && id.col < self.cols
    }

    pub fn adjacency_count(&self, id: CellId) -> Result<usize> {
        if !self.contains(id) {
            return Err(Error::OutsideTiling);
        }
        let vertical = usize::from(id.row > 0) + usize::from(id.row + 1 < self.rows);
        let horizontal = usize::from(id.col > 0) + usize::from(id.col + 1 < self.cols);
        Ok(vertical + horizontal)
    }

    pub fn is_corner(&self, id: CellId) -> bool {
        (id.row == 0 || id.row + 1 == self.rows) && (id.col == 0 || id.col + 1 == self.cols)
    }

    /// The cell whose half-open square `[x0, x0+s) × [y0, y0+s)` holds `p`.
    /// The top and right outer edges belong to the last row and column.
    pub fn cell_at(&self, p: &Point) -> Option<CellId> {
        let c = p.coords();
        if c.len() != 2 {
            return None;
        }
        let locate = |v: f64, n: usize| {
            let i = (v / self.cell_size).floor();
            if i < 0.0 || v > n as f64 * self.cell_size {
                None
            } else {
                Some((i as usize).min(n - 1))
            }
        };
        Some(CellId {
            row: locate(c[1] - self.origin[1], self.rows)?,
            col: locate(c[0] - self.origin[0], self.cols)?,
        })
    }

    /// The cell sampled as a `per_side × per_side` block of grid points
    /// anchored at its lower-left corner. Blocks of distinct cells are
    /// disjoint.
    pub fn cell_region(&self, id: CellId, per_side: usize) -> Result<Region> {
        if !self.contains(id) {
            return Err(Error::OutsideTiling);
        }
        if per_side == 0 {
            return Err(Error::InvalidArgument("per_side must be >= 1".into()));
        }
        let pitch = self.cell_size / per_side as f64;
        let origin = [
            self.origin[0] + id.col as f64 * self.cell_size,
            self.origin[1] + id.row as f64 * self.cell_size,
        ];
        Region::grid_block(&origin, &[per_side, per_side], pitch)
    }
}

/// Corner case function on a tiling: 2 for a cell with exactly two
/// neighbours, otherwise the neighbour count plus one (always above 2).
pub fn corner_level(cell: CellId, tiling: &Tiling) -> Result<FeatureVector> {
    let adjacent = tiling.adjacency_count(cell)?;
    let level = if adjacent == 2 { 2 } else { adjacent + 1 };
    FeatureVector::new(vec![level as f64])
}

/// An ordered list of extractors, optionally bound to a tiling for
/// [`Extractor::CornerLevel`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DescriptorPipeline {
    extractors: Vec<Extractor>,
    tiling: Option<Tiling>,
}

impl DescriptorPipeline {
    pub fn new(extractors: Vec<Extractor>) -> Result<Self> {
        if extractors.is_empty() {
            return Err(Error::Empty("pipeline"));
        }
        Ok(Self {
            extractors,
            tiling: None,
        })
    }

    /// Parses a comma-separated list such as `length,area,centroid`.
    pub fn parse(spec: &str) -> Result<Self> {
        let extractors = spec
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>>>()?;
        Self::new(extractors)
    }

    pub fn single(extractor: Extractor) -> Self {
        Self {
            extractors: vec![extractor],
            tiling: None,
        }
    }

    pub fn with_tiling(mut self, tiling: Tiling) -> Self {
        self.tiling = Some(tiling);
        self
    }

    pub fn extractors(&self) -> &[Extractor] {
        &self.extractors
    }

    pub fn tiling(&self) -> Option<&Tiling> {
        self.tiling.as_ref()
    }

    /// Concatenation of two pipelines. The left tiling wins if both have one.
    pub fn concat(&self, other: &Self) -> Self {
        let mut extractors = self.extractors.clone();
        extractors.extend_from_slice(&other.extractors);
        Self {
            extractors,
            tiling: self.tiling.clone().or_else(|| other.tiling.clone()),
        }
    }

    /// Output dimension k for inputs living in ℝ^`ambient`.
    pub fn output_dim(&self, ambient: usize) -> usize {
        self.extractors.iter().map(|e| e.dim(ambient)).sum()
    }

    pub fn is_isometry_invariant(&self) -> bool {
        self.extractors.iter().all(|e| e.is_isometry_invariant())
    }

    fn corner_at(&self, p: &Point) -> Result<f64> {
        let tiling = self.tiling.as_ref().ok_or(Error::MissingTiling)?;
        let cell = tiling.cell_at(p).ok_or(Error::OutsideTiling)?;
        Ok(corner_level(cell, tiling)?.values()[0])
    }

    fn evaluate(&self, s: &Summary) -> Result<FeatureVector> {
        let mut out = Vec::with_capacity(self.output_dim(s.centroid.dim()));
        for e in &self.extractors {
            match e {
                Extractor::ArcLength => out.push(s.arc_length),
                Extractor::AreaCount => out.push(s.area),
                Extractor::Diameter => out.push(s.diameter),
                Extractor::Centroid => out.extend_from_slice(s.centroid.coords()),
                Extractor::Boundedness => out.push(1.0),
                Extractor::CornerLevel => out.push(self.corner_at(&s.centroid)?),
            }
        }
        FeatureVector::new(out)
    }
}

impl fmt::Display for DescriptorPipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.extractors.iter().map(|e| e.name()).collect();
        f.write_str(&names.join(","))
    }
}

impl FromStr for DescriptorPipeline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

struct Summary {
    arc_length: f64,
    area: f64,
    diameter: f64,
    centroid: Point,
}

/// Description of a single point: its own centroid, zero length and
/// diameter, unit area count.
pub fn phi_point(x: &Point, pipeline: &DescriptorPipeline) -> Result<FeatureVector> {
    pipeline.evaluate(&Summary {
        arc_length: 0.0,
        area: 1.0,
        diameter: 0.0,
        centroid: x.clone(),
    })
}

/// `{Φ(x) : x ∈ A}` with exact duplicates removed, in point order.
pub fn phi_region_set(a: &Region, pipeline: &DescriptorPipeline) -> Result<Vec<FeatureVector>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for p in a.points() {
        let fv = phi_point(p, pipeline)?;
        if seen.insert(fv.bit_key()) {
            out.push(fv);
        }
    }
    Ok(out)
}

/// Anything with an aggregate description.
#[derive(Clone, Copy, Debug)]
pub enum Shape<'a> {
    Region(&'a Region),
    String(&'a StringPath),
    Worldsheet(&'a Worldsheet),
}

impl<'a> From<&'a Region> for Shape<'a> {
    fn from(r: &'a Region) -> Self {
        Shape::Region(r)
    }
}

impl<'a> From<&'a StringPath> for Shape<'a> {
    fn from(s: &'a StringPath) -> Self {
        Shape::String(s)
    }
}

impl<'a> From<&'a Worldsheet> for Shape<'a> {
    fn from(w: &'a Worldsheet) -> Self {
        Shape::Worldsheet(w)
    }
}

/// Aggregate description `f(A)` of a region, string or worldsheet.
///
/// Strings contribute their polyline length and the cells of their
/// vertices; worldsheets sum member lengths and take the union of member
/// cells at the carrier resolution.
pub fn describe_region<'a>(shape: impl Into<Shape<'a>>, pipeline: &DescriptorPipeline) -> Result<FeatureVector> {
    let (points, arc_length, resolution): (Vec<&Point>, f64, f64) = match shape.into() {
        Shape::Region(r) => (r.points().iter().collect(), 0.0, r.resolution()),
        Shape::String(s) => (s.vertices().iter().collect(), s.arc_length(), s.resolution()),
        Shape::Worldsheet(w) => (
            w.strings().iter().flat_map(|s| s.vertices()).collect(),
            w.total_length(),
            w.carrier().resolution(),
        ),
    };
    let first = points.first().ok_or(Error::Empty("shape to describe"))?;
    let dim = first.dim();
    let wants = |e: Extractor| pipeline.extractors.contains(&e);
    let area = if wants(Extractor::AreaCount) {
        let cells: HashSet<CellKey> = points.iter().map(|p| p.cell(resolution)).collect();
        cells.len() as f64 * resolution.powi(dim as i32)
    } else {
        0.0
    };
    let mut diameter = 0.0f64;
    if wants(Extractor::Diameter) {
        for (i, p) in points.iter().enumerate() {
            for q in &points[i + 1..] {
                diameter = diameter.max(p.distance(q));
            }
        }
    }
    let mut sums = vec![0.0; dim];
    for p in &points {
        for (s, c) in sums.iter_mut().zip(p.coords()) {
            *s += c;
        }
    }
    let n = points.len() as f64;
    let centroid = Point::new(sums.into_iter().map(|s| s / n).collect())?;
    pipeline.evaluate(&Summary {
        arc_length,
        area,
        diameter,
        centroid,
    })
}
