use crate::descriptors::{phi_point, phi_region_set, DescriptorPipeline, Extractor, FeatureVector};
use crate::error::{Error, Result};
use crate::geometry::{interior, AntipodalityMode, Region};

/// Tolerance, pipeline and antipodality criterion shared by the relations.
#[derive(Clone, Debug)]
pub struct ProximityConfig {
    tol: f64,
    pipeline: DescriptorPipeline,
    mode: AntipodalityMode,
    /// The designated universe `X`, strongly near every nonempty region.
    universe: Option<Region>,
}

impl ProximityConfig {
    pub fn new(tol: f64, pipeline: DescriptorPipeline) -> Result<Self> {
        if !(tol >= 0.0 && tol.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be finite and >= 0, got {tol}"
            )));
        }
        Ok(Self {
            tol,
            pipeline,
            mode: AntipodalityMode::default(),
            universe: None,
        })
    }

    pub fn with_mode(mut self, mode: AntipodalityMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_universe(mut self, universe: Region) -> Self {
        self.universe = Some(universe);
        self
    }

    pub fn with_tol(self, tol: f64) -> Result<Self> {
        let mut cfg = Self::new(tol, self.pipeline)?;
        cfg.mode = self.mode;
        cfg.universe = self.universe;
        Ok(cfg)
    }

    pub fn with_pipeline(mut self, pipeline: DescriptorPipeline) -> Self {
        self.pipeline = pipeline;
        self
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn pipeline(&self) -> &DescriptorPipeline {
        &self.pipeline
    }

    pub fn mode(&self) -> AntipodalityMode {
        self.mode
    }

    pub fn universe(&self) -> Option<&Region> {
        self.universe.as_ref()
    }

    fn is_universe(&self, a: &Region) -> bool {
        self.universe.as_ref().is_some_and(|x| x.set_eq(a))
    }
}

impl Default for ProximityConfig {
    fn default() -> Self {
        Self {
            tol: 0.0,
            pipeline: DescriptorPipeline::single(Extractor::Centroid),
            mode: AntipodalityMode::default(),
            universe: None,
        }
    }
}

fn min_distance(v: &FeatureVector, set: &[FeatureVector]) -> f64 {
    set.iter()
        .map(|w| v.linf_distance(w))
        .fold(f64::INFINITY, f64::min)
}

/// `A δ_Φ B`: some `x ∈ A`, `y ∈ B` with `‖Φ(x) − Φ(y)‖∞ ≤ tol`.
/// The empty region is near nothing.
pub fn near_descriptive(a: &Region, b: &Region, cfg: &ProximityConfig) -> Result<bool> {
    a.check_dim(b)?;
    if a.is_empty() || b.is_empty() {
        return Ok(false);
    }
    let pa = phi_region_set(a, &cfg.pipeline)?;
    let pb = phi_region_set(b, &cfg.pipeline)?;
    Ok(pa.iter().any(|v| min_distance(v, &pb) <= cfg.tol))
}

/// `A ∩_Φ B`: the points of `A ∪ B` whose description lies within `tol` of
/// both `Φ(A)` and `Φ(B)`. May be empty.
pub fn descriptive_intersection(a: &Region, b: &Region, cfg: &ProximityConfig) -> Result<Region> {
    a.check_dim(b)?;
    let pa = phi_region_set(a, &cfg.pipeline)?;
    let pb = phi_region_set(b, &cfg.pipeline)?;
    let union = a.union(b)?;
    let mut keep = Vec::new();
    for p in union.points() {
        let v = phi_point(p, &cfg.pipeline)?;
        if min_distance(&v, &pa) <= cfg.tol && min_distance(&v, &pb) <= cfg.tol {
            keep.push(p.clone());
        }
    }
    Region::with_dim(keep, union.dim(), union.resolution())
}

/// `A δ̂ B` without a designated universe: overlapping grid interiors, or a
/// singleton inside the other region's interior, or equal singletons.
pub fn strongly_near(a: &Region, b: &Region) -> Result<bool> {
    a.check_dim(b)?;
    if a.resolution() != b.resolution() {
        return Err(Error::ResolutionMismatch(a.resolution(), b.resolution()));
    }
    if a.is_empty() || b.is_empty() {
        return Ok(false);
    }
    if a.is_singleton() && b.is_singleton() {
        return Ok(a.set_eq(b));
    }
    let int_a = interior(a);
    let int_b = interior(b);
    if a.is_singleton() {
        return Ok(int_b.contains(&a.points()[0]));
    }
    if b.is_singleton() {
        return Ok(int_a.contains(&b.points()[0]));
    }
    Ok(!int_a.intersection(&int_b)?.is_empty())
}

/// [`strongly_near`] plus the universe clause: `X δ̂ A` for every nonempty
/// `A` when `cfg` declares `X`.
pub fn strongly_near_in(a: &Region, b: &Region, cfg: &ProximityConfig) -> Result<bool> {
    a.check_dim(b)?;
    if a.is_empty() || b.is_empty() {
        return Ok(false);
    }
    if cfg.is_universe(a) || cfg.is_universe(b) {
        return Ok(true);
    }
    strongly_near(a, b)
}

/// `A δ̂_Φ B`: the descriptive intersection of the interiors is nonempty.
///
/// Singletons have empty interiors and are handled by their own clauses:
/// `{x} δ̂_Φ B` when `Φ(x)` is within `tol` of `Φ(int B)`, and
/// `{x} δ̂_Φ {y}` when `‖Φ(x) − Φ(y)‖∞ ≤ tol`.
pub fn descriptively_strongly_near(a: &Region, b: &Region, cfg: &ProximityConfig) -> Result<bool> {
    a.check_dim(b)?;
    if a.is_empty() || b.is_empty() {
        return Ok(false);
    }
    if cfg.is_universe(a) || cfg.is_universe(b) {
        return Ok(true);
    }
    let pipe = &cfg.pipeline;
    if a.is_singleton() && b.is_singleton() {
        let fa = phi_point(&a.points()[0], pipe)?;
        let fb = phi_point(&b.points()[0], pipe)?;
        return Ok(fa.linf_distance(&fb) <= cfg.tol);
    }
    let int_a = interior(a);
    let int_b = interior(b);
    if a.is_singleton() {
        return singleton_in_interior(&a.points()[0], &int_b, cfg);
    }
    if b.is_singleton() {
        return singleton_in_interior(&b.points()[0], &int_a, cfg);
    }
    if int_a.is_empty() || int_b.is_empty() {
        return Ok(false);
    }
    Ok(!descriptive_intersection(&int_a, &int_b, cfg)?.is_empty())
}

fn singleton_in_interior(
    x: &crate::geometry::Point,
    int: &Region,
    cfg: &ProximityConfig,
) -> Result<bool> {
    if int.is_empty() {
        return Ok(false);
    }
    let fx = phi_point(x, &cfg.pipeline)?;
    let set = phi_region_set(int, &cfg.pipeline)?;
    Ok(min_distance(&fx, &set) <= cfg.tol)
}
