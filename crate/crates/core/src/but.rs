//! Search for antipodal pairs with matching descriptions.
//!
//! [`find_matching_antipodal`] sorts members by their first description
//! coordinate and sweeps a `tol`-wide window, testing antipodality only for
//! pairs whose descriptions can match. [`brute_force_oracle`] enumerates
//! every pair directly and is the ground truth the search is checked
//! against.

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::descriptors::{describe_region, FeatureVector, Shape, Tiling};
use crate::error::{Error, Result};
use crate::geometry::{
    antipodal_separable, antipode_map, sphere_sample, spherical_cap, AntipodalityMode, CellKey,
    Region, SphericalRegion, StringPath, Worldsheet,
};
use crate::proximity::ProximityConfig;
use crate::worldsheet::antipodal_worldsheets;

/// One member of a family.
#[derive(Clone, Debug)]
pub enum Member {
    Region(Region),
    String(StringPath),
    Worldsheet(Worldsheet),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MemberKind {
    Region,
    String,
    Worldsheet,
}

impl MemberKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Region => "region",
            Self::String => "string",
            Self::Worldsheet => "worldsheet",
        }
    }
}

impl fmt::Display for MemberKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Member {
    pub fn kind(&self) -> MemberKind {
        match self {
            Self::Region(_) => MemberKind::Region,
            Self::String(_) => MemberKind::String,
            Self::Worldsheet(_) => MemberKind::Worldsheet,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Region(r) => r.dim(),
            Self::String(s) => s.dim(),
            Self::Worldsheet(w) => w.dim(),
        }
    }

    pub fn shape(&self) -> Shape<'_> {
        match self {
            Self::Region(r) => Shape::Region(r),
            Self::String(s) => Shape::String(s),
            Self::Worldsheet(w) => Shape::Worldsheet(w),
        }
    }

    /// The member's point set: the region itself, string vertices, or all
    /// worldsheet vertices.
    pub fn point_set(&self) -> Region {
        match self {
            Self::Region(r) => r.clone(),
            Self::String(s) => s.to_region(),
            Self::Worldsheet(w) => w.vertex_region(),
        }
    }
}

/// A finite family of same-kind, same-dimension members.
#[derive(Clone, Debug)]
pub struct RegionFamily {
    members: Vec<Member>,
    kind: MemberKind,
    antipodes: Option<Vec<usize>>,
}

impl RegionFamily {
    pub fn new(members: Vec<Member>) -> Result<Self> {
        let first = members.first().ok_or(Error::Empty("family"))?;
        let (kind, dim) = (first.kind(), first.dim());
        for m in &members {
            if m.kind() != kind {
                return Err(Error::MixedKinds(kind.as_str(), m.kind().as_str()));
            }
            if m.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: m.dim(),
                });
            }
        }
        Ok(Self {
            members,
            kind,
            antipodes: None,
        })
    }

    pub fn from_regions(regions: Vec<Region>) -> Result<Self> {
        Self::new(regions.into_iter().map(Member::Region).collect())
    }

    pub fn from_strings(strings: Vec<StringPath>) -> Result<Self> {
        Self::new(strings.into_iter().map(Member::String).collect())
    }

    pub fn from_worldsheets(sheets: Vec<Worldsheet>) -> Result<Self> {
        Self::new(sheets.into_iter().map(Member::Worldsheet).collect())
    }

    /// Records which member is the antipode of which. Must be an involution.
    pub fn with_antipode_pairing(mut self, pairing: Vec<usize>) -> Result<Self> {
        if pairing.len() != self.members.len() {
            return Err(Error::InvalidArgument("pairing length differs from family size".into()));
        }
        for (i, &j) in pairing.iter().enumerate() {
            if j >= pairing.len() || pairing[j] != i {
                return Err(Error::InvalidArgument(format!(
                    "antipode pairing is not an involution at index {i}"
                )));
            }
        }
        self.antipodes = Some(pairing);
        Ok(self)
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn kind(&self) -> MemberKind {
        self.kind
    }

    pub fn antipode_pairing(&self) -> Option<&[usize]> {
        self.antipodes.as_deref()
    }

    fn check_searchable(&self) -> Result<()> {
        if self.members.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "a search needs at least 2 members, got {}",
                self.members.len()
            )));
        }
        Ok(())
    }
}

/// One antipodal pair with matching descriptions; `a < b`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatchedPair {
    pub a: usize,
    pub b: usize,
    pub description_a: FeatureVector,
    pub description_b: FeatureVector,
    pub mismatch: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatchResult {
    /// Ascending by `(a, b)`.
    pub pairs: Vec<MatchedPair>,
    /// Pairs whose descriptions were compared.
    pub comparisons: u64,
    pub tol: f64,
    pub mode: AntipodalityMode,
}

impl MatchResult {
    pub fn index_pairs(&self) -> Vec<(usize, usize)> {
        self.pairs.iter().map(|p| (p.a, p.b)).collect()
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        let (a, b) = (a.min(b), a.max(b));
        self.pairs.iter().any(|p| p.a == a && p.b == b)
    }

    pub fn get(&self, a: usize, b: usize) -> Option<&MatchedPair> {
        let (a, b) = (a.min(b), a.max(b));
        self.pairs.iter().find(|p| p.a == a && p.b == b)
    }

    pub fn summary(&self) -> String {
        format!("pairs={} comparisons={}", self.pairs.len(), self.comparisons)
    }
}

/// Point-set data cached per member for the sweep.
enum Cells {
    Flat { cells: HashSet<CellKey>, resolution: f64 },
    Sheet { per_string: Vec<HashSet<CellKey>>, resolution: f64 },
}

fn cache_cells(m: &Member) -> Cells {
    match m {
        Member::Region(r) => Cells::Flat {
            cells: r.cells().clone(),
            resolution: r.resolution(),
        },
        Member::String(s) => Cells::Flat {
            cells: s.vertices().iter().map(|v| v.cell(s.resolution())).collect(),
            resolution: s.resolution(),
        },
        Member::Worldsheet(w) => {
            let res = w.carrier().resolution();
            Cells::Sheet {
                per_string: w
                    .strings()
                    .iter()
                    .map(|s| s.vertices().iter().map(|v| v.cell(res)).collect())
                    .collect(),
                resolution: res,
            }
        }
    }
}

fn disjoint_cells(a: &HashSet<CellKey>, b: &HashSet<CellKey>) -> bool {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    small.iter().all(|k| !large.contains(k))
}

fn cached_antipodal(
    family: &RegionFamily,
    cache: &[Cells],
    i: usize,
    j: usize,
    mode: AntipodalityMode,
) -> Result<bool> {
    match (mode, &cache[i], &cache[j]) {
        (
            AntipodalityMode::Disjoint,
            Cells::Flat { cells: a, resolution: ra },
            Cells::Flat { cells: b, resolution: rb },
        ) if ra == rb => Ok(disjoint_cells(a, b)),
        (
            AntipodalityMode::Symmdiff,
            Cells::Flat { cells: a, resolution: ra },
            Cells::Flat { cells: b, resolution: rb },
        ) if ra == rb => Ok(a != b),
        (
            AntipodalityMode::Disjoint,
            Cells::Sheet { per_string: a, resolution: ra },
            Cells::Sheet { per_string: b, resolution: rb },
        ) if ra == rb => Ok(a.iter().any(|sa| b.iter().any(|sb| disjoint_cells(sa, sb)))),
        _ => {
            let (a, b) = (&family.members[i], &family.members[j]);
            match mode {
                AntipodalityMode::Separable => {
                    Ok(antipodal_separable(&a.point_set(), &b.point_set())?.is_some())
                }
                _ => direct_antipodal(a, b, mode),
            }
        }
    }
}

/// The antipodality predicate evaluated straight from the geometry.
fn direct_antipodal(a: &Member, b: &Member, mode: AntipodalityMode) -> Result<bool> {
    match (a, b, mode) {
        (Member::Worldsheet(x), Member::Worldsheet(y), AntipodalityMode::Disjoint) => {
            antipodal_worldsheets(x, y)
        }
        _ => mode.holds(&a.point_set(), &b.point_set()),
    }
}

/// All pairs `(A, B)` that are antipodal under `cfg.mode()` and whose
/// descriptions differ by at most `cfg.tol()` in the ∞-norm.
pub fn find_matching_antipodal(family: &RegionFamily, cfg: &ProximityConfig) -> Result<MatchResult> {
    family.check_searchable()?;
    let tol = cfg.tol();
    let mode = cfg.mode();
    let descriptions: Vec<FeatureVector> = family
        .members
        .par_iter()
        .map(|m| describe_region(m.shape(), cfg.pipeline()))
        .collect::<Result<_>>()?;
    let cache: Vec<Cells> = family.members.par_iter().map(cache_cells).collect();

    let mut order: Vec<usize> = (0..family.len()).collect();
    order.sort_by(|&x, &y| {
        descriptions[x].values()[0]
            .total_cmp(&descriptions[y].values()[0])
            .then(x.cmp(&y))
    });

    let per_start: Vec<(u64, Vec<MatchedPair>)> = (0..order.len())
        .into_par_iter()
        .map(|pos| -> Result<(u64, Vec<MatchedPair>)> {
            let i = order[pos];
            let di = &descriptions[i];
            let lead = di.values()[0];
            let mut compared = 0u64;
            let mut found = Vec::new();
            for &j in &order[pos + 1..] {
                let dj = &descriptions[j];
                if dj.values()[0] - lead > tol {
                    break;
                }
                compared += 1;
                let mismatch = di.linf_distance(dj);
                if mismatch > tol || !cached_antipodal(family, &cache, i, j, mode)? {
                    continue;
                }
                let (a, b) = (i.min(j), i.max(j));
                found.push(MatchedPair {
                    a,
                    b,
                    description_a: descriptions[a].clone(),
                    description_b: descriptions[b].clone(),
                    mismatch,
                });
            }
            Ok((compared, found))
        })
        .collect::<Result<_>>()?;

    let comparisons = per_start.iter().map(|(c, _)| c).sum();
    let mut pairs: Vec<MatchedPair> = per_start.into_iter().flat_map(|(_, p)| p).collect();
    pairs.sort_by_key(|p| (p.a, p.b));
    Ok(MatchResult {
        pairs,
        comparisons,
        tol,
        mode,
    })
}

/// Largest family the quadratic oracle accepts.
pub const ORACLE_MAX_MEMBERS: usize = 1000;

/// Exhaustive `O(m²)` enumeration: describes both members of every pair
/// afresh and evaluates the antipodality predicate directly.
pub fn brute_force_oracle(family: &RegionFamily, cfg: &ProximityConfig) -> Result<MatchResult> {
    family.check_searchable()?;
    if family.len() > ORACLE_MAX_MEMBERS {
        return Err(Error::InvalidArgument(format!(
            "oracle is limited to {ORACLE_MAX_MEMBERS} members"
        )));
    }
    let m = family.members();
    let mut pairs = Vec::new();
    let mut comparisons = 0;
    for a in 0..m.len() {
        for b in a + 1..m.len() {
            comparisons += 1;
            let da = describe_region(m[a].shape(), cfg.pipeline())?;
            let db = describe_region(m[b].shape(), cfg.pipeline())?;
            let mismatch = da.linf_distance(&db);
            if mismatch <= cfg.tol() && direct_antipodal(&m[a], &m[b], cfg.mode())? {
                pairs.push(MatchedPair {
                    a,
                    b,
                    description_a: da,
                    description_b: db,
                    mismatch,
                });
            }
        }
    }
    Ok(MatchResult {
        pairs,
        comparisons,
        tol: cfg.tol(),
        mode: cfg.mode(),
    })
}

/// Every cell of a tiling as a region of `per_side²` points.
pub fn tiling_family(tiling: &Tiling, per_side: usize) -> Result<RegionFamily> {
    let regions = tiling
        .cells()
        .map(|id| tiling.cell_region(id, per_side))
        .collect::<Result<Vec<_>>>()?;
    RegionFamily::from_regions(regions)
}

/// Outcome of a sphere witness run.
#[derive(Clone, Debug, Serialize)]
pub struct SphereVerification {
    pub result: MatchResult,
    /// Caps whose antipode was found with mismatch exactly 0.
    pub matched_caps: usize,
    pub caps: usize,
    /// Caps equal to their own antipode; excluded from the verdict.
    pub degenerate_caps: Vec<usize>,
    pub warnings: Vec<String>,
    pub passed: bool,
}

impl SphereVerification {
    pub fn summary(&self) -> String {
        format!(
            "{} {} matched_caps={}/{} degenerate={}",
            if self.passed { "PASS" } else { "FAIL" },
            self.result.summary(),
            self.matched_caps,
            self.caps,
            self.degenerate_caps.len()
        )
    }
}

/// Runs the search on `caps` followed by their antipodes and checks that
/// every cap `i` is matched with member `i + caps.len()` at mismatch 0.
pub fn verify_caps(caps: Vec<SphericalRegion>, cfg: &ProximityConfig) -> Result<SphereVerification> {
    if caps.is_empty() {
        return Err(Error::Empty("caps"));
    }
    let k = caps.len();
    let antipodes: Vec<SphericalRegion> = caps.iter().map(antipode_map).collect();
    let mut warnings = Vec::new();
    if !cfg.pipeline().is_isometry_invariant() {
        warnings.push(format!(
            "pipeline `{}` is not isometry invariant; antipodal descriptions may differ",
            cfg.pipeline()
        ));
    }
    let degenerate: Vec<usize> = (0..k).filter(|&i| caps[i].set_eq(&antipodes[i])).collect();
    for &i in &degenerate {
        warnings.push(format!("cap {i} equals its antipode; excluded"));
    }
    let members: Vec<Region> = caps
        .into_iter()
        .chain(antipodes)
        .map(SphericalRegion::into_region)
        .collect();
    let pairing = (0..2 * k).map(|i| (i + k) % (2 * k)).collect();
    let family = RegionFamily::from_regions(members)?.with_antipode_pairing(pairing)?;
    let result = find_matching_antipodal(&family, cfg)?;
    let matched = (0..k)
        .filter(|&i| result.get(i, i + k).is_some_and(|p| p.mismatch == 0.0))
        .count();
    let needed = k - degenerate.len();
    if needed == 0 {
        warnings.push("every cap is degenerate; pass is vacuous".into());
    }
    Ok(SphereVerification {
        passed: matched >= needed,
        matched_caps: matched,
        caps: k,
        degenerate_caps: degenerate,
        warnings,
        result,
    })
}

/// Sample size used by [`verify_strbut_on_sphere`] for `S¹` and `S²`.
pub fn default_sample_size(n: usize) -> usize {
    if n == 1 {
        720
    } else {
        2000
    }
}

/// Builds a negation-closed sample of `Sⁿ` (`n ∈ {1, 2}`), draws `caps`
/// caps centred on sample points with angular radius uniform in
/// `[10°, 80°]`, and checks each against its antipode with [`verify_caps`].
pub fn verify_strbut_on_sphere(
    n: usize,
    caps: usize,
    seed: u64,
    sample_size: Option<usize>,
    cfg: &ProximityConfig,
) -> Result<SphereVerification> {
    if !(n == 1 || n == 2) {
        return Err(Error::InvalidArgument(format!("sphere dimension must be 1 or 2, got {n}")));
    }
    if caps == 0 {
        return Err(Error::InvalidArgument("caps must be >= 1".into()));
    }
    let sample = sphere_sample(n, sample_size.unwrap_or_else(|| default_sample_size(n)), seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let generated = (0..caps)
        .map(|_| {
            let center = &sample[rng.random_range(0..sample.len())];
            let radius = rng.random_range(10.0f64..=80.0).to_radians();
            spherical_cap(&sample, center, radius)
        })
        .collect::<Result<Vec<_>>>()?;
    verify_caps(generated, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptors::DescriptorPipeline;
    use crate::geometry::{Point, SPHERE_RESOLUTION};

    fn cfg(p: &str) -> ProximityConfig {
        ProximityConfig::new(0.0, DescriptorPipeline::parse(p).unwrap()).unwrap()
    }

    fn square(x: f64, y: f64, side: usize) -> Region {
        Region::grid_block(&[x, y], &[side, side], 1.0).unwrap()
    }

    #[test]
    fn family_validation() {
        assert!(matches!(RegionFamily::new(vec![]), Err(Error::Empty(_))));
        let s = StringPath::from_vertices(vec![
            Point::new(vec![0.0, 0.0]).unwrap(),
            Point::new(vec![1.0, 0.0]).unwrap(),
        ])
        .unwrap();
        let mixed = vec![Member::Region(square(0.0, 0.0, 2)), Member::String(s)];
        assert!(matches!(RegionFamily::new(mixed), Err(Error::MixedKinds(..))));
        let single = RegionFamily::from_regions(vec![square(0.0, 0.0, 2)]).unwrap();
        assert!(find_matching_antipodal(&single, &cfg("area")).is_err());
    }

    #[test]
    fn pairing_must_be_involution() {
        let f = RegionFamily::from_regions(vec![square(0.0, 0.0, 2), square(5.0, 5.0, 2), square(9.0, 0.0, 1)]).unwrap();
        assert!(f.clone().with_antipode_pairing(vec![1, 0, 2]).is_ok());
        assert!(f.clone().with_antipode_pairing(vec![1, 2, 0]).is_err());
        assert!(f.with_antipode_pairing(vec![0, 1]).is_err());
    }

    #[test]
    fn cap_and_antipode_match() {
        let sample = sphere_sample(2, 400, 1).unwrap();
        let cap = spherical_cap(&sample, &sample[0], 0.6).unwrap();
        let anti = antipode_map(&cap);
        let f = RegionFamily::from_regions(vec![cap.into_region(), anti.into_region()]).unwrap();
        let r = find_matching_antipodal(&f, &cfg("area")).unwrap();
        assert_eq!(r.index_pairs(), vec![(0, 1)]);
        assert_eq!(r.pairs[0].mismatch, 0.0);
    }

    #[test]
    fn constant_pipeline_reports_every_antipodal_pair() {
        let f = RegionFamily::from_regions(vec![square(0.0, 0.0, 3), square(1.0, 1.0, 3), square(10.0, 0.0, 2)]).unwrap();
        let r = find_matching_antipodal(&f, &cfg("constant")).unwrap();
        assert_eq!(r.index_pairs(), vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn two_by_two_corners() {
        let t = Tiling::new(2, 2, 1.0).unwrap();
        let c = cfg("corner").with_pipeline(DescriptorPipeline::parse("corner").unwrap().with_tiling(t.clone()));
        let f = tiling_family(&t, 3).unwrap();
        let r = find_matching_antipodal(&f, &c).unwrap();
        assert_eq!(r.pairs.len(), 6);
        assert!(r.pairs.iter().all(|p| p.description_a.values() == [2.0] && p.mismatch == 0.0));
        assert_eq!(r.pairs, brute_force_oracle(&f, &c).unwrap().pairs);
    }

    #[test]
    fn oracle_simple_cases() {
        let f = RegionFamily::from_regions(vec![square(0.0, 0.0, 2), square(5.0, 0.0, 2)]).unwrap();
        assert_eq!(brute_force_oracle(&f, &cfg("area")).unwrap().pairs.len(), 1);
        let overlapping = RegionFamily::from_regions(vec![square(0.0, 0.0, 3), square(1.0, 1.0, 3), square(2.0, 0.0, 3)]).unwrap();
        assert!(brute_force_oracle(&overlapping, &cfg("area")).unwrap().pairs.is_empty());
        assert!(find_matching_antipodal(&overlapping, &cfg("area")).unwrap().pairs.is_empty());
    }

    #[test]
    fn worldsheet_family_uses_string_disjointness() {
        let mk = |x: f64| {
            let s = |y: f64| {
                StringPath::from_vertices(vec![
                    Point::new(vec![x, y]).unwrap(),
                    Point::new(vec![x + 1.0, y]).unwrap(),
                ])
                .unwrap()
            };
            Worldsheet::from_strings(vec![s(0.0), s(1.0)], 1e-9).unwrap()
        };
        let f = RegionFamily::from_worldsheets(vec![mk(0.0), mk(0.0), mk(4.0)]).unwrap();
        let c = cfg("length");
        let main = find_matching_antipodal(&f, &c).unwrap();
        let oracle = brute_force_oracle(&f, &c).unwrap();
        assert_eq!(main.index_pairs(), oracle.index_pairs());
        // Two copies of the same sheet still hold disjoint strings.
        assert_eq!(main.index_pairs(), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn sphere_witness_small() {
        let v = verify_strbut_on_sphere(2, 20, 3, Some(600), &cfg("area")).unwrap();
        assert!(v.passed, "{}", v.summary());
        assert_eq!(v.matched_caps, 20);
        let v1 = verify_strbut_on_sphere(1, 10, 3, None, &cfg("area")).unwrap();
        assert!(v1.passed);
        assert!(verify_strbut_on_sphere(3, 1, 0, None, &cfg("area")).is_err());
    }

    #[test]
    fn full_sphere_cap_is_degenerate() {
        let sample = sphere_sample(2, 100, 4).unwrap();
        let full = SphericalRegion::new(Region::new(sample, SPHERE_RESOLUTION).unwrap()).unwrap();
        let v = verify_caps(vec![full], &cfg("area")).unwrap();
        assert!(v.result.pairs.is_empty());
        assert_eq!(v.degenerate_caps, vec![0]);
        assert!(v.passed);
        assert!(v.warnings.iter().any(|w| w.contains("vacuous")));
        let sym = verify_caps(
            vec![SphericalRegion::new(Region::new(sphere_sample(2, 100, 4).unwrap(), SPHERE_RESOLUTION).unwrap()).unwrap()],
            &cfg("area").with_mode(AntipodalityMode::Symmdiff),
        )
        .unwrap();
        assert!(sym.result.pairs.is_empty() && sym.passed);
    }

    #[test]
    fn monotone_in_tolerance() {
        let regions: Vec<Region> = (0..8).map(|i| square(4.0 * i as f64, 0.0, 1 + i % 3)).collect();
        let f = RegionFamily::from_regions(regions).unwrap();
        let tight = find_matching_antipodal(&f, &cfg("area,diameter")).unwrap();
        let loose = find_matching_antipodal(&f, &cfg("area,diameter").with_tol(5.0).unwrap()).unwrap();
        for p in tight.index_pairs() {
            assert!(loose.contains(p.0, p.1));
        }
        assert!(loose.pairs.len() > tight.pairs.len());
    }
}
