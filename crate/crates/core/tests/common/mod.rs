#![allow(dead_code)]

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strbut::but::RegionFamily;
use strbut::descriptors::DescriptorPipeline;
use strbut::geometry::{AntipodalityMode, Point, Region};
use strbut::proximity::{random_region, ProximityConfig};

pub const PIPELINES: [&str; 5] = ["area", "area,diameter", "centroid", "constant", "diameter,centroid"];
pub const MODES: [AntipodalityMode; 3] = [
    AntipodalityMode::Disjoint,
    AntipodalityMode::Symmdiff,
    AntipodalityMode::Separable,
];

pub fn translate(r: &Region, dx: f64, dy: f64) -> Region {
    let moved = r
        .points()
        .iter()
        .map(|p| Point::new(vec![p.coords()[0] + dx, p.coords()[1] + dy]).unwrap())
        .collect();
    Region::new(moved, r.resolution()).unwrap()
}

/// Up to `max` lattice regions; about a third are translates of earlier
/// members so that matching descriptions are common.
pub fn random_regions(rng: &mut ChaCha8Rng, max: usize) -> Vec<Region> {
    let m = rng.random_range(2..=max);
    let mut regions: Vec<Region> = Vec::with_capacity(m);
    for _ in 0..m {
        if !regions.is_empty() && rng.random_bool(0.35) {
            let base = regions[rng.random_range(0..regions.len())].clone();
            let dx = rng.random_range(-25..=25) as f64;
            let dy = rng.random_range(-25..=25) as f64;
            regions.push(translate(&base, dx, dy));
        } else {
            regions.push(random_region(rng));
        }
    }
    regions
}

/// A family of at most `max` regions with a pipeline, mode and tolerance all
/// chosen from `seed`.
pub fn random_case(seed: u64, max: usize) -> (RegionFamily, ProximityConfig) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let regions = random_regions(&mut rng, max);
    let pipeline = DescriptorPipeline::parse(PIPELINES[(seed % 5) as usize]).unwrap();
    let tol = [0.0, 0.0, 0.5, 2.0][(seed % 4) as usize];
    let cfg = ProximityConfig::new(tol, pipeline)
        .unwrap()
        .with_mode(MODES[(seed % 3) as usize]);
    (RegionFamily::from_regions(regions).unwrap(), cfg)
}

pub fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_strbut"))
}
