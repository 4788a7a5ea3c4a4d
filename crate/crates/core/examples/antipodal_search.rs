//! Matching-antipodal search on a small family, checked against the
//! exhaustive oracle, under each antipodality mode.

use strbut::but::{brute_force_oracle, find_matching_antipodal, RegionFamily};
use strbut::descriptors::DescriptorPipeline;
use strbut::geometry::{AntipodalityMode, Region};
use strbut::proximity::ProximityConfig;

fn main() -> strbut::Result<()> {
    let squares = [(0.0, 0.0, 3), (1.0, 1.0, 3), (10.0, 0.0, 3), (0.0, 10.0, 2), (20.0, 20.0, 2)];
    let regions = squares
        .iter()
        .map(|&(x, y, s)| Region::grid_block(&[x, y], &[s, s], 1.0))
        .collect::<strbut::Result<Vec<_>>>()?;
    let family = RegionFamily::from_regions(regions)?;

    for mode in [AntipodalityMode::Disjoint, AntipodalityMode::Symmdiff, AntipodalityMode::Separable] {
        let cfg = ProximityConfig::new(0.0, DescriptorPipeline::parse("area,diameter")?)?.with_mode(mode);
        let found = find_matching_antipodal(&family, &cfg)?;
        let oracle = brute_force_oracle(&family, &cfg)?;
        assert_eq!(found.index_pairs(), oracle.index_pairs());
        println!("{mode:<9} {} {:?}", found.summary(), found.index_pairs());
    }
    Ok(())
}
