//! Corner levels on square tilings: level 2 marks exactly the corners, and
//! every pair of corner cells is a matching antipodal pair.

use strbut::but::{find_matching_antipodal, tiling_family};
use strbut::descriptors::{corner_level, DescriptorPipeline, Tiling};
use strbut::proximity::ProximityConfig;

fn main() -> strbut::Result<()> {
    for side in [2, 5] {
        let tiling = Tiling::new(side, side, 1.0)?;
        println!("{side}x{side} levels:");
        for row in (0..side).rev() {
            let line: Vec<String> = (0..side)
                .map(|col| {
                    let id = strbut::descriptors::CellId { row, col };
                    corner_level(id, &tiling).map(|v| v.values()[0].to_string())
                })
                .collect::<strbut::Result<_>>()?;
            println!("  {}", line.join(" "));
        }
        let pipeline = DescriptorPipeline::parse("corner")?.with_tiling(tiling.clone());
        let cfg = ProximityConfig::new(0.0, pipeline)?;
        let found = find_matching_antipodal(&tiling_family(&tiling, 3)?, &cfg)?;
        let corner_pairs = found
            .pairs
            .iter()
            .filter(|p| p.description_a.values() == [2.0])
            .count();
        println!("  {} corner pairs of {} matched pairs", corner_pairs, found.pairs.len());
    }
    Ok(())
}
