//! Caps on a sampled sphere always find their antipode with the same
//! description.

use strbut::but::{find_matching_antipodal, verify_strbut_on_sphere, RegionFamily};
use strbut::descriptors::DescriptorPipeline;
use strbut::geometry::{antipode_map, sphere_sample, spherical_cap};
use strbut::proximity::ProximityConfig;

fn main() -> strbut::Result<()> {
    let cfg = ProximityConfig::new(0.0, DescriptorPipeline::parse("area")?)?;

    // One cap by hand.
    let sample = sphere_sample(2, 1000, 11)?;
    let cap = spherical_cap(&sample, &sample[0], 40f64.to_radians())?;
    let anti = antipode_map(&cap);
    println!("cap has {} points, antipode has {}", cap.len(), anti.len());
    let family = RegionFamily::from_regions(vec![cap.into_region(), anti.into_region()])?;
    let found = find_matching_antipodal(&family, &cfg)?;
    println!("{}", found.summary());

    for (n, caps) in [(1, 25), (2, 100)] {
        let v = verify_strbut_on_sphere(n, caps, 3, None, &cfg)?;
        println!("S^{n}: {}", v.summary());
    }
    Ok(())
}
