//! Runs the axiom harness for two pipelines and prints the reports.

use strbut::descriptors::DescriptorPipeline;
use strbut::proximity::{check_axioms, ProximityConfig};

fn main() -> strbut::Result<()> {
    for spec in ["centroid", "area,diameter"] {
        let cfg = ProximityConfig::new(0.0, DescriptorPipeline::parse(spec)?)?;
        let report = check_axioms(7, 200, &cfg)?;
        println!("== {spec}");
        print!("{}", report.to_text());
        assert!(report.passed());
    }
    Ok(())
}
