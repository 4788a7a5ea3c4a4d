//! Synthetic EEG trace through the whole pipeline: twist embedding, mirror
//! matching, and wrapping onto a ring torus.

use strbut::descriptors::DescriptorPipeline;
use strbut::eeg::{
    embed3d, match_antipodal_traces, mirror_trace, synthetic_trace, wrap_traces_on_torus, write_embedded_csv,
};
use strbut::proximity::ProximityConfig;
use strbut::worldsheet::RingTorus;

fn main() -> strbut::Result<()> {
    let trace = synthetic_trace(100, 0.05)?;
    let lifted = embed3d(&trace)?;
    println!("lifted {} samples, length {:.6}", lifted.vertices().len(), lifted.arc_length());

    let mut csv = Vec::new();
    write_embedded_csv(&trace, &mut csv)?;
    for line in String::from_utf8_lossy(&csv).lines().take(4) {
        println!("  {line}");
    }

    let cfg = ProximityConfig::new(0.0, DescriptorPipeline::parse("length")?)?;
    let found = match_antipodal_traces(&[trace.clone(), mirror_trace(&trace)], &cfg)?;
    for p in &found.pairs {
        println!("trace {} ~ trace {} mismatch {}", p.a, p.b, p.mismatch);
    }

    let torus = RingTorus::new(3.0, 1.0)?;
    let traces: Vec<_> = (1..=4).map(|k| synthetic_trace(40 * k, 0.1)).collect::<strbut::Result<_>>()?;
    let sheet = wrap_traces_on_torus(&traces, &torus)?;
    let worst = sheet
        .strings()
        .iter()
        .flat_map(|s| s.vertices())
        .map(|p| torus.implicit_residual(p))
        .fold(0.0, f64::max);
    println!("{} strings on the torus, max residual {worst:e}", sheet.strings().len());
    Ok(())
}
