//! Randomised checking of the proximity axiom systems on finite instances.
//!
//! Every trial draws its own generator from `(seed, trial)`, so trials can
//! run in parallel and the merged report is identical for a given seed.

use std::fmt::Write as _;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::relations::{
    descriptive_intersection, descriptively_strongly_near, near_descriptive, strongly_near_in,
    ProximityConfig,
};
use crate::descriptors::{phi_point, phi_region_set};
use crate::error::Result;
use crate::geometry::{interior, Point, Region};

/// Half-width of the integer lattice box random regions are drawn from.
pub const BOX_HALF_WIDTH: i32 = 10;
/// Largest random region.
pub const MAX_REGION_POINTS: usize = 50;
/// Largest family used for the union axioms.
pub const MAX_FAMILY: usize = 5;

/// Result of checking one axiom over many trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomOutcome {
    pub axiom: String,
    pub trials: u64,
    /// Trials whose antecedent held, so the implication was actually tested.
    pub exercised: u64,
    pub violations: u64,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub notes: Vec<String>,
    pub outcomes: Vec<AxiomOutcome>,
}

impl AxiomReport {
    pub fn total_violations(&self) -> u64 {
        self.outcomes.iter().map(|o| o.violations).sum()
    }

    pub fn passed(&self) -> bool {
        self.total_violations() == 0
    }

    pub fn outcome(&self, axiom: &str) -> Option<&AxiomOutcome> {
        self.outcomes.iter().find(|o| o.axiom == axiom)
    }

    /// Records one trial of `axiom`.
    pub fn record(&mut self, axiom: &str, exercised: bool, holds: bool, witness: impl FnOnce() -> String) {
        let idx = match self.outcomes.iter().position(|o| o.axiom == axiom) {
            Some(i) => i,
            None => {
                self.outcomes.push(AxiomOutcome {
                    axiom: axiom.to_string(),
                    trials: 0,
                    exercised: 0,
                    violations: 0,
                    counterexample: None,
                });
                self.outcomes.len() - 1
            }
        };
        let o = &mut self.outcomes[idx];
        o.trials += 1;
        o.exercised += u64::from(exercised);
        if !holds {
            o.violations += 1;
            if o.counterexample.is_none() {
                o.counterexample = Some(witness());
            }
        }
    }

    /// Appends `other`'s counts. Earlier counterexamples win, so merging in
    /// trial order is deterministic.
    pub fn merge(&mut self, other: AxiomReport) {
        for note in other.notes {
            if !self.notes.contains(&note) {
                self.notes.push(note);
            }
        }
        for o in other.outcomes {
            match self.outcomes.iter_mut().find(|m| m.axiom == o.axiom) {
                Some(m) => {
                    m.trials += o.trials;
                    m.exercised += o.exercised;
                    m.violations += o.violations;
                    if m.counterexample.is_none() {
                        m.counterexample = o.counterexample;
                    }
                }
                None => self.outcomes.push(o),
            }
        }
    }

    /// One line per axiom, preceded by `#` note lines.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for n in &self.notes {
            let _ = writeln!(s, "# {n}");
        }
        for o in &self.outcomes {
            let status = if o.violations == 0 { "ok" } else { "VIOLATED" };
            let _ = write!(
                s,
                "{:<16} trials={} exercised={} violations={} {}",
                o.axiom, o.trials, o.exercised, o.violations, status
            );
            if let Some(c) = &o.counterexample {
                let _ = write!(s, " counterexample: {c}");
            }
            s.push('\n');
        }
        let _ = writeln!(s, "total violations={}", self.total_violations());
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is always serialisable")
    }
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn lattice_point<R: Rng>(rng: &mut R) -> Point {
    let x = rng.random_range(-BOX_HALF_WIDTH..=BOX_HALF_WIDTH) as f64;
    let y = rng.random_range(-BOX_HALF_WIDTH..=BOX_HALF_WIDTH) as f64;
    Point::new(vec![x, y]).expect("lattice point is finite")
}

fn in_box(p: &Point) -> bool {
    p.coords().iter().all(|c| c.abs() <= BOX_HALF_WIDTH as f64)
}

/// A random region of 1 to 50 lattice points in `[-10, 10]²`: scattered
/// points, a filled rectangle, or a small rectangle with scattered points.
pub fn random_region<R: Rng>(rng: &mut R) -> Region {
    let mut points = Vec::new();
    let rect = |rng: &mut R, max_side: i32, points: &mut Vec<Point>| {
        let w = rng.random_range(1..=max_side);
        let h = rng.random_range(1..=max_side);
        let x0 = rng.random_range(-BOX_HALF_WIDTH..=BOX_HALF_WIDTH - w + 1);
        let y0 = rng.random_range(-BOX_HALF_WIDTH..=BOX_HALF_WIDTH - h + 1);
        for i in 0..w {
            for j in 0..h {
                points.push(Point::new(vec![(x0 + i) as f64, (y0 + j) as f64]).unwrap());
            }
        }
    };
    match rng.random_range(0..3) {
        0 => {
            let n = rng.random_range(1..=MAX_REGION_POINTS);
            points.extend((0..n).map(|_| lattice_point(rng)));
        }
        1 => rect(rng, 7, &mut points),
        _ => {
            rect(rng, 5, &mut points);
            let n = rng.random_range(0..=MAX_REGION_POINTS - points.len());
            points.extend((0..n).map(|_| lattice_point(rng)));
        }
    }
    Region::new(points, 1.0).expect("nonempty lattice region")
}

/// A region related to `base`: itself, a small translate of it (clipped to
/// the box), or a fresh random region.
fn related_region<R: Rng>(rng: &mut R, base: &Region) -> Region {
    match rng.random_range(0..10) {
        0..=1 => base.clone(),
        2..=5 => {
            let dx = rng.random_range(-2..=2) as f64;
            let dy = rng.random_range(-2..=2) as f64;
            let moved: Vec<Point> = base
                .points()
                .iter()
                .map(|p| Point::new(vec![p.coords()[0] + dx, p.coords()[1] + dy]).unwrap())
                .filter(in_box)
                .collect();
            if moved.is_empty() {
                random_region(rng)
            } else {
                Region::new(moved, 1.0).unwrap()
            }
        }
        _ => random_region(rng),
    }
}

/// The whole lattice box, used as the universe `X`.
pub fn lattice_universe() -> Region {
    let side = (2 * BOX_HALF_WIDTH + 1) as usize;
    let lo = -BOX_HALF_WIDTH as f64;
    Region::grid_block(&[lo, lo], &[side, side], 1.0).expect("box is valid")
}

fn singleton(p: &Point) -> Region {
    Region::new(vec![p.clone()], 1.0).expect("singleton is valid")
}

fn union_all(family: &[Region]) -> Result<Region> {
    let mut acc = family[0].clone();
    for r in &family[1..] {
        acc = acc.union(r)?;
    }
    Ok(acc)
}

struct Trial {
    a: Region,
    b: Region,
    c: Region,
    family: Vec<Region>,
    x: Point,
    y: Point,
}

impl Trial {
    fn draw(seed: u64, index: u64) -> Self {
        let mut rng = trial_rng(seed, index);
        let a = random_region(&mut rng);
        let b = related_region(&mut rng, &a);
        let c = related_region(&mut rng, &b);
        let n = rng.random_range(1..=MAX_FAMILY);
        let family = (0..n).map(|_| related_region(&mut rng, &a)).collect();
        // Bias x towards int(A) so the singleton axioms get exercised.
        let int_a = interior(&a);
        let x = if !int_a.is_empty() && rng.random_bool(0.5) {
            int_a.points().choose(&mut rng).unwrap().clone()
        } else {
            lattice_point(&mut rng)
        };
        let y = if rng.random_bool(0.3) {
            x.clone()
        } else {
            lattice_point(&mut rng)
        };
        Self { a, b, c, family, x, y }
    }

    fn describe(&self) -> String {
        format!("A={} B={} C={} x={} y={}", self.a, self.b, self.c, self.x, self.y)
    }
}

fn descriptive_trial(t: &Trial, cfg: &ProximityConfig, report: &mut AxiomReport) -> Result<()> {
    let (a, b, c) = (&t.a, &t.b, &t.c);
    let empty = Region::empty(2, 1.0)?;
    let near = |p: &Region, q: &Region| near_descriptive(p, q, cfg);
    let w = || t.describe();

    report.record("dP0", true, !near(&empty, a)? && !near(a, &empty)?, w);

    report.record("dP1", true, near(a, b)? == near(b, a)?, w);

    let inter_nonempty = !descriptive_intersection(a, b, cfg)?.is_empty();
    let ab = near(a, b)?;
    report.record("dP2", inter_nonempty, !inter_nonempty || ab, w);

    let union = union_all(&t.family)?;
    let any = t.family.iter().map(|f| near(a, f)).collect::<Result<Vec<_>>>()?;
    report.record("dP3", true, near(a, &union)? == any.iter().any(|&v| v), w);

    let each_b = b
        .points()
        .iter()
        .map(|p| near(&singleton(p), c))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|v| v);
    let antecedent = ab && each_b;
    report.record("dP4", antecedent, !antecedent || near(a, c)?, w);

    let (sx, sy) = (singleton(&t.x), singleton(&t.y));
    let xy = near(&sx, &sy)?;
    let fx = phi_point(&t.x, cfg.pipeline())?;
    let fy = phi_point(&t.y, cfg.pipeline())?;
    report.record("dP5", xy, !xy || fx.linf_distance(&fy) <= cfg.tol(), w);

    report.record("Prop1", ab, !ab || inter_nonempty, w);
    report.record("Prop1-converse", inter_nonempty, !inter_nonempty || ab, w);
    Ok(())
}

fn strong_trial(t: &Trial, cfg: &ProximityConfig, report: &mut AxiomReport) -> Result<()> {
    let (a, b) = (&t.a, &t.b);
    let empty = Region::empty(2, 1.0)?;
    let sn = |p: &Region, q: &Region| strongly_near_in(p, q, cfg);
    let w = || t.describe();

    let mut snn0 = !sn(&empty, a)? && !sn(a, &empty)?;
    if let Some(x) = cfg.universe() {
        snn0 &= sn(x, a)? && sn(a, x)?;
    }
    report.record("snN0", true, snn0, w);

    let ab = sn(a, b)?;
    report.record("snN1", true, ab == sn(b, a)?, w);

    report.record("snN2", ab, !ab || !a.intersection(b)?.is_empty(), w);

    let union = union_all(&t.family)?;
    let mut hit = false;
    for f in &t.family {
        if !interior(f).is_empty() && sn(a, f)? {
            hit = true;
            break;
        }
    }
    report.record("snN3", hit, !hit || sn(a, &union)?, w);

    let ints = !interior(a).intersection(&interior(b))?.is_empty();
    report.record("snN4", ints, !ints || ab, w);

    let x_in = interior(a).contains(&t.x);
    report.record("snN5", x_in, !x_in || sn(&singleton(&t.x), a)?, w);

    let same = singleton(&t.x).set_eq(&singleton(&t.y));
    report.record("snN6", same, sn(&singleton(&t.x), &singleton(&t.y))? == same, w);
    Ok(())
}

fn descriptive_strong_trial(t: &Trial, cfg: &ProximityConfig, report: &mut AxiomReport) -> Result<()> {
    let (a, b) = (&t.a, &t.b);
    let empty = Region::empty(2, 1.0)?;
    let dsn = |p: &Region, q: &Region| descriptively_strongly_near(p, q, cfg);
    let w = || t.describe();

    let mut p0 = !dsn(&empty, a)? && !dsn(a, &empty)?;
    if let Some(x) = cfg.universe() {
        p0 &= dsn(x, a)? && dsn(a, x)?;
    }
    report.record("dsnP0", true, p0, w);

    let ab = dsn(a, b)?;
    report.record("dsnP1", true, ab == dsn(b, a)?, w);

    report.record(
        "dsnP2",
        ab,
        !ab || !descriptive_intersection(a, b, cfg)?.is_empty(),
        w,
    );

    let int_inter = !descriptive_intersection(&interior(a), &interior(b), cfg)?.is_empty();
    report.record("dsnP4", int_inter, !int_inter || ab, w);

    let fx = phi_point(&t.x, cfg.pipeline())?;
    let int_set = phi_region_set(&interior(a), cfg.pipeline())?;
    let in_int = int_set.iter().any(|v| fx.linf_distance(v) <= cfg.tol());
    report.record("dsnP5", in_int, !in_int || dsn(&singleton(&t.x), a)?, w);

    let fy = phi_point(&t.y, cfg.pipeline())?;
    let matching = fx.linf_distance(&fy) <= cfg.tol();
    report.record(
        "dsnP6",
        matching,
        dsn(&singleton(&t.x), &singleton(&t.y))? == matching,
        w,
    );
    Ok(())
}

fn notes(cfg: &ProximityConfig) -> Vec<String> {
    vec![
        "finite instances only: regions of 1-50 lattice points in [-10,10]^2, unions over families of <= 5 sets".into(),
        "snN0/dsnP0 read as: the empty set is near nothing; the universe X is near every nonempty set".into(),
        format!("pipeline={} tol={}", cfg.pipeline(), cfg.tol()),
    ]
}

fn run_trials<F>(seed: u64, trials: u64, cfg: &ProximityConfig, body: F) -> Result<AxiomReport>
where
    F: Fn(&Trial, &ProximityConfig, &mut AxiomReport) -> Result<()> + Sync,
{
    let cfg = if cfg.universe().is_none() {
        cfg.clone().with_universe(lattice_universe())
    } else {
        cfg.clone()
    };
    let per_trial: Vec<AxiomReport> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let t = Trial::draw(seed, i);
            let mut r = AxiomReport::default();
            body(&t, &cfg, &mut r)?;
            Ok(r)
        })
        .collect::<Result<_>>()?;
    let mut report = AxiomReport {
        notes: notes(&cfg),
        outcomes: Vec::new(),
    };
    for r in per_trial {
        report.merge(r);
    }
    Ok(report)
}

/// Checks dP0–dP5, snN0–snN6, dsnP0–dsnP6 (no dsnP3 exists) and
/// the near-iff-nonempty-intersection property over `trials` random
/// instances.
pub fn check_axioms(seed: u64, trials: u64, cfg: &ProximityConfig) -> Result<AxiomReport> {
    run_trials(seed, trials.max(1), cfg, |t, cfg, r| {
        descriptive_trial(t, cfg, r)?;
        strong_trial(t, cfg, r)?;
        descriptive_strong_trial(t, cfg, r)
    })
}

/// `A δ_Φ B ⇒ A ∩_Φ B ≠ ∅` and its converse over random instances.
pub fn check_proposition1(seed: u64, trials: u64, cfg: &ProximityConfig) -> Result<AxiomReport> {
    run_trials(seed, trials.max(1), cfg, |t, cfg, r| {
        let ab = near_descriptive(&t.a, &t.b, cfg)?;
        let inter = !descriptive_intersection(&t.a, &t.b, cfg)?.is_empty();
        r.record("Prop1", ab, !ab || inter, || t.describe());
        r.record("Prop1-converse", inter, !inter || ab, || t.describe());
        Ok(())
    })
}

/// Which relation a continuity check preserves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContinuityMode {
    /// `A δ̂ B ⇒ f(A) δ̂ f(B)` (s.p.c. / Re.s.p.c.).
    SpatialStrong,
    /// `A δ_Φ B ⇒ f(A) δ_Φ f(B)` (Re.d.p.c.).
    Descriptive,
    /// `A δ̂_Φ B ⇒ f(A) δ̂_Φ f(B)` (Re.d.s.p.c.).
    DescriptiveStrong,
}

impl ContinuityMode {
    fn relation(self, a: &Region, b: &Region, cfg: &ProximityConfig) -> Result<bool> {
        match self {
            Self::SpatialStrong => strongly_near_in(a, b, cfg),
            Self::Descriptive => near_descriptive(a, b, cfg),
            Self::DescriptiveStrong => descriptively_strongly_near(a, b, cfg),
        }
    }

    fn label(self) -> &'static str {
        match self {
            Self::SpatialStrong => "spc",
            Self::Descriptive => "re-dpc",
            Self::DescriptiveStrong => "re-dspc",
        }
    }
}

/// Sample-level continuity certificate for a region map: for every pair
/// whose source relation holds, the images must be related too.
pub fn spc_check<F>(f: F, pairs: &[(Region, Region)], mode: ContinuityMode, cfg: &ProximityConfig) -> Result<AxiomReport>
where
    F: Fn(&Region) -> Region,
{
    let mut report = AxiomReport {
        notes: vec![format!(
            "sample-level certificate over {} supplied pairs",
            pairs.len()
        )],
        outcomes: Vec::new(),
    };
    for (i, (a, b)) in pairs.iter().enumerate() {
        let source = mode.relation(a, b, cfg)?;
        let holds = if source {
            let (fa, fb) = (f(a), f(b));
            mode.relation(&fa, &fb, cfg)?
        } else {
            true
        };
        report.record(mode.label(), source, holds, || format!("pair {i}: A={a} B={b}"));
    }
    if pairs.is_empty() {
        report.outcomes.push(AxiomOutcome {
            axiom: mode.label().into(),
            trials: 0,
            exercised: 0,
            violations: 0,
            counterexample: None,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptors::{DescriptorPipeline, Tiling};

    fn cfg(p: &str) -> ProximityConfig {
        ProximityConfig::new(0.0, DescriptorPipeline::parse(p).unwrap()).unwrap()
    }

    #[test]
    fn random_regions_respect_bounds() {
        let mut rng = trial_rng(1, 0);
        for _ in 0..200 {
            let r = random_region(&mut rng);
            assert!(!r.is_empty() && r.len() <= MAX_REGION_POINTS);
            assert!(r.points().iter().all(in_box));
        }
    }

    #[test]
    fn centroid_pipeline_has_no_violations() {
        let report = check_axioms(7, 200, &cfg("centroid")).unwrap();
        assert!(report.passed(), "{}", report.to_text());
        for name in ["dP2", "dP4", "snN2", "snN4", "snN5", "snN6", "dsnP4", "dsnP5"] {
            assert!(report.outcome(name).unwrap().exercised > 0, "{name} never exercised");
        }
    }

    #[test]
    fn corner_pipeline_has_no_violations() {
        // A 3x3 tiling of 7-wide cells covering the lattice box, so many
        // distinct points share a corner level.
        let tiling = Tiling::new(3, 3, 7.0).unwrap().with_origin([-10.5, -10.5]);
        let pipeline = DescriptorPipeline::parse("corner").unwrap().with_tiling(tiling);
        let c = ProximityConfig::new(0.0, pipeline).unwrap();
        let report = check_axioms(3, 150, &c).unwrap();
        assert!(report.passed(), "{}", report.to_text());
        assert!(report.outcome("dP4").unwrap().exercised > 0);
        assert!(report.outcome("dsnP6").unwrap().exercised > 0);
    }

    #[test]
    fn report_is_deterministic() {
        let a = check_axioms(11, 60, &cfg("centroid")).unwrap();
        let b = check_axioms(11, 60, &cfg("centroid")).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn proposition1_holds_at_tolerance() {
        let c = cfg("centroid").with_tol(1.5).unwrap();
        let r = check_proposition1(5, 300, &c).unwrap();
        assert!(r.passed());
        assert!(r.outcome("Prop1").unwrap().exercised > 0);
    }

    #[test]
    fn broken_relation_is_reported() {
        let mut r = AxiomReport::default();
        r.record("x", true, true, || unreachable!());
        r.record("x", true, false, || "first".into());
        r.record("x", true, false, || "second".into());
        assert_eq!(r.outcome("x").unwrap().violations, 2);
        assert_eq!(r.outcome("x").unwrap().counterexample.as_deref(), Some("first"));
        assert!(!r.passed());
        assert!(r.to_text().contains("VIOLATED"));
    }

    #[test]
    fn spc_identity_and_constant() {
        let mut rng = trial_rng(2, 0);
        let pairs: Vec<_> = (0..50)
            .map(|_| {
                let a = random_region(&mut rng);
                let b = related_region(&mut rng, &a);
                (a, b)
            })
            .collect();
        let c = cfg("centroid");
        for mode in [
            ContinuityMode::SpatialStrong,
            ContinuityMode::Descriptive,
            ContinuityMode::DescriptiveStrong,
        ] {
            assert!(spc_check(|r| r.clone(), &pairs, mode, &c).unwrap().passed());
        }
        let blob = Region::grid_block(&[0.0, 0.0], &[3, 3], 1.0).unwrap();
        let r = spc_check(|_| blob.clone(), &pairs, ContinuityMode::SpatialStrong, &c).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn spc_detects_a_map_that_breaks_nearness() {
        let a = Region::grid_block(&[0.0, 0.0], &[3, 3], 1.0).unwrap();
        let pairs = vec![(a.clone(), a.clone())];
        let scatter = |r: &Region| {
            Region::new(
                r.points()
                    .iter()
                    .map(|p| Point::new(p.coords().iter().map(|c| c * 2.0).collect()).unwrap())
                    .collect(),
                1.0,
            )
            .unwrap()
        };
        let r = spc_check(scatter, &pairs, ContinuityMode::SpatialStrong, &cfg("centroid")).unwrap();
        assert_eq!(r.total_violations(), 1);
    }
}
