//! Acceptance criteria, one printed PASS/FAIL line each.

mod common;

use std::f64::consts::{PI, TAU};
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use strbut::but::{brute_force_oracle, find_matching_antipodal, tiling_family, verify_strbut_on_sphere};
use strbut::descriptors::{corner_level, CellId, DescriptorPipeline, Tiling};
use strbut::eeg::{
    match_antipodal_traces, mirror_trace, synthetic_trace, twist, twist_of_time, wrap_traces_on_torus,
    write_embedded_csv,
};
use strbut::geometry::csv_io::write_region;
use strbut::proximity::ProximityConfig;
use strbut::worldsheet::{
    bend_to_torus, roll_to_cylinder, torus_area_quadrature, torus_surface_area, torus_volume,
    torus_volume_quadrature, FlatSheet, RingTorus,
};

const AXIOM_TIME_LIMIT: Duration = Duration::from_secs(30);
const AXIOMS: [&str; 21] = [
    "dP0", "dP1", "dP2", "dP3", "dP4", "dP5", "Prop1", "Prop1-converse", "snN0", "snN1", "snN2", "snN3",
    "snN4", "snN5", "snN6", "dsnP0", "dsnP1", "dsnP2", "dsnP4", "dsnP5", "dsnP6",
];
const ORACLE_SEEDS: u64 = 50;
const ORACLE_MAX_REGIONS: usize = 30;
const TORI: [(f64, f64); 3] = [(2.0, 1.0), (3.0, 0.5), (10.0, 1.0)];
const AREA_N: usize = 512;
const AREA_REL_TOL: f64 = 1e-6;
const VOLUME_N: usize = 256;
const VOLUME_REL_TOL: f64 = 1e-4;
const TORUS_TIME_LIMIT: Duration = Duration::from_secs(10);
const TWIST_ABS_TOL: f64 = 1e-12;
/// `2πrh` with `r = w/2π` rounds twice; the identity is exact symbolically.
const AREA_IDENTITY_REL_TOL: f64 = 2.0 * f64::EPSILON;
const SEAM_TOL: f64 = 1e-12;
const RESIDUAL_TOL: f64 = 1e-9;

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn FnOnce() -> Check + 'a>);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn strbut(args: &[&str], threads: &str) -> Output {
    Command::new(common::bin())
        .args(args)
        .env("STRBUT_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn axiom_suite() -> Check {
    let start = Instant::now();
    let out = strbut(&["axioms-check", "--trials", "500", "--seed", "7", "--tol", "0"], "0");
    let elapsed = start.elapsed();
    let text = stdout(&out);
    ensure(out.status.code() == Some(0), format!("exit {:?}\n{text}", out.status.code()))?;
    ensure(text.contains("total violations=0"), text.clone())?;
    for axiom in AXIOMS {
        let line = text
            .lines()
            .find(|l| l.split_whitespace().next() == Some(axiom))
            .ok_or(format!("{axiom} missing from report"))?;
        ensure(line.contains("trials=500") && line.contains("violations=0 ok"), line.to_string())?;
    }
    ensure(elapsed < AXIOM_TIME_LIMIT, format!("took {elapsed:?}"))?;
    Ok(format!("{} axioms, 0 violations, {:.2}s", AXIOMS.len(), elapsed.as_secs_f64()))
}

fn sphere_witness() -> Check {
    let mut details = Vec::new();
    for (n, caps) in [("2", "100"), ("1", "25")] {
        let out = strbut(&["verify-sphere", "--n", n, "--caps", caps], "0");
        let text = stdout(&out);
        ensure(out.status.code() == Some(0) && text.starts_with("PASS"), format!("S^{n}: {text}"))?;
        let cfg = ProximityConfig::new(0.0, DescriptorPipeline::parse("area").unwrap()).unwrap();
        let k: usize = caps.parse().unwrap();
        let v = verify_strbut_on_sphere(n.parse().unwrap(), k, 0, None, &cfg).unwrap();
        let exact = (0..k).filter(|&i| v.result.get(i, i + k).is_some_and(|p| p.mismatch == 0.0)).count();
        ensure(exact == k - v.degenerate_caps.len(), format!("S^{n}: {exact}/{k} caps exact"))?;
        details.push(format!("S^{n} {exact}/{k}"));
    }
    Ok(details.join(", "))
}

fn oracle_equivalence() -> Check {
    let mut discrepancies = 0;
    let mut total_pairs = 0;
    for seed in 0..ORACLE_SEEDS {
        let (family, cfg) = common::random_case(seed, ORACLE_MAX_REGIONS);
        ensure(family.len() <= ORACLE_MAX_REGIONS, "family too large")?;
        let main = find_matching_antipodal(&family, &cfg).unwrap();
        let oracle = brute_force_oracle(&family, &cfg).unwrap();
        if main.pairs != oracle.pairs {
            discrepancies += 1;
            eprintln!("seed {seed}: main {:?} oracle {:?}", main.index_pairs(), oracle.index_pairs());
        }
        total_pairs += oracle.pairs.len();
    }
    ensure(discrepancies == 0, format!("{discrepancies} families disagree"))?;
    Ok(format!("{ORACLE_SEEDS} families, {total_pairs} pairs, 0 discrepancies"))
}

fn torus_quadrature() -> Check {
    let start = Instant::now();
    let mut worst = (0.0f64, 0.0f64);
    for (c, r) in TORI {
        let t = RingTorus::new(c, r).unwrap();
        let area = torus_surface_area(&t);
        let vol = torus_volume(&t);
        ensure(area == 4.0 * PI * PI * c * r && vol == 2.0 * PI * PI * c * r * r, "closed forms")?;
        let ea = (torus_area_quadrature(&t, AREA_N).unwrap() - area).abs() / area;
        let ev = (torus_volume_quadrature(&t, VOLUME_N).unwrap() - vol).abs() / vol;
        ensure(ea <= AREA_REL_TOL, format!("({c},{r}) area rel err {ea:e}"))?;
        ensure(ev <= VOLUME_REL_TOL, format!("({c},{r}) volume rel err {ev:e}"))?;
        worst = (worst.0.max(ea), worst.1.max(ev));
    }
    let elapsed = start.elapsed();
    ensure(elapsed < TORUS_TIME_LIMIT, format!("took {elapsed:?}"))?;
    Ok(format!(
        "max rel err area {:.1e} volume {:.1e}, {:.2}s",
        worst.0,
        worst.1,
        elapsed.as_secs_f64()
    ))
}

fn twist_golden() -> Check {
    let cases = [
        ("twist(0,1)", twist(0.0, 1.0), 0.0),
        ("twist(0,0)", twist(0.0, 0.0), 1.2),
        ("twist(pi/10,-1)", twist(PI / 10.0, -1.0), 0.0),
        ("twist(pi/10,0)", twist(PI / 10.0, 0.0), 0.0),
        ("twist(pi/10,1)", twist(PI / 10.0, 1.0), 0.0),
        ("twist_of_time(0)", twist_of_time(0.0), 0.0),
    ];
    let mut worst: f64 = 0.0;
    for (name, got, want) in cases {
        let err = (got - want).abs();
        ensure(err <= TWIST_ABS_TOL, format!("{name} = {got}"))?;
        worst = worst.max(err);
    }
    Ok(format!("{} values, max abs err {worst:.1e}", cases.len()))
}

fn geometry_conservation() -> Check {
    let mut worst_area: f64 = 0.0;
    let mut worst_seam: f64 = 0.0;
    for w in [TAU, 1.0, 3.0, 0.1, 10.0, 17.5] {
        for h in [1.0, 20.0, 0.3] {
            let sheet = FlatSheet::new(w, h, 5).unwrap();
            let cyl = roll_to_cylinder(&sheet);
            let diff = (TAU * cyl.radius() * cyl.height() - w * h).abs();
            if w == TAU {
                ensure(diff == 0.0, format!("w=2π area gap {diff:e}"))?;
            }
            worst_area = worst_area.max(diff / (w * h));
            for k in 0..=10 {
                let t = h * k as f64 / 10.0;
                worst_seam = worst_seam.max(cyl.map(0.0, t).distance(&cyl.map(w, t)));
            }
        }
    }
    ensure(worst_area <= AREA_IDENTITY_REL_TOL, format!("area identity rel gap {worst_area:e}"))?;
    ensure(worst_seam <= SEAM_TOL, format!("seam gap {worst_seam:e}"))?;
    for r in [0.5, 1.0, 3.0] {
        ensure(bend_to_torus(r, TAU * r).is_err(), "h = 2πr accepted")?;
        ensure(bend_to_torus(r, 0.5 * TAU * r).is_err(), "h < 2πr accepted")?;
        ensure(bend_to_torus(r, 1.01 * TAU * r).is_ok(), "h > 2πr rejected")?;
    }
    Ok(format!("area rel gap {worst_area:.1e}, seam {worst_seam:.1e}, h <= 2πr rejected"))
}

fn corner_tilings() -> Check {
    let mut details = Vec::new();
    for side in [2, 5] {
        let tiling = Tiling::new(side, side, 1.0).unwrap();
        let mut corners = Vec::new();
        for id in tiling.cells() {
            let level = corner_level(id, &tiling).unwrap().values()[0];
            let is_corner = (id.row == 0 || id.row == side - 1) && (id.col == 0 || id.col == side - 1);
            ensure(
                (level == 2.0) == is_corner && (is_corner || level > 2.0),
                format!("{side}x{side} cell {id:?} level {level}"),
            )?;
            if is_corner {
                corners.push(id);
            }
        }
        ensure(corners.len() == 4, "four corners")?;
        let pipeline = DescriptorPipeline::parse("corner").unwrap().with_tiling(tiling.clone());
        let cfg = ProximityConfig::new(0.0, pipeline).unwrap();
        let result = find_matching_antipodal(&tiling_family(&tiling, 3).unwrap(), &cfg).unwrap();
        let index = |id: CellId| id.row * side + id.col;
        for (i, a) in corners.iter().enumerate() {
            for b in &corners[i + 1..] {
                let p = result
                    .get(index(*a), index(*b))
                    .ok_or(format!("{side}x{side} corner pair {a:?} {b:?} missing"))?;
                ensure(p.mismatch == 0.0, "corner mismatch")?;
            }
        }
        details.push(format!("{side}x{side} 6/6"));
    }
    Ok(details.join(", "))
}

fn eeg_end_to_end(dir: &Path) -> Check {
    let trace = synthetic_trace(100, 0.05).unwrap();
    let path = dir.join("embedded.csv");
    write_embedded_csv(&trace, fs::File::create(&path).unwrap()).unwrap();
    let mut rdr = csv::Reader::from_path(&path).unwrap();
    ensure(rdr.headers().unwrap() == vec!["t", "x", "z", "twist"], "header")?;
    let rows: Vec<Vec<f64>> = rdr
        .records()
        .map(|r| r.unwrap().iter().map(|f| f.parse().unwrap()).collect())
        .collect();
    ensure(rows.len() == 100, format!("{} rows", rows.len()))?;
    for (row, s) in rows.iter().zip(trace.samples()) {
        ensure(row[0] == s.t && row[1] == s.x && row[2] == s.z, "xz projection differs")?;
        ensure(row[3] == twist(s.x, s.z), "twist column differs")?;
    }
    let cfg = ProximityConfig::new(0.0, DescriptorPipeline::parse("length").unwrap()).unwrap();
    let matched = match_antipodal_traces(&[trace.clone(), mirror_trace(&trace)], &cfg).unwrap();
    ensure(matched.index_pairs() == [(0, 1)] && matched.pairs[0].mismatch == 0.0, "mirror not matched")?;
    let torus = RingTorus::new(3.0, 1.0).unwrap();
    let traces: Vec<_> = (0..4).map(|k| synthetic_trace(50 + 10 * k, 0.07).unwrap()).collect();
    let sheet = wrap_traces_on_torus(&traces, &torus).unwrap();
    let worst = sheet
        .strings()
        .iter()
        .flat_map(|s| s.vertices())
        .map(|p| torus.implicit_residual(p))
        .fold(0.0, f64::max);
    ensure(worst <= RESIDUAL_TOL, format!("residual {worst:e}"))?;
    Ok(format!("100 rows, mirror mismatch 0, max residual {worst:.1e}"))
}

fn determinism(dir: &Path) -> Check {
    let family = dir.join("family");
    fs::create_dir_all(&family).unwrap();
    let (fam, _) = common::random_case(3, 12);
    for (i, m) in fam.members().iter().enumerate() {
        if let strbut::but::Member::Region(r) = m {
            write_region(r, fs::File::create(family.join(format!("r{i:02}.csv"))).unwrap()).unwrap();
        }
    }
    let traces = dir.join("traces");
    fs::create_dir_all(&traces).unwrap();
    for k in 0..3 {
        let tr = synthetic_trace(30 + k, 0.1).unwrap();
        let mut w = csv::Writer::from_path(traces.join(format!("tr{k}.csv"))).unwrap();
        w.write_record(["t", "x", "z"]).unwrap();
        for s in tr.samples() {
            w.write_record([s.t.to_string(), s.x.to_string(), s.z.to_string()]).unwrap();
        }
        w.flush().unwrap();
    }
    let trace_in = traces.join("tr0.csv");
    let runs: Vec<(&str, Vec<String>, bool)> = vec![
        ("axioms-check", vec!["axioms-check", "--trials", "120", "--seed", "11", "--json", "--out"].into_iter().map(String::from).collect(), false),
        ("verify-sphere", vec!["verify-sphere", "--n", "2", "--caps", "30", "--seed", "5", "--out"].into_iter().map(String::from).collect(), false),
        ("antipodal-search", vec!["antipodal-search", "--family", family.to_str().unwrap(), "--pipeline", "area", "--oracle", "--out"].into_iter().map(String::from).collect(), false),
        ("torus-mesh", vec!["torus-mesh", "--c", "2", "--r", "1", "--nu", "32", "--nv", "16", "--out"].into_iter().map(String::from).collect(), false),
        ("eeg-embed", vec!["eeg-embed", "--in", trace_in.to_str().unwrap(), "--out"].into_iter().map(String::from).collect(), false),
        ("eeg-embed --torus", vec!["eeg-embed", "--torus", "3,1", "--traces", traces.to_str().unwrap(), "--out"].into_iter().map(String::from).collect(), true),
    ];
    for (name, args, is_dir) in &runs {
        let mut outputs = Vec::new();
        for (k, threads) in ["1", "3"].iter().enumerate() {
            let target = dir.join(format!("{}-{k}", name.replace(' ', "_")));
            let mut a: Vec<&str> = args.iter().map(String::as_str).collect();
            a.push(target.to_str().unwrap());
            let out = strbut(&a, threads);
            ensure(out.status.code() == Some(0), format!("{name} exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)))?;
            outputs.push((stdout(&out), read_output(&target, *is_dir)));
        }
        ensure(outputs[0] == outputs[1], format!("{name} output differs between runs"))?;
    }
    Ok(format!("{} subcommands byte-identical across runs and thread counts", runs.len()))
}

fn read_output(path: &Path, is_dir: bool) -> Vec<(String, Vec<u8>)> {
    if !is_dir {
        return vec![(String::new(), fs::read(path).unwrap())];
    }
    let mut files: Vec<_> = fs::read_dir(path)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let criteria: Vec<Criterion> = vec![
        ("axiom suite", Box::new(axiom_suite)),
        ("sphere witness", Box::new(sphere_witness)),
        ("oracle equivalence", Box::new(oracle_equivalence)),
        ("torus closed forms vs quadrature", Box::new(torus_quadrature)),
        ("twist golden values", Box::new(twist_golden)),
        ("geometry conservation", Box::new(geometry_conservation)),
        ("corner tilings", Box::new(corner_tilings)),
        ("eeg pipeline", Box::new(|| eeg_end_to_end(dir.path()))),
        ("determinism", Box::new(|| determinism(dir.path()))),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
