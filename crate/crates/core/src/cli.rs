//! Command-line front end: `strbut <subcommand> [flags]`.
//!
//! Exit codes: 0 success, 1 check failure, 2 usage or input error.
//! `STRBUT_THREADS` caps the worker pool (0 or unset = one per core).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::but::{brute_force_oracle, find_matching_antipodal, verify_strbut_on_sphere, MatchResult, Member, RegionFamily};
use crate::descriptors::{DescriptorPipeline, Tiling};
use crate::eeg::{load_trace, wrap_traces_on_torus, write_embedded_csv, write_torus_curve_csv, EegTrace};
use crate::error::{Error, Result};
use crate::geometry::csv_io::{read_shape_file, CsvShape};
use crate::geometry::{AntipodalityMode, Worldsheet, DEFAULT_RESOLUTION};
use crate::proximity::{check_axioms, ProximityConfig};
use crate::worldsheet::{torus_mesh, write_mesh_csv, RingTorus};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "strbut", version, about = "Proximity axioms, antipodal matching and torus worldsheets")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the proximity axiom systems on random lattice regions.
    AxiomsCheck(AxiomsArgs),
    /// Search a family of regions, strings or worldsheets for matching antipodal pairs.
    AntipodalSearch(SearchArgs),
    /// Run the cap/antipode witness on a sampled sphere.
    VerifySphere(SphereArgs),
    /// Write a ring-torus vertex mesh as CSV.
    TorusMesh(MeshArgs),
    /// Lift EEG traces into 3-space or wrap them onto a torus.
    EegEmbed(EegArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Descriptor pipeline, e.g. `length,area,centroid`.
    #[arg(long)]
    pub pipeline: Option<DescriptorPipeline>,
    /// Description tolerance (∞-norm).
    #[arg(long, default_value_t = 0.0)]
    pub tol: f64,
    /// Antipodality criterion.
    #[arg(long, default_value_t = AntipodalityMode::Disjoint)]
    pub mode: AntipodalityMode,
    /// Tiling for the corner extractor: `ROWS,COLS,SIZE[,X0,Y0]`.
    #[arg(long)]
    pub tiling: Option<String>,
}

#[derive(Debug, Args)]
pub struct AxiomsArgs {
    #[arg(long, default_value_t = 500)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub common: Common,
    /// Emit the report as JSON instead of text.
    #[arg(long)]
    pub json: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Directory of CSV members (files) or worldsheets (subdirectories of string CSVs).
    #[arg(long)]
    pub family: PathBuf,
    #[command(flatten)]
    pub common: Common,
    /// Grid resolution for point equality.
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    pub resolution: f64,
    /// Cross-check against the exhaustive oracle; disagreement exits 1.
    #[arg(long)]
    pub oracle: bool,
    /// Write the TSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SphereArgs {
    /// Sphere dimension, 1 or 2.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub caps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Sample size (default 2000 on S², 720 on S¹).
    #[arg(long)]
    pub samples: Option<usize>,
    #[command(flatten)]
    pub common: Common,
    /// Write the matched pairs as TSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MeshArgs {
    #[arg(long)]
    pub c: f64,
    #[arg(long)]
    pub r: f64,
    #[arg(long, default_value_t = 64)]
    pub nu: usize,
    #[arg(long, default_value_t = 64)]
    pub nv: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EegArgs {
    /// Single trace CSV (`t,x,z`).
    #[arg(long = "in", conflicts_with_all = ["torus", "traces"])]
    pub input: Option<PathBuf>,
    /// Ring torus `C,R` to wrap the traces of `--traces` onto.
    #[arg(long, requires = "traces")]
    pub torus: Option<String>,
    /// Directory of trace CSVs.
    #[arg(long, requires = "torus")]
    pub traces: Option<PathBuf>,
    /// Output CSV (single trace) or directory (torus curves).
    #[arg(long)]
    pub out: PathBuf,
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let pool = match thread_pool() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match pool.install(|| dispatch(cfg.command)) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILED,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var("STRBUT_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidArgument(format!("STRBUT_THREADS must be a count, got `{v}`")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))
}

fn dispatch(cmd: Command) -> Result<bool> {
    match cmd {
        Command::AxiomsCheck(a) => axioms_check(a),
        Command::AntipodalSearch(a) => antipodal_search(a),
        Command::VerifySphere(a) => verify_sphere(a),
        Command::TorusMesh(a) => torus_mesh_cmd(a),
        Command::EegEmbed(a) => eeg_embed(a),
    }
}

fn proximity_config(c: &Common, default_pipeline: &str) -> Result<ProximityConfig> {
    let mut pipeline = match &c.pipeline {
        Some(p) => p.clone(),
        None => DescriptorPipeline::parse(default_pipeline)?,
    };
    if let Some(spec) = &c.tiling {
        pipeline = pipeline.with_tiling(parse_tiling(spec)?);
    }
    Ok(ProximityConfig::new(c.tol, pipeline)?.with_mode(c.mode))
}

fn parse_numbers(spec: &str, what: &str) -> Result<Vec<f64>> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("bad {what} `{spec}`")))
        })
        .collect()
}

fn parse_tiling(spec: &str) -> Result<Tiling> {
    let v = parse_numbers(spec, "tiling")?;
    if !(v.len() == 3 || v.len() == 5) || v[0].fract() != 0.0 || v[1].fract() != 0.0 || v[0] < 0.0 || v[1] < 0.0 {
        return Err(Error::InvalidArgument(format!("tiling must be ROWS,COLS,SIZE[,X0,Y0], got `{spec}`")));
    }
    let t = Tiling::new(v[0] as usize, v[1] as usize, v[2])?;
    Ok(if v.len() == 5 { t.with_origin([v[3], v[4]]) } else { t })
}

/// Writes to `path`, or stdout when absent.
fn with_output<F>(path: Option<&Path>, f: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            f(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            f(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn axioms_check(a: AxiomsArgs) -> Result<bool> {
    let cfg = proximity_config(&a.common, "centroid")?;
    let report = check_axioms(a.seed, a.trials, &cfg)?;
    let body = if a.json {
        report.to_json() + "\n"
    } else {
        report.to_text()
    };
    with_output(a.out.as_deref(), |w| Ok(w.write_all(body.as_bytes())?))?;
    if a.out.is_some() {
        println!("total violations={}", report.total_violations());
    }
    Ok(report.passed())
}

/// Sorted directory entries, skipping hidden files.
fn sorted_entries(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for e in fs::read_dir(dir)? {
        let p = e?.path();
        let hidden = p.file_name().is_some_and(|n| n.to_string_lossy().starts_with('.'));
        if !hidden {
            out.push(p);
        }
    }
    out.sort();
    Ok(out)
}

fn is_csv(p: &Path) -> bool {
    p.is_file() && p.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn display_name(p: &Path) -> String {
    p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

/// Loads a family directory: every `*.csv` file is a region or a string,
/// every subdirectory a worldsheet made of its string CSVs.
pub fn load_family(dir: &Path, resolution: f64) -> Result<(RegionFamily, Vec<String>)> {
    let mut members = Vec::new();
    let mut names = Vec::new();
    for p in sorted_entries(dir)? {
        if p.is_dir() {
            let mut strings = Vec::new();
            for f in sorted_entries(&p)?.into_iter().filter(|f| is_csv(f)) {
                match read_shape_file(&f, resolution)? {
                    CsvShape::String(s) => strings.push(s),
                    CsvShape::Region(_) => {
                        return Err(Error::InvalidArgument(format!(
                            "{}: worldsheet members must be string CSVs (leading `t` column)",
                            f.display()
                        )))
                    }
                }
            }
            if strings.is_empty() {
                return Err(Error::InvalidArgument(format!("{}: worldsheet has no strings", p.display())));
            }
            members.push(Member::Worldsheet(Worldsheet::from_strings(strings, resolution)?));
        } else if is_csv(&p) {
            members.push(match read_shape_file(&p, resolution)? {
                CsvShape::Region(r) => Member::Region(r),
                CsvShape::String(s) => Member::String(s),
            });
        } else {
            continue;
        }
        names.push(display_name(&p));
    }
    Ok((RegionFamily::new(members)?, names))
}

fn pairs_tsv(result: &MatchResult, names: Option<&[String]>) -> String {
    let mut s = String::from("a\tb\tname_a\tname_b\tmismatch\tdescription_a\tdescription_b\n");
    for p in &result.pairs {
        let (na, nb) = match names {
            Some(n) => (n[p.a].as_str(), n[p.b].as_str()),
            None => ("", ""),
        };
        let _ = writeln!(
            s,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            p.a, p.b, na, nb, p.mismatch, p.description_a, p.description_b
        );
    }
    s
}

fn antipodal_search(a: SearchArgs) -> Result<bool> {
    let cfg = proximity_config(&a.common, "centroid")?;
    if !(a.resolution > 0.0 && a.resolution.is_finite()) {
        return Err(Error::InvalidArgument(format!("resolution must be > 0, got {}", a.resolution)));
    }
    let (family, names) = load_family(&a.family, a.resolution)?;
    let result = find_matching_antipodal(&family, &cfg)?;
    let mut ok = true;
    if a.oracle {
        let oracle = brute_force_oracle(&family, &cfg)?;
        let (main, exact) = (result.index_pairs(), oracle.index_pairs());
        if main != exact {
            ok = false;
            let missing: Vec<_> = exact.iter().filter(|p| !main.contains(p)).collect();
            let extra: Vec<_> = main.iter().filter(|p| !exact.contains(p)).collect();
            eprintln!("oracle mismatch: missing={missing:?} extra={extra:?}");
        } else {
            eprintln!("oracle agrees ({} pairs)", exact.len());
        }
    }
    let mut body = pairs_tsv(&result, Some(&names));
    let summary = result.summary();
    if a.out.is_none() {
        body.push_str(&summary);
        body.push('\n');
    }
    with_output(a.out.as_deref(), |w| Ok(w.write_all(body.as_bytes())?))?;
    if a.out.is_some() {
        println!("{summary}");
    }
    Ok(ok)
}

fn verify_sphere(a: SphereArgs) -> Result<bool> {
    let cfg = proximity_config(&a.common, "area")?;
    let v = verify_strbut_on_sphere(a.n, a.caps, a.seed, a.samples, &cfg)?;
    for w in &v.warnings {
        eprintln!("warning: {w}");
    }
    if let Some(out) = &a.out {
        let body = pairs_tsv(&v.result, None);
        with_output(Some(out), |w| Ok(w.write_all(body.as_bytes())?))?;
    }
    println!("{}", v.summary());
    Ok(v.passed)
}

fn parse_torus(spec: &str) -> Result<RingTorus> {
    match parse_numbers(spec, "torus")?.as_slice() {
        [c, r] => RingTorus::new(*c, *r),
        _ => Err(Error::InvalidArgument(format!("torus must be C,R, got `{spec}`"))),
    }
}

fn torus_mesh_cmd(a: MeshArgs) -> Result<bool> {
    let t = RingTorus::new(a.c, a.r)?;
    let mesh = torus_mesh(&t, a.nu, a.nv)?;
    with_output(Some(&a.out), |w| write_mesh_csv(&mesh, w))?;
    println!("vertices={}", mesh.len());
    Ok(true)
}

fn eeg_embed(a: EegArgs) -> Result<bool> {
    match (&a.input, &a.torus, &a.traces) {
        (Some(input), None, None) => {
            let trace = load_trace(input)?;
            with_output(Some(&a.out), |w| write_embedded_csv(&trace, w))?;
            println!("samples={}", trace.len());
            Ok(true)
        }
        (None, Some(spec), Some(dir)) => {
            let torus = parse_torus(spec)?;
            let traces = sorted_entries(dir)?
                .into_iter()
                .filter(|p| is_csv(p))
                .map(|p| load_trace(&p))
                .collect::<Result<Vec<EegTrace>>>()?;
            let sheet = wrap_traces_on_torus(&traces, &torus)?;
            fs::create_dir_all(&a.out)?;
            for (i, tr) in traces.iter().enumerate() {
                let path = a.out.join(format!("{}.torus.csv", tr.source()));
                with_output(Some(&path), |w| write_torus_curve_csv(tr, i, traces.len(), &torus, w))?;
            }
            let worst = sheet
                .strings()
                .iter()
                .flat_map(|s| s.vertices())
                .map(|p| torus.implicit_residual(p))
                .fold(0.0, f64::max);
            println!("traces={} max_residual={worst:e}", traces.len());
            Ok(true)
        }
        _ => Err(Error::InvalidArgument(
            "eeg-embed needs either --in FILE or --torus C,R --traces DIR".into(),
        )),
    }
}
