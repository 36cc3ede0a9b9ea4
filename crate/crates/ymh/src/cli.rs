//! Scenario files, the runner behind `ymh run` / `ymh verify` / `ymh fit`,
//! and the report they write.

use crate::algebra::LieElement;
use crate::cronstrom::ConeRegion;
use crate::data::DataSpec;
use crate::diagnostics::{
    cone_energy_identity, decay_fit, decay_suite, energy_cylinder, frozen_constants, l2_cone_bound, norm_equivalence_check,
    scalar_lightcone_representation, sobolev_energies, supnorm_profile, ConeRule, DecayFit, DecayWindows, SupRule,
};
use crate::error::{Error, Result};
use crate::evolve::gate::GridTaylor;
use crate::evolve::{run, EquivariantState, RunConfig, RunLog, Trajectory};
use crate::fields::AnsatzProfiles;
use crate::geometry::{Background, ChartPoint};
use crate::io::{read_series_pair, write_snapshot, write_table};
use crate::oracle::Oracle;
use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::ffi::OsString;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

pub const SCENARIO_VERSION: u32 = 1;
pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    Minkowski,
    Cylinder,
}

impl From<Frame> for Background {
    fn from(f: Frame) -> Self {
        match f {
            Frame::Minkowski => Background::Minkowski,
            Frame::Cylinder => Background::Cylinder,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case", deny_unknown_fields)]
pub enum AnsatzSpec {
    Hedgehog,
    FixedDirection { direction: [f64; 3] },
}

impl AnsatzSpec {
    pub fn profiles(&self) -> Result<AnsatzProfiles> {
        match *self {
            AnsatzSpec::Hedgehog => Ok(AnsatzProfiles::hedgehog()),
            AnsatzSpec::FixedDirection { direction } => AnsatzProfiles::fixed(LieElement { c: direction })
                .map_err(|e| Error::Config(e.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub n: usize,
    /// Outer radius on Minkowski; the cylinder always spans [0, π].
    #[serde(default)]
    pub rho_max: Option<f64>,
}

fn default_levels() -> usize {
    8
}

fn default_growth() -> f64 {
    10.0
}

/// Expected exponent of one decay fit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecayTarget {
    pub fit: String,
    pub exponent: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case", deny_unknown_fields)]
pub enum Diagnostic {
    /// Relative drift of the cylinder energy over the stored snapshots.
    EnergyDrift { tolerance: f64 },
    /// Gauss residual at `events` seeded points on every stored snapshot.
    Gauss {
        events: usize,
        #[serde(default = "default_growth")]
        max_growth: f64,
        #[serde(default)]
        tolerance: Option<f64>,
    },
    ConeIdentity { apex: [f64; 4], t0: f64, tolerance: f64 },
    L2ConeBound {
        apex: [f64; 4],
        t0: f64,
        #[serde(default = "default_levels")]
        levels: usize,
    },
    Supnorm { apex: [f64; 4], t0: f64, steps: usize },
    Lightcone { point: [f64; 4], tolerance: f64 },
    Decay {
        #[serde(default)]
        windows: Option<DecayWindows>,
        #[serde(default)]
        targets: Vec<DecayTarget>,
    },
    Sobolev { times: Vec<f64> },
    NormEquivalence { samples: usize, r0: f64 },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnapshotPolicy {
    /// Write every k-th stored state (0: the first and last only).
    #[serde(default)]
    pub every: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub version: u32,
    pub name: String,
    pub frame: Frame,
    pub ansatz: AnsatzSpec,
    pub data: DataSpec,
    pub lambda: f64,
    pub grid: Grid,
    pub run: RunConfig,
    #[serde(default)]
    pub diagnostics: Vec<Diagnostic>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub snapshots: SnapshotPolicy,
    /// Output root overriding `--out`.
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text)
            .map_err(|e| Error::Parse { line: e.line(), msg: format!("column {}: {e}", e.column()) })?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != SCENARIO_VERSION {
            return Err(Error::Config(format!("scenario version {} is not supported (expected {SCENARIO_VERSION})", self.version)));
        }
        let ok_name = !self.name.is_empty() && self.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_');
        if !ok_name {
            return Err(Error::Config(format!("name {:?} must be non-empty [A-Za-z0-9_-]", self.name)));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::Config(format!("lambda must be finite and non-negative, got {}", self.lambda)));
        }
        if self.frame == Frame::Minkowski && self.grid.rho_max.is_none() {
            return Err(Error::Config("grid.rho_max is required on Minkowski".into()));
        }
        self.run.validate()?;
        self.ansatz.profiles()?;
        for d in &self.diagnostics {
            let cylinder_only = matches!(d, Diagnostic::EnergyDrift { .. } | Diagnostic::Decay { .. } | Diagnostic::Sobolev { .. });
            let minkowski_only = matches!(
                d,
                Diagnostic::ConeIdentity { .. } | Diagnostic::L2ConeBound { .. } | Diagnostic::Supnorm { .. } | Diagnostic::Lightcone { .. }
            );
            if cylinder_only && self.frame != Frame::Cylinder || minkowski_only && self.frame != Frame::Minkowski {
                return Err(Error::Config(format!("{} is not available on the {:?} frame", d.name(), self.frame)));
            }
            if let Diagnostic::Lightcone { .. } = d {
                if !matches!(self.ansatz, AnsatzSpec::FixedDirection { .. }) {
                    return Err(Error::Config("lightcone needs the fixed-direction ansatz".into()));
                }
            }
        }
        Ok(())
    }

    pub fn initial_state(&self) -> Result<EquivariantState> {
        self.data.build(self.frame.into(), self.ansatz.profiles()?, self.grid.n, self.grid.rho_max.unwrap_or(std::f64::consts::PI), self.lambda)
    }
}

impl Diagnostic {
    pub fn name(&self) -> &'static str {
        match self {
            Diagnostic::EnergyDrift { .. } => "energy_drift",
            Diagnostic::Gauss { .. } => "gauss",
            Diagnostic::ConeIdentity { .. } => "cone_identity",
            Diagnostic::L2ConeBound { .. } => "l2_cone_bound",
            Diagnostic::Supnorm { .. } => "supnorm",
            Diagnostic::Lightcone { .. } => "lightcone",
            Diagnostic::Decay { .. } => "decay",
            Diagnostic::Sobolev { .. } => "sobolev",
            Diagnostic::NormEquivalence { .. } => "norm_equivalence",
        }
    }
}

/// One reported number. `pass` is absent for monitored values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub check: String,
    pub op: String,
    pub quantity: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
}

impl Record {
    fn monitor(check: &str, op: &str, quantity: impl Into<String>, value: f64) -> Self {
        Record { check: check.into(), op: op.into(), quantity: quantity.into(), value, tolerance: None, pass: None }
    }

    fn below(check: &str, op: &str, quantity: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Record { pass: Some(value < tolerance), tolerance: Some(tolerance), ..Self::monitor(check, op, quantity, value) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: u32,
    pub scenario: String,
    pub config: Scenario,
    pub run: RunLog,
    pub records: Vec<Record>,
    pub decay_fits: Vec<(String, DecayFit)>,
    /// `check/quantity` of every failed record.
    pub failures: Vec<String>,
    pub passed: bool,
}

/// A named numeric table written next to the report. series.csv has one
/// row per stored snapshot.
pub struct Series {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

struct Outcome {
    records: Vec<Record>,
    fits: Vec<(String, DecayFit)>,
    extra: Vec<(String, Vec<(f64, f64)>)>,
}

fn event_points(s: &EquivariantState, events: usize, seed: u64) -> Vec<ChartPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..events)
        .map(|_| {
            let th = rng.gen_range(0.3..2.8);
            let ph = rng.gen_range(0.0..std::f64::consts::TAU);
            match s.background {
                Background::Cylinder => ChartPoint::cylinder(0.0, rng.gen_range(0.2..std::f64::consts::PI - 0.2), th, ph),
                Background::Minkowski => ChartPoint::minkowski(0.0, rng.gen_range(0.1..1.0), th, ph),
            }
        })
        .collect()
}

/// Largest Gauss residual over `pts` on one snapshot. Minkowski radii are
/// fractions of the snapshot's valid radius.
pub fn snapshot_gauss(s: &EquivariantState, pts: &[ChartPoint], oracle: &Oracle) -> Result<f64> {
    let g = GridTaylor::new(s.clone())?;
    let mut worst: f64 = 0.0;
    for p in pts {
        let mut q = *p;
        q.x[0] = 0.0;
        if s.background == Background::Minkowski {
            q.x[1] *= (s.valid_radius() - 4.0 * s.dx()).max(0.0) * 0.9;
        }
        let r = oracle.gauss_residual(&g.sampler(q.radial_coordinate()), &q)?.norm();
        worst = worst.max(r);
    }
    Ok(worst)
}

fn cone(apex: [f64; 4], t0: f64) -> Result<ConeRegion> {
    ConeRegion::new(ChartPoint::cartesian(apex[0], apex[1], apex[2], apex[3]), t0).map_err(|e| Error::Config(e.to_string()))
}

fn diagnose(sc: &Scenario, traj: &Trajectory, d: &Diagnostic, series: &mut Series) -> Result<Outcome> {
    let name = d.name();
    let lambda = sc.lambda;
    let oracle = Oracle::new(1e-3);
    let mut out = Outcome { records: Vec::new(), fits: Vec::new(), extra: Vec::new() };
    let sampler = traj.sampler();
    match d {
        Diagnostic::EnergyDrift { tolerance } => {
            let e: Vec<f64> = traj.states().iter().map(|s| energy_cylinder(s).map(|e| e.total)).collect::<Result<_>>()?;
            let e0 = e[0];
            let drift = e.iter().map(|v| (v - e0).abs()).fold(0.0, f64::max) / e0.abs().max(f64::MIN_POSITIVE);
            out.records.push(Record::monitor(name, "energy_cylinder", "initial_energy", e0));
            out.records.push(Record::below(name, "energy_cylinder", "relative_drift", drift, *tolerance));
            series.columns.push("energy".into());
            for (r, v) in series.rows.iter_mut().zip(&e) {
                r.push(*v);
            }
        }
        Diagnostic::Gauss { events, max_growth, tolerance } => {
            let pts = event_points(traj.first(), *events, sc.seed);
            let g: Vec<f64> = traj.states().iter().map(|s| snapshot_gauss(s, &pts, &oracle)).collect::<Result<_>>()?;
            let g0 = g[0];
            let gmax = g.iter().copied().fold(0.0, f64::max);
            out.records.push(Record::monitor(name, "gauss_residual", "initial", g0));
            out.records.push(Record::below(name, "gauss_residual", "growth", gmax / g0.max(f64::MIN_POSITIVE), *max_growth));
            match tolerance {
                Some(t) => out.records.push(Record::below(name, "gauss_residual", "max", gmax, *t)),
                None => out.records.push(Record::monitor(name, "gauss_residual", "max", gmax)),
            }
            series.columns.push("gauss".into());
            for (r, v) in series.rows.iter_mut().zip(&g) {
                r.push(*v);
            }
        }
        Diagnostic::ConeIdentity { apex, t0, tolerance } => {
            let c = cone_energy_identity(&sampler, &cone(*apex, *t0)?, lambda, ConeRule::default())?;
            out.records.push(Record::monitor(name, "cone_energy_identity", "base_energy", c.lhs));
            out.records.push(Record::monitor(name, "cone_energy_identity", "mantle_flux_plus_top", c.rhs));
            out.records.push(Record::below(name, "cone_energy_identity", "residual", c.residual, *tolerance));
        }
        Diagnostic::L2ConeBound { apex, t0, levels } => {
            let c = frozen_constants().l2_cone_c.value;
            let b = l2_cone_bound(&sampler, &cone(*apex, *t0)?, lambda, c, *levels, ConeRule::default())?;
            let op = "l2_cone_bound";
            out.records.push(Record::monitor(name, op, "cone_norm", b.cone_norm));
            out.records.push(Record::monitor(name, op, "local_energy", b.local_energy));
            let first = b.cone_norm / b.bound1.max(f64::MIN_POSITIVE);
            out.records.push(Record { tolerance: Some(1.0), pass: Some(b.pass1), ..Record::monitor(name, op, "first_ratio", first) });
            if let Some(b2) = b.bound2 {
                let r = b.cone_norm / b2.max(f64::MIN_POSITIVE);
                out.records.push(Record { tolerance: Some(1.0), pass: Some(b.pass2), ..Record::monitor(name, op, "second_ratio", r) });
                out.records.push(Record::monitor(name, op, "c_needed", b.c_needed));
            }
        }
        Diagnostic::Supnorm { apex, t0, steps } => {
            let prof = supnorm_profile(&sampler, &cone(*apex, *t0)?, *steps, SupRule::default())?;
            let peak = prof.iter().map(|s| s.n).fold(0.0, f64::max);
            if !peak.is_finite() {
                return Err(Error::NonFinite { time: prof[0].time, index: 0, field: "N(s)".into() });
            }
            out.records.push(Record::monitor(name, "supnorm_profile", "max_n", peak));
            out.extra.push(("supnorm".into(), prof.iter().map(|s| (s.s, s.n)).collect()));
        }
        Diagnostic::Lightcone { point, tolerance } => {
            let p = ChartPoint::cartesian(point[0], point[1], point[2], point[3]);
            let r = scalar_lightcone_representation(&sampler, &p, traj.first().time, lambda, ConeRule::default())?;
            out.records.push(Record::monitor(name, "scalar_lightcone_representation", "value", r.value.norm()));
            out.records.push(Record::below(name, "scalar_lightcone_representation", "residual", r.residual, *tolerance));
        }
        Diagnostic::Decay { windows, targets } => {
            let suite = decay_suite(traj, &windows.unwrap_or_default())?;
            let fits = [("ds_phi", suite.ds_phi), ("ds_a", suite.ds_a), ("axis_phi", suite.axis_phi), ("null_al", suite.null_al), ("null_an", suite.null_an)];
            for (k, f) in fits {
                if let Some(f) = f {
                    out.records.push(Record::monitor(name, "decay_fit", format!("{k}_exponent"), f.exponent));
                    out.fits.push((k.to_string(), f));
                }
            }
            for t in targets {
                let f = fits.iter().find(|(k, _)| *k == t.fit).and_then(|(_, f)| *f);
                let f = f.ok_or_else(|| Error::Config(format!("decay fit {:?} is not available for this run", t.fit)))?;
                out.records.push(Record::below(name, "decay_fit", format!("{}_deviation", t.fit), (f.exponent - t.exponent).abs(), t.tolerance));
            }
            out.extra.extend(suite.series);
        }
        Diagnostic::Sobolev { times } => {
            for &t in times {
                let e = sobolev_energies(|q| traj.sampler_at(q), t, 24, &oracle)?;
                out.records.push(Record::monitor(name, "sobolev_energies", format!("e1@{t}"), e.e1));
                out.records.push(Record::monitor(name, "sobolev_energies", format!("e2@{t}"), e.e2));
            }
        }
        Diagnostic::NormEquivalence { samples, r0 } => {
            let r = norm_equivalence_check(*samples, *r0, sc.seed)?;
            let op = "norm_equivalence_check";
            out.records.push(Record::below(name, op, "violations", r.violations as f64, 0.5));
            out.records.push(Record::monitor(name, op, "lower_margin", r.lower_margin));
            out.records.push(Record::monitor(name, op, "min_ratio", r.min_ratio));
            let upper = frozen_constants().norm_upper_c.value;
            out.records.push(Record { tolerance: Some(upper), pass: Some(r.max_ratio <= upper), ..Record::monitor(name, op, "max_ratio", r.max_ratio) });
        }
    }
    Ok(out)
}

/// Evolves the scenario and evaluates its diagnostics, writing nothing.
pub fn evaluate(sc: &Scenario) -> Result<(Report, Trajectory, Vec<(String, Series)>)> {
    let s0 = sc.initial_state()?;
    let mut series = Series { columns: vec!["t".into(), "norm_max".into()], rows: Vec::new() };
    let (traj, log) = run(&s0, &sc.run, &mut |s| {
        series.rows.push(vec![s.time, s.norm_max()]);
        Ok(())
    })?;
    let mut records = Vec::new();
    let mut fits = Vec::new();
    let mut extra = Vec::new();
    for d in &sc.diagnostics {
        let o = diagnose(sc, &traj, d, &mut series)?;
        records.extend(o.records);
        fits.extend(o.fits);
        extra.extend(o.extra);
    }
    if let Some(r) = records.iter().find(|r| !r.value.is_finite()) {
        return Err(Error::NonFinite { time: traj.last().time, index: 0, field: format!("{}/{}", r.check, r.quantity) });
    }
    let failures: Vec<String> = records.iter().filter(|r| r.pass == Some(false)).map(|r| format!("{}/{}", r.check, r.quantity)).collect();
    let report = Report {
        version: REPORT_VERSION,
        scenario: sc.name.clone(),
        config: sc.clone(),
        run: log,
        records,
        decay_fits: fits,
        passed: failures.is_empty(),
        failures,
    };
    let mut tables = vec![("series".to_string(), series)];
    for (k, v) in extra {
        tables.push((format!("series_{k}"), Series { columns: vec!["x".into(), k.clone()], rows: v.iter().map(|&(x, y)| vec![x, y]).collect() }));
    }
    Ok((report, traj, tables))
}

fn write_json(path: &Path, v: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Error::Config(e.to_string()))?;
    fs::write(path, text + "\n")?;
    Ok(())
}

/// Runs a scenario and writes `<out>/<name>/{report.json, series.csv,
/// snapshots/}`.
pub fn run_scenario(sc: &Scenario, out_root: &Path) -> Result<Report> {
    let (report, traj, tables) = evaluate(sc)?;
    let root = sc.output.as_deref().unwrap_or(out_root);
    let dir = root.join(&sc.name);
    let snaps = dir.join("snapshots");
    fs::create_dir_all(&snaps)?;
    let meta = serde_json::json!({ "scenario": sc.name, "version": REPORT_VERSION });
    for (k, t) in &tables {
        let mut m = meta.clone();
        m["table"] = serde_json::Value::String(k.clone());
        write_table(fs::File::create(dir.join(format!("{k}.csv")))?, &m, &t.columns, &t.rows)?;
    }
    let states = traj.states();
    let last = states.len() - 1;
    for (k, s) in states.iter().enumerate() {
        let keep = k == 0 || k == last || (sc.snapshots.every > 0 && k % sc.snapshots.every == 0);
        if keep {
            write_snapshot(fs::File::create(snaps.join(format!("{k:06}.csv")))?, s)?;
        }
    }
    write_json(&dir.join("report.json"), &report)?;
    Ok(report)
}

/// Process exit code for an error: 2 for configuration, 3 for a numerical
/// abort.
pub fn error_code(e: &Error) -> u8 {
    match e {
        Error::NonFinite { .. } | Error::Singular(_) | Error::Degenerate(_) => 3,
        _ => 2,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryEntry {
    pub file: String,
    pub scenario: Option<String>,
    pub exit: u8,
    pub failures: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub version: u32,
    pub scenarios: Vec<SummaryEntry>,
    pub exit: u8,
}

/// Runs every `*.json` scenario in `dir` in name order.
pub fn verify_all(dir: &Path, out_root: &Path) -> Result<Summary> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let mut summary = Summary { version: REPORT_VERSION, ..Default::default() };
    for f in files {
        let file = f.display().to_string();
        let entry = match Scenario::load(&f).and_then(|sc| run_scenario(&sc, out_root).map(|r| (sc, r))) {
            Ok((sc, r)) => SummaryEntry { file, scenario: Some(sc.name), exit: u8::from(!r.passed), failures: r.failures, error: None },
            Err(e) => SummaryEntry { file, scenario: None, exit: error_code(&e), failures: Vec::new(), error: Some(e.to_string()) },
        };
        summary.exit = summary.exit.max(entry.exit);
        summary.scenarios.push(entry);
    }
    fs::create_dir_all(out_root)?;
    write_json(&out_root.join("summary.json"), &summary)?;
    Ok(summary)
}

#[derive(Debug, Parser)]
#[command(name = "ymh", version, about = "Yang–Mills–Higgs conformal-method scenario runner")]
pub struct Cli {
    /// Worker threads for the parallel diagnostics.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output root.
    #[arg(long, global = true, env = "YMH_OUT", default_value = "out")]
    pub out: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one scenario file.
    Run { config: PathBuf },
    /// Run every scenario in a directory and write summary.json.
    Verify { dir: PathBuf },
    /// Fit a decay exponent to a series file.
    Fit {
        series: PathBuf,
        /// Fit window as `a,b`.
        #[arg(long, value_parser = parse_window)]
        window: Window,
        /// Abscissa column (default: the first).
        #[arg(long)]
        x: Option<String>,
        /// Ordinate column (default: the second).
        #[arg(long)]
        y: Option<String>,
    },
}

#[derive(Clone, Copy, Debug)]
pub struct Window(pub [f64; 2]);

fn parse_window(s: &str) -> std::result::Result<Window, String> {
    let (a, b) = s.split_once(',').ok_or("expected a,b")?;
    let a: f64 = a.trim().parse().map_err(|_| format!("bad number {a:?}"))?;
    let b: f64 = b.trim().parse().map_err(|_| format!("bad number {b:?}"))?;
    Ok(Window([a, b]))
}

fn fit_file(path: &Path, window: [f64; 2], x: Option<&str>, y: Option<&str>) -> Result<DecayFit> {
    let t = crate::io::read_table(BufReader::new(fs::File::open(path)?))?;
    let col = |name: Option<&str>, k: usize| -> Result<String> {
        match name {
            Some(n) => Ok(n.to_string()),
            None => t.columns.get(k).cloned().ok_or_else(|| Error::Config(format!("series has no column {k}"))),
        }
    };
    let (xc, yc) = (col(x, 0)?, col(y, 1)?);
    let pairs = read_series_pair(BufReader::new(fs::File::open(path)?), &xc, &yc)?;
    decay_fit(&pairs, window)
}

fn exec(cli: Cli) -> Result<u8> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Error::Config(e.to_string()))?;
    }
    match cli.command {
        Command::Run { config } => {
            let sc = Scenario::load(&config)?;
            let r = run_scenario(&sc, &cli.out)?;
            for f in &r.failures {
                eprintln!("check failed: {f}");
            }
            println!("{}: {}", r.scenario, if r.passed { "pass" } else { "FAIL" });
            Ok(u8::from(!r.passed))
        }
        Command::Verify { dir } => {
            let s = verify_all(&dir, &cli.out)?;
            println!("{}", serde_json::to_string_pretty(&s).map_err(|e| Error::Config(e.to_string()))?);
            Ok(s.exit)
        }
        Command::Fit { series, window, x, y } => {
            let f = fit_file(&series, window.0, x.as_deref(), y.as_deref())?;
            println!("{}", serde_json::to_string_pretty(&f).map_err(|e| Error::Config(e.to_string()))?);
            Ok(0)
        }
    }
}

/// Entry point of the binary.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match exec(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}

