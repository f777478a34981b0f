//! Seeded Monte Carlo harness: baselines, sweeps over transmit power, SR
//! distributions at a fixed power and plot-ready output files.
//!
//! Every drop draws Bob and Eve from its own ChaCha8 stream selected by
//! `(rng_seed, drop_index)`, so results do not depend on how the drops are
//! scheduled across threads.

use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{channel_coeff, dbm_to_linear, Complex64, Position, SystemParams};
use crate::multi::{
    solve_fixed_array, solve_multi, solve_multi_from, GridMode, LinkPair, MultiScenario, MultiSolution,
    MultiSolveConfig, PositionInit,
};
use crate::rates::CVector;
use crate::single::{optimal_position_single, solve_single, ScalarScenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    PasAn,
    PasNoAn,
    CasAn,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::PasAn, Scheme::PasNoAn, Scheme::CasAn];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::PasAn => "pas-an",
            Scheme::PasNoAn => "pas-no-an",
            Scheme::CasAn => "cas-an",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown scheme `{s}` (expected pas-an, pas-no-an or cas-an)")))
    }
}

/// One (scheme, N) combination of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Case {
    pub scheme: Scheme,
    pub num_antennas: usize,
}

impl Case {
    pub fn new(scheme: Scheme, num_antennas: usize) -> Self {
        Self { scheme, num_antennas }
    }

    pub fn label(&self) -> String {
        format!("{}_N{}", self.scheme, self.num_antennas)
    }
}

impl FromStr for Case {
    type Err = Error;

    /// `scheme:N`, e.g. `pas-an:2`.
    fn from_str(s: &str) -> Result<Self> {
        let (scheme, n) =
            s.split_once(':').ok_or_else(|| Error::Config(format!("case `{s}` must look like scheme:N")))?;
        let n: usize = n.trim().parse().map_err(|_| Error::Config(format!("bad antenna count in case `{s}`")))?;
        Ok(Self::new(scheme.parse()?, n))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Shared constants; the waveguide count is taken from each case.
    pub params: SystemParams,
    pub power_sweep: Vec<f64>,
    /// Power of CDF runs, dBm.
    pub fixed_power: f64,
    /// Drop count; unset means 200 per power for sweeps and 500 for CDFs.
    pub num_drops: Option<usize>,
    pub rng_seed: u64,
    /// Output order follows this list.
    pub cases: Vec<Case>,
    pub solver: MultiSolveConfig,
    /// Tolerance and iteration cap of the single-waveguide alternation.
    pub single_tol: f64,
    pub single_max_iters: usize,
    pub output_path: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            params: SystemParams::reference(1),
            power_sweep: vec![-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0],
            fixed_power: 10.0,
            num_drops: None,
            rng_seed: 1,
            cases: vec![
                Case::new(Scheme::PasAn, 1),
                Case::new(Scheme::CasAn, 1),
                Case::new(Scheme::PasAn, 2),
                Case::new(Scheme::PasNoAn, 2),
            ],
            solver: MultiSolveConfig::default(),
            single_tol: 1e-9,
            single_max_iters: 100,
            output_path: PathBuf::from("out"),
        }
    }
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Error::Config(format!("bad entry `{s}` for `{key}`"))))
        .collect()
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| Error::Config(format!("bad value `{value}` for `{key}`")))
}

pub const DEFAULT_SWEEP_DROPS: usize = 200;
pub const DEFAULT_CDF_DROPS: usize = 500;

impl ExperimentConfig {
    pub fn sweep_drops(&self) -> usize {
        self.num_drops.unwrap_or(DEFAULT_SWEEP_DROPS)
    }

    pub fn cdf_drops(&self) -> usize {
        self.num_drops.unwrap_or(DEFAULT_CDF_DROPS)
    }

    /// Parses `key = value` lines on top of the defaults. Blank lines and
    /// `#` comments are skipped. `cases = pas-an:1, cas-an:1` lists the
    /// combinations explicitly; `scheme` and `n` lists expand to their
    /// cross product instead.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut freq = 28e9;
        let mut n_eff = 1.4;
        let mut height = 3.0;
        let mut side = 30.0;
        let mut noise_bob = -90.0;
        let mut noise_eve = -90.0;
        let mut schemes: Option<Vec<Scheme>> = None;
        let mut counts: Option<Vec<usize>> = None;
        let mut explicit: Option<Vec<Case>> = None;

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "carrier_frequency" => freq = parse_value(key, value)?,
                "n_eff" => n_eff = parse_value(key, value)?,
                "height" => height = parse_value(key, value)?,
                "region_side" => side = parse_value(key, value)?,
                "noise_dbm" => {
                    noise_bob = parse_value(key, value)?;
                    noise_eve = noise_bob;
                }
                "noise_bob_dbm" => noise_bob = parse_value(key, value)?,
                "noise_eve_dbm" => noise_eve = parse_value(key, value)?,
                "power_sweep" => cfg.power_sweep = parse_list(key, value)?,
                "fixed_power" => cfg.fixed_power = parse_value(key, value)?,
                "num_drops" => cfg.num_drops = Some(parse_value(key, value)?),
                "rng_seed" => cfg.rng_seed = parse_value(key, value)?,
                "cases" => explicit = Some(parse_list(key, value)?),
                "scheme" => schemes = Some(parse_list(key, value)?),
                "n" => counts = Some(parse_list(key, value)?),
                "grid_step" => cfg.solver.grid_step = parse_value(key, value)?,
                "outer_tol" => cfg.solver.outer_tol = parse_value(key, value)?,
                "inner_tol" => cfg.solver.inner_tol = parse_value(key, value)?,
                "max_outer_iters" => cfg.solver.max_outer_iters = parse_value(key, value)?,
                "max_inner_iters" => cfg.solver.max_inner_iters = parse_value(key, value)?,
                "position_init" => {
                    cfg.solver.position_init = match value {
                        "bob-aligned" => PositionInit::BobAligned,
                        "midpoint" => PositionInit::Midpoint,
                        v => match v.strip_prefix("random:") {
                            Some(seed) => PositionInit::UniformRandom { seed: parse_value(key, seed)? },
                            None => return Err(Error::Config(format!("bad position_init `{v}`"))),
                        },
                    }
                }
                "grid_mode" => {
                    cfg.solver.grid_mode = match value {
                        "cyclic" => GridMode::Cyclic,
                        "joint" => GridMode::Joint,
                        v => return Err(Error::Config(format!("bad grid_mode `{v}`"))),
                    }
                }
                "single_tol" => cfg.single_tol = parse_value(key, value)?,
                "single_max_iters" => cfg.single_max_iters = parse_value(key, value)?,
                "output_path" => cfg.output_path = PathBuf::from(value),
                other => return Err(Error::Config(format!("line {}: unknown key `{other}`", lineno + 1))),
            }
        }

        cfg.params = SystemParams::new(freq, n_eff, height, side, 1, noise_bob, noise_eve)?;
        match (explicit, schemes, counts) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                return Err(Error::Config("give either `cases` or `scheme`/`n`, not both".into()))
            }
            (Some(c), None, None) => cfg.cases = c,
            (None, Some(s), Some(n)) => {
                cfg.cases = s.iter().flat_map(|&k| n.iter().map(move |&m| Case::new(k, m))).collect()
            }
            (None, Some(_), None) | (None, None, Some(_)) => {
                return Err(Error::Config("`scheme` and `n` must be given together".into()))
            }
            (None, None, None) => {}
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_drops == Some(0) {
            return Err(Error::Config("num_drops must be at least 1".into()));
        }
        if self.cases.is_empty() {
            return Err(Error::Config("no cases to run".into()));
        }
        if let Some(c) = self.cases.iter().find(|c| c.num_antennas < 1) {
            return Err(Error::Config(format!("case {} needs at least one antenna", c.label())));
        }
        for (i, c) in self.cases.iter().enumerate() {
            if self.cases[..i].contains(c) {
                return Err(Error::Config(format!("case {} listed twice", c.label())));
            }
        }
        if self.power_sweep.iter().chain([&self.fixed_power]).any(|p| !p.is_finite()) {
            return Err(Error::Config("powers must be finite".into()));
        }
        if !(self.single_tol > 0.0) {
            return Err(Error::Config("single_tol must be positive".into()));
        }
        self.solver.validate(self.params.region_side)
    }
}

/// Bob and Eve locations of one drop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioSample {
    pub drop_index: u64,
    /// ChaCha stream the drop was drawn from.
    pub stream: u64,
    pub bob: Position,
    pub eve: Position,
}

impl ScenarioSample {
    pub fn draw(seed: u64, drop_index: u64, region_side: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(drop_index);
        let mut point = || Position::ground(rng.gen_range(0.0..=region_side), rng.gen_range(0.0..=region_side));
        let bob = point();
        let eve = point();
        Self { drop_index, stream: drop_index, bob, eve }
    }
}

/// Abscissae of the conventional uniform linear array: `N` elements spaced
/// `λ/2` along x, centred on `D/2`, at `y = 0` and height `d`.
pub fn cas_positions(params: &SystemParams, num_antennas: usize) -> Vec<f64> {
    let mid = (num_antennas as f64 - 1.0) / 2.0;
    (0..num_antennas).map(|n| params.region_side / 2.0 + (n as f64 - mid) * params.wavelength / 2.0).collect()
}

/// Link of the fixed array. Each element is fed in place, so no in-guide
/// phase accrues.
pub fn cas_link(
    params: &SystemParams,
    bob: &Position,
    eve: &Position,
    num_antennas: usize,
    power: f64,
) -> Result<LinkPair> {
    let elements: Vec<Position> =
        cas_positions(params, num_antennas).into_iter().map(|x| Position::new(x, 0.0, params.height)).collect();
    let vector = |user: &Position| -> Result<CVector> {
        let h: Vec<Complex64> = elements.iter().map(|a| channel_coeff(user, a, a, params)).collect::<Result<_>>()?;
        Ok(CVector::from_vec(h))
    };
    Ok(LinkPair {
        h_bob: vector(bob)?,
        h_eve: vector(eve)?,
        noise_bob: params.noise_bob,
        noise_eve: params.noise_eve,
        power,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRecord {
    pub drop_index: u64,
    pub scheme: Scheme,
    pub num_antennas: usize,
    pub power_dbm: f64,
    /// Clamped SR, bps/Hz; 0 for failed drops.
    pub secrecy_rate: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Seconds spent in the solver. Kept out of the deterministic outputs.
    pub wall_time: f64,
    pub error: Option<String>,
}

/// Multi-waveguide PAS design. With AN the alternation starts where the
/// no-AN design stopped, which is feasible for it with `R_m = 0`; the
/// iteration counts of both legs are summed.
pub fn solve_pas(scen: &MultiScenario, solver: &MultiSolveConfig, artificial_noise: bool) -> Result<MultiSolution> {
    let plain = MultiSolveConfig { artificial_noise: false, ..solver.clone() };
    let base = solve_multi(scen, &plain)?;
    if !artificial_noise {
        return Ok(base);
    }
    let with_an = MultiSolveConfig { artificial_noise: true, ..solver.clone() };
    let mut sol = solve_multi_from(scen, &with_an, Some(&base.state))?;
    sol.converged &= base.converged;
    sol.outer_iterations += base.outer_iterations;
    sol.inner_iterations += base.inner_iterations;
    Ok(sol)
}

fn solve_case(
    case: Case,
    sample: &ScenarioSample,
    power_dbm: f64,
    cfg: &ExperimentConfig,
) -> Result<(f64, bool, usize)> {
    let params = cfg.params.with_num_waveguides(case.num_antennas)?;
    let power = dbm_to_linear(power_dbm);
    let (bob, eve) = (sample.bob, sample.eve);
    match (case.scheme, case.num_antennas) {
        (Scheme::PasAn, 1) => {
            let scen = ScalarScenario::new(bob, eve, params, power)?;
            let sol = solve_single(&scen, cfg.single_tol, cfg.single_max_iters)?;
            Ok((sol.rates.secrecy_rate, sol.converged, sol.iterations))
        }
        (Scheme::PasNoAn, 1) => {
            let scen = ScalarScenario::new(bob, eve, params, power)?;
            let x = optimal_position_single(power, 0.0, &scen);
            Ok((scen.rates(power, 0.0, x).secrecy_rate, true, 1))
        }
        (Scheme::PasAn | Scheme::PasNoAn, _) => {
            let scen = MultiScenario::new(bob, eve, params, power)?;
            let sol = solve_pas(&scen, &cfg.solver, case.scheme == Scheme::PasAn)?;
            Ok((sol.rates.secrecy_rate, sol.converged, sol.outer_iterations))
        }
        (Scheme::CasAn, n) => {
            let link = cas_link(&params, &bob, &eve, n, power)?;
            let sol = solve_fixed_array(&link, cas_positions(&params, n), &cfg.solver)?;
            Ok((sol.rates.secrecy_rate, sol.converged, sol.inner_iterations))
        }
    }
}

/// Solves one drop under one scheme. Solver errors become a failed record.
pub fn solve_scheme(case: Case, sample: &ScenarioSample, power_dbm: f64, cfg: &ExperimentConfig) -> ResultRecord {
    let start = Instant::now();
    let outcome = solve_case(case, sample, power_dbm, cfg);
    let wall_time = start.elapsed().as_secs_f64();
    let mut record = ResultRecord {
        drop_index: sample.drop_index,
        scheme: case.scheme,
        num_antennas: case.num_antennas,
        power_dbm,
        secrecy_rate: 0.0,
        converged: false,
        iterations: 0,
        wall_time,
        error: None,
    };
    match outcome {
        Ok((sr, converged, iterations)) if sr.is_finite() => {
            record.secrecy_rate = sr.max(0.0);
            record.converged = converged;
            record.iterations = iterations;
        }
        Ok((sr, ..)) => record.error = Some(format!("non-finite secrecy rate {sr}")),
        Err(e) => record.error = Some(e.to_string()),
    }
    record
}

fn samples(cfg: &ExperimentConfig, drops: usize) -> Vec<ScenarioSample> {
    (0..drops as u64).map(|k| ScenarioSample::draw(cfg.rng_seed, k, cfg.params.region_side)).collect()
}

/// Solves every (case, power, drop) job in parallel. Records come back
/// ordered by case, then power, then drop index.
fn run_jobs(cfg: &ExperimentConfig, powers: &[f64], drops: usize) -> Vec<ResultRecord> {
    let drops = samples(cfg, drops);
    let mut jobs: Vec<(Case, f64, &ScenarioSample)> = Vec::new();
    for &c in &cfg.cases {
        for &p in powers {
            jobs.extend(drops.iter().map(|s| (c, p, s)));
        }
    }
    jobs.into_par_iter().map(|(c, p, s)| solve_scheme(c, s, p, cfg)).collect()
}

/// Mean SR against transmit power for one case.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanSeries {
    pub case: Case,
    /// `(power_dbm, mean_sr)`.
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub records: Vec<ResultRecord>,
    pub means: Vec<MeanSeries>,
}

impl SweepOutput {
    pub fn mean(&self, case: Case, power_dbm: f64) -> Option<f64> {
        self.means.iter().find(|m| m.case == case)?.points.iter().find(|p| p.0 == power_dbm).map(|p| p.1)
    }

    pub fn records_for(&self, case: Case, power_dbm: f64) -> impl Iterator<Item = &ResultRecord> {
        self.records
            .iter()
            .filter(move |r| r.scheme == case.scheme && r.num_antennas == case.num_antennas && r.power_dbm == power_dbm)
    }
}

pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepOutput> {
    cfg.validate()?;
    if cfg.power_sweep.is_empty() {
        return Err(Error::Config("power_sweep is empty".into()));
    }
    let drops = cfg.sweep_drops();
    let records = run_jobs(cfg, &cfg.power_sweep, drops);
    let means = cfg
        .cases
        .iter()
        .zip(records.chunks(drops * cfg.power_sweep.len()))
        .map(|(&case, block)| MeanSeries {
            case,
            points: cfg
                .power_sweep
                .iter()
                .zip(block.chunks(drops))
                .map(|(&p, rs)| (p, rs.iter().map(|r| r.secrecy_rate).sum::<f64>() / drops as f64))
                .collect(),
        })
        .collect();
    Ok(SweepOutput { records, means })
}

/// Empirical CDF of one case: sorted SR values with levels `k / M`.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfSeries {
    pub case: Case,
    pub power_dbm: f64,
    pub values: Vec<f64>,
    pub levels: Vec<f64>,
}

impl CdfSeries {
    pub fn from_samples(case: Case, power_dbm: f64, mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        let m = values.len() as f64;
        let levels = (1..=values.len()).map(|k| k as f64 / m).collect();
        Self { case, power_dbm, values, levels }
    }

    /// Fraction of drops with `SR = 0`.
    pub fn zero_mass(&self) -> f64 {
        self.values.iter().filter(|&&v| v == 0.0).count() as f64 / self.values.len() as f64
    }

    /// Plot table with one row per distinct value, at its right-continuous level.
    pub fn table(&self) -> DatTable {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (&v, &l) in self.values.iter().zip(&self.levels) {
            match rows.last_mut() {
                Some(last) if last[0] == v => last[1] = l,
                _ => rows.push(vec![v, l]),
            }
        }
        DatTable { columns: vec!["secrecy_rate".into(), "cdf".into()], rows }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CdfOutput {
    pub records: Vec<ResultRecord>,
    pub series: Vec<CdfSeries>,
}

pub fn run_cdf(cfg: &ExperimentConfig) -> Result<CdfOutput> {
    cfg.validate()?;
    let drops = cfg.cdf_drops();
    if drops < 2 {
        return Err(Error::Config("a CDF needs at least two drops".into()));
    }
    let records = run_jobs(cfg, &[cfg.fixed_power], drops);
    let series = cfg
        .cases
        .iter()
        .zip(records.chunks(drops))
        .map(|(&case, rs)| CdfSeries::from_samples(case, cfg.fixed_power, rs.iter().map(|r| r.secrecy_rate).collect()))
        .collect();
    Ok(CdfOutput { records, series })
}

/// Numeric table written as a `.dat` file; the first column is the x-axis.
#[derive(Debug, Clone, PartialEq)]
pub struct DatTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl DatTable {
    pub fn render(&self) -> String {
        let mut out = format!("# {}\n", self.columns.join(" "));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Per-case mean tables plus one combined table in case declaration order.
pub fn sweep_tables(sweep: &SweepOutput) -> Vec<(String, DatTable)> {
    let mut files: Vec<(String, DatTable)> = sweep
        .means
        .iter()
        .map(|m| {
            let rows = m.points.iter().map(|&(p, v)| vec![p, v]).collect();
            let table = DatTable { columns: vec!["power_dbm".into(), "mean_sr".into()], rows };
            (format!("mean_sr_{}.dat", m.case.label()), table)
        })
        .collect();
    if let Some(first) = sweep.means.first() {
        let mut columns = vec!["power_dbm".to_string()];
        columns.extend(sweep.means.iter().map(|m| m.case.label()));
        let rows = (0..first.points.len())
            .map(|i| std::iter::once(first.points[i].0).chain(sweep.means.iter().map(|m| m.points[i].1)).collect())
            .collect();
        files.push(("mean_sr.dat".into(), DatTable { columns, rows }));
    }
    files
}

pub fn cdf_file_name(series: &CdfSeries) -> String {
    format!("cdf_{}_P{}.dat", series.case.label(), series.power_dbm)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

pub fn emit_dat(table: &DatTable, path: &Path) -> Result<()> {
    write_file(path, &table.render())
}

pub fn render_csv(records: &[ResultRecord]) -> String {
    let mut out = String::from("drop_index,scheme,n,power_dbm,secrecy_rate,converged,iterations,error\n");
    for r in records {
        let error = r.error.as_deref().unwrap_or("").replace(['"', ','], " ");
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.drop_index, r.scheme, r.num_antennas, r.power_dbm, r.secrecy_rate, r.converged, r.iterations, error
        );
    }
    out
}

pub fn emit_csv(records: &[ResultRecord], path: &Path) -> Result<()> {
    write_file(path, &render_csv(records))
}

/// Solver wall times, which vary run to run; written next to the
/// deterministic outputs under a name that is not `.csv` or `.dat`.
pub fn emit_timing(records: &[ResultRecord], path: &Path) -> Result<()> {
    let mut out = String::from("# drop_index scheme n power_dbm wall_time_s\n");
    for r in records {
        let _ = writeln!(out, "{} {} {} {} {:.6}", r.drop_index, r.scheme, r.num_antennas, r.power_dbm, r.wall_time);
    }
    write_file(path, &out)
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.to_path_buf(), source })
}

/// Writes the sweep tables, `records.csv` and `timing.txt`; returns the paths.
pub fn write_sweep(sweep: &SweepOutput, dir: &Path) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let mut written = Vec::new();
    for (name, table) in sweep_tables(sweep) {
        let path = dir.join(name);
        emit_dat(&table, &path)?;
        written.push(path);
    }
    let csv = dir.join("records.csv");
    emit_csv(&sweep.records, &csv)?;
    emit_timing(&sweep.records, &dir.join("timing.txt"))?;
    written.push(csv);
    Ok(written)
}

pub fn write_cdf(cdf: &CdfOutput, dir: &Path) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let mut written = Vec::new();
    for s in &cdf.series {
        let path = dir.join(cdf_file_name(s));
        emit_dat(&s.table(), &path)?;
        written.push(path);
    }
    let csv = dir.join("records.csv");
    emit_csv(&cdf.records, &csv)?;
    emit_timing(&cdf.records, &dir.join("timing.txt"))?;
    written.push(csv);
    Ok(written)
}
