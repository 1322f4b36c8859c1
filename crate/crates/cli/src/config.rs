//! Resolved run settings. Every output is a pure function of its
//! [`RunConfig`], which is written next to the output for replay.

use std::path::PathBuf;

use anyhow::{Context, Result};
use parrondo::exact::{EquilibriumReport, ExactOptions, ExactSolver, GameSpec, Params};
use parrondo::lattice::{enumerate_orbits, LatticeDims};
use parrondo::regions::{
    annihilating_lhs, check_annihilating, check_basic_estimate, convergence_probe,
    estimate_condition_fraction, estimate_region_volume, scan_cross_section,
    scan_cross_section_simulated, Condition, ConditionGame, CrossSectionSpec, GameC, ProbeMode,
    Proportion, RegionClass, SimBudget,
};
use parrondo::simulate::{simulate_game_traced, SimConfig, SimReport};
use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub schema: u32,
    #[serde(flatten)]
    pub command: Command,
    /// Output file; standard output when absent.
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    Exact(ExactRun),
    Simulate(SimulateRun),
    Scan(ScanRun),
    Volume(VolumeRun),
    Orbits(OrbitsRun),
    Check(CheckRun),
    Probe(ProbeRun),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactRun {
    pub dims: LatticeDims,
    pub game: GameSpec<f64>,
    pub cap: usize,
    pub transpose: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulateRun {
    pub dims: LatticeDims,
    pub game: GameSpec<f64>,
    pub sim: SimConfig,
    pub trace: Option<PathBuf>,
    pub trace_stride: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRun {
    pub spec: CrossSectionSpec,
    pub cap: usize,
    /// Simulated means with this budget instead of exact ones.
    pub budget: Option<SimBudget>,
    pub format: GridFormat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeRun {
    pub dims: LatticeDims,
    pub p0: f64,
    pub p4: f64,
    pub game: GameC,
    pub samples: u64,
    pub seed: u64,
    pub cap: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitsRun {
    pub dims: LatticeDims,
    pub transpose: bool,
    /// Where to write the class table as CSV.
    pub table: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FractionRun {
    pub condition: Condition,
    pub game: ConditionGame,
    pub samples: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRun {
    pub params: Option<Params<f64>>,
    pub fraction: Option<FractionRun>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeRun {
    pub params: Params<f64>,
    pub game: GameC,
    pub sizes: Vec<LatticeDims>,
    pub mode: ProbeMode,
    pub cap: usize,
}

/// Result of running a config: the main product, a one-line summary and
/// any side files.
pub struct Output {
    pub body: Vec<u8>,
    pub summary: String,
    pub files: Vec<(PathBuf, Vec<u8>)>,
}

#[derive(Serialize)]
struct Versioned<'a, T: Serialize> {
    schema: u32,
    #[serde(flatten)]
    body: &'a T,
}

fn json<T: Serialize>(body: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(&Versioned {
        schema: SCHEMA,
        body,
    })?;
    out.push(b'\n');
    Ok(out)
}

fn exact_options(cap: usize) -> ExactOptions {
    ExactOptions {
        cap,
        ..ExactOptions::default()
    }
}

impl RunConfig {
    pub fn execute(&self) -> Result<Output> {
        anyhow::ensure!(
            self.schema == SCHEMA,
            crate::UsageError(format!("unsupported config schema {}", self.schema))
        );
        match &self.command {
            Command::Exact(run) => run.execute(),
            Command::Simulate(run) => run.execute(),
            Command::Scan(run) => run.execute(),
            Command::Volume(run) => run.execute(),
            Command::Orbits(run) => run.execute(),
            Command::Check(run) => run.execute(),
            Command::Probe(run) => run.execute(),
        }
    }
}

impl ExactRun {
    fn execute(&self) -> Result<Output> {
        let opts = ExactOptions {
            use_transpose: self.transpose,
            ..exact_options(self.cap)
        };
        let solver = ExactSolver::new(self.dims, opts)?;
        let eq = solver.stats(&self.game)?;
        let report = EquilibriumReport::new(self.dims, &self.game, &eq);
        Ok(Output {
            body: json(&report)?,
            summary: format!(
                "{} {}: mu = {:.9} sigma2 = {:.9} regime = {}",
                self.dims, report.game, report.mu, report.sigma2, report.regime
            ),
            files: Vec::new(),
        })
    }
}

impl SimulateRun {
    fn execute(&self) -> Result<Output> {
        let mut trace = Vec::new();
        let mut files = Vec::new();
        let stride = if self.trace.is_some() {
            self.trace_stride
        } else {
            0
        };
        let result = {
            let mut writer = csv::Writer::from_writer(&mut trace);
            if self.trace.is_some() {
                writer.write_record(["turn", "S_n"])?;
            }
            let mut io_error = None;
            let result = simulate_game_traced(self.dims, &self.game, &self.sim, stride, |t, s| {
                if io_error.is_none() {
                    if let Err(e) = writer.write_record([t.to_string(), s.to_string()]) {
                        io_error = Some(e);
                    }
                }
            })?;
            if let Some(e) = io_error {
                return Err(e.into());
            }
            writer.flush()?;
            result
        };
        if let Some(path) = &self.trace {
            files.push((path.clone(), trace));
        }
        let report = SimReport::new(self.dims, &self.game, &result);
        Ok(Output {
            body: json(&report)?,
            summary: format!(
                "{} {}: mean_hat = {:.7} ± {:.7} var_hat = {:.5} (n = {}, l = {}, b = {})",
                self.dims,
                report.game,
                report.mean_hat,
                report.std_error,
                report.var_hat,
                report.n,
                report.l,
                report.b
            ),
            files,
        })
    }
}

impl ScanRun {
    fn execute(&self) -> Result<Output> {
        let grid = match &self.budget {
            Some(budget) => scan_cross_section_simulated(&self.spec, budget)?,
            None => {
                scan_cross_section(&self.spec, exact_options(self.cap)).map_err(|e| match e {
                    parrondo::Error::CapExceeded { .. } => anyhow::Error::new(e).context(
                        "lattice too large for exact scans; pass --turns for a simulated scan",
                    ),
                    e => e.into(),
                })?
            }
        };
        let body = match self.format {
            GridFormat::Csv => {
                let mut buf = Vec::new();
                grid.write_csv(&mut buf)?;
                buf
            }
            GridFormat::Json => json(&grid)?,
        };
        Ok(Output {
            body,
            summary: format!(
                "{} cells: {} parrondo, {} anti-parrondo, {} neither, {} undefined",
                grid.cells.len(),
                grid.count(RegionClass::Parrondo),
                grid.count(RegionClass::AntiParrondo),
                grid.count(RegionClass::Neither),
                grid.count(RegionClass::Undefined)
            ),
            files: Vec::new(),
        })
    }
}

impl VolumeRun {
    fn execute(&self) -> Result<Output> {
        let v = estimate_region_volume(
            self.dims,
            self.p0,
            self.p4,
            self.game,
            self.samples,
            self.seed,
            exact_options(self.cap),
        )?;
        Ok(Output {
            summary: format!(
                "vol_parrondo = {:.6} ± {:.6}, vol_anti = {:.6} ± {:.6}",
                v.vol_parrondo, v.se_parrondo, v.vol_anti, v.se_anti
            ),
            body: json(&v)?,
            files: Vec::new(),
        })
    }
}

#[derive(Serialize)]
struct OrbitSummary {
    #[serde(rename = "M")]
    m: usize,
    #[serde(rename = "N")]
    n: usize,
    states: u64,
    transpose: bool,
    classes: usize,
}

impl OrbitsRun {
    fn execute(&self) -> Result<Output> {
        self.dims.check_cap(parrondo::lattice::MAX_PACKED_SITES)?;
        let table = enumerate_orbits(self.dims, self.transpose)?;
        let summary = OrbitSummary {
            m: self.dims.m,
            n: self.dims.n,
            states: self.dims.num_states(),
            transpose: self.transpose,
            classes: table.num_classes(),
        };
        let mut files = Vec::new();
        if let Some(path) = &self.table {
            let mut buf = Vec::new();
            table.write_csv(&mut buf)?;
            files.push((path.clone(), buf));
        }
        Ok(Output {
            summary: format!("{} {} {}", self.dims, summary.states, summary.classes),
            body: json(&summary)?,
            files,
        })
    }
}

#[derive(Serialize)]
struct CheckReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    params: Option<[f64; 5]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    basic: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    annihilating: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    annihilating_lhs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fraction: Option<FractionReport>,
}

#[derive(Serialize)]
struct FractionReport {
    condition: Condition,
    game: ConditionGame,
    #[serde(flatten)]
    estimate: Proportion,
}

impl CheckRun {
    fn execute(&self) -> Result<Output> {
        let mut parts = Vec::new();
        let mut report = CheckReport {
            params: None,
            basic: None,
            annihilating: None,
            annihilating_lhs: None,
            fraction: None,
        };
        if let Some(p) = &self.params {
            let basic = check_basic_estimate(p);
            let annihilating = check_annihilating(p);
            parts.push(format!("basic={basic} annihilating={annihilating}"));
            report.params = Some(p.0);
            report.basic = Some(basic);
            report.annihilating = Some(annihilating);
            report.annihilating_lhs = Some(annihilating_lhs(p));
        }
        if let Some(f) = &self.fraction {
            let estimate = estimate_condition_fraction(f.condition, f.game, f.samples, f.seed)?;
            parts.push(format!(
                "fraction={:.6} se={:.6}",
                estimate.fraction, estimate.std_error
            ));
            report.fraction = Some(FractionReport {
                condition: f.condition,
                game: f.game,
                estimate,
            });
        }
        Ok(Output {
            body: json(&report)?,
            summary: parts.join(" "),
            files: Vec::new(),
        })
    }
}

#[derive(Serialize)]
struct ProbeReport<'a> {
    game: String,
    params: [f64; 5],
    mode: &'a ProbeMode,
    rows: Vec<parrondo::regions::ProbeRow>,
}

impl ProbeRun {
    fn execute(&self) -> Result<Output> {
        let rows = convergence_probe(
            &self.params,
            self.game,
            &self.sizes,
            &self.mode,
            exact_options(self.cap),
        )
        .context("convergence probe")?;
        let summary = rows
            .iter()
            .map(|r| format!("{}x{}: mu_B = {:.6} mu_C = {:.6}", r.m, r.n, r.mu_b, r.mu_c))
            .collect::<Vec<_>>()
            .join("; ");
        let report = ProbeReport {
            game: self.game.label(),
            params: self.params.0,
            mode: &self.mode,
            rows,
        };
        Ok(Output {
            body: json(&report)?,
            summary,
            files: Vec::new(),
        })
    }
}

/// Path of the config written next to `out`.
pub fn config_path(out: &std::path::Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".config.json");
    PathBuf::from(name)
}

pub fn read_config(path: &std::path::Path) -> Result<RunConfig> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| {
        anyhow::Error::new(crate::UsageError(format!(
            "invalid config {}: {e}",
            path.display()
        )))
    })
}

pub fn write_config(config: &RunConfig, path: &std::path::Path) -> Result<()> {
    let mut text = serde_json::to_vec_pretty(config)?;
    text.push(b'\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
