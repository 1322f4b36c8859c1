use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{ExactOptions, ExactSolver, GameSpec, Params};
use crate::lattice::LatticeDims;
use crate::simulate::{simulate_game, task_rng, SimConfig};

/// Means within this distance of zero count as zero when classifying.
pub const ZERO_TOLERANCE: f64 = 1e-12;

/// The combined game C compared against game B.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GameC {
    Mixture { gamma: f64 },
    Pattern { r: usize, s: usize },
}

impl GameC {
    pub fn with_params(&self, p: Params<f64>) -> GameSpec<f64> {
        match *self {
            GameC::Mixture { gamma } => GameSpec::Mixture { p, gamma },
            GameC::Pattern { r, s } => GameSpec::Pattern { p, r, s },
        }
    }

    /// `mix:γ` or `pat:r,s`.
    pub fn label(&self) -> String {
        self.with_params(Params::game_a()).label()
    }
}

impl std::str::FromStr for GameC {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("game C must be mix:γ or pat:r,s, got {s:?}"));
        if let Some(g) = s.strip_prefix("mix:") {
            let gamma: f64 = g.trim().parse().map_err(|_| bad())?;
            return Ok(GameC::Mixture { gamma });
        }
        if let Some(rs) = s.strip_prefix("pat:") {
            let (r, s) = rs.split_once(',').ok_or_else(bad)?;
            return Ok(GameC::Pattern {
                r: r.trim().parse().map_err(|_| bad())?,
                s: s.trim().parse().map_err(|_| bad())?,
            });
        }
        Err(bad())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionClass {
    /// `μ_B <= 0 < μ_C`.
    Parrondo,
    /// `μ_C < 0 <= μ_B`.
    AntiParrondo,
    Neither,
    /// Some mean is not defined.
    Undefined,
}

impl RegionClass {
    pub fn classify(mu_b: f64, mu_c: f64) -> Self {
        if mu_b <= ZERO_TOLERANCE && mu_c > ZERO_TOLERANCE {
            RegionClass::Parrondo
        } else if mu_b >= -ZERO_TOLERANCE && mu_c < -ZERO_TOLERANCE {
            RegionClass::AntiParrondo
        } else {
            RegionClass::Neither
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            RegionClass::Parrondo => "parrondo",
            RegionClass::AntiParrondo => "anti_parrondo",
            RegionClass::Neither => "neither",
            RegionClass::Undefined => "undefined",
        }
    }
}

/// Mean profits of games B and C at one parameter vector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellValue {
    pub mu_b: Option<f64>,
    pub mu_c: Option<f64>,
    pub class: RegionClass,
}

/// Exact means of B and C at `p`; domain failures give an undefined cell.
pub fn evaluate_cell(solver: &ExactSolver, p: Params<f64>, game_c: GameC) -> Result<CellValue> {
    let keep_domain = |r: Result<f64>| match r {
        Ok(v) => Ok(Some(v)),
        Err(e) if e.is_domain() || matches!(e, Error::SolverDidNotConverge { .. }) => Ok(None),
        Err(e) => Err(e),
    };
    let mu_b = keep_domain(solver.mean(&GameSpec::B { p }))?;
    let mu_c = keep_domain(solver.mean(&game_c.with_params(p)))?;
    let class = match (mu_b, mu_c) {
        (Some(b), Some(c)) => RegionClass::classify(b, c),
        _ => RegionClass::Undefined,
    };
    Ok(CellValue { mu_b, mu_c, class })
}

/// A free coordinate of a cross-section, sampled at `points` evenly spaced
/// values from `lo` to `hi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    /// Coin index `m` of `p_m`.
    pub index: usize,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Axis {
    pub fn unit(index: usize, points: usize) -> Self {
        Self {
            index,
            lo: 0.0,
            hi: 1.0,
            points,
        }
    }

    pub fn value(&self, k: usize) -> f64 {
        if k + 1 == self.points {
            self.hi
        } else {
            self.lo + (self.hi - self.lo) * k as f64 / (self.points - 1) as f64
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossSectionSpec {
    pub dims: LatticeDims,
    /// `(m, p_m)` pairs held constant.
    pub fixed: Vec<(usize, f64)>,
    /// Free coordinates; the first varies slowest.
    pub axes: Vec<Axis>,
    pub game_c: GameC,
}

impl CrossSectionSpec {
    pub fn validate(&self) -> Result<()> {
        let mut seen = [0u8; 5];
        for &(m, v) in &self.fixed {
            if m > 4 || !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidConfig(format!("fixed p{m} = {v} is invalid")));
            }
            seen[m.min(4)] += 1;
        }
        for a in &self.axes {
            if a.index > 4 {
                return Err(Error::InvalidConfig(format!(
                    "axis p{} does not exist",
                    a.index
                )));
            }
            if a.points < 2 {
                return Err(Error::InvalidConfig(format!(
                    "axis p{} needs at least 2 points",
                    a.index
                )));
            }
            if !(0.0 <= a.lo && a.lo <= a.hi && a.hi <= 1.0) {
                return Err(Error::InvalidConfig(format!(
                    "axis p{} range is invalid",
                    a.index
                )));
            }
            seen[a.index] += 1;
        }
        if seen.iter().any(|&c| c != 1) {
            return Err(Error::InvalidConfig(
                "each of p0..p4 must be either fixed or an axis, exactly once".into(),
            ));
        }
        Ok(())
    }

    pub fn num_cells(&self) -> usize {
        self.axes.iter().map(|a| a.points).product()
    }

    /// Grid indices of cell `k`, first axis slowest.
    pub fn indices(&self, mut k: usize) -> Vec<usize> {
        let mut idx = vec![0; self.axes.len()];
        for (slot, axis) in idx.iter_mut().zip(&self.axes).rev() {
            *slot = k % axis.points;
            k /= axis.points;
        }
        idx
    }

    pub fn params_at(&self, idx: &[usize]) -> Params<f64> {
        let mut p = [0.0; 5];
        for &(m, v) in &self.fixed {
            p[m] = v;
        }
        for (axis, &k) in self.axes.iter().zip(idx) {
            p[axis.index] = axis.value(k);
        }
        Params(p)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub index: Vec<usize>,
    pub params: [f64; 5],
    #[serde(flatten)]
    pub value: CellValue,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionGrid {
    pub spec: CrossSectionSpec,
    pub cells: Vec<GridCell>,
}

impl RegionGrid {
    pub fn count(&self, class: RegionClass) -> usize {
        self.cells.iter().filter(|c| c.value.class == class).count()
    }

    /// One row per cell: axis values, `mu_B`, `mu_C`, class.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<String> = self
            .spec
            .axes
            .iter()
            .map(|a| format!("p{}", a.index))
            .collect();
        header.extend(["mu_B".into(), "mu_C".into(), "class".into()]);
        w.write_record(&header)?;
        let fmt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
        for cell in &self.cells {
            let mut row: Vec<String> = self
                .spec
                .axes
                .iter()
                .map(|a| format!("{}", cell.params[a.index]))
                .collect();
            row.push(fmt(cell.value.mu_b));
            row.push(fmt(cell.value.mu_c));
            row.push(cell.value.class.as_str().into());
            w.write_record(&row)?;
        }
        w.flush()
    }
}

/// Exact `μ_B` and `μ_C` on every cell of a cross-section grid.
pub fn scan_cross_section(spec: &CrossSectionSpec, opts: ExactOptions) -> Result<RegionGrid> {
    spec.validate()?;
    let solver = ExactSolver::new(spec.dims, opts)?;
    let cells = (0..spec.num_cells())
        .into_par_iter()
        .map(|k| {
            let index = spec.indices(k);
            let p = spec.params_at(&index);
            let value = evaluate_cell(&solver, p, spec.game_c)?;
            Ok(GridCell {
                index,
                params: p.0,
                value,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RegionGrid {
        spec: spec.clone(),
        cells,
    })
}

/// Turn budget for a simulation-backed scan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimBudget {
    /// Counted turns per cell and game.
    pub n: u64,
    /// Defaults per lattice when absent.
    pub warmup: Option<u64>,
    pub block_constant: Option<f64>,
    pub seed: u64,
}

impl SimBudget {
    fn config(&self, dims: LatticeDims, cell: usize) -> SimConfig {
        let mut cfg = SimConfig::new(
            dims,
            self.n,
            rand::Rng::gen(&mut task_rng(self.seed, cell as u64)),
        );
        if let Some(l) = self.warmup {
            cfg.warmup = l;
        }
        if let Some(c) = self.block_constant {
            cfg.block_constant = c;
        }
        cfg
    }
}

/// As [`scan_cross_section`] but with simulated means, for lattices beyond
/// the exact path. Cells are seeded by index, so results do not depend on
/// scheduling.
pub fn scan_cross_section_simulated(
    spec: &CrossSectionSpec,
    budget: &SimBudget,
) -> Result<RegionGrid> {
    spec.validate()?;
    let cells = (0..spec.num_cells())
        .into_par_iter()
        .map(|k| {
            let index = spec.indices(k);
            let p = spec.params_at(&index);
            let cfg = budget.config(spec.dims, k);
            let run = |game: &GameSpec<f64>| match simulate_game(spec.dims, game, &cfg) {
                Ok(r) => Ok(Some(r.mean_hat)),
                Err(e) if e.is_domain() => Ok(None),
                Err(e) => Err(e),
            };
            let mu_b = run(&GameSpec::B { p })?;
            let mu_c = run(&spec.game_c.with_params(p))?;
            let class = match (mu_b, mu_c) {
                (Some(b), Some(c)) => RegionClass::classify(b, c),
                _ => RegionClass::Undefined,
            };
            Ok(GridCell {
                index,
                params: p.0,
                value: CellValue { mu_b, mu_c, class },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RegionGrid {
        spec: spec.clone(),
        cells,
    })
}
