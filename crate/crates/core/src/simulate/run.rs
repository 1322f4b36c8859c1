use serde::{Deserialize, Serialize};

use super::block::{block_size, BlockVariance};
use super::grid::{Grid, InitialState};
use super::rng::RngStreams;
use crate::error::{Error, Result};
use crate::exact::{classify_regime, mixture_params, GameSpec, Params, RegimeTag};
use crate::lattice::{LatticeDims, LatticeState};

/// Warm-up tolerance used by [`default_warmup`].
pub const DEFAULT_WARMUP_EPS: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Turns counted after the warm-up.
    pub n: u64,
    /// Turns played and discarded before counting.
    pub warmup: u64,
    /// `c` in the block size `⌊c n^{1/3}⌋`.
    pub block_constant: f64,
    pub seed: u64,
    #[serde(default)]
    pub initial: InitialState,
}

impl SimConfig {
    /// Config with the default warm-up and block constant for `dims`.
    pub fn new(dims: LatticeDims, n: u64, seed: u64) -> Self {
        Self {
            n,
            warmup: default_warmup(dims),
            block_constant: default_block_constant(dims),
            seed,
            initial: InitialState::AllZeros,
        }
    }

    pub fn block_size(&self) -> usize {
        block_size(self.n, self.block_constant)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be at least 1".into()));
        }
        if !(self.block_constant.is_finite() && self.block_constant > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "block constant must be positive, got {}",
                self.block_constant
            )));
        }
        let b = self.block_size();
        if b as u64 > self.n {
            return Err(Error::BlockTooLarge { b, n: self.n });
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SimResult {
    pub n: u64,
    pub warmup: u64,
    pub block_size: usize,
    pub block_constant: f64,
    pub seed: u64,
    /// `S_n`, the profit over the counted turns.
    pub total_profit: i64,
    pub mean_hat: f64,
    pub var_hat: f64,
    pub std_error: f64,
    /// Counted turns that used game A.
    pub game_a_turns: u64,
    pub final_state: Grid,
}

/// JSON summary of one simulation run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n_cols: usize,
    pub game: String,
    pub params: [f64; 5],
    pub n: u64,
    pub l: u64,
    pub b: usize,
    pub c: f64,
    pub seed: u64,
    pub mean_hat: f64,
    pub var_hat: f64,
    pub std_error: f64,
}

impl SimReport {
    pub fn new(dims: LatticeDims, game: &GameSpec<f64>, result: &SimResult) -> Self {
        Self {
            m: dims.m,
            n_cols: dims.n,
            game: game.label(),
            params: game.params().0,
            n: result.n,
            l: result.warmup,
            b: result.block_size,
            c: result.block_constant,
            seed: result.seed,
            mean_hat: result.mean_hat,
            var_hat: result.var_hat,
            std_error: result.std_error,
        }
    }
}

/// Upper bound `⌈MN (ln M + ln N + ln(1/ε))⌉` on the game-A mixing time.
pub fn mixing_warmup(dims: LatticeDims, eps: f64) -> Result<u64> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "ε = {eps} must lie in (0, 1]"
        )));
    }
    let (m, n) = (dims.m as f64, dims.n as f64);
    Ok((m * n * (m.ln() + n.ln() - eps.ln())).ceil() as u64)
}

/// Ten times the game-A bound at `ε = 0.001`.
pub fn default_warmup(dims: LatticeDims) -> u64 {
    10 * mixing_warmup(dims, DEFAULT_WARMUP_EPS).expect("valid ε")
}

/// `c = 10` up to 100 sites, `√(MN)` beyond.
pub fn default_block_constant(dims: LatticeDims) -> f64 {
    let mn = dims.sites();
    if mn <= 100 {
        10.0
    } else {
        (mn as f64).sqrt()
    }
}

/// One turn on a packed state.
pub fn step(x: LatticeState, p: &Params<f64>, streams: &mut RngStreams) -> (LatticeState, i8) {
    let dims = x.dims();
    let site = streams.next_site();
    let u = streams.next_uniform();
    let (i, j) = (site / dims.n, site % dims.n);
    let m = x.neighbor_count(i, j).expect("site drawn in range") as usize;
    let (bit, xi) = if u <= p.p(m) { (1, 1) } else { (0, -1) };
    let bits = (x.bits() & !(1 << site)) | (bit << site);
    (LatticeState::new(bits, dims).expect("same lattice"), xi)
}

/// Coin vectors played over one period, with game-A flags.
fn schedule(game: &GameSpec<f64>) -> Result<Vec<(Params<f64>, bool)>> {
    game.validate()?;
    let undefined = |p: &Params<f64>| {
        matches!(
            classify_regime(p, LatticeDims { m: 3, n: 3 }),
            Ok(RegimeTag::MeanUndefined)
        )
    };
    let cycle = match *game {
        GameSpec::B { p } => vec![(p, p.is_game_a())],
        GameSpec::Mixture { p, gamma } => vec![(mixture_params(&p, gamma)?, gamma == 1.0)],
        GameSpec::Pattern { p, r, s } => {
            let a = std::iter::repeat_n((Params::game_a(), true), r);
            a.chain(std::iter::repeat_n((p, false), s)).collect()
        }
    };
    if cycle.len() == 1 && undefined(&cycle[0].0) {
        return Err(Error::MeanUndefined(
            "regime undefined: p0 = 0 and p4 = 1 make both constant states absorbing".into(),
        ));
    }
    Ok(cycle)
}

/// Plays `game` for `warmup + n` turns and estimates the mean and CLT
/// variance of the per-turn profit from the last `n`.
pub fn simulate_game(
    dims: LatticeDims,
    game: &GameSpec<f64>,
    cfg: &SimConfig,
) -> Result<SimResult> {
    simulate_game_traced(dims, game, cfg, 0, |_, _| {})
}

/// As [`simulate_game`], also reporting `(turn, S_turn)` every `stride`
/// counted turns (never when `stride` is 0).
pub fn simulate_game_traced<F: FnMut(u64, i64)>(
    dims: LatticeDims,
    game: &GameSpec<f64>,
    cfg: &SimConfig,
    stride: u64,
    mut trace: F,
) -> Result<SimResult> {
    cfg.validate()?;
    let cycle = schedule(game)?;
    let mut grid = cfg.initial.build(dims)?;
    let mut streams = RngStreams::new(cfg.seed, dims);
    let mut phase = 0usize;

    for _ in 0..cfg.warmup {
        let site = streams.next_site();
        let u = streams.next_uniform();
        grid.play(site, &cycle[phase].0, u);
        phase += 1;
        if phase == cycle.len() {
            phase = 0;
        }
    }

    let b = cfg.block_size();
    let mut est = BlockVariance::new(b)?;
    let mut game_a_turns = 0u64;
    for turn in 1..=cfg.n {
        let (p, is_a) = &cycle[phase];
        let site = streams.next_site();
        let u = streams.next_uniform();
        est.push(grid.play(site, p, u));
        game_a_turns += u64::from(*is_a);
        phase += 1;
        if phase == cycle.len() {
            phase = 0;
        }
        if stride > 0 && turn % stride == 0 {
            trace(turn, est.total());
        }
    }

    let var_hat = est.estimate()?.max(0.0);
    Ok(SimResult {
        n: cfg.n,
        warmup: cfg.warmup,
        block_size: b,
        block_constant: cfg.block_constant,
        seed: cfg.seed,
        total_profit: est.total(),
        mean_hat: est.total() as f64 / cfg.n as f64,
        var_hat,
        std_error: (var_hat / cfg.n as f64).sqrt(),
        game_a_turns,
        final_state: grid,
    })
}

/// Cumulative profits of two game-B processes driven by the same draws.
#[derive(Clone, Debug, PartialEq)]
pub struct CoupledPaths {
    /// `S_0 = 0, S_1, ..., S_n` under `p`.
    pub path: Vec<i64>,
    /// The same under `p'`.
    pub path_prime: Vec<i64>,
    /// `S_k <= S'_k` for every `k`.
    pub dominance: bool,
}

/// Couples game B at `p` and at `p'` from the all-losers state through
/// shared row, column and coin streams.
pub fn coupled_paths(
    dims: LatticeDims,
    p: &Params<f64>,
    p_prime: &Params<f64>,
    n: u64,
    seed: u64,
) -> CoupledPaths {
    let mut x = Grid::zeros(dims);
    let mut y = Grid::zeros(dims);
    let mut streams = RngStreams::new(seed, dims);
    let mut path = Vec::with_capacity(n as usize + 1);
    let mut path_prime = Vec::with_capacity(n as usize + 1);
    let (mut s, mut t) = (0i64, 0i64);
    path.push(0);
    path_prime.push(0);
    let mut dominance = true;
    for _ in 0..n {
        let site = streams.next_site();
        let u = streams.next_uniform();
        s += i64::from(x.play(site, p, u));
        t += i64::from(y.play(site, p_prime, u));
        dominance &= s <= t;
        path.push(s);
        path_prime.push(t);
    }
    CoupledPaths {
        path,
        path_prime,
        dominance,
    }
}
