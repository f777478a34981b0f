//! Multi-waveguide secrecy maximization by alternating optimization.
//!
//! For fixed antenna positions the covariance step maximizes the
//! linear-fractional objective obtained by introducing the slack `γ ≥ 2^{R_E}`:
//! `γ` is updated in closed form and, for fixed `γ`, the Charnes–Cooper
//! substitution turns the problem into a linear SDP. For fixed covariances the
//! antenna positions are improved by coordinate-wise exhaustive grid search.

use std::f64::consts::LN_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eig::hermitian_eig;
use crate::error::{Error, Result};
use crate::model::{channel_coeff, channel_vector, Complex64, Position, SystemParams, WaveguideLayout};
use crate::rates::{quadratic_form, trace_product, BeamformingState, CMatrix, CVector, RatePair};
use crate::sdp::{self, LinearForm, SdpSolution, SdpStandardForm, SdpStatus};
use crate::trace::{StepKind, Trace};

/// Smallest SR gain for which a grid move is taken.
pub const GRID_IMPROVEMENT: f64 = 1e-9;
const MAX_GRID_CYCLES: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PositionInit {
    /// Every antenna at Bob's abscissa.
    BobAligned,
    Midpoint,
    UniformRandom {
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridMode {
    /// One coordinate at a time, cycling until no move helps.
    Cyclic,
    /// Full enumeration of the position grid (N ≤ 2 only).
    Joint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiSolveConfig {
    /// Grid spacing for the position step, m.
    pub grid_step: f64,
    pub outer_tol: f64,
    pub inner_tol: f64,
    pub max_outer_iters: usize,
    pub max_inner_iters: usize,
    pub position_init: PositionInit,
    pub grid_mode: GridMode,
    /// When false the AN covariance is pinned to zero.
    pub artificial_noise: bool,
    /// When false the antennas stay at their initial positions.
    pub optimize_positions: bool,
}

impl Default for MultiSolveConfig {
    fn default() -> Self {
        Self {
            grid_step: 0.05,
            outer_tol: 1e-4,
            inner_tol: 1e-4,
            max_outer_iters: 30,
            max_inner_iters: 50,
            position_init: PositionInit::BobAligned,
            grid_mode: GridMode::Cyclic,
            artificial_noise: true,
            optimize_positions: true,
        }
    }
}

impl MultiSolveConfig {
    pub fn validate(&self, region_side: f64) -> Result<()> {
        if !(self.grid_step > 0.0) || region_side / self.grid_step < 2.0 {
            return Err(Error::InvalidParameter(format!(
                "grid step {} must split [0, {region_side}] into at least two intervals",
                self.grid_step
            )));
        }
        if !(self.outer_tol > 0.0 && self.inner_tol > 0.0) {
            return Err(Error::InvalidParameter("solver tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// Users, system, power budget and the waveguide geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiScenario {
    pub bob: Position,
    pub eve: Position,
    pub params: SystemParams,
    pub power: f64,
    pub layout: WaveguideLayout,
}

impl MultiScenario {
    /// Waveguides fed at `x = 0`.
    pub fn new(bob: Position, eve: Position, params: SystemParams, power: f64) -> Result<Self> {
        if !(power.is_finite() && power > 0.0) {
            return Err(Error::InvalidParameter(format!("power must be positive, got {power}")));
        }
        let side = params.region_side;
        for (who, p) in [("bob", &bob), ("eve", &eve)] {
            if !p.is_finite() || p.z != 0.0 || !(0.0..=side).contains(&p.x) || !(0.0..=side).contains(&p.y) {
                return Err(Error::InvalidParameter(format!("{who} at {p:?} is outside the region")));
            }
        }
        let layout = WaveguideLayout::new(&params, 0.0)?;
        Ok(Self { bob, eve, params, power, layout })
    }

    pub fn num_antennas(&self) -> usize {
        self.layout.len()
    }

    pub fn channels(&self, pa_x: &[f64]) -> Result<(CVector, CVector)> {
        let hb = channel_vector(&self.bob, pa_x, &self.layout, &self.params)?;
        let he = channel_vector(&self.eve, pa_x, &self.layout, &self.params)?;
        Ok((hb.0, he.0))
    }

    pub fn initial_positions(&self, init: PositionInit) -> Vec<f64> {
        let side = self.params.region_side;
        let n = self.num_antennas();
        match init {
            PositionInit::BobAligned => vec![self.bob.x.clamp(0.0, side); n],
            PositionInit::Midpoint => vec![side / 2.0; n],
            PositionInit::UniformRandom { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..n).map(|_| rng.gen_range(0.0..=side)).collect()
            }
        }
    }
}

/// Channels of one link pair with fixed antennas.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkPair {
    pub h_bob: CVector,
    pub h_eve: CVector,
    pub noise_bob: f64,
    pub noise_eve: f64,
    pub power: f64,
}

impl LinkPair {
    pub fn h_bob_matrix(&self) -> CMatrix {
        &self.h_bob * self.h_bob.adjoint()
    }

    pub fn h_eve_matrix(&self) -> CMatrix {
        &self.h_eve * self.h_eve.adjoint()
    }

    pub fn rates(&self, w: &CMatrix, r_m: &CMatrix) -> RatePair {
        let rate = |h: &CVector, noise: f64| {
            let s = quadratic_form(h, w).max(0.0);
            let i = quadratic_form(h, r_m).max(0.0);
            (s / (i + noise)).ln_1p() / LN_2
        };
        RatePair::new(rate(&self.h_bob, self.noise_bob), rate(&self.h_eve, self.noise_eve))
    }

    pub fn secrecy(&self, w: &CMatrix, r_m: &CMatrix) -> f64 {
        self.rates(w, r_m).unclamped()
    }

    /// Maximum-ratio transmission towards Bob with the whole budget, no AN.
    pub fn mrt(&self) -> (CMatrix, CMatrix) {
        let n = self.h_bob.len();
        let norm2 = self.h_bob.norm_squared();
        let w = if norm2 > 0.0 {
            self.h_bob_matrix() * Complex64::new(self.power / norm2, 0.0)
        } else {
            CMatrix::identity(n, n) * Complex64::new(self.power / n as f64, 0.0)
        };
        (w, CMatrix::zeros(n, n))
    }
}

/// `γ`, the covariances it was computed from and `log2` of the fixed-`γ`
/// objective.
#[derive(Debug, Clone, PartialEq)]
pub struct SlackState {
    pub gamma: f64,
    pub w: CMatrix,
    pub r_m: CMatrix,
    pub objective: f64,
}

/// Smallest `γ` meeting `Tr(H_E W) ≤ (γ − 1)(Tr(H_E R_m) + σ_E²)`.
pub fn gamma_star(w: &CMatrix, r_m: &CMatrix, h_eve: &CMatrix, noise_eve: f64) -> f64 {
    let leak = trace_product(h_eve, w).max(0.0);
    let jam = trace_product(h_eve, r_m).max(0.0);
    1.0 + leak / (jam + noise_eve)
}

/// `(Tr(H_B R_m) + Tr(H_B W) + σ_B²) / (γ (Tr(H_B R_m) + σ_B²))`.
pub fn fixed_gamma_ratio(gamma: f64, w: &CMatrix, r_m: &CMatrix, h_bob: &CMatrix, noise_bob: f64) -> f64 {
    let jam = trace_product(h_bob, r_m).max(0.0) + noise_bob;
    (jam + trace_product(h_bob, w).max(0.0)) / (gamma * jam)
}

#[derive(Debug, Clone)]
pub struct FixedGammaSolution {
    pub state: SlackState,
    pub sdp: SdpSolution,
}

/// Maximizes the fixed-`γ` ratio over `Tr(W + R_m) = P` and the leakage
/// constraint. With `W̃ = tW/P`, `R̃ = tR_m/P` and the denominator normalized
/// to one this is the linear SDP
///
/// ```text
/// max Tr(G_B W̃)  s.t.  Tr(G_B R̃) + t = 1,  Tr(W̃ + R̃) = t,
///                      Tr(G_E W̃) − (γ − 1)(Tr(G_E R̃) + t) ≤ 0,
/// ```
///
/// with `G_B = P H_B / σ_B²`, `G_E = P H_E / σ_E²`.
pub fn solve_fixed_gamma(
    gamma: f64,
    h_bob: &CMatrix,
    h_eve: &CMatrix,
    noise_bob: f64,
    noise_eve: f64,
    power: f64,
    artificial_noise: bool,
) -> Result<FixedGammaSolution> {
    if !(gamma >= 1.0) || !gamma.is_finite() {
        return Err(Error::InvalidParameter(format!("γ must be at least 1, got {gamma}")));
    }
    if !(power > 0.0 && noise_bob > 0.0 && noise_eve > 0.0) {
        return Err(Error::InvalidParameter("power and noise must be positive".into()));
    }
    let n = h_bob.nrows();
    if h_bob.shape() != (n, n) || h_eve.shape() != (n, n) {
        return Err(Error::Dimension("channel matrices must share one square shape".into()));
    }
    let g_b = h_bob * Complex64::new(power / noise_bob, 0.0);
    let g_e = h_eve * Complex64::new(power / noise_eve, 0.0);
    let eye = CMatrix::identity(n, n);
    let real = |v: f64| Complex64::new(v, 0.0);

    // The noise block is stored as κ·R̂ so both blocks stay O(1) at high SNR.
    let kappa = g_b.trace().re.max(1.0);
    let dims = if artificial_noise { vec![n, n] } else { vec![n] };
    let mut p = SdpStandardForm::new(dims, 1);
    p.objective.blocks[0] = g_b.clone();

    let mut norm = p.zero_form();
    if artificial_noise {
        norm.blocks[1] = &g_b * real(1.0 / kappa);
    }
    norm.scalars[0] = 1.0;
    p.add_eq(norm, 1.0);

    let mut budget = p.zero_form();
    budget.blocks[0] = eye.clone();
    if artificial_noise {
        budget.blocks[1] = eye * real(1.0 / kappa);
    }
    budget.scalars[0] = -1.0;
    p.add_eq(budget, 0.0);

    let mut leak: LinearForm = p.zero_form();
    leak.blocks[0] = g_e.clone();
    if artificial_noise {
        leak.blocks[1] = &g_e * real(-(gamma - 1.0) / kappa);
    }
    leak.scalars[0] = -(gamma - 1.0);
    p.add_ineq(leak, 0.0);

    let sol = sdp::solve_sdp_default(&p)?;
    let t = sol.scalars[0];
    let (w, r_m) = if t > 0.0 {
        let scale = real(power / t);
        let w = hermitize(&(&sol.blocks[0] * scale));
        let r = if artificial_noise { hermitize(&(&sol.blocks[1] * (scale / kappa))) } else { CMatrix::zeros(n, n) };
        // Remove the residual power mismatch left by the interior-point tolerance.
        let total = w.trace().re + r.trace().re;
        if total > 0.0 {
            let k = real(power / total);
            (&w * k, &r * k)
        } else {
            (w, r)
        }
    } else {
        (CMatrix::zeros(n, n), CMatrix::zeros(n, n))
    };
    let objective = fixed_gamma_ratio(gamma, &w, &r_m, h_bob, noise_bob).log2();
    Ok(FixedGammaSolution { state: SlackState { gamma, w, r_m, objective }, sdp: sol })
}

fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Principal component `√λ_max · u_max` of `W`.
pub fn rank1_refine(w: &CMatrix) -> Result<CVector> {
    let eig = hermitian_eig(w)?;
    let lmax = eig.max_eigenvalue().max(0.0);
    Ok(eig.principal_vector() * Complex64::new(lmax.sqrt(), 0.0))
}

/// Outcome of one run of the covariance inner loop.
#[derive(Debug, Clone)]
pub struct InnerOutcome {
    pub w: CMatrix,
    pub r_m: CMatrix,
    pub gamma: f64,
    pub secrecy: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Alternates `γ*` and the fixed-`γ` SDP until the SR gain drops below
/// `inner_tol`. A non-optimal SDP result is discarded and ends the loop.
pub fn covariance_step(
    link: &LinkPair,
    w: CMatrix,
    r_m: CMatrix,
    config: &MultiSolveConfig,
    trace: &mut Trace,
    outer: usize,
) -> Result<InnerOutcome> {
    let hb = link.h_bob_matrix();
    let he = link.h_eve_matrix();
    let mut out = InnerOutcome {
        gamma: gamma_star(&w, &r_m, &he, link.noise_eve),
        secrecy: link.secrecy(&w, &r_m),
        w,
        r_m,
        iterations: 0,
        converged: false,
    };
    while out.iterations < config.max_inner_iters {
        out.iterations += 1;
        let sol = solve_fixed_gamma(
            out.gamma,
            &hb,
            &he,
            link.noise_bob,
            link.noise_eve,
            link.power,
            config.artificial_noise,
        )?;
        if sol.sdp.status != SdpStatus::Optimal {
            break;
        }
        let sr = link.secrecy(&sol.state.w, &sol.state.r_m);
        trace.push(StepKind::Covariance, outer, sr);
        let gain = sr - out.secrecy;
        out.w = sol.state.w;
        out.r_m = sol.state.r_m;
        out.secrecy = sr;
        out.gamma = gamma_star(&out.w, &out.r_m, &he, link.noise_eve);
        if gain.abs() < config.inner_tol {
            out.converged = true;
            break;
        }
    }
    Ok(out)
}

/// Per-waveguide channel coefficient on the position grid.
struct GridChannels {
    grid: Vec<f64>,
    /// `[n][g]`.
    bob: Vec<Vec<Complex64>>,
    eve: Vec<Vec<Complex64>>,
}

impl GridChannels {
    fn new(scen: &MultiScenario, grid_step: f64) -> Result<Self> {
        let side = scen.params.region_side;
        let count = (side / grid_step + 1e-9).floor() as usize;
        let mut grid: Vec<f64> = (0..=count).map(|k| k as f64 * grid_step).collect();
        if side - grid[count] > 1e-9 * side {
            grid.push(side);
        }
        let coeffs = |user: &Position| -> Result<Vec<Vec<Complex64>>> {
            (0..scen.num_antennas())
                .map(|n| {
                    grid.iter()
                        .map(|&x| {
                            channel_coeff(user, &scen.layout.antenna(n, x), &scen.layout.feed_points[n], &scen.params)
                        })
                        .collect()
                })
                .collect()
        };
        let bob = coeffs(&scen.bob)?;
        let eve = coeffs(&scen.eve)?;
        Ok(Self { grid, bob, eve })
    }
}

/// Result of the position step.
#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    pub pa_x: Vec<f64>,
    pub secrecy: f64,
    pub cycles: usize,
}

/// Quadratic form `hᴴ M h` after replacing `h_n` by `v`, given `m_h = M h`
/// and the current value `q`.
fn updated_form(q: f64, m: &CMatrix, m_h: &CVector, h: &CVector, n: usize, v: Complex64) -> f64 {
    let d = v - h[n];
    q + 2.0 * (d.conj() * m_h[n]).re + d.norm_sqr() * m[(n, n)].re
}

/// Improves the antenna abscissae over the grid `{0, step, …, D}` for fixed
/// covariances. Each move must raise the SR by more than
/// [`GRID_IMPROVEMENT`]; ties go to the smaller position.
pub fn grid_search_positions(
    w: &CMatrix,
    r_m: &CMatrix,
    scen: &MultiScenario,
    pa_x: &[f64],
    grid_step: f64,
    mode: GridMode,
) -> Result<GridResult> {
    let n_ant = scen.num_antennas();
    if pa_x.len() != n_ant || w.shape() != (n_ant, n_ant) || r_m.shape() != (n_ant, n_ant) {
        return Err(Error::Dimension("positions and covariances must match the waveguide count".into()));
    }
    if !(grid_step > 0.0) || scen.params.region_side / grid_step < 2.0 {
        return Err(Error::InvalidParameter(format!("grid step {grid_step} is too coarse")));
    }
    let gc = GridChannels::new(scen, grid_step)?;
    let (nb, ne) = (scen.params.noise_bob, scen.params.noise_eve);
    let sr = |sb: f64, ib: f64, se: f64, ie: f64| {
        ((sb.max(0.0) / (ib.max(0.0) + nb)).ln_1p() - (se.max(0.0) / (ie.max(0.0) + ne)).ln_1p()) / LN_2
    };

    let mut x = pa_x.to_vec();
    let (mut hb, mut he) = scen.channels(&x)?;
    let eval_all = |hb: &CVector, he: &CVector| {
        sr(quadratic_form(hb, w), quadratic_form(hb, r_m), quadratic_form(he, w), quadratic_form(he, r_m))
    };
    let mut best = eval_all(&hb, &he);

    if mode == GridMode::Joint && n_ant <= 2 {
        let g = gc.grid.len();
        let mut arg: Option<Vec<usize>> = None;
        let mut idx = vec![0usize; n_ant];
        loop {
            let cb = CVector::from_iterator(n_ant, (0..n_ant).map(|n| gc.bob[n][idx[n]]));
            let ce = CVector::from_iterator(n_ant, (0..n_ant).map(|n| gc.eve[n][idx[n]]));
            let v = eval_all(&cb, &ce);
            let better = match &arg {
                None => v > best + GRID_IMPROVEMENT,
                Some(_) => v > best,
            };
            if better {
                best = v;
                arg = Some(idx.clone());
            }
            // Odometer increment, first coordinate fastest.
            let mut k = 0;
            while k < n_ant {
                idx[k] += 1;
                if idx[k] < g {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == n_ant {
                break;
            }
        }
        if let Some(a) = arg {
            x = a.iter().map(|&i| gc.grid[i]).collect();
        }
        return Ok(GridResult { pa_x: x, secrecy: best, cycles: 1 });
    }

    let mut cycles = 0;
    loop {
        cycles += 1;
        let mut moved = false;
        for n in 0..n_ant {
            let (wb, rb, we, re) = (w * &hb, r_m * &hb, w * &he, r_m * &he);
            let (qwb, qrb) = (hb.dotc(&wb).re, hb.dotc(&rb).re);
            let (qwe, qre) = (he.dotc(&we).re, he.dotc(&re).re);
            let mut arg = None;
            let mut top = best;
            for (g, &xg) in gc.grid.iter().enumerate() {
                let (vb, ve) = (gc.bob[n][g], gc.eve[n][g]);
                let v = sr(
                    updated_form(qwb, w, &wb, &hb, n, vb),
                    updated_form(qrb, r_m, &rb, &hb, n, vb),
                    updated_form(qwe, w, &we, &he, n, ve),
                    updated_form(qre, r_m, &re, &he, n, ve),
                );
                let threshold = if arg.is_none() { best + GRID_IMPROVEMENT } else { top };
                if v > threshold {
                    top = v;
                    arg = Some((g, xg));
                }
            }
            if let Some((g, xg)) = arg {
                x[n] = xg;
                hb[n] = gc.bob[n][g];
                he[n] = gc.eve[n][g];
                // Re-evaluate exactly so rounding in the incremental update never accumulates.
                best = eval_all(&hb, &he);
                moved = true;
            }
        }
        if !moved || cycles >= MAX_GRID_CYCLES {
            break;
        }
    }
    Ok(GridResult { pa_x: x, secrecy: best, cycles })
}

#[derive(Debug, Clone)]
pub struct MultiSolution {
    /// Rank-1-refined beamformer `w wᴴ`, the AN covariance and the positions.
    pub state: BeamformingState,
    pub beamformer: CVector,
    /// Rates of the refined state; this is the reported result.
    pub rates: RatePair,
    /// Rates of the covariance pair before refinement.
    pub covariance_rates: RatePair,
    pub covariance: CMatrix,
    pub trace: Trace,
    pub converged: bool,
    pub outer_iterations: usize,
    pub inner_iterations: usize,
}

fn link_pair(scen: &MultiScenario, pa_x: &[f64]) -> Result<LinkPair> {
    let (h_bob, h_eve) = scen.channels(pa_x)?;
    Ok(LinkPair { h_bob, h_eve, noise_bob: scen.params.noise_bob, noise_eve: scen.params.noise_eve, power: scen.power })
}

/// Numerically rank-1 PSD matrix: all but the top eigenvalue are negligible.
fn rank_one(w: &CMatrix) -> bool {
    match hermitian_eig(w) {
        Ok(e) => {
            let top = e.max_eigenvalue();
            let rest: f64 = e.values.iter().map(|v| v.abs()).sum::<f64>() - top.abs();
            top > 0.0 && rest <= 1e-12 * top
        }
        Err(_) => false,
    }
}

fn refined(link: &LinkPair, w: &CMatrix, r_m: &CMatrix) -> Result<(CVector, CMatrix, RatePair)> {
    let v = rank1_refine(w)?;
    let ww = &v * v.adjoint();
    let rates = link.rates(&ww, r_m);
    Ok((v, ww, rates))
}

/// Full alternation: covariance inner loop, then the position grid step,
/// until the outer SR gain falls below `outer_tol`. Starts from MRT at the
/// configured initial positions.
pub fn solve_multi(scen: &MultiScenario, config: &MultiSolveConfig) -> Result<MultiSolution> {
    solve_multi_from(scen, config, None)
}

/// [`solve_multi`] started from a given feasible state instead of MRT. A
/// nonzero AN covariance in the start requires `config.artificial_noise`.
pub fn solve_multi_from(
    scen: &MultiScenario,
    config: &MultiSolveConfig,
    start: Option<&BeamformingState>,
) -> Result<MultiSolution> {
    config.validate(scen.params.region_side)?;
    let (mut pa_x, mut link, mut w, mut r_m) = match start {
        Some(s) => {
            s.validate(scen.power, scen.params.region_side)?;
            if s.dim() != scen.num_antennas() {
                return Err(Error::Dimension(format!(
                    "start state has {} antennas, scenario {}",
                    s.dim(),
                    scen.num_antennas()
                )));
            }
            if !config.artificial_noise && s.r_m.iter().any(|v| *v != Complex64::new(0.0, 0.0)) {
                return Err(Error::InvalidParameter("start state carries AN but AN is disabled".into()));
            }
            let link = link_pair(scen, &s.pa_x)?;
            (s.pa_x.clone(), link, s.w.clone(), s.r_m.clone())
        }
        None => {
            let pa_x = scen.initial_positions(config.position_init);
            let link = link_pair(scen, &pa_x)?;
            let (w, r_m) = link.mrt();
            (pa_x, link, w, r_m)
        }
    };
    let mut trace = Trace::default();
    let mut sr = link.secrecy(&w, &r_m);
    trace.push(StepKind::Init, 0, sr);
    // Kept as a fallback when it is rank-1, so refinement never reports less.
    let initial = (rank_one(&w).then(|| (pa_x.clone(), w.clone(), r_m.clone())), sr);

    let mut converged = false;
    let mut outer = 0;
    let mut inner_total = 0;
    while outer < config.max_outer_iters {
        outer += 1;
        let start = sr;
        let inner = covariance_step(&link, w, r_m, config, &mut trace, outer)?;
        inner_total += inner.iterations;
        (w, r_m, sr) = (inner.w, inner.r_m, inner.secrecy);

        if config.optimize_positions {
            let grid = grid_search_positions(&w, &r_m, scen, &pa_x, config.grid_step, config.grid_mode)?;
            pa_x = grid.pa_x;
            link = link_pair(scen, &pa_x)?;
            sr = link.secrecy(&w, &r_m);
            trace.push(StepKind::Position, outer, sr);
        }
        if (sr - start).abs() < config.outer_tol {
            converged = true;
            break;
        }
    }

    let (mut beamformer, mut ww, mut rates) = refined(&link, &w, &r_m)?;
    if let (Some((x0, w0, r0)), sr0) = initial {
        if rates.unclamped() < sr0 {
            link = link_pair(scen, &x0)?;
            (beamformer, ww, rates) = refined(&link, &w0, &r0)?;
            (pa_x, w, r_m) = (x0, w0, r0);
        }
    }
    let covariance_rates = link.rates(&w, &r_m);
    Ok(MultiSolution {
        state: BeamformingState { w: ww, r_m, pa_x },
        beamformer,
        rates,
        covariance_rates,
        covariance: w,
        trace,
        converged,
        outer_iterations: outer,
        inner_iterations: inner_total,
    })
}

/// Covariance inner loop alone on a fixed antenna set, started from MRT.
pub fn solve_fixed_array(link: &LinkPair, pa_x: Vec<f64>, config: &MultiSolveConfig) -> Result<MultiSolution> {
    let (w, r_m) = link.mrt();
    let mut trace = Trace::default();
    trace.push(StepKind::Init, 0, link.secrecy(&w, &r_m));
    let inner = covariance_step(link, w, r_m, config, &mut trace, 1)?;
    let covariance_rates = link.rates(&inner.w, &inner.r_m);
    let (beamformer, ww, rates) = refined(link, &inner.w, &inner.r_m)?;
    Ok(MultiSolution {
        state: BeamformingState { w: ww, r_m: inner.r_m, pa_x },
        beamformer,
        rates,
        covariance_rates,
        covariance: inner.w,
        trace,
        converged: inner.converged,
        outer_iterations: 1,
        inner_iterations: inner.iterations,
    })
}
