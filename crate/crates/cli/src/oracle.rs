//! Brute-force cross-checks runnable from the command line.

use anyhow::Result;
use pasec_core::eig::hermitian_eig;
use pasec_core::experiments::ScenarioSample;
use pasec_core::model::{dbm_to_linear, Complex64, SystemParams};
use pasec_core::rates::CMatrix;
use pasec_core::sdp::{solve_sdp_default, SdpStandardForm, SdpStatus};
use pasec_core::single::{optimal_position_single, optimal_power_split, ScalarScenario};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Summary {
    pub pass: bool,
    pub line: String,
}

/// Scenario `k` of a suite: drop positions plus a power and split from the
/// same per-index stream.
fn scenario(seed: u64, k: u64) -> (ScalarScenario, f64, f64) {
    let sample = ScenarioSample::draw(seed, k, 30.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    rng.set_stream(k);
    let p_dbm = rng.gen_range(-10.0..=20.0);
    let split = rng.gen_range(0.0..=1.0);
    let x = rng.gen_range(0.0..=30.0);
    let scen = ScalarScenario::new(sample.bob, sample.eve, SystemParams::reference(1), dbm_to_linear(p_dbm))
        .expect("sampled scenario is valid");
    (scen, split, x)
}

pub fn quartic(seed: u64, count: usize) -> Result<Summary> {
    let mut worst = f64::INFINITY;
    for k in 0..count as u64 {
        let (scen, split, _) = scenario(seed, k);
        let (w2, r_m) = (split * scen.power, (1.0 - split) * scen.power);
        let x = optimal_position_single(w2, r_m, &scen);
        let closed = scen.secrecy(w2, r_m, x);
        let grid = (0..=30_000).map(|i| scen.secrecy(w2, r_m, i as f64 * 1e-3)).fold(f64::NEG_INFINITY, f64::max);
        worst = worst.min(closed - grid);
    }
    Ok(Summary {
        pass: worst >= -1e-6,
        line: format!("quartic: {count} scenarios, min(SR_closed - SR_grid) = {worst:.3e} bps/Hz"),
    })
}

pub fn split(seed: u64, count: usize) -> Result<Summary> {
    let mut worst = 0.0f64;
    for k in 0..count as u64 {
        let (scen, _, x) = scenario(seed, k);
        let (w2, r_m) = optimal_power_split(x, &scen);
        let sr = |r: f64| scen.rates(scen.power - r, r, x).secrecy_rate;
        let grid = (0..=100).map(|i| sr(scen.power * i as f64 / 100.0)).fold(f64::NEG_INFINITY, f64::max);
        worst = worst.max((scen.rates(w2, r_m, x).secrecy_rate - grid).abs());
    }
    Ok(Summary {
        pass: worst <= 1e-9,
        line: format!("split: {count} scenarios, max |SR_endpoint - SR_grid| = {worst:.3e} bps/Hz"),
    })
}

/// `max Tr(CX)` over unit-trace PSD `X` against the largest eigenvalue.
pub fn sdp(seed: u64, count: usize) -> Result<Summary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut not_optimal = 0;
    for k in 0..count {
        let n = 1 + k % 6;
        let g = CMatrix::from_fn(n, n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let c = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
        let mut p = SdpStandardForm::new(vec![n], 0);
        p.objective.blocks[0] = c.clone();
        let mut tr = p.zero_form();
        tr.blocks[0] = CMatrix::identity(n, n);
        p.add_eq(tr, 1.0);
        let sol = solve_sdp_default(&p)?;
        if sol.status != SdpStatus::Optimal {
            not_optimal += 1;
        }
        worst = worst.max((sol.objective - hermitian_eig(&c)?.max_eigenvalue()).abs());
    }
    Ok(Summary {
        pass: worst <= 1e-7 && not_optimal == 0,
        line: format!("sdp: {count} problems, max |objective - lambda_max| = {worst:.3e}, {not_optimal} not optimal"),
    })
}
