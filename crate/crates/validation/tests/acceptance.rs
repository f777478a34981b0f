//! Acceptance suite. Runs every criterion at its stated tolerance and prints
//! one PASS/FAIL line each; exits nonzero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use pasec_core::experiments::{run_cdf, run_sweep, write_sweep, Case, ExperimentConfig, Scheme};
use pasec_core::model::{dbm_to_linear, Complex64, Position, SystemParams};
use pasec_core::multi::{gamma_star, solve_fixed_gamma, solve_multi, LinkPair, MultiScenario, MultiSolveConfig};
use pasec_core::rates::{CMatrix, CVector};
use pasec_core::sdp::{solve_sdp_default, SdpStandardForm, SdpStatus};
use pasec_core::single::{optimal_position_single, optimal_power_split, solve_single, ScalarScenario};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn point(rng: &mut impl Rng, side: f64) -> Position {
    Position::ground(rng.gen_range(0.0..=side), rng.gen_range(0.0..=side))
}

fn scalar_scenario(rng: &mut impl Rng) -> ScalarScenario {
    let p_dbm = rng.gen_range(-10.0..=20.0);
    ScalarScenario::new(point(rng, 30.0), point(rng, 30.0), SystemParams::reference(1), dbm_to_linear(p_dbm)).unwrap()
}

/// Brute-force grid over `[0, D]` at 1 mm.
fn grid_argmax(f: impl Fn(f64) -> f64, side: f64) -> f64 {
    let steps = (side / 1e-3).round() as usize;
    (0..=steps).map(|k| f(k as f64 * 1e-3)).fold(f64::NEG_INFINITY, f64::max)
}

fn quartic_vs_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let mut worst = f64::INFINITY;
    for _ in 0..1000 {
        let scen = scalar_scenario(&mut rng);
        let split = rng.gen_range(0.0..=1.0);
        let (w2, r_m) = (split * scen.power, (1.0 - split) * scen.power);
        let x = optimal_position_single(w2, r_m, &scen);
        let closed = scen.secrecy(w2, r_m, x);
        let grid = grid_argmax(|x| scen.secrecy(w2, r_m, x), scen.params.region_side);
        worst = worst.min(closed - grid);
    }
    outcome(worst >= -1e-6, format!("min(SR_closed - SR_grid) = {worst:.3e} over 1000 scenarios"))
}

fn split_endpoints() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1002);
    let mut worst = 0.0f64;
    let mut wrong = 0;
    for _ in 0..1000 {
        let scen = scalar_scenario(&mut rng);
        let x = rng.gen_range(0.0..=scen.params.region_side);
        let sr = |r: f64| scen.rates(scen.power - r, r, x).secrecy_rate;
        let grid = (0..=100).map(|k| sr(scen.power * k as f64 / 100.0)).fold(f64::NEG_INFINITY, f64::max);
        let (w2, r_m) = optimal_power_split(x, &scen);
        // Predicted by sgn(r_B²σ_B² − r_E²σ_E²): all AN when Bob's noise-scaled distance is larger.
        let bob = scen.dist2_bob(x) * scen.params.noise_bob;
        let eve = scen.dist2_eve(x) * scen.params.noise_eve;
        let predicted = if bob > eve { (0.0, scen.power) } else { (scen.power, 0.0) };
        if (w2, r_m) != predicted {
            wrong += 1;
        }
        worst = worst.max((scen.rates(w2, r_m, x).secrecy_rate - grid).abs());
    }
    outcome(wrong == 0 && worst <= 1e-9, format!("{wrong} endpoint mismatches, max |SR_end - SR_grid| = {worst:.3e}"))
}

/// Cyclic Jacobi on the real symmetric embedding of a Hermitian matrix.
fn jacobi_max_eigenvalue(c: &CMatrix) -> f64 {
    let n = c.nrows();
    let m = 2 * n;
    let mut a = vec![vec![0.0; m]; m];
    for i in 0..n {
        for j in 0..n {
            let v = c[(i, j)];
            a[i][j] = v.re;
            a[i + n][j + n] = v.re;
            a[i][j + n] = -v.im;
            a[i + n][j] = v.im;
        }
    }
    for _ in 0..100 {
        let off: f64 = (0..m)
            .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j].powi(2))
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let (cs, sn) = (1.0 / (t * t + 1.0).sqrt(), t / (t * t + 1.0).sqrt());
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = cs * akp - sn * akq;
                    row[q] = sn * akp + cs * akq;
                }
                let (lo, hi) = a.split_at_mut(q);
                for (xp, xq) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
                    let (apk, aqk) = (*xp, *xq);
                    *xp = cs * apk - sn * aqk;
                    *xq = sn * apk + cs * aqk;
                }
            }
        }
    }
    (0..m).map(|i| a[i][i]).fold(f64::NEG_INFINITY, f64::max)
}

fn random_hermitian(rng: &mut impl Rng, n: usize) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    (&g + g.adjoint()) * Complex64::new(0.5, 0.0)
}

fn multi_scenario(rng: &mut impl Rng, n: usize, p_dbm: f64) -> MultiScenario {
    MultiScenario::new(point(rng, 30.0), point(rng, 30.0), SystemParams::reference(n), dbm_to_linear(p_dbm)).unwrap()
}

fn unit_vector(theta: f64, phi: f64) -> CVector {
    CVector::from_vec(vec![Complex64::new(theta.cos(), 0.0), Complex64::from_polar(theta.sin(), phi)])
}

/// Coarse brute force over rank-1 `W` and rank-≤2 `R_m` splitting the budget
/// exactly; returns the best `log2((1 + SINR_B)/γ)` meeting the leakage cap.
fn fixed_gamma_grid_oracle(link: &LinkPair, gamma: f64) -> f64 {
    let (hb, he) = (&link.h_bob, &link.h_eve);
    let q = |h: &CVector, v: &CVector| h.dotc(v).norm_sqr();
    let dirs = |nt: usize, np: usize| -> Vec<CVector> {
        let mut out = Vec::new();
        for i in 0..=nt {
            for j in 0..np {
                let theta = std::f64::consts::FRAC_PI_2 * i as f64 / nt as f64;
                out.push(unit_vector(theta, std::f64::consts::TAU * j as f64 / np as f64));
            }
        }
        out
    };
    let w_dirs = dirs(12, 24);
    let r_dirs = dirs(8, 12);
    // For a unit u = (a, b e^{jφ}) the orthogonal unit is (−b e^{−jφ}, a)* up to phase.
    let ortho = |u: &CVector| CVector::from_vec(vec![-u[1].conj(), u[0].conj()]);
    let mut best = f64::NEG_INFINITY;
    let p = link.power;
    for v in &w_dirs {
        let (gb, ge) = (q(hb, v), q(he, v));
        for u in &r_dirs {
            let u2 = ortho(u);
            let (jb1, je1, jb2, je2) = (q(hb, u), q(he, u), q(hb, &u2), q(he, &u2));
            for ci in 0..=4 {
                let c = ci as f64 / 4.0;
                let (jb, je) = (c * jb1 + (1.0 - c) * jb2, c * je1 + (1.0 - c) * je2);
                for si in 0..=20 {
                    let s = si as f64 / 20.0;
                    let (pw, pr) = (s * p, (1.0 - s) * p);
                    let sinr_e = pw * ge / (pr * je + link.noise_eve);
                    if sinr_e > gamma - 1.0 {
                        continue;
                    }
                    let sinr_b = pw * gb / (pr * jb + link.noise_bob);
                    best = best.max(((1.0 + sinr_b) / gamma).log2());
                }
            }
        }
    }
    best
}

fn sdp_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1003);
    let mut eig_err = 0.0f64;
    let mut worst_gap = 0.0f64;
    let mut not_optimal = 0;
    for k in 0..100 {
        let n = 1 + k % 6;
        let c = random_hermitian(&mut rng, n);
        let mut p = SdpStandardForm::new(vec![n], 0);
        p.objective.blocks[0] = c.clone();
        let mut tr = p.zero_form();
        tr.blocks[0] = CMatrix::identity(n, n);
        p.add_eq(tr, 1.0);
        let sol = solve_sdp_default(&p).unwrap();
        if sol.status == SdpStatus::Optimal {
            worst_gap = worst_gap.max(sol.duality_gap);
        } else {
            not_optimal += 1;
        }
        eig_err = eig_err.max((sol.objective - jacobi_max_eigenvalue(&c)).abs());
    }

    let mut shortfall = f64::NEG_INFINITY;
    for k in 0..100 {
        let p_dbm = rng.gen_range(-10.0..=20.0);
        let scen = multi_scenario(&mut rng, 2, p_dbm);
        let x: Vec<f64> = (0..2).map(|_| rng.gen_range(0.0..=30.0)).collect();
        let (h_bob, h_eve) = scen.channels(&x).unwrap();
        let link = LinkPair {
            h_bob,
            h_eve,
            noise_bob: scen.params.noise_bob,
            noise_eve: scen.params.noise_eve,
            power: scen.power,
        };
        let (w, r) = if k % 2 == 0 {
            link.mrt()
        } else {
            let v = CVector::from_fn(2, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let s = rng.gen_range(0.2..=1.0);
            let ww = &v * v.adjoint() * Complex64::new(s * scen.power / v.norm_squared(), 0.0);
            (ww, CMatrix::identity(2, 2) * Complex64::new((1.0 - s) * scen.power / 2.0, 0.0))
        };
        let gamma = gamma_star(&w, &r, &link.h_eve_matrix(), link.noise_eve);
        let sol = solve_fixed_gamma(
            gamma,
            &link.h_bob_matrix(),
            &link.h_eve_matrix(),
            link.noise_bob,
            link.noise_eve,
            link.power,
            true,
        )
        .unwrap();
        if sol.sdp.status != SdpStatus::Optimal {
            not_optimal += 1;
            continue;
        }
        worst_gap = worst_gap.max(sol.sdp.duality_gap);
        let sdp_value = ((1.0 + sol.sdp.objective) / gamma).log2();
        shortfall = shortfall.max(fixed_gamma_grid_oracle(&link, gamma) - sdp_value);
    }
    let pass = eig_err <= 1e-7 && shortfall <= 1e-3 && worst_gap <= 1e-8 && not_optimal == 0;
    outcome(
        pass,
        format!(
            "(a) max |obj - λmax| = {eig_err:.2e}; (b) max(oracle - SDP) = {shortfall:.2e} bps/Hz; (c) max gap = {worst_gap:.2e}; {not_optimal} non-optimal"
        ),
    )
}

fn alternation_monotonicity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1004);
    let mut worst = 0.0f64;
    for k in 0..200 {
        let n = if k % 2 == 0 { 2 } else { 4 };
        let p_dbm = rng.gen_range(-10.0..=20.0);
        let scen = multi_scenario(&mut rng, n, p_dbm);
        let sol = solve_multi(&scen, &MultiSolveConfig::default()).unwrap();
        worst = worst.max(sol.trace.max_drop());
    }
    outcome(worst <= 1e-6, format!("largest sub-step decrease {worst:.3e} bps/Hz over 200 runs"))
}

fn cross_module_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1005);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let scen = scalar_scenario(&mut rng);
        let single = solve_single(&scen, 1e-9, 100).unwrap();
        let multi_scen = MultiScenario::new(scen.bob, scen.eve, scen.params.clone(), scen.power).unwrap();
        let multi = solve_multi(&multi_scen, &MultiSolveConfig::default()).unwrap();
        worst = worst.max((multi.rates.secrecy_rate - single.rates.secrecy_rate).abs());
    }
    outcome(worst <= 1e-3, format!("max |SR_multi - SR_single| = {worst:.3e} over 100 scenarios"))
}

fn an_dominance() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for n in [2, 4, 6] {
        let an = Case::new(Scheme::PasAn, n);
        let plain = Case::new(Scheme::PasNoAn, n);
        let cfg = ExperimentConfig {
            num_drops: Some(200),
            rng_seed: 6,
            power_sweep: vec![10.0],
            cases: vec![an, plain],
            ..Default::default()
        };
        let out = run_sweep(&cfg).unwrap();
        let worst = out
            .records_for(an, 10.0)
            .zip(out.records_for(plain, 10.0))
            .map(|(a, b)| b.secrecy_rate - a.secrecy_rate)
            .fold(f64::NEG_INFINITY, f64::max);
        pass &= worst <= 1e-6;
        details.push(format!("N={n}: max(SR_noAN - SR_AN) = {worst:.2e}"));
    }
    outcome(pass, details.join("; "))
}

fn fig2a_trend() -> Outcome {
    let cases = vec![
        Case::new(Scheme::PasAn, 1),
        Case::new(Scheme::CasAn, 1),
        Case::new(Scheme::PasAn, 2),
        Case::new(Scheme::PasNoAn, 2),
    ];
    let cfg = ExperimentConfig {
        num_drops: Some(200),
        rng_seed: 7,
        power_sweep: vec![-10.0, 0.0, 10.0, 20.0],
        cases: cases.clone(),
        ..Default::default()
    };
    let out = run_sweep(&cfg).unwrap();
    let m = |c: usize, p: f64| out.mean(cases[c], p).unwrap();
    let pas_beats_cas = cfg.power_sweep.iter().all(|&p| m(0, p) > m(1, p));
    let gain0 = m(2, 0.0) - m(3, 0.0);
    let gain20 = m(2, 20.0) - m(3, 20.0);
    let means: Vec<String> = cfg.power_sweep.iter().map(|&p| format!("{p}dBm {:.3}/{:.3}", m(0, p), m(1, p))).collect();
    outcome(
        pas_beats_cas && gain20 > gain0,
        format!("PAS/CAS N=1 means [{}]; AN gain N=2 at 0 dBm {gain0:.4}, at 20 dBm {gain20:.4}", means.join(", ")),
    )
}

fn fig2b_trend() -> Outcome {
    let an4 = Case::new(Scheme::PasAn, 4);
    let plain6 = Case::new(Scheme::PasNoAn, 6);
    let cfg = ExperimentConfig {
        num_drops: Some(200),
        rng_seed: 8,
        power_sweep: vec![20.0],
        cases: vec![an4, plain6],
        ..Default::default()
    };
    let out = run_sweep(&cfg).unwrap();
    let (a, b) = (out.mean(an4, 20.0).unwrap(), out.mean(plain6, 20.0).unwrap());
    outcome(a > b, format!("mean SR pas-an N=4 {a:.4} vs pas-no-an N=6 {b:.4} at 20 dBm"))
}

fn fig3a_trend() -> Outcome {
    let pas = Case::new(Scheme::PasAn, 1);
    let cas = Case::new(Scheme::CasAn, 1);
    let cfg = ExperimentConfig {
        num_drops: Some(500),
        rng_seed: 9,
        fixed_power: 10.0,
        cases: vec![pas, cas],
        ..Default::default()
    };
    let out = run_cdf(&cfg).unwrap();
    let zero = |c: Case| out.series.iter().find(|s| s.case == c).unwrap().zero_mass();
    let (zp, zc) = (zero(pas), zero(cas));
    outcome(zc >= 0.05 && zc > zp, format!("P(SR = 0): cas-an N=1 {zc:.3}, pas-an N=1 {zp:.3}"))
}

fn determinism() -> Outcome {
    let cfg = ExperimentConfig {
        num_drops: Some(12),
        rng_seed: 10,
        power_sweep: vec![0.0, 20.0],
        cases: vec![
            Case::new(Scheme::PasAn, 2),
            Case::new(Scheme::PasNoAn, 2),
            Case::new(Scheme::CasAn, 2),
            Case::new(Scheme::PasAn, 1),
        ],
        ..Default::default()
    };
    let run = |threads: usize| {
        let dir = tempfile::tempdir().unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let out = pool.install(|| run_sweep(&cfg)).unwrap();
        let mut files: Vec<(String, Vec<u8>)> = write_sweep(&out, dir.path())
            .unwrap()
            .into_iter()
            .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
            .collect();
        files.sort();
        files
    };
    let (a, b, c) = (run(1), run(4), run(4));
    let pass = a == b && b == c && !a.is_empty();
    outcome(pass, format!("{} output files compared across 1 and 4 worker threads", a.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("quartic position vs 1 mm grid oracle", quartic_vs_oracle),
        ("endpoint power split vs 101-point grid", split_endpoints),
        ("SDP correctness", sdp_correctness),
        ("alternation monotonicity", alternation_monotonicity),
        ("multi vs single solver at N = 1", cross_module_consistency),
        ("per-drop AN dominance", an_dominance),
        ("mean SR trends, N = 1 and N = 2", fig2a_trend),
        ("AN with N = 4 beats no AN with N = 6 at 20 dBm", fig2b_trend),
        ("zero-SR mass, CAS vs PAS at N = 1", fig3a_trend),
        ("byte-identical sweep outputs", determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            outcome(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        if !result.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {} ({}) [{:.1}s]",
            k + 1,
            if result.pass { "PASS" } else { "FAIL" },
            name,
            result.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
