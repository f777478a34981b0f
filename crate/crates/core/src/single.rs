//! Single-waveguide secrecy maximization.
//!
//! With one waveguide the beamformer and the AN covariance are scalars and the
//! problem splits into two one-dimensional steps that are solved exactly:
//!
//! * antenna position for a fixed power split: every interior maximizer is a
//!   real root of the stationarity polynomial, which is a quartic when Bob and
//!   Eve see the same noise power and is solved in closed form by Ferrari's
//!   factorization with a Cardano resolvent;
//! * power split for a fixed position: the secrecy rate is monotone in the AN
//!   power, so the optimum sits at one of the two endpoints.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::model::{Complex64, Position, SystemParams};
use crate::poly;
use crate::rates::{BeamformingState, CMatrix, RatePair};
use crate::trace::{StepKind, Trace};

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarScenario {
    pub bob: Position,
    pub eve: Position,
    pub params: SystemParams,
    /// Total transmit power, mW.
    pub power: f64,
}

impl ScalarScenario {
    pub fn new(bob: Position, eve: Position, params: SystemParams, power: f64) -> Result<Self> {
        if params.num_waveguides != 1 {
            return Err(Error::InvalidParameter(format!(
                "single-waveguide scenario with N = {}",
                params.num_waveguides
            )));
        }
        if !(power.is_finite() && power > 0.0) {
            return Err(Error::InvalidParameter(format!("power must be positive, got {power}")));
        }
        let side = params.region_side;
        for (who, p) in [("bob", &bob), ("eve", &eve)] {
            if !p.is_finite() || p.z != 0.0 || !(0.0..=side).contains(&p.x) || !(0.0..=side).contains(&p.y) {
                return Err(Error::InvalidParameter(format!("{who} at {p:?} is outside the region")));
            }
        }
        Ok(Self { bob, eve, params, power })
    }

    /// The pinching antenna on the only waveguide (`y = 0`, height `d`).
    pub fn antenna(&self, x: f64) -> Position {
        Position::new(x, 0.0, self.params.height)
    }

    pub fn dist2_bob(&self, x: f64) -> f64 {
        (x - self.bob.x).powi(2) + self.bob.y.powi(2) + self.params.height.powi(2)
    }

    pub fn dist2_eve(&self, x: f64) -> f64 {
        (x - self.eve.x).powi(2) + self.eve.y.powi(2) + self.params.height.powi(2)
    }

    pub fn rates(&self, w2: f64, r_m: f64, x: f64) -> RatePair {
        let eta = self.params.path_loss_constant;
        let rb = (eta * w2 / (eta * r_m + self.dist2_bob(x) * self.params.noise_bob)).ln_1p() / LN_2;
        let re = (eta * w2 / (eta * r_m + self.dist2_eve(x) * self.params.noise_eve)).ln_1p() / LN_2;
        RatePair::new(rb, re)
    }

    /// Unclamped secrecy margin for signal power `w2`, AN power `r_m` and antenna at `x`.
    pub fn secrecy(&self, w2: f64, r_m: f64, x: f64) -> f64 {
        self.rates(w2, r_m, x).unclamped()
    }
}

/// Every intermediate of the closed-form position solve.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QuarticWorkspace {
    /// `‖w‖²η/σ_B²`.
    pub k1_bob: f64,
    /// `‖w‖²η/σ_E²`.
    pub k1_eve: f64,
    /// `x_b² + y_b² + d² + η R_m/σ_B²`.
    pub k2: f64,
    /// `x_e² + y_e² + d² + η R_m/σ_E²`.
    pub k3: f64,
    /// Quartic coefficients, ascending (`coefficients[k]` multiplies `x^k`).
    pub coefficients: [f64; 5],
    /// Depressed quartic `u⁴ + a₂u² + a₁u + a₀` after `x = u − c₃/(4c₄)`: `[a₂, a₁, a₀]`.
    pub depressed: [f64; 3],
    /// Resolvent cubic `l³ + β₂l² + β₁l + β₀` in `l = ω²`: `[β₂, β₁, β₀]`.
    pub resolvent: [f64; 3],
    /// Depressed resolvent `z³ + β₁'z + β₀'`: `[β₁', β₀']`.
    pub resolvent_depressed: [f64; 2],
    pub discriminant: f64,
    /// Trigonometric-branch angle, present only when the discriminant is negative.
    pub theta: Option<f64>,
    pub z: f64,
    pub l: f64,
    pub omega: f64,
    /// `[p₁, p₀, q₁, q₀]` of `(u² + p₁u + p₀)(u² + q₁u + q₀)`.
    pub factors: [f64; 4],
    /// Set when `a₁ = 0` and the quartic was solved as a biquadratic.
    pub biquadratic: bool,
}

/// Real stationary points of the secrecy rate along the waveguide.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionCandidates {
    /// Ascending, deduplicated.
    pub roots: Vec<f64>,
    /// Stationarity polynomial after removing negligible leading terms, ascending.
    pub polynomial: Vec<f64>,
    /// Present when the quartic path ran.
    pub workspace: Option<QuarticWorkspace>,
}

/// `(k1_bob, k1_eve, k2, k3)`.
fn constants(w2: f64, r_m: f64, scen: &ScalarScenario) -> (f64, f64, f64, f64) {
    let p = &scen.params;
    let eta = p.path_loss_constant;
    let d2 = p.height * p.height;
    (
        w2 * eta / p.noise_bob,
        w2 * eta / p.noise_eve,
        scen.bob.x.powi(2) + scen.bob.y.powi(2) + d2 + eta * r_m / p.noise_bob,
        scen.eve.x.powi(2) + scen.eve.y.powi(2) + d2 + eta * r_m / p.noise_eve,
    )
}

/// Numerator of `dSR/dx` up to a positive factor and a sign:
/// `(x − x_b)(u_E² + K1_E u_E) − ρ (x − x_e)(u_B² + K1_B u_B)` with
/// `u_B = x² − 2x_b x + K2`, `u_E = x² − 2x_e x + K3`, `ρ = σ_B²/σ_E²`.
///
/// The `x⁵` terms cancel when `ρ = 1`, leaving a quartic.
pub fn stationarity_polynomial(w2: f64, r_m: f64, scen: &ScalarScenario) -> Vec<f64> {
    let (k1b, k1e, k2, k3) = constants(w2, r_m, scen);
    let (xb, xe) = (scen.bob.x, scen.eve.x);
    let rho = scen.params.noise_bob / scen.params.noise_eve;
    let ub = [k2, -2.0 * xb, 1.0];
    let ue = [k3, -2.0 * xe, 1.0];
    let bob_term = poly::add(&poly::mul(&ub, &ub), &poly::scale(&ub, k1b));
    let eve_term = poly::add(&poly::mul(&ue, &ue), &poly::scale(&ue, k1e));
    let lhs = poly::mul(&[-xb, 1.0], &eve_term);
    let rhs = poly::scale(&poly::mul(&[-xe, 1.0], &bob_term), rho);
    let mut out = poly::add(&lhs, &poly::scale(&rhs, -1.0));
    if rho == 1.0 {
        // exact cancellation, avoid leaving rounding noise in the x⁵ slot
        out.truncate(5);
    }
    out
}

/// Ferrari's method on `c₄x⁴ + c₃x³ + c₂x² + c₁x + c₀` (ascending `c`).
pub fn ferrari_roots(c: &[f64; 5]) -> Result<(Vec<f64>, QuarticWorkspace)> {
    let mut ws = QuarticWorkspace { coefficients: *c, ..Default::default() };
    let [e, d, cc, b, a] = *c;
    let (b, cc, d, e) = (b / a, cc / a, d / a, e / a);

    let a2 = cc - 3.0 * b * b / 8.0;
    let a1 = d - b * cc / 2.0 + b * b * b / 8.0;
    let a0 = e - b * d / 4.0 + b * b * cc / 16.0 - 3.0 * b.powi(4) / 256.0;
    ws.depressed = [a2, a1, a0];
    let shift = b / 4.0;

    let mut us: Vec<f64> = Vec::new();
    // a₂, a₁, a₀ scale like u², u³, u⁴
    let u_scale = a2.abs().sqrt().max(a1.abs().cbrt()).max(a0.abs().sqrt().sqrt());
    if a1.abs() <= 1e-14 * u_scale.powi(3) {
        ws.biquadratic = true;
        for v in poly::solve_quadratic(1.0, a2, a0) {
            if v >= 0.0 {
                us.push(v.sqrt());
                us.push(-v.sqrt());
            }
        }
    } else {
        let beta2 = 4.0 * a0 - a2 * a2;
        let beta1 = -2.0 * a2 * a1 * a1;
        let beta0 = -a1.powi(4);
        ws.resolvent = [beta2, beta1, beta0];

        let bp1 = beta1 - beta2 * beta2 / 3.0;
        let bp0 = 2.0 * beta2.powi(3) / 27.0 - beta1 * beta2 / 3.0 + beta0;
        ws.resolvent_depressed = [bp1, bp0];
        let disc = (bp0 / 2.0).powi(2) + (bp1 / 3.0).powi(3);
        ws.discriminant = disc;

        // One real z is enough; the k = 0 trigonometric branch is the largest root.
        let z = if disc >= 0.0 {
            let s = disc.sqrt();
            (-bp0 / 2.0 + s).cbrt() + (-bp0 / 2.0 - s).cbrt()
        } else {
            let theta = ((-bp0 / 2.0) / (-(bp1 / 3.0).powi(3)).sqrt()).clamp(-1.0, 1.0).acos();
            ws.theta = Some(theta);
            2.0 * (-bp1 / 3.0).sqrt() * (theta / 3.0).cos()
        };
        ws.z = z;

        let cubic = [beta0, beta1, beta2, 1.0];
        let mut l = poly::polish(&cubic, z - beta2 / 3.0, 6);
        if !(l > 0.0) {
            // β₀ = −a₁⁴ < 0 guarantees a positive root; take it if the branch above missed it.
            l = poly::solve_cubic(1.0, beta2, beta1, beta0).into_iter().fold(f64::NAN, f64::max);
        }
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::NonFinite("quartic resolvent"));
        }
        ws.l = l;
        let omega = l.sqrt();
        ws.omega = omega;

        let p1 = a1 / omega;
        let p0 = 0.5 * (a2 - omega + a1 * a1 / l);
        let q1 = -p1;
        let q0 = omega + p0;
        ws.factors = [p1, p0, q1, q0];

        for (s1, s0) in [(p1, p0), (q1, q0)] {
            let disc = s1 * s1 - 4.0 * s0;
            let tol = 1e-10 * (s1 * s1 + 4.0 * s0.abs());
            if disc >= 0.0 {
                us.extend(poly::solve_quadratic(1.0, s1, s0));
            } else if disc >= -tol {
                us.push(-s1 / 2.0);
            }
        }
    }

    let mut xs: Vec<f64> = us.into_iter().map(|u| poly::polish(c, u - shift, 4)).collect();
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("quartic roots"));
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * a.abs().max(1.0));
    Ok((xs, ws))
}

fn lower_degree_roots(c: &[f64]) -> Vec<f64> {
    let mut roots = match c.len() {
        4 => poly::solve_cubic(c[3], c[2], c[1], c[0]),
        3 => poly::solve_quadratic(c[2], c[1], c[0]),
        2 => vec![-c[0] / c[1]],
        _ => Vec::new(),
    };
    roots.sort_by(f64::total_cmp);
    roots
}

/// All real stationary points of the secrecy rate in the antenna position for
/// fixed signal power `w2` and AN power `r_m`.
///
/// With equal noise powers the quartic is solved in closed form. A degenerate
/// leading coefficient (for instance `x_b = x_e`) is handled by solving the
/// actual lower-degree polynomial. With unequal noise the polynomial is a quintic
/// and only its roots inside `[0, D]` are returned.
pub fn quartic_position_candidates(w2: f64, r_m: f64, scen: &ScalarScenario) -> Result<PositionCandidates> {
    if !(w2 >= 0.0 && r_m >= 0.0) {
        return Err(Error::InvalidParameter(format!("powers must be non-negative: w² = {w2}, R_m = {r_m}")));
    }
    if w2 == 0.0 {
        // No signal: the secrecy rate is identically zero.
        return Ok(PositionCandidates { roots: Vec::new(), polynomial: Vec::new(), workspace: None });
    }
    let raw = stationarity_polynomial(w2, r_m, scen);
    if raw.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("stationarity polynomial"));
    }
    let side = scen.params.region_side;
    let c = poly::trim(&raw, side.max(scen.bob.x.abs()).max(scen.eve.x.abs()));
    let (roots, workspace) = match c.len() {
        6 => (poly::real_roots_in(&c, 0.0, side), None),
        5 => {
            let (r, mut ws) = ferrari_roots(&[c[0], c[1], c[2], c[3], c[4]])?;
            (ws.k1_bob, ws.k1_eve, ws.k2, ws.k3) = constants(w2, r_m, scen);
            (r, Some(ws))
        }
        _ => (lower_degree_roots(&c), None),
    };
    Ok(PositionCandidates { roots, polynomial: c, workspace })
}

/// Maximizer of the secrecy margin over `[0, D]`: the best of the in-range
/// stationary points and both endpoints, ties going to the smaller position.
pub fn optimal_position_single(w2: f64, r_m: f64, scen: &ScalarScenario) -> f64 {
    let side = scen.params.region_side;
    let mut candidates = vec![0.0, side];
    match quartic_position_candidates(w2, r_m, scen) {
        Ok(c) => candidates.extend(c.roots.into_iter().filter(|x| (0.0..=side).contains(x))),
        Err(_) => {
            let raw = stationarity_polynomial(w2, r_m, scen);
            candidates.extend(poly::real_roots_in(&raw, 0.0, side));
        }
    }
    candidates.sort_by(f64::total_cmp);
    let mut best = (candidates[0], scen.secrecy(w2, r_m, candidates[0]));
    for &x in &candidates[1..] {
        let v = scen.secrecy(w2, r_m, x);
        if v > best.1 {
            best = (x, v);
        }
    }
    best.0
}

/// Secrecy rate with the budget spent in full (`w² = P − R_m`), written in
/// distances only.
pub fn sr_closed_form(r_m: f64, x: f64, scen: &ScalarScenario) -> f64 {
    let p = &scen.params;
    let eta = p.path_loss_constant;
    let nb = scen.dist2_bob(x) * p.noise_bob;
    let ne = scen.dist2_eve(x) * p.noise_eve;
    let pw = scen.power;
    (((eta * pw + nb) * (eta * r_m + ne)) / ((eta * pw + ne) * (eta * r_m + nb))).log2()
}

/// Endpoint power split `(w², R_m)` for a fixed antenna position.
pub fn optimal_power_split(x: f64, scen: &ScalarScenario) -> (f64, f64) {
    let p = &scen.params;
    let bob = scen.dist2_bob(x) * p.noise_bob;
    let eve = scen.dist2_eve(x) * p.noise_eve;
    if bob > eve {
        (0.0, scen.power)
    } else {
        (scen.power, 0.0)
    }
}

#[derive(Debug, Clone)]
pub struct SingleSolution {
    pub position: f64,
    pub signal_power: f64,
    pub an_power: f64,
    pub state: BeamformingState,
    pub rates: RatePair,
    pub trace: Trace,
    pub converged: bool,
    pub iterations: usize,
}

/// Alternates the closed-form position step and the endpoint power split,
/// starting from the antenna closest to Bob with all power on the signal.
pub fn solve_single(scen: &ScalarScenario, tol: f64, max_iters: usize) -> Result<SingleSolution> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let side = scen.params.region_side;
    let mut x = scen.bob.x.clamp(0.0, side);
    let (mut w2, mut r_m) = (scen.power, 0.0);
    let mut sr = scen.secrecy(w2, r_m, x);
    let mut trace = Trace::default();
    trace.push(StepKind::Init, 0, sr);

    let mut converged = false;
    let mut iterations = 0;
    while iterations < max_iters {
        iterations += 1;
        let start = sr;
        x = optimal_position_single(w2, r_m, scen);
        trace.push(StepKind::Position, iterations, scen.secrecy(w2, r_m, x));
        (w2, r_m) = optimal_power_split(x, scen);
        sr = scen.secrecy(w2, r_m, x);
        trace.push(StepKind::PowerSplit, iterations, sr);
        if sr - start < tol {
            converged = true;
            break;
        }
    }

    let scalar = |v: f64| CMatrix::from_element(1, 1, Complex64::new(v, 0.0));
    Ok(SingleSolution {
        position: x,
        signal_power: w2,
        an_power: r_m,
        state: BeamformingState { w: scalar(w2), r_m: scalar(r_m), pa_x: vec![x] },
        rates: scen.rates(w2, r_m, x),
        trace,
        converged,
        iterations,
    })
}
