//! Small dense semidefinite programs over complex Hermitian blocks.
//!
//! Problems are stated in maximization form over Hermitian PSD blocks and
//! nonnegative scalars. Internally every complex block is replaced by its real
//! symmetric embedding `[[Re, −Im], [Im, Re]]`, scalars and inequality slacks
//! become 1×1 blocks, and an infeasible-start primal-dual path-following
//! method with Nesterov–Todd scaling solves the resulting real problem in
//! minimization form.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::model::Complex64;
use crate::rates::{trace_product, CMatrix};

type RMat = DMatrix<f64>;

pub const DEFAULT_GAP_TOL: f64 = 1e-8;
pub const DEFAULT_FEAS_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ITERS: usize = 100;

const STEP_FRACTION: f64 = 0.98;
const REFINEMENT_STEPS: usize = 3;
/// Phase-1 trace bound relative to the scale of the failed main iterate.
const PHASE1_TRACE_FACTOR: f64 = 1e3;
/// Phase-1 residual above which a problem is declared infeasible.
const PHASE1_INFEASIBLE: f64 = 1e-6;

/// `Σ_k Re Tr(C_k X_k) + Σ_j c_j s_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearForm {
    pub blocks: Vec<CMatrix>,
    pub scalars: Vec<f64>,
}

impl LinearForm {
    pub fn zeros(block_dims: &[usize], num_scalars: usize) -> Self {
        Self { blocks: block_dims.iter().map(|&n| CMatrix::zeros(n, n)).collect(), scalars: vec![0.0; num_scalars] }
    }

    pub fn evaluate(&self, blocks: &[CMatrix], scalars: &[f64]) -> f64 {
        let b: f64 = self.blocks.iter().zip(blocks).map(|(c, x)| trace_product(c, x)).sum();
        let s: f64 = self.scalars.iter().zip(scalars).map(|(c, x)| c * x).sum();
        b + s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub form: LinearForm,
    pub rhs: f64,
}

/// maximize `objective(X, s)` subject to `eq(X, s) = rhs`, `ineq(X, s) ≤ rhs`,
/// `X_k ⪰ 0`, `s ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpStandardForm {
    pub block_dims: Vec<usize>,
    pub num_scalars: usize,
    pub objective: LinearForm,
    pub eq_constraints: Vec<Constraint>,
    pub ineq_constraints: Vec<Constraint>,
}

impl SdpStandardForm {
    pub fn new(block_dims: Vec<usize>, num_scalars: usize) -> Self {
        let objective = LinearForm::zeros(&block_dims, num_scalars);
        Self { block_dims, num_scalars, objective, eq_constraints: Vec::new(), ineq_constraints: Vec::new() }
    }

    pub fn zero_form(&self) -> LinearForm {
        LinearForm::zeros(&self.block_dims, self.num_scalars)
    }

    pub fn add_eq(&mut self, form: LinearForm, rhs: f64) {
        self.eq_constraints.push(Constraint { form, rhs });
    }

    pub fn add_ineq(&mut self, form: LinearForm, rhs: f64) {
        self.ineq_constraints.push(Constraint { form, rhs });
    }

    pub fn validate(&self) -> Result<()> {
        if self.block_dims.contains(&0) {
            return Err(Error::Dimension("SDP block of dimension 0".into()));
        }
        let check = |f: &LinearForm, what: &str| -> Result<()> {
            if f.blocks.len() != self.block_dims.len() || f.scalars.len() != self.num_scalars {
                return Err(Error::Dimension(format!("{what}: wrong number of blocks or scalars")));
            }
            for (m, &n) in f.blocks.iter().zip(&self.block_dims) {
                if m.shape() != (n, n) {
                    return Err(Error::Dimension(format!("{what}: block {:?}, expected {n}×{n}", m.shape())));
                }
                if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
                    return Err(Error::NonFinite("SDP coefficient"));
                }
                let asym = (m - m.adjoint()).norm();
                if asym > crate::eig::HERMITIAN_TOLERANCE * m.norm() {
                    return Err(Error::NotHermitian(asym / m.norm()));
                }
            }
            if f.scalars.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFinite("SDP scalar coefficient"));
            }
            Ok(())
        };
        check(&self.objective, "objective")?;
        for c in self.eq_constraints.iter().chain(&self.ineq_constraints) {
            check(&c.form, "constraint")?;
            if !c.rhs.is_finite() {
                return Err(Error::NonFinite("SDP right-hand side"));
            }
        }
        Ok(())
    }

    /// Largest relative constraint residual `|res| / (1 + |rhs|)` plus any
    /// negativity of the blocks or scalars.
    pub fn violation(&self, blocks: &[CMatrix], scalars: &[f64]) -> f64 {
        let mut v: f64 = 0.0;
        for c in &self.eq_constraints {
            v = v.max((c.form.evaluate(blocks, scalars) - c.rhs).abs() / (1.0 + c.rhs.abs()));
        }
        for c in &self.ineq_constraints {
            v = v.max((c.form.evaluate(blocks, scalars) - c.rhs).max(0.0) / (1.0 + c.rhs.abs()));
        }
        for m in blocks {
            let min = crate::eig::hermitian_eig(m).map(|e| e.min_eigenvalue()).unwrap_or(f64::NAN);
            let scale = 1.0 + m.trace().re.abs();
            v = v.max((-min).max(0.0) / scale);
        }
        for &s in scalars {
            v = v.max((-s).max(0.0));
        }
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdpStatus {
    Optimal,
    MaxIters,
    Infeasible,
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub blocks: Vec<CMatrix>,
    pub scalars: Vec<f64>,
    /// Primal objective at the returned point.
    pub objective: f64,
    /// Dual bound matching `objective` at optimality.
    pub dual_objective: f64,
    /// Relative duality gap in the solver's internal (equilibrated) units.
    pub duality_gap: f64,
    /// Factor converting internal objective units to the caller's.
    pub objective_scale: f64,
    pub violation: f64,
    pub iterations: usize,
    pub status: SdpStatus,
}

pub fn solve_sdp_default(problem: &SdpStandardForm) -> Result<SdpSolution> {
    solve_sdp(problem, DEFAULT_GAP_TOL, DEFAULT_FEAS_TOL, DEFAULT_MAX_ITERS)
}

pub fn solve_sdp(problem: &SdpStandardForm, gap_tol: f64, feas_tol: f64, max_iters: usize) -> Result<SdpSolution> {
    problem.validate()?;
    if !(gap_tol > 0.0 && feas_tol > 0.0) {
        return Err(Error::InvalidParameter("SDP tolerances must be positive".into()));
    }

    let mut real = RealSdp::from_problem(problem);
    let zero_solution = |status| SdpSolution {
        blocks: problem.block_dims.iter().map(|&n| CMatrix::zeros(n, n)).collect(),
        scalars: vec![0.0; problem.num_scalars],
        objective: 0.0,
        dual_objective: 0.0,
        duality_gap: f64::INFINITY,
        objective_scale: 1.0,
        violation: f64::INFINITY,
        iterations: 0,
        status,
    };
    if !real.drop_trivial_rows() {
        return Ok(zero_solution(SdpStatus::Infeasible));
    }
    let scaling = real.equilibrate(usize::MAX);

    let decode = |x: &[RMat]| real.decode(problem, x, &scaling);
    let accept = |x: &[RMat]| {
        let (blocks, scalars) = decode(x);
        problem.violation(&blocks, &scalars) <= feas_tol
    };
    let run = ipm(&real, gap_tol, feas_tol, max_iters, &accept);

    let (blocks, scalars) = decode(&run.x);
    let objective = problem.objective.evaluate(&blocks, &scalars);
    let violation = problem.violation(&blocks, &scalars);
    let objective_scale = scaling.nu_b * scaling.nu_c;
    let mut status = if run.converged { SdpStatus::Optimal } else { SdpStatus::MaxIters };
    if status != SdpStatus::Optimal
        && real.phase1_says_infeasible(inner(&run.x, &run.x).sqrt(), gap_tol, feas_tol, max_iters)
    {
        status = SdpStatus::Infeasible;
    }
    Ok(SdpSolution {
        blocks,
        scalars,
        objective,
        dual_objective: -run.dual * objective_scale,
        duality_gap: run.gap,
        objective_scale,
        violation,
        iterations: run.iterations,
        status,
    })
}

fn embed(a: &CMatrix) -> RMat {
    let n = a.nrows();
    let mut out = RMat::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = a[(i, j)];
            out[(i, j)] = z.re;
            out[(i + n, j + n)] = z.re;
            out[(i, j + n)] = -z.im;
            out[(i + n, j)] = z.im;
        }
    }
    out
}

fn unembed(y: &RMat) -> CMatrix {
    let n = y.nrows() / 2;
    CMatrix::from_fn(n, n, |i, j| {
        Complex64::new(0.5 * (y[(i, j)] + y[(i + n, j + n)]), 0.5 * (y[(i + n, j)] - y[(i, j + n)]))
    })
}

struct Scaling {
    nu_b: f64,
    nu_c: f64,
}

/// `min <C, X>` s.t. `<A_i, X> = b_i`, `X ⪰ 0`, block diagonal.
#[derive(Clone)]
struct RealSdp {
    dims: Vec<usize>,
    c: Vec<RMat>,
    a: Vec<Vec<RMat>>,
    b: Vec<f64>,
    complex_blocks: usize,
}

impl RealSdp {
    fn from_problem(p: &SdpStandardForm) -> Self {
        let nb = p.block_dims.len();
        let ni = p.ineq_constraints.len();
        let mut dims: Vec<usize> = p.block_dims.iter().map(|n| 2 * n).collect();
        dims.extend(std::iter::repeat_n(1, p.num_scalars + ni));

        let lift = |f: &LinearForm| -> Vec<RMat> {
            let mut out: Vec<RMat> = f.blocks.iter().map(|m| embed(m) * 0.5).collect();
            out.extend(f.scalars.iter().map(|&s| RMat::from_element(1, 1, s)));
            out.extend(std::iter::repeat_n(RMat::zeros(1, 1), ni));
            out
        };
        let c: Vec<RMat> = lift(&p.objective).into_iter().map(|m| -m).collect();
        let mut a = Vec::new();
        let mut b = Vec::new();
        for con in &p.eq_constraints {
            a.push(lift(&con.form));
            b.push(con.rhs);
        }
        for (k, con) in p.ineq_constraints.iter().enumerate() {
            let mut row = lift(&con.form);
            let slack = nb + p.num_scalars + k;
            row[slack][(0, 0)] = 1.0;
            a.push(row);
            b.push(con.rhs);
        }
        Self { dims, c, a, b, complex_blocks: nb }
    }

    /// Removes rows whose coefficients vanish; false if such a row is violated.
    fn drop_trivial_rows(&mut self) -> bool {
        let mut keep = Vec::new();
        for i in 0..self.a.len() {
            if self.a[i].iter().all(|m| m.iter().all(|&v| v == 0.0)) {
                if self.b[i] != 0.0 {
                    return false;
                }
            } else {
                keep.push(i);
            }
        }
        self.a = keep.iter().map(|&i| self.a[i].clone()).collect();
        self.b = keep.iter().map(|&i| self.b[i]).collect();
        true
    }

    /// Unit-norm rows, then `b` and `C` scaled to unit size. Only the first
    /// `b_rows` right-hand sides set the `b` scale.
    fn equilibrate(&mut self, b_rows: usize) -> Scaling {
        for (row, b) in self.a.iter_mut().zip(self.b.iter_mut()) {
            let norm = row.iter().map(|m| m.norm_squared()).sum::<f64>().sqrt();
            for m in row.iter_mut() {
                *m /= norm;
            }
            *b /= norm;
        }
        let bmax = self.b.iter().take(b_rows).fold(0.0f64, |m, v| m.max(v.abs()));
        let nu_b = if bmax > 0.0 { bmax } else { 1.0 };
        for b in &mut self.b {
            *b /= nu_b;
        }
        let cnorm = self.c.iter().map(|m| m.norm_squared()).sum::<f64>().sqrt();
        let nu_c = if cnorm > 0.0 { cnorm } else { 1.0 };
        for m in &mut self.c {
            *m /= nu_c;
        }
        Scaling { nu_b, nu_c }
    }

    fn decode(&self, p: &SdpStandardForm, x: &[RMat], s: &Scaling) -> (Vec<CMatrix>, Vec<f64>) {
        let blocks = (0..self.complex_blocks).map(|k| unembed(&x[k]) * Complex64::new(s.nu_b, 0.0)).collect();
        let scalars = (0..p.num_scalars).map(|j| x[self.complex_blocks + j][(0, 0)] * s.nu_b).collect();
        (blocks, scalars)
    }

    /// Elastic feasibility problem `min Σ (u + v)` s.t. `A(X) + u − v = b`,
    /// `Tr X + τ = M`. A clearly positive optimum certifies infeasibility.
    fn phase1_says_infeasible(&self, x_scale: f64, gap_tol: f64, feas_tol: f64, max_iters: usize) -> bool {
        let m = self.a.len();
        if m == 0 {
            return false;
        }
        let nb = self.dims.len();
        let mut dims = self.dims.clone();
        dims.extend(std::iter::repeat_n(1, 2 * m + 1));
        let total = dims.len();
        let mut c: Vec<RMat> = dims.iter().map(|&n| RMat::zeros(n, n)).collect();
        for k in 0..2 * m {
            c[nb + k][(0, 0)] = 1.0;
        }
        let mut a = Vec::new();
        let mut b = Vec::new();
        for i in 0..m {
            let mut row: Vec<RMat> = self.a[i].clone();
            row.extend(std::iter::repeat_n(RMat::zeros(1, 1), 2 * m + 1));
            row[nb + i][(0, 0)] = 1.0;
            row[nb + m + i][(0, 0)] = -1.0;
            a.push(row);
            b.push(self.b[i]);
        }
        let mut trace_row: Vec<RMat> = dims.iter().map(|&n| RMat::zeros(n, n)).collect();
        for k in 0..nb {
            trace_row[k] = RMat::identity(dims[k], dims[k]);
        }
        trace_row[total - 1][(0, 0)] = 1.0;
        a.push(trace_row);
        b.push(PHASE1_TRACE_FACTOR * x_scale.max(self.dims.iter().sum::<usize>() as f64));

        let mut aux = RealSdp { dims, c, a, b, complex_blocks: 0 };
        let s = aux.equilibrate(m);
        let run = ipm(&aux, gap_tol, feas_tol, max_iters, &|_| true);
        run.converged && run.primal * s.nu_b * s.nu_c > PHASE1_INFEASIBLE
    }
}

fn inner(a: &[RMat], b: &[RMat]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.dot(y)).sum()
}

fn apply_a(p: &RealSdp, x: &[RMat]) -> DVector<f64> {
    DVector::from_iterator(p.a.len(), p.a.iter().map(|row| inner(row, x)))
}

fn apply_at(p: &RealSdp, y: &DVector<f64>) -> Vec<RMat> {
    let mut out: Vec<RMat> = p.dims.iter().map(|&n| RMat::zeros(n, n)).collect();
    for (row, &yi) in p.a.iter().zip(y.iter()) {
        for (o, m) in out.iter_mut().zip(row) {
            *o += m * yi;
        }
    }
    out
}

fn finite(m: &RMat) -> bool {
    m.iter().all(|v| v.is_finite())
}

fn symmetrize(m: &RMat) -> RMat {
    (m + m.transpose()) * 0.5
}

/// Nesterov–Todd scaling `W` with `W Z W = X`, from `X = LLᵀ`, `Z = RRᵀ` and
/// the SVD of `RᵀL`.
fn nt_scaling(x: &RMat, z: &RMat) -> Option<RMat> {
    if !(finite(x) && finite(z)) {
        return None;
    }
    let l = Cholesky::new(x.clone())?.unpack();
    let r = Cholesky::new(z.clone())?.unpack();
    let svd = nalgebra::SVD::try_new(r.transpose() * &l, false, true, f64::EPSILON, 500)?;
    let v_t = svd.v_t?;
    let inv_s = DVector::from_iterator(svd.singular_values.len(), svd.singular_values.iter().map(|s| 1.0 / s));
    if inv_s.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let lv = l * v_t.transpose();
    let w = &lv * DMatrix::from_diagonal(&inv_s) * lv.transpose();
    Some(symmetrize(&w))
}

fn inverse_spd(m: &RMat) -> Option<RMat> {
    Cholesky::new(m.clone()).map(|c| c.inverse())
}

/// Largest `α` with `X + α ΔX ⪰ 0` (infinite when `ΔX ⪰ 0`).
fn max_step(x: &[RMat], dx: &[RMat]) -> f64 {
    let mut alpha = f64::INFINITY;
    for (xk, dk) in x.iter().zip(dx) {
        if xk.nrows() == 1 {
            let (v, d) = (xk[(0, 0)], dk[(0, 0)]);
            if d < 0.0 {
                alpha = alpha.min(-v / d);
            }
            continue;
        }
        let Some(chol) = Cholesky::new(xk.clone()) else { return 0.0 };
        let l = chol.l();
        let Some(t) = l.solve_lower_triangular(dk) else { return 0.0 };
        let Some(s) = l.solve_lower_triangular(&t.transpose()) else { return 0.0 };
        if !finite(&s) {
            return 0.0;
        }
        let min = SymmetricEigen::new(symmetrize(&s)).eigenvalues.min();
        if min < 0.0 {
            alpha = alpha.min(-1.0 / min);
        }
    }
    alpha
}

struct IpmRun {
    x: Vec<RMat>,
    primal: f64,
    dual: f64,
    gap: f64,
    iterations: usize,
    converged: bool,
}

struct Direction {
    dx: Vec<RMat>,
    dy: DVector<f64>,
    dz: Vec<RMat>,
}

fn newton_direction(
    p: &RealSdp,
    w: &[RMat],
    schur: &SchurSolver,
    r_p: &DVector<f64>,
    r_d: &[RMat],
    r_c: &[RMat],
) -> Option<Direction> {
    let wrw: Vec<RMat> = w.iter().zip(r_d).map(|(wk, rk)| wk * rk * wk).collect();
    let rhs = r_p - apply_a(p, r_c) + apply_a(p, &wrw);
    let mut dy = schur.solve(&rhs)?;
    let build = |dy: &DVector<f64>| {
        let at_dy = apply_at(p, dy);
        let dz: Vec<RMat> = r_d.iter().zip(&at_dy).map(|(r, a)| r - a).collect();
        let dx: Vec<RMat> =
            r_c.iter().zip(w.iter().zip(&dz)).map(|(rc, (wk, dzk))| symmetrize(&(rc - wk * dzk * wk))).collect();
        (dx, dz)
    };
    let (mut dx, mut dz) = build(&dy);
    // Iterative refinement against the true primal equation A(ΔX) = r_p,
    // which the normal equations lose once W spans many orders of magnitude.
    let mut err = (r_p - apply_a(p, &dx)).norm();
    for _ in 0..REFINEMENT_STEPS {
        if !(err > 0.0) {
            break;
        }
        let e = r_p - apply_a(p, &dx);
        let Some(delta) = schur.solve(&e) else { break };
        let cand = &dy + delta;
        let (cx, cz) = build(&cand);
        let cerr = (r_p - apply_a(p, &cx)).norm();
        if !(cerr < err) {
            break;
        }
        (dy, dx, dz, err) = (cand, cx, cz, cerr);
    }
    Some(Direction { dx, dy, dz })
}

/// Normal-equations solver. Cholesky normally; a truncated pseudo-inverse
/// once constraint rows become dependent, which happens when the feasible set
/// has no strict interior.
struct SchurSolver {
    m: RMat,
    chol: Option<Cholesky<f64, nalgebra::Dyn>>,
}

impl SchurSolver {
    fn new(m: RMat) -> Self {
        let chol = if m.nrows() > 0 && finite(&m) { Cholesky::new(m.clone()) } else { None };
        Self { m, chol }
    }

    fn solve(&self, rhs: &DVector<f64>) -> Option<DVector<f64>> {
        if self.m.nrows() == 0 {
            return Some(DVector::zeros(0));
        }
        if let Some(c) = &self.chol {
            let out = c.solve(rhs);
            if out.iter().all(|v| v.is_finite()) {
                return Some(out);
            }
        }
        if !finite(&self.m) {
            return None;
        }
        let svd = nalgebra::SVD::try_new(self.m.clone(), true, true, f64::EPSILON, 500)?;
        let eps = 1e-13 * svd.singular_values.max();
        let out = svd.solve(rhs, eps).ok()?;
        out.iter().all(|v| v.is_finite()).then_some(out)
    }
}

fn ipm(p: &RealSdp, gap_tol: f64, feas_tol: f64, max_iters: usize, accept: &dyn Fn(&[RMat]) -> bool) -> IpmRun {
    let m = p.a.len();
    let n_total: usize = p.dims.iter().sum();
    let b = DVector::from_column_slice(&p.b);
    let c_norm = p.c.iter().map(|c| c.norm_squared()).sum::<f64>().sqrt();

    let mut x: Vec<RMat> = p
        .dims
        .iter()
        .map(|&n| {
            let sq = (n as f64).sqrt();
            let xi = p.b.iter().fold(10f64.max(sq), |acc, bi| acc.max(sq * (1.0 + bi.abs()) / 2.0));
            RMat::identity(n, n) * xi
        })
        .collect();
    let mut z: Vec<RMat> = p.dims.iter().map(|&n| RMat::identity(n, n) * 10f64.max((n as f64).sqrt())).collect();
    let mut y = DVector::zeros(m);

    let mut iterations = 0;
    loop {
        let r_p = &b - apply_a(p, &x);
        let at_y = apply_at(p, &y);
        let r_d: Vec<RMat> = p.c.iter().zip(z.iter().zip(&at_y)).map(|(c, (zk, ak))| c - zk - ak).collect();
        let primal = inner(&p.c, &x);
        let dual = b.dot(&y);
        let gap = (primal - dual).abs() / 1f64.max(primal.abs()).max(dual.abs());
        let dinf = r_d.iter().map(|r| r.norm_squared()).sum::<f64>().sqrt() / (1.0 + c_norm);

        // Primal feasibility is judged by `accept` in the caller's units.
        let done = gap <= gap_tol && dinf <= feas_tol;
        if done && accept(&x) {
            return IpmRun { x, primal, dual, gap, iterations, converged: true };
        }
        let fail = |x: Vec<RMat>, iterations| IpmRun { x, primal, dual, gap, iterations, converged: false };
        if iterations >= max_iters {
            return fail(x, iterations);
        }
        iterations += 1;

        let w: Option<Vec<RMat>> = x.iter().zip(&z).map(|(xk, zk)| nt_scaling(xk, zk)).collect();
        let Some(w) = w else { return fail(x, iterations) };
        let z_inv: Option<Vec<RMat>> = z.iter().map(inverse_spd).collect();
        let Some(z_inv) = z_inv else { return fail(x, iterations) };

        let wa: Vec<Vec<RMat>> =
            p.a.iter().map(|row| row.iter().zip(&w).map(|(ak, wk)| wk * ak * wk).collect()).collect();
        let schur = SchurSolver::new(RMat::from_fn(m, m, |i, j| inner(&p.a[i], &wa[j])));

        let mu = inner(&x, &z) / n_total as f64;

        // Predictor (pure affine scaling direction).
        let r_c: Vec<RMat> = x.iter().map(|xk| -xk).collect();
        let Some(aff) = newton_direction(p, &w, &schur, &r_p, &r_d, &r_c) else { return fail(x, iterations) };
        let ap = (STEP_FRACTION * max_step(&x, &aff.dx)).min(1.0);
        let ad = (STEP_FRACTION * max_step(&z, &aff.dz)).min(1.0);
        let x_aff: Vec<RMat> = x.iter().zip(&aff.dx).map(|(a, d)| a + d * ap).collect();
        let z_aff: Vec<RMat> = z.iter().zip(&aff.dz).map(|(a, d)| a + d * ad).collect();
        let mu_aff = inner(&x_aff, &z_aff) / n_total as f64;
        let sigma = (mu_aff / mu).max(0.0).powi(3).min(1.0);

        // Centering corrector.
        let r_c: Vec<RMat> = x.iter().zip(&z_inv).map(|(xk, zi)| zi * (sigma * mu) - xk).collect();
        let Some(dir) = newton_direction(p, &w, &schur, &r_p, &r_d, &r_c) else { return fail(x, iterations) };
        let ap = (STEP_FRACTION * max_step(&x, &dir.dx)).min(1.0);
        let ad = (STEP_FRACTION * max_step(&z, &dir.dz)).min(1.0);
        if !(ap > 0.0 && ad > 0.0) {
            return fail(x, iterations);
        }
        for (xk, d) in x.iter_mut().zip(&dir.dx) {
            *xk += d * ap;
            *xk = symmetrize(xk);
        }
        for (zk, d) in z.iter_mut().zip(&dir.dz) {
            *zk += d * ad;
            *zk = symmetrize(zk);
        }
        y += &dir.dy * ad;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(rng: &mut impl Rng, n: usize) -> CMatrix {
        let a = CMatrix::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        (&a + a.adjoint()) * c(0.5, 0.0)
    }

    fn max_trace_one(cm: CMatrix) -> SdpStandardForm {
        let n = cm.nrows();
        let mut p = SdpStandardForm::new(vec![n], 0);
        p.objective.blocks[0] = cm;
        let mut f = p.zero_form();
        f.blocks[0] = CMatrix::identity(n, n);
        p.add_eq(f, 1.0);
        p
    }

    #[test]
    fn embedding_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_hermitian(&mut rng, 3);
        let x = random_hermitian(&mut rng, 3);
        assert_eq!(unembed(&embed(&x)), x);
        assert_relative_eq!(0.5 * embed(&a).dot(&embed(&x)), trace_product(&a, &x), epsilon = 1e-12);
    }

    #[test]
    fn diagonal_max_eigenvalue() {
        let cm = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(2.0, 0.0)]));
        let s = solve_sdp_default(&max_trace_one(cm)).unwrap();
        assert_eq!(s.status, SdpStatus::Optimal);
        assert_relative_eq!(s.objective, 2.0, epsilon = 1e-7);
        assert!((s.blocks[0][(0, 0)].re).abs() < 1e-7);
        assert_relative_eq!(s.blocks[0][(1, 1)].re, 1.0, epsilon = 1e-7);
    }

    #[test]
    fn trace_budget_inequality() {
        let power = 7.5;
        let mut p = SdpStandardForm::new(vec![3], 0);
        p.objective.blocks[0] = CMatrix::identity(3, 3);
        let mut f = p.zero_form();
        f.blocks[0] = CMatrix::identity(3, 3);
        p.add_ineq(f, power);
        let s = solve_sdp_default(&p).unwrap();
        assert_eq!(s.status, SdpStatus::Optimal);
        assert_relative_eq!(s.objective, power, max_relative = 1e-7);
    }

    #[test]
    fn random_hermitian_eigen_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=6 {
            let cm = random_hermitian(&mut rng, n);
            let lmax = crate::eig::hermitian_eig(&cm).unwrap().max_eigenvalue();
            let s = solve_sdp_default(&max_trace_one(cm)).unwrap();
            assert_eq!(s.status, SdpStatus::Optimal);
            assert!((s.objective - lmax).abs() <= 1e-7, "n={n}: {} vs {lmax}", s.objective);
            assert!(s.violation <= DEFAULT_FEAS_TOL);
            assert!(s.blocks[0].diagonal().iter().all(|z| z.im.abs() <= 1e-10));
        }
    }

    #[test]
    fn scalars_and_mixed_constraints() {
        // max s0 + 2 s1 s.t. s0 + s1 ≤ 3, s1 ≤ 1 → 4
        let mut p = SdpStandardForm::new(vec![], 2);
        p.objective.scalars = vec![1.0, 2.0];
        p.add_ineq(LinearForm { blocks: vec![], scalars: vec![1.0, 1.0] }, 3.0);
        p.add_ineq(LinearForm { blocks: vec![], scalars: vec![0.0, 1.0] }, 1.0);
        let s = solve_sdp_default(&p).unwrap();
        assert_eq!(s.status, SdpStatus::Optimal);
        assert_relative_eq!(s.objective, 4.0, epsilon = 1e-7);
        assert!((s.objective - s.dual_objective).abs() <= 1e-8 * s.objective_scale.max(4.0));
    }

    #[test]
    fn infeasible_problem_is_flagged() {
        // Tr X = −1 with X ⪰ 0.
        let mut p = SdpStandardForm::new(vec![2], 0);
        let mut f = p.zero_form();
        f.blocks[0] = CMatrix::identity(2, 2);
        p.add_eq(f, -1.0);
        assert_eq!(solve_sdp_default(&p).unwrap().status, SdpStatus::Infeasible);

        // A vanishing row with a nonzero right-hand side.
        let mut p = SdpStandardForm::new(vec![1], 0);
        p.add_eq(p.zero_form(), 2.0);
        assert_eq!(solve_sdp_default(&p).unwrap().status, SdpStatus::Infeasible);
    }

    #[test]
    fn vanishing_rows_are_ignored() {
        let mut p = max_trace_one(CMatrix::identity(2, 2) * c(3.0, 0.0));
        p.add_ineq(p.zero_form(), 0.0);
        let s = solve_sdp_default(&p).unwrap();
        assert_eq!(s.status, SdpStatus::Optimal);
        assert_relative_eq!(s.objective, 3.0, epsilon = 1e-7);
    }

    #[test]
    fn iteration_cap_reports_max_iters() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = solve_sdp(&max_trace_one(random_hermitian(&mut rng, 4)), 1e-8, 1e-9, 2).unwrap();
        assert_eq!(s.status, SdpStatus::MaxIters);
        assert_eq!(s.iterations, 2);
    }

    #[test]
    fn rejects_malformed_input() {
        let mut p = max_trace_one(CMatrix::identity(2, 2));
        p.objective.blocks[0][(0, 1)] = c(1.0, 0.0);
        assert!(matches!(solve_sdp_default(&p), Err(Error::NotHermitian(_))));
        let mut p = max_trace_one(CMatrix::identity(2, 2));
        p.objective.blocks[0] = CMatrix::identity(3, 3);
        assert!(matches!(solve_sdp_default(&p), Err(Error::Dimension(_))));
    }

    #[test]
    fn badly_scaled_rank_one_objective() {
        // Resembles the normalized beamforming subproblem: huge rank-1 gain.
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let h = nalgebra::DVector::from_fn(4, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let g = &h * h.adjoint() * c(3e6, 0.0);
        let lmax = crate::eig::hermitian_eig(&g).unwrap().max_eigenvalue();
        let s = solve_sdp_default(&max_trace_one(g)).unwrap();
        assert_eq!(s.status, SdpStatus::Optimal);
        assert_relative_eq!(s.objective, lmax, max_relative = 1e-8);
    }
}
