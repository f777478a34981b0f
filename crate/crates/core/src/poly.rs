//! Real polynomial helpers. Coefficients are stored in ascending order:
//! `c[k]` multiplies `x^k`.

use std::f64::consts::PI;

/// Relative size below which a leading coefficient is treated as zero.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

pub fn eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

/// `Σ |c_k| |x|^k`, the natural magnitude against which a residual is judged.
pub fn eval_scale(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x.abs() + a.abs())
}

pub fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(k, &a)| k as f64 * a).collect()
}

pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len().max(b.len())];
    for (k, v) in out.iter_mut().enumerate() {
        *v = a.get(k).copied().unwrap_or(0.0) + b.get(k).copied().unwrap_or(0.0);
    }
    out
}

pub fn scale(a: &[f64], k: f64) -> Vec<f64> {
    a.iter().map(|v| v * k).collect()
}

/// Drops leading coefficients that are negligible when `|x| ≲ x_scale`.
pub fn trim(c: &[f64], x_scale: f64) -> Vec<f64> {
    let weight = |k: usize| c[k].abs() * x_scale.powi(k as i32);
    let biggest = (0..c.len()).map(weight).fold(0.0, f64::max);
    let mut deg = c.len();
    while deg > 0 && weight(deg - 1) <= DEGENERACY_THRESHOLD * biggest {
        deg -= 1;
    }
    c[..deg].to_vec()
}

/// Real roots of `a x² + b x + c`, ascending. Uses the cancellation-free form.
pub fn solve_quadratic(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        return if b == 0.0 { Vec::new() } else { vec![-c / b] };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    if disc == 0.0 {
        return vec![-b / (2.0 * a)];
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let (mut r1, mut r2) = if q == 0.0 { (0.0, 0.0) } else { (q / a, c / q) };
    if r1 > r2 {
        std::mem::swap(&mut r1, &mut r2);
    }
    vec![r1, r2]
}

/// Real roots of the depressed cubic `z³ + p z + q`, via Cardano's formula
/// (one root when the discriminant is non-negative, trigonometric form otherwise).
pub fn solve_depressed_cubic(p: f64, q: f64) -> Vec<f64> {
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    if disc >= 0.0 {
        let s = disc.sqrt();
        vec![(-q / 2.0 + s).cbrt() + (-q / 2.0 - s).cbrt()]
    } else {
        let m = 2.0 * (-p / 3.0).sqrt();
        let theta = ((-q / 2.0) / (-(p / 3.0).powi(3)).sqrt()).clamp(-1.0, 1.0).acos();
        let mut r: Vec<f64> = (0..3).map(|k| m * ((theta + 2.0 * PI * k as f64) / 3.0).cos()).collect();
        r.sort_by(f64::total_cmp);
        r
    }
}

/// Real roots of `a x³ + b x² + c x + d` (`a ≠ 0`), Newton-polished.
pub fn solve_cubic(a: f64, b: f64, c: f64, d: f64) -> Vec<f64> {
    let (b, c, d) = (b / a, c / a, d / a);
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let coeffs = [d, c, b, 1.0];
    let mut roots: Vec<f64> = solve_depressed_cubic(p, q).into_iter().map(|z| polish(&coeffs, z - shift, 4)).collect();
    roots.sort_by(f64::total_cmp);
    roots
}

/// A few guarded Newton steps; a step is kept only if it shrinks the residual.
pub fn polish(c: &[f64], mut x: f64, iters: usize) -> f64 {
    let dc = derivative(c);
    let mut fx = eval(c, x).abs();
    for _ in 0..iters {
        let d = eval(&dc, x);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let next = x - eval(c, x) / d;
        let fn_ = eval(c, next).abs();
        if !(fn_ < fx) {
            break;
        }
        x = next;
        fx = fn_;
    }
    x
}

/// All real roots of `c` inside `[lo, hi]`, by recursively isolating monotone
/// pieces between the roots of the derivative and bisecting sign changes.
pub fn real_roots_in(c: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let c = trim(c, lo.abs().max(hi.abs()).max(1.0));
    match c.len() {
        0 | 1 => return Vec::new(),
        2 => {
            let r = -c[0] / c[1];
            return if (lo..=hi).contains(&r) { vec![r] } else { Vec::new() };
        }
        _ => {}
    }
    let mut knots = vec![lo];
    knots.extend(real_roots_in(&derivative(&c), lo, hi));
    knots.push(hi);

    let mut roots: Vec<f64> = Vec::new();
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (eval(&c, a), eval(&c, b));
        let r = if fa == 0.0 {
            Some(a)
        } else if fb == 0.0 {
            Some(b)
        } else if fa.signum() != fb.signum() {
            Some(bisect(&c, a, b, fa))
        } else {
            None
        };
        if let Some(r) = r {
            if roots.last().is_none_or(|&last| (r - last).abs() > 1e-12 * r.abs().max(1.0)) {
                roots.push(r);
            }
        }
    }
    roots
}

fn bisect(c: &[f64], mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = eval(c, m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn horner_and_arith() {
        let p = [1.0, -3.0, 2.0]; // 2x² − 3x + 1
        assert_eq!(eval(&p, 2.0), 3.0);
        assert_eq!(derivative(&p), vec![-3.0, 4.0]);
        assert_eq!(mul(&[1.0, 1.0], &[-1.0, 1.0]), vec![-1.0, 0.0, 1.0]);
        assert_eq!(add(&[1.0], &[0.0, 2.0]), vec![1.0, 2.0]);
        assert_eq!(eval_scale(&p, -1.0), 6.0);
    }

    #[test]
    fn trim_drops_negligible_leading_terms() {
        assert_eq!(trim(&[1.0, 2.0, 1e-20], 30.0).len(), 2);
        assert_eq!(trim(&[1.0, 2.0, 1e-3], 30.0).len(), 3);
        assert!(trim(&[0.0, 0.0], 1.0).is_empty());
    }

    #[test]
    fn quadratic_cases() {
        assert_eq!(solve_quadratic(1.0, -3.0, 2.0), vec![1.0, 2.0]);
        assert!(solve_quadratic(1.0, 0.0, 1.0).is_empty());
        assert_eq!(solve_quadratic(0.0, 2.0, -4.0), vec![2.0]);
        // Large cancellation: roots 1e-8 and 1e8.
        let r = solve_quadratic(1.0, -(1e8 + 1e-8), 1.0);
        assert_relative_eq!(r[0], 1e-8, max_relative = 1e-12);
        assert_relative_eq!(r[1], 1e8, max_relative = 1e-12);
    }

    #[test]
    fn cubic_cases() {
        // (x−1)(x−2)(x−3)
        let r = solve_cubic(1.0, -6.0, 11.0, -6.0);
        assert_eq!(r.len(), 3);
        for (a, b) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert_relative_eq!(*a, b, epsilon = 1e-12);
        }
        // x³ + x + 1 has a single real root near −0.6823278
        let r = solve_cubic(1.0, 0.0, 1.0, 1.0);
        assert_eq!(r.len(), 1);
        assert!(eval(&[1.0, 1.0, 0.0, 1.0], r[0]).abs() < 1e-14);
        // Negative radicand handled by the sign-preserving cube root.
        let r = solve_depressed_cubic(0.0, 8.0);
        assert_relative_eq!(r[0], -2.0, epsilon = 1e-14);
    }

    #[test]
    fn bracketed_roots() {
        // (x−1)(x−2)(x−3)(x−4)(x−5)
        let mut c = vec![1.0];
        for r in 1..=5 {
            c = mul(&c, &[-(r as f64), 1.0]);
        }
        let roots = real_roots_in(&c, 0.0, 10.0);
        assert_eq!(roots.len(), 5);
        for (k, r) in roots.iter().enumerate() {
            assert_relative_eq!(*r, (k + 1) as f64, epsilon = 1e-9);
        }
        assert_eq!(real_roots_in(&c, 2.5, 3.5).len(), 1);
        assert!(real_roots_in(&[1.0, 0.0, 1.0], -5.0, 5.0).is_empty());
    }
}
