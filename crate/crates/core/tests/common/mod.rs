//! Independent reference computations shared by the integration tests.
//!
//! Nothing here calls into the library's numerics; every oracle is a plain
//! composite rule or fixed-step integrator.

#![allow(dead_code)]

/// Composite Simpson rule with `n` (rounded up to even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// Composite midpoint rule, the workhorse for very fine brute-force sums.
pub fn midpoint<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = 0.0;
    let mut c = 0.0;
    for i in 0..n {
        // Kahan summation keeps 1e7 panels honest.
        let y = f(a + (i as f64 + 0.5) * h) - c;
        let t = s + y;
        c = (t - s) - y;
        s = t;
    }
    s * h
}

/// RK4 on `β' = μ(1+t)^{-λ} β`, `I' = 1/β`, returning `(β(t), I(t))`.
pub fn beta_and_integral(mu: f64, lambda: f64, t: f64, steps: usize) -> (f64, f64) {
    let rhs = |s: f64, y: [f64; 2]| [mu * (1.0 + s).powf(-lambda) * y[0], 1.0 / y[0]];
    let h = t / steps as f64;
    let mut y = [1.0, 0.0];
    for k in 0..steps {
        let s = k as f64 * h;
        let k1 = rhs(s, y);
        let k2 = rhs(s + 0.5 * h, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = rhs(s + 0.5 * h, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
        let k4 = rhs(s + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        for j in 0..2 {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }
    (y[0], y[1])
}

/// Plain bisection on a sign change.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let fa = f(a);
    for _ in 0..iters {
        let m = 0.5 * (a + b);
        if (f(m) > 0.0) == (fa > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// `∫_{ρ̄}^{ρ} c²(s)/s ds` for `p = Aρ^γ`, `A = 1/(γ ρ̄^{γ-1})`.
pub fn enthalpy_oracle(gamma: f64, rho_bar: f64, rho: f64) -> f64 {
    let a = 1.0 / (gamma * rho_bar.powf(gamma - 1.0));
    simpson(|s| gamma * a * s.powf(gamma - 2.0), rho_bar, rho, 20_000)
}

/// Relative difference with an absolute floor.
pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
