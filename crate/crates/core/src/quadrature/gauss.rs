//! Gauss-Legendre nodes by Newton iteration on the three-term recurrence.

use std::f64::consts::PI;

/// Nodes on `[-1, 1]` as `(x, 1 - x, weight)`, ascending in `x`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64, f64)> {
    let mut out = vec![(0.0, 0.0, 0.0); n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // theta with x = cos(theta), starting from the Tricomi estimate
        let mut theta = PI * (i as f64 + 0.75) / (n as f64 + 0.5);
        let mut dp = 0.0;
        for _ in 0..100 {
            let x = theta.cos();
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
            }
            // P_n'(x) = n (x P_n - P_{n-1}) / (x^2 - 1); dP/dtheta = -sin(theta) P_n'
            let s = theta.sin();
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / (-s * dp);
            theta -= step;
            if step.abs() < 1e-17 {
                break;
            }
        }
        let x = theta.cos();
        let s = theta.sin();
        let one_minus = 2.0 * (0.5 * theta).sin().powi(2);
        let w = 2.0 / (s * s * dp * dp);
        out[n - 1 - i] = (x, one_minus, w);
        out[i] = (-x, 2.0 - one_minus, w);
    }
    out
}
