//! Scalar special functions shared by the modules.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_traits::Float;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function by the Lanczos approximation (g = 7, nine terms).
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

fn glue(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

fn glue_prime(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp() / (t * t)
    } else {
        0.0
    }
}

/// C^∞ step: 0 for u ≤ 0, 1 for u ≥ 1.
pub fn smooth_step(u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    if u >= 1.0 {
        return 1.0;
    }
    let a = glue(u);
    a / (a + glue(1.0 - u))
}

pub fn smooth_step_prime(u: f64) -> f64 {
    if u <= 0.0 || u >= 1.0 {
        return 0.0;
    }
    let (a, b) = (glue(u), glue(1.0 - u));
    let (da, db) = (glue_prime(u), glue_prime(1.0 - u));
    (da * b + a * db) / ((a + b) * (a + b))
}

/// Excision factor ψ_μ as a function of t = |z|²: 0 for t ≤ μ²/4, 1 for t ≥ μ².
pub fn excision(t: f64, mu: f64) -> f64 {
    let lo = 0.25 * mu * mu;
    smooth_step((t - lo) / (mu * mu - lo))
}

/// d/dt of [`excision`].
pub fn excision_prime(t: f64, mu: f64) -> f64 {
    let lo = 0.25 * mu * mu;
    let w = mu * mu - lo;
    smooth_step_prime((t - lo) / w) / w
}

/// Unnormalised bump ψ(t), supported in [-1/4, 1/4].
pub fn bump_profile(t: f64) -> f64 {
    let s = 1.0 - 4.0 * t.abs();
    if s <= 0.0 {
        0.0
    } else {
        (-1.0 / s).exp()
    }
}

/// Normalisation making ∫ψ(y²)dy = 1.
pub fn bump_normalization() -> f64 {
    // composite Simpson on the support [-1/2, 1/2]; the integrand is flat at both ends
    let n = 4000;
    let h = 1.0 / n as f64;
    let mut acc = 0.0;
    for i in 0..=n {
        let y = -0.5 + i as f64 * h;
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += w * bump_profile(y * y);
    }
    1.0 / (acc * h / 3.0)
}

/// Orthonormal Hermite functions h_0..=h_nmax at x.
///
/// The three-term recurrence is run on a rescaled sequence so that large
/// orders do not underflow before the Gaussian factor is applied.
pub fn hermite_functions(nmax: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; nmax + 1];
    let base = -0.5 * x * x;
    let norm = PI.powf(-0.25);
    let mut log_scale = 0.0f64;
    let mut prev = 0.0f64;
    let mut cur = norm;
    out[0] = cur * base.exp();
    for n in 0..nmax {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * x * cur - (nf / (nf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > 1e150 {
            cur *= 1e-150;
            prev *= 1e-150;
            log_scale += 150.0 * core::f64::consts::LN_10;
        }
        out[n + 1] = cur * (base + log_scale).exp();
    }
    out
}

/// Single orthonormal Hermite function h_n(x).
pub fn hermite_function(n: usize, x: f64) -> f64 {
    hermite_functions(n, x)[n]
}

/// Least-squares slope of y against x.
pub fn regression_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
    }
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

pub(crate) fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
