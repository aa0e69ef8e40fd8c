//! Random inputs and independent oracles shared by the integration tests.
#![allow(dead_code)]

use nlevel_gauge::linalg::{c, CMatrix, CVector, C64};
use nlevel_gauge::timefn::TimeFunction;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

pub fn complex(rng: &mut ChaCha8Rng) -> C64 {
    c(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0))
}

pub fn hermitian(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> CMatrix {
    let m = CMatrix::from_fn(n, n, |_, _| complex(rng) * scale);
    (&m + m.adjoint()) * c(0.5, 0.0)
}

pub fn skew_hermitian(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> CMatrix {
    hermitian(rng, n, scale) * c(0.0, 1.0)
}

pub fn unit_vector(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v = [
            uniform(rng, -1.0, 1.0),
            uniform(rng, -1.0, 1.0),
            uniform(rng, -1.0, 1.0),
        ];
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if r > 0.2 && r <= 1.0 {
            return [v[0] / r, v[1] / r, v[2] / r];
        }
    }
}

pub fn state(rng: &mut ChaCha8Rng, n: usize) -> CVector {
    let v = CVector::from_fn(n, |_, _| complex(rng));
    let r = v.norm();
    v / c(r, 0.0)
}

/// `a + b t + A sin(ω t + φ)` with modest coefficients.
pub fn smooth(rng: &mut ChaCha8Rng, scale: f64) -> TimeFunction {
    TimeFunction::sum([
        TimeFunction::polynomial([
            uniform(rng, -scale, scale),
            uniform(rng, -0.2 * scale, 0.2 * scale),
        ]),
        TimeFunction::sinusoid(
            uniform(rng, -scale, scale),
            uniform(rng, 0.1, 1.5),
            uniform(rng, 0.0, std::f64::consts::TAU),
        ),
    ])
}

/// `e^M` by Taylor series with scaling and squaring, independent of the
/// library's Padé implementation.
pub fn taylor_expm(m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    let norm = m.iter().map(|z| z.norm()).sum::<f64>();
    let mut s = 0;
    while norm / f64::powi(2.0, s) > 0.25 {
        s += 1;
    }
    let a = m / c(f64::powi(2.0, s), 0.0);
    let mut term = CMatrix::identity(n, n);
    let mut sum = CMatrix::identity(n, n);
    for k in 1..30 {
        term = &term * &a / c(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

pub fn max_abs(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_vec(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Central difference with Richardson extrapolation.
pub fn richardson<F: Fn(f64) -> f64>(f: F, t: f64, h: f64) -> f64 {
    let d = |h: f64| (f(t + h) - f(t - h)) / (2.0 * h);
    let d1 = d(h);
    let d2 = d(h / 2.0);
    let d3 = d(h / 4.0);
    let r1 = (4.0 * d2 - d1) / 3.0;
    let r2 = (4.0 * d3 - d2) / 3.0;
    (16.0 * r2 - r1) / 15.0
}

/// Composite 16-point Gauss–Legendre rule on `panels` equal panels.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    const X: [f64; 8] = [
        0.0950125098376374,
        0.2816035507792589,
        0.4580167776572274,
        0.6178762444026438,
        0.755404408355003,
        0.8656312023878318,
        0.9445750230732326,
        0.9894009349916499,
    ];
    const W: [f64; 8] = [
        0.1894506104550685,
        0.1826034150449236,
        0.1691565193950025,
        0.1495959888165767,
        0.1246289712555339,
        0.0951585116824928,
        0.0622535239386479,
        0.0271524594117541,
    ];
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        let half = 0.5 * h;
        for (x, w) in X.iter().zip(W) {
            total += w * half * (f(mid - half * x) + f(mid + half * x));
        }
    }
    total
}
