//! Dormand-Prince 5(4) integrator with adaptive steps and dense output.
//!
//! Generic over real or complex state vectors. Used as the numerical oracle
//! for the Schrödinger equation and for the adjoint mean-value equation.

use nalgebra::{ComplexField, DVector};

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// dense output
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Step-size controller settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Initial step; chosen automatically when `None`.
    pub h0: Option<f64>,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-10,
            atol: 1e-12,
            max_steps: 1_000_000,
            h0: None,
        }
    }
}

#[derive(Debug, Clone)]
struct Segment<T: ComplexField<RealField = f64>> {
    t: f64,
    h: f64,
    r: [DVector<T>; 5],
}

/// Numerical solution with continuous (4th order) interpolation.
#[derive(Debug, Clone)]
pub struct DenseSolution<T: ComplexField<RealField = f64>> {
    t0: f64,
    t1: f64,
    y0: DVector<T>,
    segments: Vec<Segment<T>>,
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

impl<T: ComplexField<RealField = f64>> DenseSolution<T> {
    pub fn interval(&self) -> (f64, f64) {
        (self.t0, self.t1)
    }

    pub fn initial(&self) -> &DVector<T> {
        &self.y0
    }

    /// Step boundaries including both endpoints.
    pub fn mesh(&self) -> Vec<f64> {
        let mut m: Vec<f64> = self.segments.iter().map(|s| s.t).collect();
        m.push(self.t1);
        m
    }

    pub fn at(&self, t: f64) -> Result<DVector<T>> {
        if !(t >= self.t0 && t <= self.t1) {
            return Err(Error::OutOfDomain {
                t,
                lo: self.t0,
                hi: self.t1,
            });
        }
        if self.segments.is_empty() {
            return Ok(self.y0.clone());
        }
        let idx = self
            .segments
            .partition_point(|s| s.t <= t)
            .clamp(1, self.segments.len())
            - 1;
        let seg = &self.segments[idx];
        let theta = (t - seg.t) / seg.h;
        let theta1 = 1.0 - theta;
        let [r1, r2, r3, r4, r5] = &seg.r;
        // r1 + θ(r2 + θ1(r3 + θ(r4 + θ1 r5)))
        let inner = r4 + r5.scale(theta1);
        let inner = r3 + inner.scale(theta);
        let inner = r2 + inner.scale(theta1);
        Ok(r1 + inner.scale(theta))
    }

    pub fn end(&self) -> Result<DVector<T>> {
        self.at(self.t1)
    }
}

fn scaled_rms<T: ComplexField<RealField = f64>>(
    err: &DVector<T>,
    y0: &DVector<T>,
    y1: &DVector<T>,
    opts: &OdeOptions,
) -> f64 {
    let n = err.len().max(1) as f64;
    let s: f64 = err
        .iter()
        .zip(y0.iter().zip(y1.iter()))
        .map(|(e, (a, b))| {
            let sc = opts.atol + opts.rtol * a.clone().modulus().max(b.clone().modulus());
            let r = e.clone().modulus() / sc;
            r * r
        })
        .sum();
    (s / n).sqrt()
}

fn axpy<T: ComplexField<RealField = f64>>(
    y: &DVector<T>,
    h: f64,
    terms: &[(f64, &DVector<T>)],
) -> DVector<T> {
    let mut out = y.clone();
    for (a, k) in terms {
        if *a != 0.0 {
            out.axpy(T::from_real(h * a), k, T::one());
        }
    }
    out
}

struct Stages<T: ComplexField<RealField = f64>> {
    k: [DVector<T>; 7],
    y1: DVector<T>,
}

fn dp_step<T, F>(f: &F, t: f64, y: &DVector<T>, k1: &DVector<T>, h: f64) -> Result<Stages<T>>
where
    T: ComplexField<RealField = f64>,
    F: Fn(f64, &DVector<T>) -> Result<DVector<T>>,
{
    let k2 = f(t + C2 * h, &axpy(y, h, &[(A21, k1)]))?;
    let k3 = f(t + C3 * h, &axpy(y, h, &[(A31, k1), (A32, &k2)]))?;
    let k4 = f(
        t + C4 * h,
        &axpy(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]),
    )?;
    let k5 = f(
        t + C5 * h,
        &axpy(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
    )?;
    let k6 = f(
        t + h,
        &axpy(
            y,
            h,
            &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
        ),
    )?;
    let y1 = axpy(
        y,
        h,
        &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
    );
    let k7 = f(t + h, &y1)?;
    Ok(Stages {
        k: [k1.clone(), k2, k3, k4, k5, k6, k7],
        y1,
    })
}

fn initial_step<T, F>(
    f: &F,
    t0: f64,
    y0: &DVector<T>,
    f0: &DVector<T>,
    span: f64,
    opts: &OdeOptions,
) -> Result<f64>
where
    T: ComplexField<RealField = f64>,
    F: Fn(f64, &DVector<T>) -> Result<DVector<T>>,
{
    let d0 = scaled_rms(y0, y0, y0, opts);
    let d1 = scaled_rms(f0, y0, y0, opts);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let h0 = h0.min(span);
    let y1 = axpy(y0, h0, &[(1.0, f0)]);
    let f1 = f(t0 + h0, &y1)?;
    let diff = &f1 - f0;
    let d2 = scaled_rms(&diff, y0, y0, opts) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(1.0 / 5.0)
    };
    Ok((100.0 * h0).min(h1).min(span))
}

/// Adaptive integration of `y' = f(t, y)` over `[t0, t1]`.
pub fn integrate<T, F>(
    f: F,
    y0: &DVector<T>,
    interval: (f64, f64),
    opts: &OdeOptions,
) -> Result<DenseSolution<T>>
where
    T: ComplexField<RealField = f64>,
    F: Fn(f64, &DVector<T>) -> Result<DVector<T>>,
{
    let (t0, t1) = interval;
    if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
        return Err(Error::InvalidInterval { t0, t1 });
    }
    if opts.rtol.is_nan() || opts.rtol < 1e-13 {
        return Err(Error::Numerical(format!(
            "rtol {} below supported minimum 1e-13",
            opts.rtol
        )));
    }
    let mut sol = DenseSolution {
        t0,
        t1,
        y0: y0.clone(),
        segments: Vec::new(),
        accepted: 0,
        rejected: 0,
        evaluations: 0,
    };
    let span = t1 - t0;
    let mut t = t0;
    let mut y = y0.clone();
    let mut k1 = f(t, &y)?;
    let mut h = match opts.h0 {
        Some(h) => h.min(span),
        None => initial_step(&f, t0, &y, &k1, span, opts)?,
    };
    sol.evaluations += 2;
    let mut last_rejected = false;
    while t < t1 {
        if sol.accepted + sol.rejected >= opts.max_steps {
            return Err(Error::MaxStepsExceeded(opts.max_steps));
        }
        if t + h > t1 || t + 1.01 * h >= t1 {
            h = t1 - t;
        }
        if h <= 10.0 * f64::EPSILON * t.abs().max(span) {
            return Err(Error::StepUnderflow { t, h });
        }
        let st = dp_step(&f, t, &y, &k1, h)?;
        sol.evaluations += 6;
        let [k1s, _k2, k3, k4, k5, k6, k7] = &st.k;
        let err_vec = axpy(
            &DVector::zeros(y.len()),
            h,
            &[(E1, k1s), (E3, k3), (E4, k4), (E5, k5), (E6, k6), (E7, k7)],
        );
        let err = scaled_rms(&err_vec, &y, &st.y1, opts);
        if err <= 1.0 {
            let ydiff = &st.y1 - &y;
            let bspl = k1s.scale(h) - &ydiff;
            let r4 = &ydiff - k7.scale(h) - &bspl;
            let r5 = axpy(
                &DVector::zeros(y.len()),
                h,
                &[(D1, k1s), (D3, k3), (D4, k4), (D5, k5), (D6, k6), (D7, k7)],
            );
            sol.segments.push(Segment {
                t,
                h,
                r: [y.clone(), ydiff, bspl, r4, r5],
            });
            let t_next = t + h;
            t = if t_next >= t1 || (t1 - t_next) < 1e-14 * span {
                t1
            } else {
                t_next
            };
            y = st.y1.clone();
            k1 = st.k[6].clone();
            sol.accepted += 1;
            let mut fac = 0.9 * err.max(1e-10).powf(-0.2);
            if last_rejected {
                fac = fac.min(1.0);
            }
            h *= fac.clamp(0.2, 10.0);
            last_rejected = false;
        } else {
            sol.rejected += 1;
            h *= (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
            last_rejected = true;
        }
    }
    if let Some(last) = sol.segments.last_mut() {
        last.h = t1 - last.t;
    }
    Ok(sol)
}

/// Fixed-step 5th-order Dormand-Prince; returns the state at `t1`.
pub fn integrate_fixed<T, F>(
    f: F,
    y0: &DVector<T>,
    interval: (f64, f64),
    steps: usize,
) -> Result<DVector<T>>
where
    T: ComplexField<RealField = f64>,
    F: Fn(f64, &DVector<T>) -> Result<DVector<T>>,
{
    let (t0, t1) = interval;
    let h = (t1 - t0) / steps as f64;
    let mut y = y0.clone();
    for s in 0..steps {
        let t = t0 + s as f64 * h;
        let k1 = f(t, &y)?;
        y = dp_step(&f, t, &y, &k1, h)?.y1;
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let y0 = DVector::from_vec(vec![1.0f64]);
        let sol = integrate(
            |_, y: &DVector<f64>| Ok(-y),
            &y0,
            (0.0, 5.0),
            &OdeOptions::default(),
        )
        .unwrap();
        let y = sol.end().unwrap();
        assert!((y[0] - (-5.0f64).exp()).abs() < 1e-10);
        let mid = sol.at(2.345).unwrap();
        assert!((mid[0] - (-2.345f64).exp()).abs() < 1e-9);
        assert!(sol.at(5.1).is_err());
    }

    #[test]
    fn zero_rhs_is_exact() {
        let y0 = DVector::from_vec(vec![0.3f64, -1.2]);
        let sol = integrate(
            |_, y: &DVector<f64>| Ok(y * 0.0),
            &y0,
            (0.0, 3.0),
            &OdeOptions::default(),
        )
        .unwrap();
        assert_eq!(sol.at(1.7).unwrap(), y0);
        assert_eq!(sol.end().unwrap(), y0);
    }

    #[test]
    fn rejects_bad_settings() {
        let y0 = DVector::from_vec(vec![1.0f64]);
        let opts = OdeOptions {
            rtol: 1e-15,
            ..Default::default()
        };
        assert!(integrate(|_, y: &DVector<f64>| Ok(y.clone()), &y0, (0.0, 1.0), &opts).is_err());
        assert!(integrate(
            |_, y: &DVector<f64>| Ok(y.clone()),
            &y0,
            (1.0, 1.0),
            &OdeOptions::default()
        )
        .is_err());
        let opts = OdeOptions {
            max_steps: 3,
            ..Default::default()
        };
        assert_eq!(
            integrate(|_, y: &DVector<f64>| Ok(y * 50.0), &y0, (0.0, 10.0), &opts).unwrap_err(),
            Error::MaxStepsExceeded(3)
        );
    }

    #[test]
    fn fixed_step_fifth_order() {
        let y0 = DVector::from_vec(vec![1.0f64]);
        let exact = (-2.0f64).exp();
        let e1 = (integrate_fixed(|_, y: &DVector<f64>| Ok(-y), &y0, (0.0, 2.0), 10).unwrap()[0]
            - exact)
            .abs();
        let e2 = (integrate_fixed(|_, y: &DVector<f64>| Ok(-y), &y0, (0.0, 2.0), 20).unwrap()[0]
            - exact)
            .abs();
        let order = (e1 / e2).log2();
        assert!((4.5..5.5).contains(&order), "order {order}");
    }
}
