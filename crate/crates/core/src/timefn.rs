//! Real scalar functions of time.
//!
//! A [`TimeFunction`] is a small expression tree over analytic primitives
//! (constants, polynomials, sinusoids) plus sums, products, scalings,
//! piecewise definitions and sampled data. Analytic variants differentiate
//! exactly; integrals use closed forms where available and adaptive
//! Gauss-Kronrod quadrature otherwise.

use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Default absolute tolerance for [`TimeFunction::antiderivative`].
pub const DEFAULT_QUAD_TOL: f64 = 1e-12;

/// Real-valued function of time.
///
/// Serialized as a tagged node, e.g. `{ kind = "sinusoid", amplitude = 1.0, omega = 2.0, phase = 0.0 }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TimeFunction {
    Constant {
        value: f64,
    },
    /// Coefficients in ascending powers of `t`.
    Polynomial {
        coeffs: Vec<f64>,
    },
    /// `amplitude * sin(omega * t + phase)`.
    Sinusoid {
        amplitude: f64,
        omega: f64,
        phase: f64,
    },
    Sum {
        terms: Vec<TimeFunction>,
    },
    Product {
        left: Box<TimeFunction>,
        right: Box<TimeFunction>,
    },
    Scaled {
        factor: f64,
        inner: Box<TimeFunction>,
    },
    /// `pieces[i]` applies on `[breakpoints[i-1], breakpoints[i])`; the first
    /// and last pieces extend to infinity.
    Piecewise {
        breakpoints: Vec<f64>,
        pieces: Vec<TimeFunction>,
    },
    Sampled(SampledCurve),
}

impl TimeFunction {
    pub fn constant(value: f64) -> Self {
        TimeFunction::Constant { value }
    }

    pub fn polynomial(coeffs: impl Into<Vec<f64>>) -> Self {
        TimeFunction::Polynomial {
            coeffs: coeffs.into(),
        }
    }

    /// `slope * t + offset`
    pub fn linear(slope: f64, offset: f64) -> Self {
        Self::polynomial(vec![offset, slope])
    }

    pub fn sinusoid(amplitude: f64, omega: f64, phase: f64) -> Self {
        TimeFunction::Sinusoid {
            amplitude,
            omega,
            phase,
        }
    }

    pub fn sum(terms: impl Into<Vec<TimeFunction>>) -> Self {
        TimeFunction::Sum {
            terms: terms.into(),
        }
    }

    pub fn product(left: TimeFunction, right: TimeFunction) -> Self {
        TimeFunction::Product {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn scaled(factor: f64, inner: TimeFunction) -> Self {
        TimeFunction::Scaled {
            factor,
            inner: Box::new(inner),
        }
    }

    pub fn piecewise(breakpoints: Vec<f64>, pieces: Vec<TimeFunction>) -> Result<Self> {
        let f = TimeFunction::Piecewise {
            breakpoints,
            pieces,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn sampled(grid: Vec<f64>, values: Vec<f64>, order: u8) -> Result<Self> {
        Ok(TimeFunction::Sampled(SampledCurve::new(
            grid, values, order,
        )?))
    }

    /// Checks structural invariants recursively.
    pub fn validate(&self) -> Result<()> {
        match self {
            TimeFunction::Constant { value } => finite(*value, "constant value"),
            TimeFunction::Polynomial { coeffs } => coeffs
                .iter()
                .try_for_each(|c| finite(*c, "polynomial coefficient")),
            TimeFunction::Sinusoid {
                amplitude,
                omega,
                phase,
            } => {
                finite(*amplitude, "sinusoid amplitude")?;
                finite(*omega, "sinusoid omega")?;
                finite(*phase, "sinusoid phase")
            }
            TimeFunction::Sum { terms } => terms.iter().try_for_each(|f| f.validate()),
            TimeFunction::Product { left, right } => {
                left.validate()?;
                right.validate()
            }
            TimeFunction::Scaled { factor, inner } => {
                finite(*factor, "scale factor")?;
                inner.validate()
            }
            TimeFunction::Piecewise {
                breakpoints,
                pieces,
            } => {
                if pieces.len() != breakpoints.len() + 1 {
                    return Err(Error::InvalidFunction(format!(
                        "piecewise needs {} pieces for {} breakpoints, got {}",
                        breakpoints.len() + 1,
                        breakpoints.len(),
                        pieces.len()
                    )));
                }
                breakpoints
                    .iter()
                    .try_for_each(|b| finite(*b, "breakpoint"))?;
                if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::InvalidFunction(
                        "piecewise breakpoints must be strictly increasing".into(),
                    ));
                }
                pieces.iter().try_for_each(|f| f.validate())
            }
            TimeFunction::Sampled(curve) => curve.validate(),
        }
    }

    /// Interval on which the function is defined.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            TimeFunction::Sampled(c) => (c.grid[0], c.grid[c.grid.len() - 1]),
            TimeFunction::Sum { terms } => terms
                .iter()
                .map(TimeFunction::domain)
                .fold((f64::NEG_INFINITY, f64::INFINITY), intersect),
            TimeFunction::Product { left, right } => intersect(left.domain(), right.domain()),
            TimeFunction::Scaled { inner, .. } => inner.domain(),
            TimeFunction::Piecewise { pieces, .. } => pieces
                .iter()
                .map(TimeFunction::domain)
                .fold((f64::NEG_INFINITY, f64::INFINITY), intersect),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    pub fn evaluate(&self, t: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        if !(t >= lo && t <= hi) {
            return Err(Error::OutOfDomain { t, lo, hi });
        }
        Ok(self.eval_unchecked(t))
    }

    fn eval_unchecked(&self, t: f64) -> f64 {
        match self {
            TimeFunction::Constant { value } => *value,
            TimeFunction::Polynomial { coeffs } => {
                coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
            }
            TimeFunction::Sinusoid {
                amplitude,
                omega,
                phase,
            } => amplitude * (omega * t + phase).sin(),
            TimeFunction::Sum { terms } => {
                let mut it = terms.iter();
                match it.next() {
                    None => 0.0,
                    Some(first) => {
                        it.fold(first.eval_unchecked(t), |acc, f| acc + f.eval_unchecked(t))
                    }
                }
            }
            TimeFunction::Product { left, right } => {
                left.eval_unchecked(t) * right.eval_unchecked(t)
            }
            TimeFunction::Scaled { factor, inner } => factor * inner.eval_unchecked(t),
            TimeFunction::Piecewise {
                breakpoints,
                pieces,
            } => pieces[piece_index(breakpoints, t)].eval_unchecked(t),
            TimeFunction::Sampled(c) => c.eval(t),
        }
    }

    /// Exact derivative as a new function.
    pub fn derivative(&self) -> Result<TimeFunction> {
        Ok(match self {
            TimeFunction::Constant { .. } => TimeFunction::constant(0.0),
            TimeFunction::Polynomial { coeffs } => TimeFunction::polynomial(
                coeffs
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, c)| k as f64 * c)
                    .collect::<Vec<_>>(),
            ),
            TimeFunction::Sinusoid {
                amplitude,
                omega,
                phase,
            } => TimeFunction::sinusoid(amplitude * omega, *omega, phase + FRAC_PI_2),
            TimeFunction::Sum { terms } => TimeFunction::sum(
                terms
                    .iter()
                    .map(|f| f.derivative())
                    .collect::<Result<Vec<_>>>()?,
            ),
            TimeFunction::Product { left, right } => TimeFunction::sum(vec![
                TimeFunction::product(left.derivative()?, (**right).clone()),
                TimeFunction::product((**left).clone(), right.derivative()?),
            ]),
            TimeFunction::Scaled { factor, inner } => {
                TimeFunction::scaled(*factor, inner.derivative()?)
            }
            TimeFunction::Piecewise {
                breakpoints,
                pieces,
            } => TimeFunction::Piecewise {
                breakpoints: breakpoints.clone(),
                pieces: pieces
                    .iter()
                    .map(|f| f.derivative())
                    .collect::<Result<Vec<_>>>()?,
            },
            TimeFunction::Sampled(c) => TimeFunction::Sampled(c.derivative()?),
        })
    }

    /// Closed-form primitive vanishing at an unspecified point, when one exists
    /// in the same function family.
    pub fn primitive(&self) -> Option<TimeFunction> {
        match self {
            TimeFunction::Constant { value } => Some(TimeFunction::polynomial(vec![0.0, *value])),
            TimeFunction::Polynomial { coeffs } => {
                let mut out = Vec::with_capacity(coeffs.len() + 1);
                out.push(0.0);
                out.extend(coeffs.iter().enumerate().map(|(k, c)| c / (k as f64 + 1.0)));
                Some(TimeFunction::polynomial(out))
            }
            TimeFunction::Sinusoid {
                amplitude,
                omega,
                phase,
            } => {
                if *omega == 0.0 {
                    Some(TimeFunction::polynomial(vec![0.0, amplitude * phase.sin()]))
                } else {
                    Some(TimeFunction::sinusoid(
                        -amplitude / omega,
                        *omega,
                        phase + FRAC_PI_2,
                    ))
                }
            }
            TimeFunction::Sum { terms } => terms
                .iter()
                .map(TimeFunction::primitive)
                .collect::<Option<Vec<_>>>()
                .map(TimeFunction::sum),
            TimeFunction::Scaled { factor, inner } => {
                inner.primitive().map(|p| TimeFunction::scaled(*factor, p))
            }
            _ => None,
        }
    }

    /// `∫_{t0}^{t1} f dt` with the default quadrature tolerance.
    pub fn antiderivative(&self, t0: f64, t1: f64) -> Result<f64> {
        self.antiderivative_with_tol(t0, t1, DEFAULT_QUAD_TOL)
    }

    pub fn antiderivative_with_tol(&self, t0: f64, t1: f64, tol: f64) -> Result<f64> {
        self.evaluate(t0)?;
        self.evaluate(t1)?;
        if t0 == t1 {
            return Ok(0.0);
        }
        if t1 < t0 {
            return Ok(-self.antiderivative_with_tol(t1, t0, tol)?);
        }
        if let Some(p) = self.primitive() {
            return Ok(p.eval_unchecked(t1) - p.eval_unchecked(t0));
        }
        match self {
            TimeFunction::Sum { terms } => {
                let mut acc = 0.0;
                for f in terms {
                    acc += f.antiderivative_with_tol(t0, t1, tol / terms.len() as f64)?;
                }
                Ok(acc)
            }
            TimeFunction::Scaled { factor, inner } => {
                let scale = factor.abs().max(f64::MIN_POSITIVE);
                Ok(factor * inner.antiderivative_with_tol(t0, t1, tol / scale.max(1.0))?)
            }
            TimeFunction::Piecewise {
                breakpoints,
                pieces,
            } => {
                let mut cuts = vec![t0];
                cuts.extend(breakpoints.iter().copied().filter(|b| *b > t0 && *b < t1));
                cuts.push(t1);
                let share = tol / (cuts.len() - 1) as f64;
                let mut acc = 0.0;
                for w in cuts.windows(2) {
                    let mid = 0.5 * (w[0] + w[1]);
                    acc += pieces[piece_index(breakpoints, mid)]
                        .antiderivative_with_tol(w[0], w[1], share)?;
                }
                Ok(acc)
            }
            TimeFunction::Sampled(c) => Ok(c.integral(t0, t1)),
            _ => {
                let mut cuts = vec![t0];
                let mut kinks = Vec::new();
                self.collect_kinks(&mut kinks);
                kinks.sort_by(f64::total_cmp);
                kinks.dedup();
                cuts.extend(kinks.into_iter().filter(|b| *b > t0 && *b < t1));
                cuts.push(t1);
                adaptive_gauss_kronrod(|t| self.eval_unchecked(t), &cuts, tol)
            }
        }
    }

    fn collect_kinks(&self, out: &mut Vec<f64>) {
        match self {
            TimeFunction::Sum { terms } => terms.iter().for_each(|f| f.collect_kinks(out)),
            TimeFunction::Product { left, right } => {
                left.collect_kinks(out);
                right.collect_kinks(out);
            }
            TimeFunction::Scaled { inner, .. } => inner.collect_kinks(out),
            TimeFunction::Piecewise {
                breakpoints,
                pieces,
            } => {
                out.extend_from_slice(breakpoints);
                pieces.iter().for_each(|f| f.collect_kinks(out));
            }
            TimeFunction::Sampled(c) => out.extend_from_slice(&c.grid),
            _ => {}
        }
    }
}

fn finite(x: f64, what: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidFunction(format!("{what} is not finite")))
    }
}

fn intersect(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0.max(b.0), a.1.min(b.1))
}

fn piece_index(breakpoints: &[f64], t: f64) -> usize {
    breakpoints.partition_point(|b| *b <= t)
}

/// Interpolated samples on a strictly increasing grid.
///
/// `order` 1 is piecewise linear, 3 is a natural cubic spline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SampledSpec", into = "SampledSpec")]
pub struct SampledCurve {
    grid: Vec<f64>,
    values: Vec<f64>,
    order: u8,
    derivative: u8,
    // per interval: a + b dx + c dx^2 + d dx^3
    segments: Vec<[f64; 4]>,
}

#[derive(Serialize, Deserialize)]
struct SampledSpec {
    grid: Vec<f64>,
    values: Vec<f64>,
    #[serde(default = "default_order")]
    order: u8,
    #[serde(default, skip_serializing_if = "is_zero")]
    derivative: u8,
}

fn default_order() -> u8 {
    3
}

fn is_zero(x: &u8) -> bool {
    *x == 0
}

impl TryFrom<SampledSpec> for SampledCurve {
    type Error = Error;

    fn try_from(spec: SampledSpec) -> Result<Self> {
        let mut curve = SampledCurve::new(spec.grid, spec.values, spec.order)?;
        if spec.derivative > curve.order {
            return Err(Error::InvalidFunction(format!(
                "derivative level {} exceeds interpolation order {}",
                spec.derivative, curve.order
            )));
        }
        curve.derivative = spec.derivative;
        Ok(curve)
    }
}

impl From<SampledCurve> for SampledSpec {
    fn from(c: SampledCurve) -> Self {
        SampledSpec {
            grid: c.grid,
            values: c.values,
            order: c.order,
            derivative: c.derivative,
        }
    }
}

impl SampledCurve {
    pub fn new(grid: Vec<f64>, values: Vec<f64>, order: u8) -> Result<Self> {
        let mut curve = SampledCurve {
            grid,
            values,
            order,
            derivative: 0,
            segments: Vec::new(),
        };
        curve.validate_inputs()?;
        curve.segments = match order {
            1 => linear_segments(&curve.grid, &curve.values),
            _ => natural_cubic_segments(&curve.grid, &curve.values),
        };
        Ok(curve)
    }

    fn validate_inputs(&self) -> Result<()> {
        if self.grid.len() < 2 {
            return Err(Error::InvalidFunction(
                "sampled grid needs at least 2 points".into(),
            ));
        }
        if self.grid.len() != self.values.len() {
            return Err(Error::InvalidFunction(format!(
                "sampled grid has {} points but {} values",
                self.grid.len(),
                self.values.len()
            )));
        }
        if self.grid.iter().chain(&self.values).any(|x| !x.is_finite()) {
            return Err(Error::InvalidFunction("sampled data must be finite".into()));
        }
        if self.grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidFunction(
                "sampled grid must be strictly increasing".into(),
            ));
        }
        if self.order != 1 && self.order != 3 {
            return Err(Error::InvalidFunction(format!(
                "interpolation order {} unsupported (use 1 or 3)",
                self.order
            )));
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        self.validate_inputs()
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    fn segment(&self, t: f64) -> usize {
        let n = self.grid.len();
        self.grid.partition_point(|g| *g <= t).clamp(1, n - 1) - 1
    }

    fn eval(&self, t: f64) -> f64 {
        let i = self.segment(t);
        let dx = t - self.grid[i];
        let [a, b, c, d] = self.segments[i];
        match self.derivative {
            0 => {
                if dx == 0.0 {
                    self.values[i]
                } else if t == self.grid[i + 1] {
                    self.values[i + 1]
                } else {
                    a + dx * (b + dx * (c + dx * d))
                }
            }
            1 => b + dx * (2.0 * c + dx * 3.0 * d),
            2 => 2.0 * c + 6.0 * d * dx,
            3 => 6.0 * d,
            _ => 0.0,
        }
    }

    fn derivative(&self) -> Result<SampledCurve> {
        if self.order < 2 {
            return Err(Error::UnsupportedDerivative(format!(
                "sampled curve with interpolation order {}",
                self.order
            )));
        }
        let mut d = self.clone();
        d.derivative += 1;
        Ok(d)
    }

    fn integral(&self, t0: f64, t1: f64) -> f64 {
        if self.derivative > 0 {
            let mut prim = self.clone();
            prim.derivative -= 1;
            return prim.eval(t1) - prim.eval(t0);
        }
        let poly_int = |i: usize, x0: f64, x1: f64| {
            let [a, b, c, d] = self.segments[i];
            let p = |x: f64| x * (a + x * (b / 2.0 + x * (c / 3.0 + x * d / 4.0)));
            p(x1 - self.grid[i]) - p(x0 - self.grid[i])
        };
        let (i0, i1) = (self.segment(t0), self.segment(t1));
        if i0 == i1 {
            return poly_int(i0, t0, t1);
        }
        let mut acc = poly_int(i0, t0, self.grid[i0 + 1]);
        for i in i0 + 1..i1 {
            acc += poly_int(i, self.grid[i], self.grid[i + 1]);
        }
        acc + poly_int(i1, self.grid[i1], t1)
    }
}

fn linear_segments(x: &[f64], y: &[f64]) -> Vec<[f64; 4]> {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| [ys[0], (ys[1] - ys[0]) / (xs[1] - xs[0]), 0.0, 0.0])
        .collect()
}

fn natural_cubic_segments(x: &[f64], y: &[f64]) -> Vec<[f64; 4]> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    // second derivatives m, natural boundary m0 = m_{n-1} = 0; Thomas algorithm
    let mut m = vec![0.0; n];
    if n > 2 {
        let k = n - 2;
        let mut diag = vec![0.0; k];
        let mut rhs = vec![0.0; k];
        for i in 0..k {
            diag[i] = 2.0 * (h[i] + h[i + 1]);
            rhs[i] = 6.0 * ((y[i + 2] - y[i + 1]) / h[i + 1] - (y[i + 1] - y[i]) / h[i]);
        }
        for i in 1..k {
            let w = h[i] / diag[i - 1];
            diag[i] -= w * h[i];
            rhs[i] -= w * rhs[i - 1];
        }
        m[k] = rhs[k - 1] / diag[k - 1];
        for i in (0..k - 1).rev() {
            m[i + 1] = (rhs[i] - h[i + 1] * m[i + 2]) / diag[i];
        }
    }
    (0..n - 1)
        .map(|i| {
            let b = (y[i + 1] - y[i]) / h[i] - h[i] * (2.0 * m[i] + m[i + 1]) / 6.0;
            [y[i], b, m[i] / 2.0, (m[i + 1] - m[i]) / (6.0 * h[i])]
        })
        .collect()
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Kronrod-15 estimate and |K15 - G7| error on one interval.
fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, x) in XGK.iter().take(7).enumerate() {
        let s = f(c - h * x) + f(c + h * x);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

const MAX_SUBINTERVALS: usize = 4000;

/// Globally adaptive Gauss-Kronrod quadrature over consecutive `cuts`.
pub(crate) fn adaptive_gauss_kronrod(
    f: impl Fn(f64) -> f64,
    cuts: &[f64],
    tol: f64,
) -> Result<f64> {
    let mut parts: Vec<(f64, f64, f64, f64)> = cuts
        .windows(2)
        .map(|w| {
            let (v, e) = gk15(&f, w[0], w[1]);
            (w[0], w[1], v, e)
        })
        .collect();
    loop {
        let total: f64 = parts.iter().map(|p| p.2).sum();
        let err: f64 = parts.iter().map(|p| p.3).sum();
        if err <= tol.max(4.0 * f64::EPSILON * total.abs()) {
            return Ok(total);
        }
        if parts.len() >= MAX_SUBINTERVALS {
            return Err(Error::ToleranceNotMet {
                tolerance: tol,
                estimate: total,
                error: err,
            });
        }
        let (worst, _) = parts
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .3.total_cmp(&b.1 .3))
            .expect("at least one subinterval");
        let (a, b, _, _) = parts.swap_remove(worst);
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            return Err(Error::ToleranceNotMet {
                tolerance: tol,
                estimate: total,
                error: err,
            });
        }
        let (v1, e1) = gk15(&f, a, m);
        let (v2, e2) = gk15(&f, m, b);
        parts.push((a, m, v1, e1));
        parts.push((m, b, v2, e2));
    }
}

/// Ordered list of time functions sharing a domain, e.g. a field `B(t)` or
/// rotation vector `α(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VectorTimeFunction {
    components: Vec<TimeFunction>,
}

impl VectorTimeFunction {
    pub fn new(components: Vec<TimeFunction>) -> Self {
        VectorTimeFunction { components }
    }

    pub fn constant(values: &[f64]) -> Self {
        Self::new(values.iter().map(|v| TimeFunction::constant(*v)).collect())
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[TimeFunction] {
        &self.components
    }

    pub fn validate(&self) -> Result<()> {
        self.components.iter().try_for_each(TimeFunction::validate)
    }

    pub fn domain(&self) -> (f64, f64) {
        self.components
            .iter()
            .map(TimeFunction::domain)
            .fold((f64::NEG_INFINITY, f64::INFINITY), intersect)
    }

    pub fn evaluate(&self, t: f64) -> Result<Vec<f64>> {
        self.components.iter().map(|f| f.evaluate(t)).collect()
    }

    pub fn derivative(&self) -> Result<VectorTimeFunction> {
        Ok(VectorTimeFunction::new(
            self.components
                .iter()
                .map(TimeFunction::derivative)
                .collect::<Result<Vec<_>>>()?,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_and_sinusoid_values() {
        assert_eq!(TimeFunction::constant(3.0).evaluate(7.0).unwrap(), 3.0);
        assert_eq!(
            TimeFunction::sinusoid(1.0, 2.5, 0.0).evaluate(0.0).unwrap(),
            0.0
        );
    }

    #[test]
    fn power_rule() {
        let d = TimeFunction::polynomial(vec![0.0, 0.0, 1.0])
            .derivative()
            .unwrap();
        assert_eq!(d, TimeFunction::polynomial(vec![0.0, 2.0]));
        assert_eq!(
            TimeFunction::constant(4.0).derivative().unwrap(),
            TimeFunction::constant(0.0)
        );
    }

    #[test]
    fn closed_form_integrals() {
        assert_eq!(
            TimeFunction::constant(2.0)
                .antiderivative(0.0, 3.0)
                .unwrap(),
            6.0
        );
        assert_eq!(
            TimeFunction::linear(1.0, 0.0)
                .antiderivative(0.0, 1.0)
                .unwrap(),
            0.5
        );
        let reversed = TimeFunction::linear(1.0, 0.0)
            .antiderivative(1.0, 0.0)
            .unwrap();
        assert_eq!(reversed, -0.5);
    }

    #[test]
    fn sampled_out_of_domain() {
        let f = TimeFunction::sampled(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 0.0], 3).unwrap();
        assert!(matches!(f.evaluate(2.5), Err(Error::OutOfDomain { .. })));
        assert!(matches!(
            TimeFunction::sum(vec![f, TimeFunction::constant(1.0)]).evaluate(-0.1),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn linear_sampled_has_no_derivative() {
        let f = TimeFunction::sampled(vec![0.0, 1.0], vec![0.0, 1.0], 1).unwrap();
        assert!(matches!(
            f.derivative(),
            Err(Error::UnsupportedDerivative(_))
        ));
    }

    #[test]
    fn invalid_sampled_inputs() {
        assert!(TimeFunction::sampled(vec![0.0], vec![1.0], 3).is_err());
        assert!(TimeFunction::sampled(vec![0.0, 0.0], vec![1.0, 2.0], 3).is_err());
        assert!(TimeFunction::sampled(vec![0.0, 1.0], vec![1.0], 3).is_err());
        assert!(TimeFunction::sampled(vec![0.0, 1.0], vec![1.0, 2.0], 2).is_err());
    }

    #[test]
    fn piecewise_selects_piece_and_validates() {
        let f = TimeFunction::piecewise(
            vec![1.0],
            vec![TimeFunction::constant(1.0), TimeFunction::linear(1.0, 0.0)],
        )
        .unwrap();
        assert_eq!(f.evaluate(0.5).unwrap(), 1.0);
        assert_eq!(f.evaluate(3.0).unwrap(), 3.0);
        // 1 * 1 + ∫_1^2 t dt = 1 + 1.5
        assert!((f.antiderivative(0.0, 2.0).unwrap() - 2.5).abs() < 1e-14);
        assert!(
            TimeFunction::piecewise(vec![1.0, 1.0], vec![TimeFunction::constant(0.0); 3]).is_err()
        );
        assert!(TimeFunction::piecewise(vec![1.0], vec![TimeFunction::constant(0.0)]).is_err());
    }

    #[test]
    fn product_uses_quadrature() {
        let s = TimeFunction::sinusoid(1.0, 1.0, 0.0);
        let p = TimeFunction::product(s.clone(), s);
        assert!(p.primitive().is_none());
        let v = p.antiderivative(0.0, PI).unwrap();
        assert!((v - PI / 2.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn quadrature_reports_failure() {
        // a discontinuous sampled-free integrand the rule cannot resolve to 1e-30
        let f = TimeFunction::product(
            TimeFunction::sinusoid(1.0, 400.0, 0.3),
            TimeFunction::sinusoid(1.0, 1.0, 0.0),
        );
        let r = f.antiderivative_with_tol(0.0, 1.0, 0.0);
        match r {
            Err(Error::ToleranceNotMet { .. }) | Ok(_) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn serde_tagged_nodes() {
        let f: TimeFunction =
            toml::from_str("kind = \"sinusoid\"\namplitude = 2.0\nomega = 3.0\nphase = 0.5\n")
                .unwrap();
        assert_eq!(f, TimeFunction::sinusoid(2.0, 3.0, 0.5));
        let json = serde_json::to_string(
            &TimeFunction::sampled(vec![0.0, 1.0], vec![1.0, 2.0], 3).unwrap(),
        )
        .unwrap();
        assert!(json.contains("\"kind\":\"sampled\""));
        let back: TimeFunction = serde_json::from_str(&json).unwrap();
        assert_eq!(back.evaluate(0.5).unwrap(), 1.5);
    }

    #[test]
    fn sampled_cubic_derivatives_are_consistent() {
        let grid: Vec<f64> = (0..=50).map(|k| k as f64 * 0.1).collect();
        let values: Vec<f64> = grid.iter().map(|t| t.sin()).collect();
        let f = TimeFunction::sampled(grid, values, 3).unwrap();
        let d = f.derivative().unwrap();
        // ∫ f' = f(t1) - f(t0) for the interpolant
        let lhs = d.antiderivative(0.3, 4.1).unwrap();
        let rhs = f.evaluate(4.1).unwrap() - f.evaluate(0.3).unwrap();
        assert!((lhs - rhs).abs() < 1e-14);
        assert!((d.evaluate(2.0).unwrap() - 2.0f64.cos()).abs() < 1e-3);
    }
}
