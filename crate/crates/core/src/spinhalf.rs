//! Spin-½ in a magnetic field.
//!
//! The Pauli equation is the su(2) case with connection `A = μ B^i J_i`,
//! `J_i = −(i/2)σ_i`. A gauge path `G = exp(α⃗·J⃗)` with a fixed rotation axis
//! maps the field to
//!
//! ```text
//! B' = B cos α − (B × α̂) sin α + 2 α̂ (B·α̂) sin²(α/2) + s (1/μ) dα⃗/dt
//! ```
//!
//! where the sign `s` of the derivative term is a parameter. With
//! `G = exp(+α⃗·J⃗)` the matrix route gives `s = −1`; see
//! [`crate::verify::resolve_sign_convention`].

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gauge::{gauge_transform_state, Connection, Provenance, SolutionPair, StatePath};
use crate::lie::{sinc, su2_basis, GroupPath, Sign};
use crate::linalg::{c, CMatrix, CVector, C64};
use crate::timefn::{TimeFunction, VectorTimeFunction};

pub type FieldFn = Arc<dyn Fn(f64) -> Result<[f64; 3]> + Send + Sync>;

/// A magnetic field `B(t)` with coupling `μ = g_s μ_B / ħ`.
#[derive(Clone)]
pub struct FieldPath {
    field: FieldFn,
    mu: f64,
}

impl std::fmt::Debug for FieldPath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldPath").field("mu", &self.mu).finish()
    }
}

impl FieldPath {
    pub fn new(b: VectorTimeFunction, mu: f64) -> Result<Self> {
        if b.dim() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                got: b.dim(),
            });
        }
        b.validate()?;
        Self::from_fn(
            Arc::new(move |t| {
                let v = b.evaluate(t)?;
                Ok([v[0], v[1], v[2]])
            }),
            mu,
        )
    }

    pub fn constant(b: [f64; 3], mu: f64) -> Result<Self> {
        Self::new(VectorTimeFunction::constant(&b), mu)
    }

    pub fn from_fn(field: FieldFn, mu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::Numerical(format!(
                "coupling mu must be positive, got {mu}"
            )));
        }
        Ok(FieldPath { field, mu })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn at(&self, t: f64) -> Result<[f64; 3]> {
        (self.field)(t)
    }
}

/// `μ B^i J_i = (−μ/2) [[iB³, iB¹ + B²], [iB¹ − B², −iB³]]`
pub fn field_matrix(b: [f64; 3], mu: f64) -> CMatrix {
    let h = -0.5 * mu;
    CMatrix::from_row_slice(
        2,
        2,
        &[
            c(0.0, h * b[2]),
            c(h * b[1], h * b[0]),
            c(-h * b[1], h * b[0]),
            c(0.0, -h * b[2]),
        ],
    )
}

/// `A(t) = μ B^i(t) J_i`
pub fn field_to_connection(fp: &FieldPath) -> Connection {
    let fp = fp.clone();
    Connection::new(2, Arc::new(move |t| Ok(field_matrix(fp.at(t)?, fp.mu))))
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm3(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// Transformed field at one instant for rotation vector `alpha` and its
/// derivative `alpha_dot` (fixed axis).
pub fn b_prime_at(
    b: [f64; 3],
    alpha: [f64; 3],
    alpha_dot: [f64; 3],
    mu: f64,
    sign: Sign,
) -> [f64; 3] {
    let a = norm3(alpha);
    let (cs, s1) = (a.cos(), sinc(a));
    // 2 sin²(α/2) / α²
    let s2 = 0.5 * sinc(0.5 * a).powi(2);
    let bxa = cross(b, alpha);
    let proj = dot(b, alpha);
    let k = sign.value() / mu;
    std::array::from_fn(|i| b[i] * cs - bxa[i] * s1 + alpha[i] * proj * s2 + k * alpha_dot[i])
}

/// Closed-form transformed field for a gauge `exp(α⃗(t)·J⃗)` whose axis does
/// not rotate. Evaluation fails with [`Error::VaryingAxis`] where
/// `α⃗ × dα⃗/dt ≠ 0`.
pub fn b_prime_closed_form(
    fp: &FieldPath,
    alpha: &VectorTimeFunction,
    sign: Sign,
) -> Result<FieldPath> {
    if alpha.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: alpha.dim(),
        });
    }
    alpha.validate()?;
    let alpha = alpha.clone();
    let alpha_dot = alpha.derivative()?;
    let base = fp.clone();
    let mu = fp.mu;
    FieldPath::from_fn(
        Arc::new(move |t| {
            let a = alpha.evaluate(t)?;
            let da = alpha_dot.evaluate(t)?;
            let (a, da) = ([a[0], a[1], a[2]], [da[0], da[1], da[2]]);
            let twist = norm3(cross(a, da));
            if twist > 1e-9 * norm3(a) * norm3(da) && twist > 1e-14 {
                return Err(Error::VaryingAxis { t });
            }
            Ok(b_prime_at(base.at(t)?, a, da, mu, sign))
        }),
        mu,
    )
}

/// Spin expectation values `n^i = ⟨ψ|σ^i|ψ⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector(pub [f64; 3]);

impl BlochVector {
    pub fn norm(&self) -> f64 {
        norm3(self.0)
    }
}

pub fn bloch_vector(psi: &CVector) -> Result<BlochVector> {
    if psi.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: psi.len(),
        });
    }
    let z = psi[0].conj() * psi[1];
    Ok(BlochVector([
        2.0 * z.re,
        2.0 * z.im,
        psi[0].norm_sqr() - psi[1].norm_sqr(),
    ]))
}

/// Exact solution for the constant field `B₀ k̂`, where `A = μB₀J₃`:
/// `ψ(t) = (e^{+iμB₀t/2} ψ₁₀, e^{−iμB₀t/2} ψ₂₀)`.
pub fn constant_field_seed(
    b0: f64,
    psi10: C64,
    psi20: C64,
    mu: f64,
    interval: (f64, f64),
) -> Result<SolutionPair> {
    let field = FieldPath::constant([0.0, 0.0, b0], mu)?;
    let w = 0.5 * mu * b0;
    let state = StatePath::new(
        2,
        interval,
        Arc::new(move |t| {
            let up = c(0.0, w * t).exp() * psi10;
            let down = c(0.0, -w * t).exp() * psi20;
            Ok((
                CVector::from_vec(vec![up, down]),
                CVector::from_vec(vec![c(0.0, w) * up, c(0.0, -w) * down]),
            ))
        }),
    )?;
    SolutionPair::new(
        field_to_connection(&field),
        state,
        Provenance::Seed(format!("constant field B0 = {b0} along z")),
    )
}

/// Parameters of the constant-to-rotating field construction: the seed
/// field `B₀ k̂` gauged by `α⃗ = ωt î`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatingExample {
    pub b0: f64,
    pub omega: f64,
    pub psi10: C64,
    pub psi20: C64,
    pub mu: f64,
    /// Sign of the `(1/μ) dα⃗/dt` term in the transformed field.
    pub sign: Sign,
    pub interval: (f64, f64),
}

impl RotatingExample {
    /// `(B₀, ω, μ) = (1, 0.3, 1)`, `ψ₀ = (1, 0)` on `[0, 20/ω]`.
    pub fn reference(sign: Sign) -> Self {
        RotatingExample {
            b0: 1.0,
            omega: 0.3,
            psi10: c(1.0, 0.0),
            psi20: c(0.0, 0.0),
            mu: 1.0,
            sign,
            interval: (0.0, 20.0 / 0.3),
        }
    }

    pub fn alpha(&self) -> VectorTimeFunction {
        VectorTimeFunction::new(vec![
            TimeFunction::linear(self.omega, 0.0),
            TimeFunction::constant(0.0),
            TimeFunction::constant(0.0),
        ])
    }

    /// `G(t) = exp(ωt J₁) = cos(ωt/2) − iσ₁ sin(ωt/2)`
    pub fn gauge(&self) -> Result<GroupPath> {
        GroupPath::axis_angle(self.alpha(), Sign::Plus, Arc::new(su2_basis()))
    }

    pub fn seed(&self) -> Result<SolutionPair> {
        constant_field_seed(self.b0, self.psi10, self.psi20, self.mu, self.interval)
    }

    pub fn seed_field(&self) -> Result<FieldPath> {
        FieldPath::constant([0.0, 0.0, self.b0], self.mu)
    }

    /// `B'(t) = B₀[cos(ωt) k̂ − sin(ωt) ĵ] + sign (ω/μ) î`
    pub fn transformed_field(&self) -> Result<FieldPath> {
        b_prime_closed_form(&self.seed_field()?, &self.alpha(), self.sign)
    }
}

/// Builds the seed pair, rotates it about the x axis at rate `ω`, and
/// pairs the rotated state with the closed-form field for `params.sign`.
pub fn example_constant_to_rotating(params: &RotatingExample) -> Result<SolutionPair> {
    let seed = params.seed()?;
    let g = params.gauge()?;
    let state = gauge_transform_state(&seed.state, &g)?;
    let connection = field_to_connection(&params.transformed_field()?);
    SolutionPair::new(
        connection,
        state,
        Provenance::GaugeTransformed {
            parent: Box::new(seed.provenance),
            gauge: g,
        },
    )
}
