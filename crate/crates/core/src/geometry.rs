//! Closed-form pointwise geometry from the 2-jets of `f`, `g` and `ℓ`.
//!
//! Conventions:
//! - `z = u1 + i u2`; complex numbers embed in the first two coordinates of R³.
//! - `⟨a, b⟩ = Re a Re b + Im a Im b` is the only complex inner product used.
//! - `N,ᵢ = Σⱼ Wᵢⱼ X,ⱼ` with `W = V⁻¹`, so `K = 1/det V` and
//!   `H = -tr V / (2 det V)`; then `H/K = -tr V / 2`.
//! - The profile jet is always taken at `μ = Re f(z)`.

use nalgebra::{Matrix2, Vector3};
use num_complex::Complex64;

use crate::expr::Jet2;

/// Default threshold for `|g'|` and the scale-aware `|det V|` test.
pub const REGULARITY_EPS: f64 = 1e-10;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("g' vanishes (|g'| = {0:e})")]
    SingularGaussMap(f64),
    #[error("profile is degenerate: ℓ'(μ) = 0 at μ = {mu}")]
    DegenerateProfile { mu: f64 },
    #[error("V is singular (det V = {det:e})")]
    SingularShape { det: f64 },
}

/// `⟨a, b⟩ = a₁b₁ + a₂b₂`.
#[inline]
pub fn inner(a: Complex64, b: Complex64) -> f64 {
    a.re * b.re + a.im * b.im
}

/// `(Re c, Im c, last)`.
#[inline]
pub fn embed(c: Complex64, last: f64) -> Vector3<f64> {
    Vector3::new(c.re, c.im, last)
}

/// The four symbols of the conformal metric that are not forced to zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Christoffel {
    /// Γ¹₁₁
    pub g1_11: f64,
    /// Γ²₂₂
    pub g2_22: f64,
    /// Γ²₁₁
    pub g2_11: f64,
    /// Γ¹₂₂
    pub g1_22: f64,
}

impl Christoffel {
    /// Γᵏᵢⱼ with 1-based indices, using Γ¹₁₂ = Γ²₂₂ and Γ²₁₂ = Γ¹₁₁.
    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        match (k, i.min(j), i.max(j)) {
            (1, 1, 1) => self.g1_11,
            (2, 2, 2) => self.g2_22,
            (2, 1, 1) => self.g2_11,
            (1, 2, 2) => self.g1_22,
            (1, 1, 2) => self.g2_22,
            (2, 1, 2) => self.g1_11,
            _ => panic!("Christoffel index out of range: ({k}, {i}, {j})"),
        }
    }
}

/// Gauss map and the third fundamental form it induces.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussFrame {
    pub normal: Vector3<f64>,
    /// `N,₁` and `N,₂`, differentiated through the jet of `g`.
    pub normal_du: [Vector3<f64>; 2],
    /// `L₁₁ = L₂₂ = 4|g'|²/T²`; `L₁₂ = 0`.
    pub l11: f64,
    /// `T = 1 + |g|²`.
    pub t: f64,
    pub christoffel: Christoffel,
}

pub fn gauss_map(g: &Jet2<Complex64>, eps: f64) -> Result<GaussFrame, GeometryError> {
    let dg = g.d1;
    let dg_sq = dg.norm_sqr();
    if dg_sq.sqrt() <= eps {
        return Err(GeometryError::SingularGaussMap(dg_sq.sqrt()));
    }
    let t = 1.0 + g.value.norm_sqr();
    let normal = embed(2.0 * g.value, 1.0 - g.value.norm_sqr()) / t;

    let normal_du = [dg, I * dg].map(|g_j| {
        let gg = inner(g.value, g_j);
        embed(t * g_j - 2.0 * g.value * gg, -2.0 * gg) * (2.0 / (t * t))
    });

    let a = (t * inner(dg, g.d2) - 2.0 * dg_sq * inner(g.value, dg)) / (t * dg_sq);
    let b = (t * inner(dg, I * g.d2) - 2.0 * dg_sq * inner(g.value, I * dg)) / (t * dg_sq);
    let christoffel = Christoffel { g1_11: a, g2_22: b, g2_11: -b, g1_22: -a };

    Ok(GaussFrame { normal, normal_du, l11: 4.0 * dg_sq / (t * t), t, christoffel })
}

/// `ξ = f'(g''/g' - (2/T) g' ḡ) - f''`.
pub fn xi(f: &Jet2<Complex64>, g: &Jet2<Complex64>, t: f64) -> Result<Complex64, GeometryError> {
    if g.d1.norm() <= 0.0 {
        return Err(GeometryError::SingularGaussMap(0.0));
    }
    Ok(f.d1 * (g.d2 / g.d1 - (2.0 / t) * g.d1 * g.value.conj()) - f.d2)
}

/// The matrix `V` (so `X,ᵢ = Σⱼ Vᵢⱼ N,ⱼ`) and its trace from the closed trace formula.
pub fn v_matrix(
    ell: &Jet2<f64>,
    f: &Jet2<Complex64>,
    g: &Jet2<Complex64>,
    eps: f64,
) -> Result<(Matrix2<f64>, f64), GeometryError> {
    let dg_sq = g.d1.norm_sqr();
    if dg_sq.sqrt() <= eps {
        return Err(GeometryError::SingularGaussMap(dg_sq.sqrt()));
    }
    let t = 1.0 + g.value.norm_sqr();
    let xi = xi(f, g, t)?;
    let s = t * t / (4.0 * dg_sq);
    let df = f.d1;

    let v11 = s * (ell.d2 * inner(ONE, df).powi(2) - ell.d1 * inner(ONE, xi)) + ell.value;
    let v12 = s * (ell.d2 * inner(ONE, I * df * df / 2.0) + ell.d1 * inner(I, xi));
    let v22 = s * (ell.d2 * inner(ONE, I * df).powi(2) + ell.d1 * inner(ONE, xi)) + ell.value;
    let trace = ell.d2 * df.norm_sqr() * s + 2.0 * ell.value;

    Ok((Matrix2::new(v11, v12, v12, v22), trace))
}

/// Support function, distance function and curvature data at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarFields {
    pub mu: f64,
    /// `Ψ = h = ℓ(μ)`.
    pub psi: f64,
    /// `(h,₁, h,₂)`.
    pub h_du: [f64; 2],
    /// `|∇_L h|² = (h,₁² + h,₂²)/L₁₁`.
    pub grad_h_sq: f64,
    /// `Λ = |∇_L h|² + Ψ²`.
    pub lambda: f64,
    /// `C(μ) = ℓℓ''/ℓ'²`; `None` where `ℓ'(μ) = 0`.
    pub c: Option<f64>,
    /// `-tr V / 2`.
    pub h_over_k: f64,
    pub det_v: f64,
    /// `H`, `K`; `None` where `V` is not regular.
    pub mean_curvature: Option<f64>,
    pub gauss_curvature: Option<f64>,
}

impl ScalarFields {
    pub fn require_c(&self) -> Result<f64, GeometryError> {
        self.c.ok_or(GeometryError::DegenerateProfile { mu: self.mu })
    }

    pub fn require_curvatures(&self) -> Result<(f64, f64), GeometryError> {
        match (self.mean_curvature, self.gauss_curvature) {
            (Some(h), Some(k)) => Ok((h, k)),
            _ => Err(GeometryError::SingularShape { det: self.det_v }),
        }
    }
}

/// True when `|det V| > eps (1 + (tr V)²)`.
pub fn shape_is_regular(v: &Matrix2<f64>, eps: f64) -> bool {
    v.determinant().abs() > eps * (1.0 + v.trace().powi(2))
}

pub fn scalar_fields(
    ell: &Jet2<f64>,
    f: &Jet2<Complex64>,
    g: &Jet2<Complex64>,
    v: &Matrix2<f64>,
    trace_v: f64,
    eps: f64,
) -> Result<ScalarFields, GeometryError> {
    let dg_sq = g.d1.norm_sqr();
    if dg_sq.sqrt() <= eps {
        return Err(GeometryError::SingularGaussMap(dg_sq.sqrt()));
    }
    let t = 1.0 + g.value.norm_sqr();
    let l11 = 4.0 * dg_sq / (t * t);
    let h_du = [ell.d1 * inner(ONE, f.d1), ell.d1 * inner(ONE, I * f.d1)];
    let grad_h_sq = (h_du[0] * h_du[0] + h_du[1] * h_du[1]) / l11;
    let psi = ell.value;
    let c = (ell.d1 != 0.0).then(|| ell.value * ell.d2 / (ell.d1 * ell.d1));
    let det_v = v.determinant();
    let (mean_curvature, gauss_curvature) = if shape_is_regular(v, eps) {
        (Some(-trace_v / (2.0 * det_v)), Some(1.0 / det_v))
    } else {
        (None, None)
    };
    Ok(ScalarFields {
        mu: f.value.re,
        psi,
        h_du,
        grad_h_sq,
        lambda: grad_h_sq + psi * psi,
        c,
        h_over_k: -trace_v / 2.0,
        det_v,
        mean_curvature,
        gauss_curvature,
    })
}

/// A symmetric 2×2 form `[[m11, m12], [m12, m22]]`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SymForm {
    pub m11: f64,
    pub m12: f64,
    pub m22: f64,
}

impl SymForm {
    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m12
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.m11, self.m12, self.m22]
    }
}

/// `I = (E, F, G)` and `II = (e, f, g)` with `II = ⟨X,ᵢ, N,ⱼ⟩`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct FundamentalForms {
    pub first: SymForm,
    pub second: SymForm,
}

pub fn fundamental_forms(v: &Matrix2<f64>, l11: f64) -> FundamentalForms {
    let (v11, v12, v22) = (v[(0, 0)], v[(0, 1)], v[(1, 1)]);
    FundamentalForms {
        first: SymForm {
            m11: (v11 * v11 + v12 * v12) * l11,
            m12: (v11 + v22) * v12 * l11,
            m22: (v22 * v22 + v12 * v12) * l11,
        },
        second: SymForm { m11: v11 * l11, m12: v12 * l11, m22: v22 * l11 },
    }
}

/// Everything derived from `V` at one parameter value.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeData {
    pub xi: Complex64,
    pub v: Matrix2<f64>,
    pub trace_v: f64,
    /// Weingarten matrix `W = V⁻¹`, when `V` is regular.
    pub w: Option<Matrix2<f64>>,
    pub scalars: ScalarFields,
    pub forms: FundamentalForms,
}

impl ShapeData {
    pub fn compute(
        ell: &Jet2<f64>,
        f: &Jet2<Complex64>,
        g: &Jet2<Complex64>,
        frame: &GaussFrame,
        eps: f64,
    ) -> Result<ShapeData, GeometryError> {
        let xi = xi(f, g, frame.t)?;
        let (v, trace_v) = v_matrix(ell, f, g, eps)?;
        let scalars = scalar_fields(ell, f, g, &v, trace_v, eps)?;
        let w = if shape_is_regular(&v, eps) { v.try_inverse() } else { None };
        let forms = fundamental_forms(&v, frame.l11);
        Ok(ShapeData { xi, v, trace_v, w, scalars, forms })
    }

    pub fn is_regular(&self) -> bool {
        self.w.is_some()
    }
}
