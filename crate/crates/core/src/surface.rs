//! Surface points and sampled meshes.
//!
//! Two independent routes to a point: the closed form in `f`, `g`, `ℓ`
//! ([`point_closed_form`]) and the support-function construction
//! `X = Σⱼ (h,ⱼ/Lⱼⱼ) N,ⱼ + hN` ([`point_direct`]). The rotation family
//! ([`rotation_point`]) is the special case `f = az + b`, `g = eᶻ` written out
//! in cylindrical form.

use nalgebra::Vector3;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::expr::{ComplexExpr, EvalError, ExprNode, Func, Jet2, RealExpr};
use crate::geometry::{self, embed, inner, GaussFrame, GeometryError, ShapeData, REGULARITY_EPS};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum SurfaceError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("invalid surface spec: {0}")]
    InvalidSpec(String),
    #[error("no regular vertex in the sampled domain")]
    EmptyMesh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Direct,
}

/// Full input to surface synthesis.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceSpec {
    pub f: ComplexExpr,
    pub g: ComplexExpr,
    pub ell: RealExpr,
    pub u1_range: (f64, f64),
    pub u2_range: (f64, f64),
    pub nu1: usize,
    pub nu2: usize,
    pub regularity_eps: f64,
    pub method: Method,
}

/// Jets of `f`, `g` at `z` and of `ℓ` at `μ = Re f(z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointJets {
    pub f: Jet2<Complex64>,
    pub g: Jet2<Complex64>,
    pub ell: Jet2<f64>,
}

impl SurfaceSpec {
    /// Spec over `[-1, 1]²` at 64×64, closed-form evaluation.
    pub fn new(f: ComplexExpr, g: ComplexExpr, ell: RealExpr) -> Self {
        SurfaceSpec {
            f,
            g,
            ell,
            u1_range: (-1.0, 1.0),
            u2_range: (-1.0, 1.0),
            nu1: 64,
            nu2: 64,
            regularity_eps: REGULARITY_EPS,
            method: Method::ClosedForm,
        }
    }

    /// Parse all three expressions; panics on malformed input. Test and example helper.
    pub fn parse(f: &str, g: &str, ell: &str) -> Self {
        SurfaceSpec::new(
            ComplexExpr::parse(f).expect("f"),
            ComplexExpr::parse(g).expect("g"),
            RealExpr::parse(ell).expect("ell"),
        )
    }

    /// `f = az + b`, `g = eᶻ`: the surfaces of revolution.
    pub fn rotation(a: f64, b: f64, ell: RealExpr) -> Self {
        let g = ComplexExpr::from_node(ExprNode::Apply(Func::Exp, Box::new(ExprNode::Var)));
        SurfaceSpec::new(ComplexExpr::affine(a, b), g, ell)
    }

    pub fn with_domain(mut self, u1: (f64, f64), u2: (f64, f64)) -> Self {
        self.u1_range = u1;
        self.u2_range = u2;
        self
    }

    pub fn with_resolution(mut self, nu1: usize, nu2: usize) -> Self {
        self.nu1 = nu1;
        self.nu2 = nu2;
        self
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_profile(mut self, ell: RealExpr) -> Self {
        self.ell = ell;
        self
    }

    pub fn validate(&self) -> Result<(), SurfaceError> {
        for (name, (lo, hi)) in [("u1", self.u1_range), ("u2", self.u2_range)] {
            if !(lo.is_finite() && hi.is_finite() && hi > lo) {
                return Err(SurfaceError::InvalidSpec(format!("{name} range [{lo}, {hi}] is empty")));
            }
        }
        if self.nu1 < 2 || self.nu2 < 2 {
            return Err(SurfaceError::InvalidSpec(format!(
                "resolution {}x{} is below 2x2",
                self.nu1, self.nu2
            )));
        }
        if self.regularity_eps.is_nan() || self.regularity_eps < 0.0 {
            return Err(SurfaceError::InvalidSpec("regularity epsilon must be non-negative".into()));
        }
        Ok(())
    }

    /// Parameter value of grid node `(i1, i2)`. Symmetric ranges give exactly
    /// antisymmetric coordinates.
    pub fn grid_point(&self, i1: usize, i2: usize) -> Complex64 {
        Complex64::new(grid_coord(self.u1_range, self.nu1, i1), grid_coord(self.u2_range, self.nu2, i2))
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let (a, b) = self.u1_range;
        let (c, d) = self.u2_range;
        a <= z.re && z.re <= b && c <= z.im && z.im <= d
    }

    pub fn jets(&self, z: Complex64) -> Result<PointJets, SurfaceError> {
        let f = self.f.jet(z)?;
        let g = self.g.jet(z)?;
        let ell = self.ell.jet(f.value.re)?;
        Ok(PointJets { f, g, ell })
    }

    pub fn frame_at(&self, z: Complex64) -> Result<PointFrame, SurfaceError> {
        let jets = self.jets(z)?;
        let gauss = geometry::gauss_map(&jets.g, self.regularity_eps)?;
        let shape = ShapeData::compute(&jets.ell, &jets.f, &jets.g, &gauss, self.regularity_eps)?;
        let position = match self.method {
            Method::ClosedForm => closed_form_position(&jets, self.regularity_eps)?,
            Method::Direct => direct_position(&jets, &gauss),
        };
        Ok(PointFrame { z, jets, gauss, shape, position })
    }
}

pub(crate) fn grid_coord((lo, hi): (f64, f64), n: usize, k: usize) -> f64 {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let m = (n - 1) as f64;
    mid + half * ((2 * k) as f64 - m) / m
}

/// Every pointwise quantity at one parameter value.
#[derive(Debug, Clone, PartialEq)]
pub struct PointFrame {
    pub z: Complex64,
    pub jets: PointJets,
    pub gauss: GaussFrame,
    pub shape: ShapeData,
    /// Surface point by the spec's method.
    pub position: Vector3<f64>,
}

impl PointFrame {
    pub fn is_regular(&self) -> bool {
        self.shape.is_regular()
    }
}

/// `X = (ℓ'/2|g'|²)(T g' f̄' - 2g⟨g', g f'⟩, -2⟨g', g f'⟩) + ℓ (2g, 2-T)/T`.
pub fn closed_form_position(jets: &PointJets, eps: f64) -> Result<Vector3<f64>, GeometryError> {
    let PointJets { f, g, ell } = jets;
    let dg_sq = g.d1.norm_sqr();
    if dg_sq.sqrt() <= eps {
        return Err(GeometryError::SingularGaussMap(dg_sq.sqrt()));
    }
    let t = 1.0 + g.value.norm_sqr();
    let cross = inner(g.d1, g.value * f.d1);
    let first = embed(t * g.d1 * f.d1.conj() - 2.0 * g.value * cross, -2.0 * cross) * (ell.d1 / (2.0 * dg_sq));
    let second = embed(2.0 * g.value, 2.0 - t) * (ell.value / t);
    Ok(first + second)
}

/// `X = Σⱼ (h,ⱼ/Lⱼⱼ) N,ⱼ + hN` with `h = ℓ(Re f)`.
pub fn direct_position(jets: &PointJets, gauss: &GaussFrame) -> Vector3<f64> {
    let h = jets.ell.value;
    let h1 = jets.ell.d1 * jets.f.d1.re;
    let h2 = jets.ell.d1 * (Complex64::new(0.0, 1.0) * jets.f.d1).re;
    let [n1, n2] = gauss.normal_du;
    (n1 * h1 + n2 * h2) / gauss.l11 + gauss.normal * h
}

pub fn point_closed_form(spec: &SurfaceSpec, z: Complex64) -> Result<Vector3<f64>, SurfaceError> {
    Ok(closed_form_position(&spec.jets(z)?, spec.regularity_eps)?)
}

pub fn point_direct(spec: &SurfaceSpec, z: Complex64) -> Result<Vector3<f64>, SurfaceError> {
    let jets = spec.jets(z)?;
    let gauss = geometry::gauss_map(&jets.g, spec.regularity_eps)?;
    Ok(direct_position(&jets, &gauss))
}

/// `X_ab(u1, u2) = (M cos u2, M sin u2, N)` with `μ = a u1 + b`.
pub fn rotation_point(a: f64, b: f64, ell: &RealExpr, u1: f64, u2: f64) -> Result<Vector3<f64>, SurfaceError> {
    let jet = ell.jet(a * u1 + b)?;
    let (l, dl) = (jet.value, jet.d1);
    let e1 = u1.exp();
    let e2 = e1 * e1;
    let m = (a * dl * ((-u1).exp() - e2 * e1) + 4.0 * l * e1) / (2.0 * (1.0 + e2));
    let n = (l * (1.0 - e2) - a * dl * (1.0 + e2)) / (1.0 + e2);
    Ok(Vector3::new(m * u2.cos(), m * u2.sin(), n))
}

/// Per-vertex summary of the pointwise geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VertexDiagnostics {
    pub psi: f64,
    pub lambda: f64,
    pub mean_curvature: Option<f64>,
    pub gauss_curvature: Option<f64>,
    pub c: Option<f64>,
    pub det_v: f64,
    /// `H/K - [C(-Λ/2Ψ + Ψ/2) - Ψ]`, where defined.
    pub weingarten_residual: Option<f64>,
    /// `h Δ_L h - C |∇_L h|²`, where defined.
    pub pde_residual: Option<f64>,
}

impl VertexDiagnostics {
    fn from_shape(shape: &ShapeData) -> Self {
        let s = &shape.scalars;
        let weingarten_residual = match (s.c, s.mean_curvature, s.gauss_curvature) {
            (Some(c), Some(h), Some(k)) if s.psi != 0.0 => {
                Some(h / k - (c * (-s.lambda / (2.0 * s.psi) + s.psi / 2.0) - s.psi))
            }
            _ => None,
        };
        let laplacian = shape.trace_v - 2.0 * s.psi;
        let pde_residual = s.c.map(|c| s.psi * laplacian - c * s.grad_h_sq);
        VertexDiagnostics {
            psi: s.psi,
            lambda: s.lambda,
            mean_curvature: s.mean_curvature,
            gauss_curvature: s.gauss_curvature,
            c: s.c,
            det_v: s.det_v,
            weingarten_residual,
            pde_residual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeshVertex {
    pub position: Vector3<f64>,
    pub normal: Vector3<f64>,
    pub diagnostics: VertexDiagnostics,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridVertex {
    pub u: [f64; 2],
    /// `None` for irregular points; the reason is kept for reporting.
    pub sample: Option<MeshVertex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invalid_reason: Option<String>,
}

impl GridVertex {
    pub fn is_valid(&self) -> bool {
        self.sample.is_some()
    }
}

/// Uniform grid of samples, `u1` varying fastest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurfaceMesh {
    pub nu1: usize,
    pub nu2: usize,
    pub vertices: Vec<GridVertex>,
    /// Triangles over grid indices, counter-clockwise in `(u1, u2)`.
    pub faces: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeshSummary {
    pub vertices: usize,
    pub valid_vertices: usize,
    pub faces: usize,
    pub regular_fraction: f64,
    pub min_abs_det_v: f64,
}

impl SurfaceMesh {
    pub fn index(&self, i1: usize, i2: usize) -> usize {
        i2 * self.nu1 + i1
    }

    pub fn valid_count(&self) -> usize {
        self.vertices.iter().filter(|v| v.is_valid()).count()
    }

    pub fn summary(&self) -> MeshSummary {
        let valid = self.valid_count();
        let min_abs_det_v = self
            .vertices
            .iter()
            .filter_map(|v| v.sample.as_ref())
            .map(|s| s.diagnostics.det_v.abs())
            .fold(f64::INFINITY, f64::min);
        MeshSummary {
            vertices: self.vertices.len(),
            valid_vertices: valid,
            faces: self.faces.len(),
            regular_fraction: valid as f64 / self.vertices.len() as f64,
            min_abs_det_v,
        }
    }
}

fn sample_vertex<P>(spec: &SurfaceSpec, z: Complex64, position: &P) -> Result<MeshVertex, SurfaceError>
where
    P: Fn(&PointFrame) -> Result<Vector3<f64>, SurfaceError>,
{
    let frame = spec.frame_at(z)?;
    if !frame.is_regular() {
        return Err(GeometryError::SingularShape { det: frame.shape.scalars.det_v }.into());
    }
    Ok(MeshVertex {
        position: position(&frame)?,
        normal: frame.gauss.normal,
        diagnostics: VertexDiagnostics::from_shape(&frame.shape),
    })
}

fn sample_with<P>(spec: &SurfaceSpec, position: P) -> Result<SurfaceMesh, SurfaceError>
where
    P: Fn(&PointFrame) -> Result<Vector3<f64>, SurfaceError> + Sync,
{
    spec.validate()?;
    let (nu1, nu2) = (spec.nu1, spec.nu2);
    let vertices: Vec<GridVertex> = (0..nu1 * nu2)
        .into_par_iter()
        .map(|idx| {
            let z = spec.grid_point(idx % nu1, idx / nu1);
            match sample_vertex(spec, z, &position) {
                Ok(sample) => GridVertex { u: [z.re, z.im], sample: Some(sample), invalid_reason: None },
                Err(err) => GridVertex { u: [z.re, z.im], sample: None, invalid_reason: Some(err.to_string()) },
            }
        })
        .collect();
    if !vertices.iter().any(GridVertex::is_valid) {
        return Err(SurfaceError::EmptyMesh);
    }

    let mut faces = Vec::new();
    let at = |i1: usize, i2: usize| i2 * nu1 + i1;
    for i2 in 0..nu2 - 1 {
        for i1 in 0..nu1 - 1 {
            let quad = [at(i1, i2), at(i1 + 1, i2), at(i1 + 1, i2 + 1), at(i1, i2 + 1)];
            for tri in [[quad[0], quad[1], quad[2]], [quad[0], quad[2], quad[3]]] {
                if tri.iter().all(|&k| vertices[k].is_valid()) {
                    faces.push(tri);
                }
            }
        }
    }
    Ok(SurfaceMesh { nu1, nu2, vertices, faces })
}

/// Sample `spec` on its uniform grid. Irregular vertices are kept but flagged
/// and no face touches them.
pub fn sample_mesh(spec: &SurfaceSpec) -> Result<SurfaceMesh, SurfaceError> {
    sample_with(spec, |frame| Ok(frame.position))
}

/// Mesh of the rotation family `X_ab`. Regularity, normals and diagnostics
/// come from the equivalent spec `f = az + b`, `g = eᶻ`; positions from the
/// cylindrical formula.
pub fn sample_rotation_mesh(a: f64, b: f64, spec: &SurfaceSpec) -> Result<SurfaceMesh, SurfaceError> {
    let ell = spec.ell.clone();
    sample_with(spec, move |frame| rotation_point(a, b, &ell, frame.z.re, frame.z.im))
}
