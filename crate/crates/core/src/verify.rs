//! Residual checks against the closed forms.
//!
//! Two kinds of evidence: algebraic identities that must hold to near machine
//! precision, and a finite-difference oracle that rebuilds the fundamental
//! forms from sampled `X` and `N` alone.
//!
//! Relative errors use `|actual - reference| / (1 + |reference|)` throughout.

use std::fmt;

use nalgebra::{Matrix2, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::SymForm;
use crate::surface::{
    closed_form_position, direct_position, point_closed_form, rotation_point, Method, SurfaceError, SurfaceSpec,
};

/// Tolerance for identities that hold exactly in exact arithmetic.
pub const ALGEBRAIC_TOL: f64 = 1e-9;
/// Tolerance for checks against the finite-difference oracle.
pub const FD_TOL: f64 = 1e-4;
/// Default central-difference step in parameter space.
pub const FD_STEP: f64 = 1e-4;
/// A check fails for coverage when more than this fraction of points is excluded.
pub const MAX_EXCLUDED_FRACTION: f64 = 0.5;
/// Points with `|Ψ|` at or below this are left out of the Weingarten relation.
pub const PSI_MIN: f64 = 1e-6;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("finite-difference stencil at {0} leaves the parameter domain")]
    StencilOutOfDomain(Complex64),
    #[error("finite-difference stencil at {z} touches an irregular point: {source}")]
    SingularStencil { z: Complex64, source: SurfaceError },
    #[error(transparent)]
    Spec(#[from] SurfaceError),
    #[error("rotation_match needs the rotation parameters a and b")]
    MissingRotation,
    #[error("no regular point in the sampled domain")]
    EmptyDomain,
    #[error("finite-difference step must be positive, got {0}")]
    InvalidStep(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    ParamEquivalence,
    SupportIdentity,
    QuadraticDistance,
    WeingartenRelation,
    PdeLapla1,
    FormsVsFd,
    CurvatureVsFd,
    HarmonicityMu,
    WvIdentity,
    RotationMatch,
}

impl CheckKind {
    pub const ALL: [CheckKind; 10] = [
        CheckKind::ParamEquivalence,
        CheckKind::SupportIdentity,
        CheckKind::QuadraticDistance,
        CheckKind::WeingartenRelation,
        CheckKind::PdeLapla1,
        CheckKind::FormsVsFd,
        CheckKind::CurvatureVsFd,
        CheckKind::HarmonicityMu,
        CheckKind::WvIdentity,
        CheckKind::RotationMatch,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::ParamEquivalence => "param_equivalence",
            CheckKind::SupportIdentity => "support_identity",
            CheckKind::QuadraticDistance => "quadratic_distance",
            CheckKind::WeingartenRelation => "weingarten_relation",
            CheckKind::PdeLapla1 => "pde_lapla1",
            CheckKind::FormsVsFd => "forms_vs_fd",
            CheckKind::CurvatureVsFd => "curvature_vs_fd",
            CheckKind::HarmonicityMu => "harmonicity_mu",
            CheckKind::WvIdentity => "wv_identity",
            CheckKind::RotationMatch => "rotation_match",
        }
    }

    pub fn from_name(name: &str) -> Option<CheckKind> {
        CheckKind::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn uses_finite_differences(self) -> bool {
        matches!(self, CheckKind::FormsVsFd | CheckKind::CurvatureVsFd | CheckKind::HarmonicityMu)
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub algebraic: f64,
    pub finite_difference: f64,
    pub max_excluded_fraction: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            algebraic: ALGEBRAIC_TOL,
            finite_difference: FD_TOL,
            max_excluded_fraction: MAX_EXCLUDED_FRACTION,
        }
    }
}

impl Tolerances {
    pub fn for_check(&self, kind: CheckKind) -> f64 {
        if kind.uses_finite_differences() {
            self.finite_difference
        } else {
            self.algebraic
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub checks: Vec<CheckKind>,
    pub step: f64,
    pub tolerances: Tolerances,
    /// `(a, b)` of the rotation family, for [`CheckKind::RotationMatch`].
    pub rotation: Option<(f64, f64)>,
}

impl Default for VerifyOptions {
    /// Every check except `rotation_match`, step [`FD_STEP`], default tolerances.
    fn default() -> Self {
        VerifyOptions {
            checks: CheckKind::ALL.into_iter().filter(|&k| k != CheckKind::RotationMatch).collect(),
            step: FD_STEP,
            tolerances: Tolerances::default(),
            rotation: None,
        }
    }
}

impl VerifyOptions {
    pub fn with_rotation(mut self, a: f64, b: f64) -> Self {
        self.rotation = Some((a, b));
        if !self.checks.contains(&CheckKind::RotationMatch) {
            self.checks.push(CheckKind::RotationMatch);
        }
        self
    }

    pub fn only(mut self, checks: &[CheckKind]) -> Self {
        self.checks = checks.to_vec();
        self
    }
}

/// Fundamental forms and curvatures rebuilt from central differences.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FdOracleResult {
    /// `(E, F, G)` from `⟨X,ᵢ, X,ⱼ⟩`.
    pub first: SymForm,
    /// `(e, f, g)` from `⟨X,ᵢ, N,ⱼ⟩`.
    pub second: SymForm,
    pub mean_curvature: f64,
    pub gauss_curvature: f64,
    /// `⟨X, N⟩` at the centre.
    pub psi: f64,
    pub step: f64,
}

fn sample_regular(spec: &SurfaceSpec, z: Complex64) -> Result<(Vector3<f64>, Vector3<f64>), VerifyError> {
    let frame = spec.frame_at(z).map_err(|source| VerifyError::SingularStencil { z, source })?;
    if !frame.is_regular() {
        let source = crate::geometry::GeometryError::SingularShape { det: frame.shape.scalars.det_v }.into();
        return Err(VerifyError::SingularStencil { z, source });
    }
    Ok((frame.position, frame.gauss.normal))
}

/// Central differences of the sampled surface and Gauss map at `z`.
pub fn fd_fundamental_forms(spec: &SurfaceSpec, z: Complex64, step: f64) -> Result<FdOracleResult, VerifyError> {
    if step.is_nan() || step <= 0.0 {
        return Err(VerifyError::InvalidStep(step));
    }
    let offsets = [Complex64::new(step, 0.0), Complex64::new(0.0, step)];
    if offsets.iter().any(|&d| !spec.contains(z + d) || !spec.contains(z - d)) {
        return Err(VerifyError::StencilOutOfDomain(z));
    }
    let (x0, n0) = sample_regular(spec, z)?;
    let mut dx = [Vector3::zeros(); 2];
    let mut dn = [Vector3::zeros(); 2];
    for (j, d) in offsets.into_iter().enumerate() {
        let (xp, np) = sample_regular(spec, z + d)?;
        let (xm, nm) = sample_regular(spec, z - d)?;
        dx[j] = (xp - xm) / (2.0 * step);
        dn[j] = (np - nm) / (2.0 * step);
    }
    let first = SymForm { m11: dx[0].dot(&dx[0]), m12: dx[0].dot(&dx[1]), m22: dx[1].dot(&dx[1]) };
    let second = SymForm {
        m11: dx[0].dot(&dn[0]),
        m12: 0.5 * (dx[0].dot(&dn[1]) + dx[1].dot(&dn[0])),
        m22: dx[1].dot(&dn[1]),
    };
    let det = first.det();
    // ⟨X,ᵢ, N,ⱼ⟩ is minus the usual second form, which flips the sign of H.
    let mean_curvature = -(second.m11 * first.m22 - 2.0 * second.m12 * first.m12 + second.m22 * first.m11) / (2.0 * det);
    let gauss_curvature = second.det() / det;
    Ok(FdOracleResult { first, second, mean_curvature, gauss_curvature, psi: x0.dot(&n0), step })
}

/// Largest absolute gap between closed-form and finite-difference forms at `z`.
pub fn fd_forms_error(spec: &SurfaceSpec, z: Complex64, step: f64) -> Result<f64, VerifyError> {
    let fd = fd_fundamental_forms(spec, z, step)?;
    let frame = spec.frame_at(z)?;
    let closed = frame.shape.forms;
    let pairs = closed.first.as_array().into_iter().zip(fd.first.as_array())
        .chain(closed.second.as_array().into_iter().zip(fd.second.as_array()));
    Ok(pairs.map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

/// Least-squares slope of `log(error)` against `log(step)`.
pub fn fd_convergence_order(spec: &SurfaceSpec, z: Complex64, steps: &[f64]) -> Result<f64, VerifyError> {
    let points: Vec<(f64, f64)> = steps
        .iter()
        .map(|&h| fd_forms_error(spec, z, h).map(|e| (h.ln(), e.ln())))
        .collect::<Result<_, _>>()?;
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// Five-point Laplacian of `μ = Re f` at `z`.
pub fn fd_laplacian_mu(spec: &SurfaceSpec, z: Complex64, step: f64) -> Result<f64, VerifyError> {
    let offsets = [Complex64::new(step, 0.0), Complex64::new(0.0, step)];
    if offsets.iter().any(|&d| !spec.contains(z + d) || !spec.contains(z - d)) {
        return Err(VerifyError::StencilOutOfDomain(z));
    }
    let mu = |w: Complex64| spec.f.eval(w).map(|v| v.re).map_err(SurfaceError::from);
    let centre = mu(z)?;
    let mut sum = -4.0 * centre;
    for d in offsets {
        sum += mu(z + d)? + mu(z - d)?;
    }
    Ok(sum / (step * step))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Passed,
    Failed,
    InsufficientCoverage,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: CheckKind,
    pub count: usize,
    pub excluded: usize,
    pub max_abs: f64,
    pub max_rel: f64,
    pub mean_rel: f64,
    pub worst_point: Option<[f64; 2]>,
    pub tolerance: f64,
    pub status: CheckStatus,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpecSummary {
    pub f: String,
    pub g: String,
    pub ell: String,
    pub u1_range: [f64; 2],
    pub u2_range: [f64; 2],
    pub nu1: usize,
    pub nu2: usize,
    pub method: Method,
    pub regularity_eps: f64,
    pub fd_step: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rotation: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub spec: SpecSummary,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

impl ResidualReport {
    pub fn check(&self, kind: CheckKind) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == kind)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone, Copy)]
enum Sample {
    Measured { abs: f64, rel: f64 },
    Excluded,
}

fn measure(actual: f64, reference: f64) -> Sample {
    let abs = (actual - reference).abs();
    Sample::Measured { abs, rel: abs / (1.0 + reference.abs()) }
}

fn measure_many(pairs: impl IntoIterator<Item = (f64, f64)>) -> Sample {
    let (mut abs, mut rel) = (0.0_f64, 0.0_f64);
    for (actual, reference) in pairs {
        let a = (actual - reference).abs();
        abs = abs.max(a);
        rel = rel.max(a / (1.0 + reference.abs()));
    }
    Sample::Measured { abs, rel }
}

fn measure_vec(actual: Vector3<f64>, reference: Vector3<f64>) -> Sample {
    let abs = (actual - reference).norm();
    Sample::Measured { abs, rel: abs / (1.0 + reference.norm()) }
}

struct PointOutcome {
    regular: bool,
    samples: Vec<Sample>,
    c: Option<f64>,
}

fn evaluate_point(spec: &SurfaceSpec, z: Complex64, opts: &VerifyOptions) -> PointOutcome {
    let frame = spec.frame_at(z).ok().filter(|f| f.is_regular());
    let needs_fd = opts.checks.iter().any(|k| matches!(k, CheckKind::FormsVsFd | CheckKind::CurvatureVsFd));
    let fd = match (&frame, needs_fd) {
        (Some(_), true) => fd_fundamental_forms(spec, z, opts.step).ok(),
        _ => None,
    };
    let mut c_seen = None;
    let samples = opts
        .checks
        .iter()
        .map(|&kind| {
            if kind == CheckKind::RotationMatch {
                return rotation_sample(spec, z, opts.rotation);
            }
            let Some(frame) = &frame else { return Sample::Excluded };
            let s = &frame.shape.scalars;
            let x = frame.position;
            let n = frame.gauss.normal;
            match kind {
                CheckKind::ParamEquivalence => {
                    match closed_form_position(&frame.jets, spec.regularity_eps) {
                        Ok(closed) => measure_vec(direct_position(&frame.jets, &frame.gauss), closed),
                        Err(_) => Sample::Excluded,
                    }
                }
                CheckKind::SupportIdentity => measure(x.dot(&n), frame.jets.ell.value),
                CheckKind::QuadraticDistance => measure(x.dot(&x), s.grad_h_sq + s.psi * s.psi),
                CheckKind::WeingartenRelation => {
                    let psi = x.dot(&n);
                    let lambda = x.dot(&x);
                    match (s.c, s.mean_curvature, s.gauss_curvature) {
                        (Some(c), Some(h), Some(k)) if psi.abs() > PSI_MIN => {
                            c_seen = Some(c);
                            let rhs = c * (-lambda / (2.0 * psi) + psi / 2.0) - psi;
                            measure(rhs, h / k)
                        }
                        _ => Sample::Excluded,
                    }
                }
                CheckKind::PdeLapla1 => match s.c {
                    Some(c) => {
                        let h_laplacian = s.psi * (frame.shape.trace_v - 2.0 * s.psi);
                        measure(c * s.grad_h_sq, h_laplacian)
                    }
                    None => Sample::Excluded,
                },
                CheckKind::FormsVsFd => match &fd {
                    Some(fd) => {
                        let closed = frame.shape.forms;
                        measure_many(
                            fd.first.as_array().into_iter().zip(closed.first.as_array())
                                .chain(fd.second.as_array().into_iter().zip(closed.second.as_array())),
                        )
                    }
                    None => Sample::Excluded,
                },
                CheckKind::CurvatureVsFd => match (&fd, s.mean_curvature, s.gauss_curvature) {
                    (Some(fd), Some(h), Some(k)) => {
                        measure_many([(fd.mean_curvature, h), (fd.gauss_curvature, k)])
                    }
                    _ => Sample::Excluded,
                },
                CheckKind::HarmonicityMu => match fd_laplacian_mu(spec, z, opts.step) {
                    Ok(lap) => measure(lap, 0.0),
                    Err(_) => Sample::Excluded,
                },
                CheckKind::WvIdentity => match frame.shape.w {
                    Some(w) => {
                        let product: Matrix2<f64> = w * frame.shape.v;
                        let identity = Matrix2::<f64>::identity();
                        measure_many(product.iter().copied().zip(identity.iter().copied()))
                    }
                    None => Sample::Excluded,
                },
                CheckKind::RotationMatch => unreachable!(),
            }
        })
        .collect();
    PointOutcome { regular: frame.is_some(), samples, c: c_seen }
}

fn rotation_sample(spec: &SurfaceSpec, z: Complex64, rotation: Option<(f64, f64)>) -> Sample {
    let Some((a, b)) = rotation else { return Sample::Excluded };
    let reference = SurfaceSpec::rotation(a, b, spec.ell.clone());
    match (rotation_point(a, b, &spec.ell, z.re, z.im), point_closed_form(&reference, z)) {
        (Ok(x), Ok(y)) => measure_vec(x, y),
        _ => Sample::Excluded,
    }
}

#[derive(Default)]
struct Accumulator {
    count: usize,
    excluded: usize,
    max_abs: f64,
    max_rel: f64,
    sum_rel: f64,
    worst: Option<[f64; 2]>,
}

impl Accumulator {
    fn push(&mut self, sample: Sample, z: Complex64) {
        match sample {
            Sample::Excluded => self.excluded += 1,
            Sample::Measured { abs, rel } => {
                self.count += 1;
                self.max_abs = self.max_abs.max(abs);
                self.sum_rel += rel;
                // NaN residuals must surface as failures, not vanish in max().
                if rel > self.max_rel || self.worst.is_none() || rel.is_nan() {
                    self.max_rel = if rel.is_nan() { f64::INFINITY } else { rel.max(self.max_rel) };
                    self.worst = Some([z.re, z.im]);
                }
            }
        }
    }
}

fn branch_note(c_range: Option<(f64, f64)>) -> Option<String> {
    let (lo, hi) = c_range?;
    if lo.abs() < ALGEBRAIC_TOL && hi.abs() < ALGEBRAIC_TOL {
        Some("C = 0 branch (Appell surface): H + ΨK = 0".to_string())
    } else if (lo - 1.0).abs() < ALGEBRAIC_TOL && (hi - 1.0).abs() < ALGEBRAIC_TOL {
        Some("C = 1 branch (TR-surface): H/K = -Λ/(2Ψ) - Ψ/2".to_string())
    } else {
        None
    }
}

/// Evaluate every enabled check over the spec's grid.
pub fn run_checks(spec: &SurfaceSpec, opts: &VerifyOptions) -> Result<ResidualReport, VerifyError> {
    spec.validate()?;
    if opts.step.is_nan() || opts.step <= 0.0 {
        return Err(VerifyError::InvalidStep(opts.step));
    }
    if opts.checks.contains(&CheckKind::RotationMatch) && opts.rotation.is_none() {
        return Err(VerifyError::MissingRotation);
    }
    let nu1 = spec.nu1;
    let points: Vec<Complex64> = (0..nu1 * spec.nu2).map(|idx| spec.grid_point(idx % nu1, idx / nu1)).collect();
    let outcomes: Vec<PointOutcome> = points.par_iter().map(|&z| evaluate_point(spec, z, opts)).collect();
    if !outcomes.iter().any(|o| o.regular) {
        return Err(VerifyError::EmptyDomain);
    }

    let mut accs: Vec<Accumulator> = opts.checks.iter().map(|_| Accumulator::default()).collect();
    let mut c_range: Option<(f64, f64)> = None;
    for (z, outcome) in points.iter().zip(&outcomes) {
        for (acc, sample) in accs.iter_mut().zip(&outcome.samples) {
            acc.push(*sample, *z);
        }
        if let Some(c) = outcome.c {
            c_range = Some(c_range.map_or((c, c), |(lo, hi)| (lo.min(c), hi.max(c))));
        }
    }

    let checks: Vec<CheckResult> = opts
        .checks
        .iter()
        .zip(accs)
        .map(|(&kind, acc)| {
            let tolerance = opts.tolerances.for_check(kind);
            let total = acc.count + acc.excluded;
            let status = if acc.count == 0
                || acc.excluded as f64 > opts.tolerances.max_excluded_fraction * total as f64
            {
                CheckStatus::InsufficientCoverage
            } else if acc.max_rel <= tolerance {
                CheckStatus::Passed
            } else {
                CheckStatus::Failed
            };
            CheckResult {
                name: kind,
                count: acc.count,
                excluded: acc.excluded,
                max_abs: acc.max_abs,
                max_rel: acc.max_rel,
                mean_rel: if acc.count > 0 { acc.sum_rel / acc.count as f64 } else { 0.0 },
                worst_point: acc.worst,
                tolerance,
                status,
                pass: status == CheckStatus::Passed,
                note: if kind == CheckKind::WeingartenRelation { branch_note(c_range) } else { None },
            }
        })
        .collect();

    let spec_summary = SpecSummary {
        f: spec.f.source().to_string(),
        g: spec.g.source().to_string(),
        ell: spec.ell.source().to_string(),
        u1_range: [spec.u1_range.0, spec.u1_range.1],
        u2_range: [spec.u2_range.0, spec.u2_range.1],
        nu1: spec.nu1,
        nu2: spec.nu2,
        method: spec.method,
        regularity_eps: spec.regularity_eps,
        fd_step: opts.step,
        rotation: opts.rotation.map(|(a, b)| [a, b]),
    };
    let pass = checks.iter().all(|c| c.pass);
    Ok(ResidualReport { spec: spec_summary, checks, pass })
}
