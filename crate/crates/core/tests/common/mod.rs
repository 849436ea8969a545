//! Helpers shared by the integration tests.
#![allow(dead_code)]

use grt::expr::{ExprNode, Func};
use num_complex::Complex64;
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `|actual - reference| / (1 + |reference|)`.
pub fn rel(actual: f64, reference: f64) -> f64 {
    (actual - reference).abs() / (1.0 + reference.abs())
}

pub fn crel(actual: Complex64, reference: Complex64) -> f64 {
    (actual - reference).norm() / (1.0 + reference.norm())
}

/// Random tree from the input grammar. Real trees never contain `i`.
pub fn random_expr<R: Rng>(rng: &mut R, depth: u32, complex: bool) -> ExprNode {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..10) {
            0..=5 => ExprNode::Var,
            6 if complex => ExprNode::Const(c(0.0, 1.0)),
            _ => ExprNode::real(f64::from(rng.gen_range(1..=30)) / 10.0),
        };
    }
    let sub = |rng: &mut R| Box::new(random_expr(rng, depth - 1, complex));
    match rng.gen_range(0..7) {
        0 => ExprNode::Add(sub(rng), sub(rng)),
        1 => ExprNode::Sub(sub(rng), sub(rng)),
        2 => ExprNode::Mul(sub(rng), sub(rng)),
        3 => ExprNode::Div(sub(rng), sub(rng)),
        4 => ExprNode::Pow(sub(rng), rng.gen_range(-2..=3)),
        5 => ExprNode::Neg(sub(rng)),
        _ => ExprNode::Apply(Func::ALL[rng.gen_range(0..Func::ALL.len())], sub(rng)),
    }
}

/// Value of `node` at `z` if every subexpression stays well away from poles,
/// the logarithm's cut and overflow; `None` otherwise.
///
/// Finite differences are only a trustworthy oracle on such points: near a
/// singularity the truncation error of any fixed stencil is unbounded.
pub fn well_conditioned(node: &ExprNode, z: Complex64, real: bool) -> Option<Complex64> {
    const MIN_DISTANCE: f64 = 0.5;
    const MAX_MAGNITUDE: f64 = 1e3;
    const MAX_ARGUMENT: f64 = 5.0;
    let v = match node {
        ExprNode::Const(k) => *k,
        ExprNode::Var => z,
        ExprNode::Add(a, b) => well_conditioned(a, z, real)? + well_conditioned(b, z, real)?,
        ExprNode::Sub(a, b) => well_conditioned(a, z, real)? - well_conditioned(b, z, real)?,
        ExprNode::Mul(a, b) => well_conditioned(a, z, real)? * well_conditioned(b, z, real)?,
        ExprNode::Div(a, b) => {
            let d = well_conditioned(b, z, real)?;
            if d.norm() < MIN_DISTANCE {
                return None;
            }
            well_conditioned(a, z, real)? / d
        }
        ExprNode::Pow(a, n) => {
            let base = well_conditioned(a, z, real)?;
            if *n < 0 && base.norm() < MIN_DISTANCE {
                return None;
            }
            base.powi(*n)
        }
        ExprNode::Neg(a) => -well_conditioned(a, z, real)?,
        ExprNode::Apply(func, a) => {
            let x = well_conditioned(a, z, real)?;
            match func {
                Func::Log => {
                    let near_cut = x.re < MIN_DISTANCE && x.im.abs() < MIN_DISTANCE;
                    if x.norm() < MIN_DISTANCE || near_cut || (real && x.re < MIN_DISTANCE) {
                        return None;
                    }
                    x.ln()
                }
                _ if x.norm() > MAX_ARGUMENT => return None,
                Func::Exp => x.exp(),
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Sinh => x.sinh(),
                Func::Cosh => x.cosh(),
            }
        }
    };
    (v.norm() <= MAX_MAGNITUDE).then_some(v)
}

/// Fourth-order central first derivative along `dir`.
pub fn fd1<T, F>(f: F, x: T, dir: T, h: f64) -> T
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T>,
    F: Fn(T) -> T,
{
    let at = |k: f64| f(x + dir * (k * h));
    (at(-2.0) - at(2.0) + (at(1.0) - at(-1.0)) * 8.0) * (1.0 / (12.0 * h))
}

/// Second-order central first derivative.
pub fn cd1<T, F>(f: F, x: T, dir: T, h: f64) -> T
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T>,
    F: Fn(T) -> T,
{
    (f(x + dir * h) - f(x - dir * h)) * (1.0 / (2.0 * h))
}
