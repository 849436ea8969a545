//! Point evaluation over real or complex scalars.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use super::{ExprNode, Func};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalFailure {
    DivisionByZero,
    /// Logarithm at zero or on the cut `re <= 0, im = 0`.
    LogBranch,
    NonFinite,
}

impl fmt::Display for EvalFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EvalFailure::DivisionByZero => "division by zero",
            EvalFailure::LogBranch => "logarithm on its branch cut",
            EvalFailure::NonFinite => "non-finite result",
        })
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
#[error("{failure} in `{subexpr}` at {point}")]
pub struct EvalError {
    pub failure: EvalFailure,
    pub subexpr: String,
    pub point: String,
}

/// Field the evaluator runs over. Implemented for `f64` and `Complex64`.
pub trait Scalar:
    Copy
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// Real scalars take the real part; the parser never hands them `i`.
    fn from_const(c: Complex64) -> Self;
    fn is_zero(self) -> bool;
    fn is_finite(self) -> bool;
    fn powi(self, n: i32) -> Self;
    fn apply(self, func: Func) -> Result<Self, EvalFailure>;
    fn describe(self) -> String;
}

impl Scalar for f64 {
    fn from_const(c: Complex64) -> Self {
        c.re
    }

    fn is_zero(self) -> bool {
        self == 0.0
    }

    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }

    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }

    fn apply(self, func: Func) -> Result<Self, EvalFailure> {
        Ok(match func {
            Func::Exp => self.exp(),
            Func::Log if self <= 0.0 => return Err(EvalFailure::LogBranch),
            Func::Log => self.ln(),
            Func::Sin => self.sin(),
            Func::Cos => self.cos(),
            Func::Sinh => self.sinh(),
            Func::Cosh => self.cosh(),
        })
    }

    fn describe(self) -> String {
        format!("t = {self}")
    }
}

impl Scalar for Complex64 {
    fn from_const(c: Complex64) -> Self {
        c
    }

    fn is_zero(self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    fn powi(self, n: i32) -> Self {
        Complex64::powi(&self, n)
    }

    fn apply(self, func: Func) -> Result<Self, EvalFailure> {
        apply_complex(func, self)
    }

    fn describe(self) -> String {
        format!("z = {} + {}i", self.re, self.im)
    }
}

pub(crate) fn apply_complex(func: Func, x: Complex64) -> Result<Complex64, EvalFailure> {
    Ok(match func {
        Func::Exp => x.exp(),
        Func::Log if x.im == 0.0 && x.re <= 0.0 => return Err(EvalFailure::LogBranch),
        Func::Log => x.ln(),
        Func::Sin => x.sin(),
        Func::Cos => x.cos(),
        Func::Sinh => x.sinh(),
        Func::Cosh => x.cosh(),
    })
}

fn fail<T: Scalar>(failure: EvalFailure, node: &ExprNode, point: T, var: &str) -> EvalError {
    EvalError { failure, subexpr: node.unparse(var), point: point.describe() }
}

/// Evaluate `node` at `point`. Never returns a non-finite value.
pub(crate) fn eval<T: Scalar>(node: &ExprNode, point: T, var: &str) -> Result<T, EvalError> {
    let value = match node {
        ExprNode::Const(c) => T::from_const(*c),
        ExprNode::Var => point,
        ExprNode::Add(a, b) => eval(a, point, var)? + eval(b, point, var)?,
        ExprNode::Sub(a, b) => eval(a, point, var)? - eval(b, point, var)?,
        ExprNode::Mul(a, b) => eval(a, point, var)? * eval(b, point, var)?,
        ExprNode::Div(a, b) => {
            let numer = eval(a, point, var)?;
            let denom = eval(b, point, var)?;
            if denom.is_zero() {
                return Err(fail(EvalFailure::DivisionByZero, node, point, var));
            }
            numer / denom
        }
        ExprNode::Pow(a, n) => {
            let base = eval(a, point, var)?;
            if *n < 0 && base.is_zero() {
                return Err(fail(EvalFailure::DivisionByZero, node, point, var));
            }
            base.powi(*n)
        }
        ExprNode::Neg(a) => -eval(a, point, var)?,
        ExprNode::Apply(func, a) => {
            let arg = eval(a, point, var)?;
            arg.apply(*func).map_err(|failure| fail(failure, node, point, var))?
        }
    };
    if !value.is_finite() {
        return Err(fail(EvalFailure::NonFinite, node, point, var));
    }
    Ok(value)
}
