//! One-variable analytic expressions.
//!
//! Holomorphic inputs (`f`, `g`) are written in `z`, the real profile (`ℓ`)
//! in `t`. Both share one AST; [`ComplexExpr`] and [`RealExpr`] fix the
//! variable name and context and cache the first two symbolic derivatives so
//! that 2-jets are cheap to evaluate at many points.

mod diff;
mod eval;
mod parse;

use std::fmt;

use num_complex::Complex64;

pub use diff::differentiate;
pub use eval::{EvalError, EvalFailure, Scalar};
pub use parse::{parse_expr, ParseError};

/// Whether `i` is available and which scalar field the expression lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Context {
    Complex,
    Real,
}

/// Elementary functions accepted by the grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Sinh,
    Cosh,
}

impl Func {
    pub const ALL: [Func; 6] = [Func::Exp, Func::Log, Func::Sin, Func::Cos, Func::Sinh, Func::Cosh];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Expression tree in a single (implicit) variable.
#[derive(Debug, Clone, PartialEq)]
pub enum ExprNode {
    Const(Complex64),
    Var,
    Add(Box<ExprNode>, Box<ExprNode>),
    Sub(Box<ExprNode>, Box<ExprNode>),
    Mul(Box<ExprNode>, Box<ExprNode>),
    Div(Box<ExprNode>, Box<ExprNode>),
    /// Integer powers only; general powers go through `exp(c*log(u))`.
    Pow(Box<ExprNode>, i32),
    Neg(Box<ExprNode>),
    Apply(Func, Box<ExprNode>),
}

impl ExprNode {
    pub fn real(x: f64) -> ExprNode {
        ExprNode::Const(Complex64::new(x, 0.0))
    }

    pub fn as_const(&self) -> Option<Complex64> {
        match self {
            ExprNode::Const(c) => Some(*c),
            _ => None,
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            ExprNode::Const(_) | ExprNode::Var => 1,
            ExprNode::Add(a, b) | ExprNode::Sub(a, b) | ExprNode::Mul(a, b) | ExprNode::Div(a, b) => {
                1 + a.size() + b.size()
            }
            ExprNode::Pow(a, _) | ExprNode::Neg(a) | ExprNode::Apply(_, a) => 1 + a.size(),
        }
    }

    /// Render the tree in the input grammar, naming the variable `var`.
    pub fn unparse(&self, var: &str) -> String {
        let mut out = String::new();
        write_node(&mut out, self, var, 0);
        out
    }
}

// Binding strength used when deciding whether a child needs parentheses.
const PREC_SUM: u8 = 1;
const PREC_PRODUCT: u8 = 2;
const PREC_UNARY: u8 = 3;
const PREC_ATOM: u8 = 5;

fn node_prec(node: &ExprNode) -> u8 {
    match node {
        ExprNode::Add(..) | ExprNode::Sub(..) => PREC_SUM,
        ExprNode::Mul(..) | ExprNode::Div(..) => PREC_PRODUCT,
        ExprNode::Neg(..) => PREC_UNARY,
        ExprNode::Pow(..) => 4,
        // Negative and general complex constants carry their own parentheses.
        ExprNode::Const(_) | ExprNode::Var | ExprNode::Apply(..) => PREC_ATOM,
    }
}

fn write_node(out: &mut String, node: &ExprNode, var: &str, min_prec: u8) {
    let needs_parens = node_prec(node) < min_prec;
    if needs_parens {
        out.push('(');
    }
    match node {
        ExprNode::Const(c) => write_const(out, *c),
        ExprNode::Var => out.push_str(var),
        ExprNode::Add(a, b) => write_binary(out, a, " + ", b, var, PREC_SUM),
        ExprNode::Sub(a, b) => write_binary(out, a, " - ", b, var, PREC_SUM),
        ExprNode::Mul(a, b) => write_binary(out, a, "*", b, var, PREC_PRODUCT),
        ExprNode::Div(a, b) => write_binary(out, a, "/", b, var, PREC_PRODUCT),
        ExprNode::Pow(base, n) => {
            write_node(out, base, var, PREC_ATOM);
            out.push('^');
            out.push_str(&n.to_string());
        }
        ExprNode::Neg(a) => {
            out.push('-');
            write_node(out, a, var, PREC_UNARY);
        }
        ExprNode::Apply(func, a) => {
            out.push_str(func.name());
            out.push('(');
            write_node(out, a, var, 0);
            out.push(')');
        }
    }
    if needs_parens {
        out.push(')');
    }
}

fn write_binary(out: &mut String, a: &ExprNode, op: &str, b: &ExprNode, var: &str, prec: u8) {
    // Left-associative: the right operand must bind strictly tighter.
    write_node(out, a, var, prec);
    out.push_str(op);
    write_node(out, b, var, prec + 1);
}

fn write_const(out: &mut String, c: Complex64) {
    if c.im == 0.0 {
        if c.re.is_sign_positive() {
            out.push_str(&c.re.to_string());
        } else {
            out.push_str(&format!("(-{})", -c.re));
        }
    } else if c.re == 0.0 && c.im == 1.0 {
        out.push('i');
    } else {
        let im = if c.im < 0.0 {
            format!(" - {}*i", -c.im)
        } else {
            format!(" + {}*i", c.im)
        };
        let re = if c.re.is_sign_negative() {
            format!("-{}", -c.re)
        } else {
            c.re.to_string()
        };
        out.push_str(&format!("({re}{im})"));
    }
}

/// Value and first two derivatives at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2<T> {
    pub value: T,
    pub d1: T,
    pub d2: T,
}

impl<T> Jet2<T> {
    pub fn new(value: T, d1: T, d2: T) -> Self {
        Jet2 { value, d1, d2 }
    }
}

/// Any failure while turning source text into a differentiable expression.
#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum ExprError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// An expression together with its first and second derivatives.
#[derive(Debug, Clone, PartialEq)]
struct Differentiated {
    source: String,
    var: &'static str,
    node: ExprNode,
    d1: ExprNode,
    d2: ExprNode,
}

impl Differentiated {
    fn new(source: String, var: &'static str, node: ExprNode) -> Self {
        let d1 = differentiate(&node);
        let d2 = differentiate(&d1);
        Differentiated { source, var, node, d1, d2 }
    }

    fn jet<T: Scalar>(&self, point: T) -> Result<Jet2<T>, EvalError> {
        Ok(Jet2 {
            value: eval::eval(&self.node, point, self.var)?,
            d1: eval::eval(&self.d1, point, self.var)?,
            d2: eval::eval(&self.d2, point, self.var)?,
        })
    }
}

/// A holomorphic function of `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexExpr(Differentiated);

impl ComplexExpr {
    pub const VAR: &'static str = "z";

    pub fn parse(source: &str) -> Result<Self, ParseError> {
        let node = parse_expr(source, Self::VAR, Context::Complex)?;
        Ok(ComplexExpr(Differentiated::new(source.trim().to_string(), Self::VAR, node)))
    }

    pub fn from_node(node: ExprNode) -> Self {
        let source = node.unparse(Self::VAR);
        ComplexExpr(Differentiated::new(source, Self::VAR, node))
    }

    /// `a*z + b` with real coefficients.
    pub fn affine(a: f64, b: f64) -> Self {
        let node = ExprNode::Add(
            Box::new(ExprNode::Mul(Box::new(ExprNode::real(a)), Box::new(ExprNode::Var))),
            Box::new(ExprNode::real(b)),
        );
        Self::from_node(node)
    }

    pub fn source(&self) -> &str {
        &self.0.source
    }

    pub fn node(&self) -> &ExprNode {
        &self.0.node
    }

    pub fn derivative(&self) -> &ExprNode {
        &self.0.d1
    }

    pub fn second_derivative(&self) -> &ExprNode {
        &self.0.d2
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64, EvalError> {
        eval::eval(&self.0.node, z, Self::VAR)
    }

    pub fn jet(&self, z: Complex64) -> Result<Jet2<Complex64>, EvalError> {
        self.0.jet(z)
    }
}

impl fmt::Display for ComplexExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.source)
    }
}

/// A real function of `t`; used for the profile `ℓ`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealExpr(Differentiated);

impl RealExpr {
    pub const VAR: &'static str = "t";

    pub fn parse(source: &str) -> Result<Self, ParseError> {
        let node = parse_expr(source, Self::VAR, Context::Real)?;
        Ok(RealExpr(Differentiated::new(source.trim().to_string(), Self::VAR, node)))
    }

    pub fn from_node(node: ExprNode) -> Self {
        let source = node.unparse(Self::VAR);
        RealExpr(Differentiated::new(source, Self::VAR, node))
    }

    /// Multiply the whole expression by a constant.
    pub fn scaled(&self, factor: f64) -> Self {
        Self::from_node(ExprNode::Mul(Box::new(ExprNode::real(factor)), Box::new(self.0.node.clone())))
    }

    pub fn source(&self) -> &str {
        &self.0.source
    }

    pub fn node(&self) -> &ExprNode {
        &self.0.node
    }

    pub fn derivative(&self) -> &ExprNode {
        &self.0.d1
    }

    pub fn second_derivative(&self) -> &ExprNode {
        &self.0.d2
    }

    pub fn eval(&self, t: f64) -> Result<f64, EvalError> {
        eval::eval(&self.0.node, t, Self::VAR)
    }

    pub fn jet(&self, t: f64) -> Result<Jet2<f64>, EvalError> {
        self.0.jet(t)
    }
}

impl fmt::Display for RealExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.source)
    }
}

/// Evaluate `e`, `e'`, `e''` at `point`. Differentiates on every call; hold a
/// [`ComplexExpr`] or [`RealExpr`] when evaluating repeatedly.
pub fn eval_jet2<T: Scalar>(e: &ExprNode, point: T) -> Result<Jet2<T>, EvalError> {
    let d1 = differentiate(e);
    let d2 = differentiate(&d1);
    Ok(Jet2 {
        value: eval::eval(e, point, "x")?,
        d1: eval::eval(&d1, point, "x")?,
        d2: eval::eval(&d2, point, "x")?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn jet_of_square_at_one_plus_i() {
        let e = ComplexExpr::parse("z^2").unwrap();
        let jet = e.jet(c(1.0, 1.0)).unwrap();
        assert_eq!(jet.value, c(0.0, 2.0));
        assert_eq!(jet.d1, c(2.0, 2.0));
        assert_eq!(jet.d2, c(2.0, 0.0));
    }

    #[test]
    fn jet_of_exp_at_zero() {
        let e = ComplexExpr::parse("exp(z)").unwrap();
        assert_eq!(e.jet(c(0.0, 0.0)).unwrap(), Jet2::new(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)));
    }

    #[test]
    fn jet_of_quadratic_profile() {
        let e = RealExpr::parse("t^2+t+1").unwrap();
        let jet = e.jet(0.0).unwrap();
        assert_eq!(jet, Jet2::new(1.0, 1.0, 2.0));
        // central differences of the evaluated AST, step 1e-5
        let h = 1e-5;
        let fd1 = (e.eval(h).unwrap() - e.eval(-h).unwrap()) / (2.0 * h);
        assert!((fd1 - 1.0).abs() < 1e-8);
        let fd2 = (e.eval(h).unwrap() - 2.0 * e.eval(0.0).unwrap() + e.eval(-h).unwrap()) / (h * h);
        assert!((fd2 - 2.0).abs() < 1e-4);
    }

    #[test]
    fn free_function_jet_matches_cached() {
        let e = parse_expr("sin(x)*x", "x", Context::Real).unwrap();
        let jet = eval_jet2(&e, 0.7_f64).unwrap();
        let cached = RealExpr::parse("sin(t)*t").unwrap().jet(0.7).unwrap();
        assert_eq!(jet, cached);
    }

    #[test]
    fn unparse_respects_associativity() {
        let e = parse_expr("a - (a - 1)", "a", Context::Real).unwrap();
        assert_eq!(e.unparse("a"), "a - (a - 1)");
        let e = parse_expr("-(z+1)^2/ (2*z)", "z", Context::Complex).unwrap();
        assert_eq!(e.unparse("z"), "-(z + 1)^2/(2*z)");
        assert_eq!(parse_expr(&e.unparse("z"), "z", Context::Complex).unwrap(), e);
    }

    #[test]
    fn unparse_general_constants() {
        let e = ExprNode::Const(c(-1.5, -2.0));
        let text = e.unparse("z");
        assert_eq!(text, "(-1.5 - 2*i)");
        let back = parse_expr(&text, "z", Context::Complex).unwrap();
        assert_eq!(eval::eval(&back, c(0.0, 0.0), "z").unwrap(), c(-1.5, -2.0));
    }

    #[test]
    fn affine_builder() {
        let f = ComplexExpr::affine(2.0, -1.0);
        let jet = f.jet(c(0.5, 1.0)).unwrap();
        assert_eq!(jet, Jet2::new(c(0.0, 2.0), c(2.0, 0.0), c(0.0, 0.0)));
    }
}
