//! Symbolic differentiation with light simplification.
//!
//! The smart constructors fold constants and drop `+0`, `*1`, `*0` so that
//! repeated differentiation does not blow up the tree.

use num_complex::Complex64;

use super::eval::apply_complex;
use super::{ExprNode, Func};

fn is_value(node: &ExprNode, v: f64) -> bool {
    node.as_const() == Some(Complex64::new(v, 0.0))
}

fn folded(c: Complex64) -> Option<ExprNode> {
    (c.re.is_finite() && c.im.is_finite()).then_some(ExprNode::Const(c))
}

pub(crate) fn add(a: ExprNode, b: ExprNode) -> ExprNode {
    if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
        if let Some(node) = folded(x + y) {
            return node;
        }
    }
    if is_value(&a, 0.0) {
        return b;
    }
    if is_value(&b, 0.0) {
        return a;
    }
    ExprNode::Add(Box::new(a), Box::new(b))
}

pub(crate) fn sub(a: ExprNode, b: ExprNode) -> ExprNode {
    if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
        if let Some(node) = folded(x - y) {
            return node;
        }
    }
    if is_value(&b, 0.0) {
        return a;
    }
    if is_value(&a, 0.0) {
        return neg(b);
    }
    ExprNode::Sub(Box::new(a), Box::new(b))
}

pub(crate) fn mul(a: ExprNode, b: ExprNode) -> ExprNode {
    if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
        if let Some(node) = folded(x * y) {
            return node;
        }
    }
    if is_value(&a, 0.0) || is_value(&b, 0.0) {
        return ExprNode::real(0.0);
    }
    if is_value(&a, 1.0) {
        return b;
    }
    if is_value(&b, 1.0) {
        return a;
    }
    if is_value(&a, -1.0) {
        return neg(b);
    }
    if is_value(&b, -1.0) {
        return neg(a);
    }
    ExprNode::Mul(Box::new(a), Box::new(b))
}

pub(crate) fn div(a: ExprNode, b: ExprNode) -> ExprNode {
    if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
        if y != Complex64::new(0.0, 0.0) {
            if let Some(node) = folded(x / y) {
                return node;
            }
        }
    }
    if is_value(&a, 0.0) {
        return ExprNode::real(0.0);
    }
    if is_value(&b, 1.0) {
        return a;
    }
    ExprNode::Div(Box::new(a), Box::new(b))
}

pub(crate) fn pow(base: ExprNode, n: i32) -> ExprNode {
    if n == 0 {
        return ExprNode::real(1.0);
    }
    if n == 1 {
        return base;
    }
    if let Some(x) = base.as_const() {
        if x != Complex64::new(0.0, 0.0) || n > 0 {
            if let Some(node) = folded(x.powi(n)) {
                return node;
            }
        }
    }
    ExprNode::Pow(Box::new(base), n)
}

pub(crate) fn neg(a: ExprNode) -> ExprNode {
    match a {
        ExprNode::Const(c) => ExprNode::Const(-c),
        ExprNode::Neg(inner) => *inner,
        other => ExprNode::Neg(Box::new(other)),
    }
}

pub(crate) fn apply(func: Func, a: ExprNode) -> ExprNode {
    if let Some(x) = a.as_const() {
        if let Ok(v) = apply_complex(func, x) {
            if let Some(node) = folded(v) {
                return node;
            }
        }
    }
    ExprNode::Apply(func, Box::new(a))
}

/// Simplify a tree bottom-up with the same rules the derivative uses.
pub fn simplify(e: &ExprNode) -> ExprNode {
    match e {
        ExprNode::Const(_) | ExprNode::Var => e.clone(),
        ExprNode::Add(a, b) => add(simplify(a), simplify(b)),
        ExprNode::Sub(a, b) => sub(simplify(a), simplify(b)),
        ExprNode::Mul(a, b) => mul(simplify(a), simplify(b)),
        ExprNode::Div(a, b) => div(simplify(a), simplify(b)),
        ExprNode::Pow(a, n) => pow(simplify(a), *n),
        ExprNode::Neg(a) => neg(simplify(a)),
        ExprNode::Apply(f, a) => apply(*f, simplify(a)),
    }
}

/// Derivative with respect to the expression's variable.
pub fn differentiate(e: &ExprNode) -> ExprNode {
    match e {
        ExprNode::Const(_) => ExprNode::real(0.0),
        ExprNode::Var => ExprNode::real(1.0),
        ExprNode::Add(a, b) => add(differentiate(a), differentiate(b)),
        ExprNode::Sub(a, b) => sub(differentiate(a), differentiate(b)),
        ExprNode::Mul(a, b) => {
            let a = simplify(a);
            let b = simplify(b);
            add(mul(differentiate(&a), b.clone()), mul(a.clone(), differentiate(&b)))
        }
        ExprNode::Div(a, b) => {
            // (a'b - ab') / b^2
            let a = simplify(a);
            let b = simplify(b);
            let numer = sub(mul(differentiate(&a), b.clone()), mul(a.clone(), differentiate(&b)));
            div(numer, pow(b, 2))
        }
        ExprNode::Pow(base, n) => {
            let base = simplify(base);
            let outer = mul(ExprNode::real(f64::from(*n)), pow(base.clone(), n - 1));
            mul(outer, differentiate(&base))
        }
        ExprNode::Neg(a) => neg(differentiate(a)),
        ExprNode::Apply(func, arg) => {
            let arg = simplify(arg);
            let inner = differentiate(&arg);
            let outer = match func {
                Func::Exp => apply(Func::Exp, arg),
                Func::Log => div(ExprNode::real(1.0), arg),
                Func::Sin => apply(Func::Cos, arg),
                Func::Cos => neg(apply(Func::Sin, arg)),
                Func::Sinh => apply(Func::Cosh, arg),
                Func::Cosh => apply(Func::Sinh, arg),
            };
            // log: u'/u reads better than (1/u)*u'
            if let (Func::Log, ExprNode::Div(one, u)) = (func, &outer) {
                if is_value(one, 1.0) {
                    return div(inner, (**u).clone());
                }
            }
            mul(outer, inner)
        }
    }
}
