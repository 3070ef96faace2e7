//! Immutable expression trees and the skeleton form used as a decoding target.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::token::Token;

/// Unary operators of the vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnaryOp {
    Arccos,
    Arcsin,
    Arctan,
    Cos,
    Cosh,
    Coth,
    Exp,
    Ln,
    Sin,
    Sinh,
    Sqrt,
    Tan,
    Tanh,
}

impl UnaryOp {
    pub const ALL: [UnaryOp; 13] = [
        UnaryOp::Arccos,
        UnaryOp::Arcsin,
        UnaryOp::Arctan,
        UnaryOp::Cos,
        UnaryOp::Cosh,
        UnaryOp::Coth,
        UnaryOp::Exp,
        UnaryOp::Ln,
        UnaryOp::Sin,
        UnaryOp::Sinh,
        UnaryOp::Sqrt,
        UnaryOp::Tan,
        UnaryOp::Tanh,
    ];

    pub fn token(self) -> Token {
        let id = match self {
            UnaryOp::Arccos => 7,
            UnaryOp::Arcsin => 9,
            UnaryOp::Arctan => 10,
            UnaryOp::Cos => 11,
            UnaryOp::Cosh => 12,
            UnaryOp::Coth => 13,
            UnaryOp::Exp => 15,
            UnaryOp::Ln => 16,
            UnaryOp::Sin => 19,
            UnaryOp::Sinh => 20,
            UnaryOp::Sqrt => 21,
            UnaryOp::Tan => 22,
            UnaryOp::Tanh => 23,
        };
        Token::new(id).unwrap()
    }

    pub fn from_token(t: Token) -> Option<UnaryOp> {
        Some(match t.id() {
            7 => UnaryOp::Arccos,
            9 => UnaryOp::Arcsin,
            10 => UnaryOp::Arctan,
            11 => UnaryOp::Cos,
            12 => UnaryOp::Cosh,
            13 => UnaryOp::Coth,
            15 => UnaryOp::Exp,
            16 => UnaryOp::Ln,
            19 => UnaryOp::Sin,
            20 => UnaryOp::Sinh,
            21 => UnaryOp::Sqrt,
            22 => UnaryOp::Tan,
            23 => UnaryOp::Tanh,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        self.token().symbol()
    }

    /// IEEE semantics; domain violations yield NaN or infinities.
    pub fn apply(self, v: f64) -> f64 {
        match self {
            UnaryOp::Arccos => v.acos(),
            UnaryOp::Arcsin => v.asin(),
            UnaryOp::Arctan => v.atan(),
            UnaryOp::Cos => v.cos(),
            UnaryOp::Cosh => v.cosh(),
            UnaryOp::Coth => 1.0 / v.tanh(),
            UnaryOp::Exp => v.exp(),
            UnaryOp::Ln => v.ln(),
            UnaryOp::Sin => v.sin(),
            UnaryOp::Sinh => v.sinh(),
            UnaryOp::Sqrt => v.sqrt(),
            UnaryOp::Tan => v.tan(),
            UnaryOp::Tanh => v.tanh(),
        }
    }
}

/// Binary operators of the vocabulary. There is no subtraction token:
/// differences are written `a + (-1 * b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinaryOp {
    Add,
    Div,
    Mul,
    Pow,
}

impl BinaryOp {
    pub fn token(self) -> Token {
        let id = match self {
            BinaryOp::Add => 8,
            BinaryOp::Div => 14,
            BinaryOp::Mul => 17,
            BinaryOp::Pow => 18,
        };
        Token::new(id).unwrap()
    }

    pub fn from_token(t: Token) -> Option<BinaryOp> {
        Some(match t.id() {
            8 => BinaryOp::Add,
            14 => BinaryOp::Div,
            17 => BinaryOp::Mul,
            18 => BinaryOp::Pow,
            _ => return None,
        })
    }

    pub fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            BinaryOp::Add => a + b,
            BinaryOp::Div => a / b,
            BinaryOp::Mul => a * b,
            // Real power: negative base with non-integer exponent is NaN.
            BinaryOp::Pow => a.powf(b),
        }
    }
}

/// An immutable expression tree.
///
/// Leaves are variables `x1..x3`, vocabulary integers `-3..=5`, finite real
/// constants, or the constant placeholder. Subtrees are shared via `Arc`, so
/// clones are cheap and trees can be used freely across threads.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Var(u8),
    Int(i8),
    Const(f64),
    Placeholder,
    Unary(UnaryOp, Arc<Expr>),
    Binary(BinaryOp, Arc<Expr>, Arc<Expr>),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExprError {
    #[error("expected {expected} constant values for {placeholders} placeholders, got {got}")]
    ConstantCountMismatch {
        expected: usize,
        placeholders: usize,
        got: usize,
    },
    #[error("skeletons cannot contain real-constant leaves")]
    ConstantInSkeleton,
}

impl Expr {
    pub fn var(index: u8) -> Expr {
        assert!((1..=3).contains(&index), "variable index must be 1..=3");
        Expr::Var(index)
    }

    pub fn int(value: i8) -> Expr {
        assert!((-3..=5).contains(&value), "integer literal must be -3..=5");
        Expr::Int(value)
    }

    pub fn constant(value: f64) -> Expr {
        assert!(value.is_finite(), "constant leaves must be finite");
        Expr::Const(value)
    }

    pub fn unary(op: UnaryOp, child: Expr) -> Expr {
        Expr::Unary(op, Arc::new(child))
    }

    pub fn binary(op: BinaryOp, left: Expr, right: Expr) -> Expr {
        Expr::Binary(op, Arc::new(left), Arc::new(right))
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::binary(BinaryOp::Add, a, b)
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::binary(BinaryOp::Mul, a, b)
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::binary(BinaryOp::Div, a, b)
    }

    pub fn pow(a: Expr, b: Expr) -> Expr {
        Expr::binary(BinaryOp::Pow, a, b)
    }

    pub fn neg(a: Expr) -> Expr {
        Expr::mul(Expr::Int(-1), a)
    }

    /// `a - b`, written with the vocabulary's `+`/`*`/`-1` symbols.
    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::add(a, Expr::neg(b))
    }

    pub fn node_count(&self) -> usize {
        match self {
            Expr::Unary(_, c) => 1 + c.node_count(),
            Expr::Binary(_, l, r) => 1 + l.node_count() + r.node_count(),
            _ => 1,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Expr::Unary(_, c) => 1 + c.depth(),
            Expr::Binary(_, l, r) => 1 + l.depth().max(r.depth()),
            _ => 1,
        }
    }

    pub fn placeholder_count(&self) -> usize {
        match self {
            Expr::Placeholder => 1,
            Expr::Unary(_, c) => c.placeholder_count(),
            Expr::Binary(_, l, r) => l.placeholder_count() + r.placeholder_count(),
            _ => 0,
        }
    }

    pub fn contains_const(&self) -> bool {
        match self {
            Expr::Const(_) => true,
            Expr::Unary(_, c) => c.contains_const(),
            Expr::Binary(_, l, r) => l.contains_const() || r.contains_const(),
            _ => false,
        }
    }

    /// Which of x1..x3 occur in the tree.
    pub fn variables_used(&self) -> [bool; 3] {
        fn walk(e: &Expr, used: &mut [bool; 3]) {
            match e {
                Expr::Var(i) => used[(*i - 1) as usize] = true,
                Expr::Unary(_, c) => walk(c, used),
                Expr::Binary(_, l, r) => {
                    walk(l, used);
                    walk(r, used);
                }
                _ => {}
            }
        }
        let mut used = [false; 3];
        walk(self, &mut used);
        used
    }

    /// Highest variable index present, 0 when the tree has no variables.
    pub fn max_variable(&self) -> u8 {
        let used = self.variables_used();
        (0..3).rev().find(|&i| used[i]).map_or(0, |i| i as u8 + 1)
    }

    /// Renames variables via `map[old_index - 1] = new_index`.
    pub fn relabel_variables(&self, map: &[u8; 3]) -> Expr {
        match self {
            Expr::Var(i) => Expr::var(map[(*i - 1) as usize]),
            Expr::Unary(op, c) => Expr::unary(*op, c.relabel_variables(map)),
            Expr::Binary(op, l, r) => {
                Expr::binary(*op, l.relabel_variables(map), r.relabel_variables(map))
            }
            other => other.clone(),
        }
    }

    /// Evaluates the tree at one input point.
    ///
    /// Placeholders consume `constants` in pre-order; the caller must supply
    /// exactly one value per placeholder. Domain violations propagate as NaN
    /// or infinities so callers can filter rather than fail.
    pub fn evaluate(&self, point: &[f64; 3], constants: &[f64]) -> f64 {
        debug_assert_eq!(constants.len(), self.placeholder_count());
        let mut next = 0usize;
        self.eval_inner(point, constants, &mut next)
    }

    fn eval_inner(&self, point: &[f64; 3], constants: &[f64], next: &mut usize) -> f64 {
        match self {
            Expr::Var(i) => point[(*i - 1) as usize],
            Expr::Int(n) => *n as f64,
            Expr::Const(v) => *v,
            Expr::Placeholder => {
                let v = constants.get(*next).copied().unwrap_or(f64::NAN);
                *next += 1;
                v
            }
            Expr::Unary(op, c) => op.apply(c.eval_inner(point, constants, next)),
            Expr::Binary(op, l, r) => {
                let a = l.eval_inner(point, constants, next);
                let b = r.eval_inner(point, constants, next);
                op.apply(a, b)
            }
        }
    }

    /// Replaces every real-constant leaf by the placeholder symbol.
    /// Integer literals are vocabulary tokens and survive unchanged.
    pub fn skeletonize(&self) -> Skeleton {
        fn strip(e: &Expr) -> Expr {
            match e {
                Expr::Const(_) => Expr::Placeholder,
                Expr::Unary(op, c) => Expr::unary(*op, strip(c)),
                Expr::Binary(op, l, r) => Expr::binary(*op, strip(l), strip(r)),
                other => other.clone(),
            }
        }
        Skeleton::new(strip(self)).expect("skeletonize removed all constants")
    }
}

impl fmt::Display for Expr {
    /// Fully parenthesized infix form; the placeholder renders as `C`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(i) => write!(f, "x{i}"),
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Const(v) => write!(f, "{v}"),
            Expr::Placeholder => write!(f, "C"),
            Expr::Unary(op, c) => write!(f, "{}({c})", op.name()),
            Expr::Binary(op, l, r) => write!(f, "({l} {} {r})", op.token().symbol()),
        }
    }
}

/// An expression with no real-constant leaves, plus its placeholder count
/// (the number of constants a later fitting stage must supply).
#[derive(Debug, Clone, PartialEq)]
pub struct Skeleton {
    expr: Expr,
    placeholder_count: usize,
}

impl Skeleton {
    pub fn new(expr: Expr) -> Result<Skeleton, ExprError> {
        if expr.contains_const() {
            return Err(ExprError::ConstantInSkeleton);
        }
        let placeholder_count = expr.placeholder_count();
        Ok(Skeleton {
            expr,
            placeholder_count,
        })
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn placeholder_count(&self) -> usize {
        self.placeholder_count
    }

    /// Token count of the skeleton's prefix serialization.
    pub fn len(&self) -> usize {
        self.expr.node_count()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Binds placeholder leaves to `values` in pre-order.
    pub fn instantiate(&self, values: &[f64]) -> Result<Expr, ExprError> {
        if values.len() != self.placeholder_count {
            return Err(ExprError::ConstantCountMismatch {
                expected: self.placeholder_count,
                placeholders: self.placeholder_count,
                got: values.len(),
            });
        }
        fn bind(e: &Expr, values: &[f64], next: &mut usize) -> Expr {
            match e {
                Expr::Placeholder => {
                    let v = values[*next];
                    *next += 1;
                    Expr::constant(v)
                }
                Expr::Unary(op, c) => Expr::unary(*op, bind(c, values, next)),
                Expr::Binary(op, l, r) => {
                    let left = bind(l, values, next);
                    let right = bind(r, values, next);
                    Expr::binary(*op, left, right)
                }
                other => other.clone(),
            }
        }
        let mut next = 0;
        let bound = bind(&self.expr, values, &mut next);
        debug_assert_eq!(next, self.placeholder_count);
        Ok(bound)
    }
}

impl fmt::Display for Skeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.fmt(f)
    }
}

/// Rewrites a skeleton into the parameterized form used for constant fitting:
/// every unary operator gains a multiplicative placeholder and every variable
/// occurrence `v` becomes `C*v + C`. `^` is exempt, and placeholders already
/// present are left intact.
pub fn place_constants(skel: &Skeleton) -> Skeleton {
    fn rewrite(e: &Expr) -> Expr {
        match e {
            Expr::Var(i) => Expr::add(Expr::mul(Expr::Placeholder, Expr::Var(*i)), Expr::Placeholder),
            Expr::Unary(op, c) => Expr::mul(Expr::Placeholder, Expr::unary(*op, rewrite(c))),
            Expr::Binary(op, l, r) => Expr::binary(*op, rewrite(l), rewrite(r)),
            other => other.clone(),
        }
    }
    Skeleton::new(rewrite(skel.expr())).expect("rewrite introduces no constants")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sin(e: Expr) -> Expr {
        Expr::unary(UnaryOp::Sin, e)
    }

    #[test]
    fn evaluate_basics() {
        let e = sin(Expr::var(1));
        assert_eq!(e.evaluate(&[0.0, 0.0, 0.0], &[]), 0.0);

        let e = Expr::unary(UnaryOp::Ln, Expr::var(1));
        assert!(e.evaluate(&[-1.0, 0.0, 0.0], &[]).is_nan());

        let e = Expr::mul(Expr::Placeholder, Expr::var(1));
        assert_eq!(e.evaluate(&[0.5, 0.0, 0.0], &[2.0]), 1.0);
    }

    #[test]
    fn evaluate_domain_violations() {
        let point = [0.0; 3];
        assert!(Expr::unary(UnaryOp::Sqrt, Expr::int(-1))
            .evaluate(&point, &[])
            .is_nan());
        assert!(Expr::unary(UnaryOp::Arcsin, Expr::int(2))
            .evaluate(&point, &[])
            .is_nan());
        assert!(Expr::div(Expr::int(1), Expr::int(0))
            .evaluate(&point, &[])
            .is_infinite());
        // Real power: negative base with fractional exponent.
        assert!(Expr::pow(Expr::int(-2), Expr::constant(0.5))
            .evaluate(&point, &[])
            .is_nan());
        assert_eq!(Expr::pow(Expr::int(-2), Expr::int(2)).evaluate(&point, &[]), 4.0);
    }

    #[test]
    fn skeletonize_replaces_real_constants_only() {
        // 4.2*sin(0.3*x1) + x2  ->  C*sin(C*x1) + x2
        let e = Expr::add(
            Expr::mul(Expr::constant(4.2), sin(Expr::mul(Expr::constant(0.3), Expr::var(1)))),
            Expr::var(2),
        );
        let skel = e.skeletonize();
        let want = Expr::add(
            Expr::mul(Expr::Placeholder, sin(Expr::mul(Expr::Placeholder, Expr::var(1)))),
            Expr::var(2),
        );
        assert_eq!(skel.expr(), &want);
        assert_eq!(skel.placeholder_count(), 2);

        let e = Expr::add(Expr::var(1), Expr::var(2));
        assert_eq!(e.skeletonize().placeholder_count(), 0);

        // Integer literals are vocabulary tokens, not constants.
        let e = Expr::mul(Expr::int(2), Expr::var(1));
        let skel = e.skeletonize();
        assert_eq!(skel.expr(), &e);
        assert_eq!(skel.placeholder_count(), 0);
    }

    #[test]
    fn skeletonize_is_idempotent() {
        let e = Expr::mul(Expr::constant(1.5), sin(Expr::constant(2.5)));
        let once = e.skeletonize();
        let twice = once.expr().skeletonize();
        assert_eq!(once, twice);
    }

    #[test]
    fn place_constants_rules() {
        // sin(x1) -> C*sin(C*x1 + C)
        let skel = Skeleton::new(sin(Expr::var(1))).unwrap();
        let placed = place_constants(&skel);
        let want = Expr::mul(
            Expr::Placeholder,
            sin(Expr::add(
                Expr::mul(Expr::Placeholder, Expr::var(1)),
                Expr::Placeholder,
            )),
        );
        assert_eq!(placed.expr(), &want);
        assert_eq!(placed.placeholder_count(), 3);

        // x1 -> C*x1 + C
        let skel = Skeleton::new(Expr::var(1)).unwrap();
        let placed = place_constants(&skel);
        let want = Expr::add(Expr::mul(Expr::Placeholder, Expr::var(1)), Expr::Placeholder);
        assert_eq!(placed.expr(), &want);

        // ^ is exempt: Pow(x1, 2) -> Pow(C*x1 + C, 2)
        let skel = Skeleton::new(Expr::pow(Expr::var(1), Expr::int(2))).unwrap();
        let placed = place_constants(&skel);
        let want = Expr::pow(
            Expr::add(Expr::mul(Expr::Placeholder, Expr::var(1)), Expr::Placeholder),
            Expr::int(2),
        );
        assert_eq!(placed.expr(), &want);
    }

    #[test]
    fn place_constants_count_formula() {
        // Placeholders added = #unary nodes + 2 * #variable occurrences.
        let e = Expr::add(
            sin(Expr::mul(Expr::var(1), Expr::var(2))),
            Expr::unary(UnaryOp::Exp, Expr::var(1)),
        );
        let skel = Skeleton::new(e).unwrap();
        let placed = place_constants(&skel);
        assert_eq!(placed.placeholder_count(), 2 + 2 * 3);
    }

    #[test]
    fn instantiate_binds_preorder() {
        let skel = Skeleton::new(Expr::mul(Expr::Placeholder, Expr::var(1))).unwrap();
        let e = skel.instantiate(&[3.5]).unwrap();
        assert_eq!(e, Expr::mul(Expr::constant(3.5), Expr::var(1)));

        let skel = Skeleton::new(Expr::add(Expr::var(1), Expr::var(2))).unwrap();
        assert_eq!(skel.instantiate(&[]).unwrap(), *skel.expr());

        // C*sin(C*x1) with [4.2, 0.3] -> 4.2*sin(0.3*x1)
        let skel =
            Skeleton::new(Expr::mul(Expr::Placeholder, sin(Expr::mul(Expr::Placeholder, Expr::var(1)))))
                .unwrap();
        let e = skel.instantiate(&[4.2, 0.3]).unwrap();
        let want = Expr::mul(Expr::constant(4.2), sin(Expr::mul(Expr::constant(0.3), Expr::var(1))));
        assert_eq!(e, want);

        assert!(matches!(
            skel.instantiate(&[1.0]),
            Err(ExprError::ConstantCountMismatch { .. })
        ));
    }

    #[test]
    fn infix_rendering() {
        assert_eq!(Expr::add(Expr::var(1), Expr::var(2)).to_string(), "(x1 + x2)");
        assert_eq!(Expr::mul(Expr::Placeholder, Expr::var(1)).to_string(), "(C * x1)");
        assert_eq!(Expr::pow(Expr::var(1), Expr::int(2)).to_string(), "(x1 ^ 2)");
        assert_eq!(sin(Expr::var(1)).to_string(), "sin(x1)");
    }

    #[test]
    fn skeleton_length_is_prefix_length() {
        let skel = Skeleton::new(Expr::var(1)).unwrap();
        assert_eq!(skel.len(), 1);
        let skel = Skeleton::new(Expr::add(Expr::var(1), Expr::var(2))).unwrap();
        assert_eq!(skel.len(), 3);
        let skel = Skeleton::new(Expr::add(
            Expr::mul(Expr::Placeholder, sin(Expr::mul(Expr::Placeholder, Expr::var(1)))),
            Expr::var(2),
        ))
        .unwrap();
        assert_eq!(skel.len(), 8);
    }
}
