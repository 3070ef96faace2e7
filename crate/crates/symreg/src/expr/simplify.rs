//! Bounded expression simplification.
//!
//! A fixed, terminating rewrite set applied to a fixed point:
//!
//! * integer constant folding (only when the result stays inside the
//!   vocabulary range `-3..=5`), and real-constant folding;
//! * the identities `x+0`, `x*1`, `x*0 -> 0`, `x + (-1*x) -> 0`, `x/x -> 1`,
//!   `x/1`, `x^1`, `x^0 -> 1`, and double negation;
//! * flattening of nested `+`/`*` chains into a canonical operand order.
//!
//! `x/x -> 1` and `x*0 -> 0` are symbolic conventions: they ignore the
//! measure-zero singular points where the left-hand side is undefined, which
//! matches how computer-algebra systems normalize. Numeric equivalence holds
//! everywhere both sides evaluate to finite values.

use std::cmp::Ordering;

use super::tree::{BinaryOp, Expr, UnaryOp};

const MAX_PASSES: usize = 64;

/// Simplifies to a fixed point of the rewrite set.
pub fn simplify(expr: &Expr) -> Expr {
    let mut current = expr.clone();
    for _ in 0..MAX_PASSES {
        let next = simplify_pass(&current);
        if next == current {
            return next;
        }
        current = next;
    }
    debug_assert!(false, "simplify did not reach a fixed point");
    current
}

fn simplify_pass(expr: &Expr) -> Expr {
    match expr {
        Expr::Unary(op, c) => {
            let child = simplify_pass(c);
            if let Expr::Const(v) = child {
                let folded = op.apply(v);
                if folded.is_finite() {
                    return Expr::Const(folded);
                }
            }
            Expr::unary(*op, child)
        }
        Expr::Binary(op, l, r) => {
            let left = simplify_pass(l);
            let right = simplify_pass(r);
            match op {
                BinaryOp::Add | BinaryOp::Mul => {
                    rebuild_chain(*op, flatten(*op, Expr::binary(*op, left, right)))
                }
                BinaryOp::Div => simplify_div(left, right),
                BinaryOp::Pow => simplify_pow(left, right),
            }
        }
        leaf => leaf.clone(),
    }
}

fn numeric_value(e: &Expr) -> Option<f64> {
    match e {
        Expr::Int(n) => Some(*n as f64),
        Expr::Const(v) => Some(*v),
        _ => None,
    }
}

fn is_zero(e: &Expr) -> bool {
    numeric_value(e) == Some(0.0)
}

fn is_one(e: &Expr) -> bool {
    numeric_value(e) == Some(1.0)
}

fn in_int_range(v: f64) -> bool {
    v.fract() == 0.0 && (-3.0..=5.0).contains(&v)
}

fn simplify_div(left: Expr, right: Expr) -> Expr {
    if left == right {
        // Symbolic convention: ignores the singular set of the denominator.
        return Expr::Int(1);
    }
    if is_one(&right) {
        return left;
    }
    if let (Some(a), Some(b)) = (numeric_value(&left), numeric_value(&right)) {
        let q = a / b;
        if matches!((&left, &right), (Expr::Int(_), Expr::Int(_))) {
            if b != 0.0 && in_int_range(q) {
                return Expr::Int(q as i8);
            }
        } else if q.is_finite() {
            return Expr::Const(q);
        }
    }
    Expr::div(left, right)
}

fn simplify_pow(left: Expr, right: Expr) -> Expr {
    if is_one(&right) {
        return left;
    }
    if is_zero(&right) {
        return Expr::Int(1);
    }
    if let (Some(a), Some(b)) = (numeric_value(&left), numeric_value(&right)) {
        let p = a.powf(b);
        if matches!((&left, &right), (Expr::Int(_), Expr::Int(_))) {
            if in_int_range(p) {
                return Expr::Int(p as i8);
            }
        } else if p.is_finite() {
            return Expr::Const(p);
        }
    }
    Expr::pow(left, right)
}

/// Collects the operand list of a nested `+` or `*` chain.
fn flatten(op: BinaryOp, e: Expr) -> Vec<Expr> {
    let mut out = Vec::new();
    fn walk(op: BinaryOp, e: Expr, out: &mut Vec<Expr>) {
        match e {
            Expr::Binary(o, l, r) if o == op => {
                walk(op, (*l).clone(), out);
                walk(op, (*r).clone(), out);
            }
            other => out.push(other),
        }
    }
    walk(op, e, &mut out);
    out
}

fn rebuild_chain(op: BinaryOp, mut operands: Vec<Expr>) -> Expr {
    match op {
        BinaryOp::Add => {
            operands.retain(|e| !is_zero(e));
            cancel_negated_pairs(&mut operands);
            fold_numerics(op, &mut operands);
            operands.retain(|e| !is_zero(e));
        }
        BinaryOp::Mul => {
            if operands.iter().any(is_zero) {
                // Symbolic convention for x*0.
                return Expr::Int(0);
            }
            operands.retain(|e| !is_one(e));
            fold_numerics(op, &mut operands);
            operands.retain(|e| !is_one(e));
        }
        _ => unreachable!("only + and * flatten"),
    }
    if operands.is_empty() {
        return match op {
            BinaryOp::Add => Expr::Int(0),
            _ => Expr::Int(1),
        };
    }
    operands.sort_by(|a, b| chain_order(op, a, b));
    let mut iter = operands.into_iter();
    let first = iter.next().unwrap();
    iter.fold(first, |acc, e| Expr::binary(op, acc, e))
}

/// Removes `t, (-1 * t)` pairs from an additive operand list.
fn cancel_negated_pairs(operands: &mut Vec<Expr>) {
    let mut removed = vec![false; operands.len()];
    for i in 0..operands.len() {
        if removed[i] {
            continue;
        }
        let negated = match &operands[i] {
            Expr::Binary(BinaryOp::Mul, l, r) if matches!(**l, Expr::Int(-1)) => (**r).clone(),
            other => Expr::mul(Expr::Int(-1), other.clone()),
        };
        for j in 0..operands.len() {
            if i != j && !removed[j] && operands[j] == negated {
                removed[i] = true;
                removed[j] = true;
                break;
            }
        }
    }
    let mut keep = removed.iter().map(|r| !r);
    operands.retain(|_| keep.next().unwrap());
}

/// Folds the numeric operands of a chain into a single literal when exact.
fn fold_numerics(op: BinaryOp, operands: &mut Vec<Expr>) {
    let numeric: Vec<f64> = operands.iter().filter_map(numeric_value).collect();
    if numeric.len() < 2 {
        return;
    }
    let any_real = operands.iter().any(|e| matches!(e, Expr::Const(_)));
    let folded = match op {
        BinaryOp::Add => numeric.iter().sum::<f64>(),
        _ => numeric.iter().product::<f64>(),
    };
    let replacement = if any_real {
        if !folded.is_finite() {
            return;
        }
        Expr::Const(folded)
    } else if in_int_range(folded) {
        Expr::Int(folded as i8)
    } else {
        return;
    };
    operands.retain(|e| numeric_value(e).is_none());
    operands.push(replacement);
}

/// Canonical operand order: numbers first in products (`2*x1`), last in sums
/// (`x1 + 1`), otherwise a fixed structural order.
fn chain_order(op: BinaryOp, a: &Expr, b: &Expr) -> Ordering {
    let num_a = numeric_value(a).is_some();
    let num_b = numeric_value(b).is_some();
    let key = |is_num: bool| match op {
        BinaryOp::Mul => !is_num as u8,
        _ => is_num as u8,
    };
    key(num_a).cmp(&key(num_b)).then_with(|| structural_order(a, b))
}

fn rank(e: &Expr) -> u8 {
    match e {
        Expr::Int(_) => 0,
        Expr::Const(_) => 1,
        Expr::Placeholder => 2,
        Expr::Var(_) => 3,
        Expr::Unary(..) => 4,
        Expr::Binary(..) => 5,
    }
}

fn unary_rank(op: UnaryOp) -> u8 {
    op.token().id()
}

fn binary_rank(op: BinaryOp) -> u8 {
    op.token().id()
}

/// A deterministic total order on trees (constants are finite, so float
/// comparison is total here).
pub fn structural_order(a: &Expr, b: &Expr) -> Ordering {
    rank(a).cmp(&rank(b)).then_with(|| match (a, b) {
        (Expr::Int(x), Expr::Int(y)) => x.cmp(y),
        (Expr::Const(x), Expr::Const(y)) => x.partial_cmp(y).unwrap_or(Ordering::Equal),
        (Expr::Placeholder, Expr::Placeholder) => Ordering::Equal,
        (Expr::Var(x), Expr::Var(y)) => x.cmp(y),
        (Expr::Unary(op_a, ca), Expr::Unary(op_b, cb)) => unary_rank(*op_a)
            .cmp(&unary_rank(*op_b))
            .then_with(|| structural_order(ca, cb)),
        (Expr::Binary(op_a, la, ra), Expr::Binary(op_b, lb, rb)) => binary_rank(*op_a)
            .cmp(&binary_rank(*op_b))
            .then_with(|| structural_order(la, lb))
            .then_with(|| structural_order(ra, rb)),
        _ => unreachable!("rank dispatch"),
    })
}

/// Replaces real-constant leaves whose value is an exact vocabulary integer
/// by the integer literal. Used when materializing benchmark records so that
/// all-ones instantiations simplify back to constant-free expressions.
pub fn snap_integer_constants(expr: &Expr) -> Expr {
    match expr {
        Expr::Const(v) if in_int_range(*v) => Expr::Int(*v as i8),
        Expr::Unary(op, c) => Expr::unary(*op, snap_integer_constants(c)),
        Expr::Binary(op, l, r) => {
            Expr::binary(*op, snap_integer_constants(l), snap_integer_constants(r))
        }
        other => other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listed_identities() {
        let x = Expr::var(1);
        assert_eq!(simplify(&Expr::add(x.clone(), Expr::int(0))), x);
        assert_eq!(simplify(&Expr::mul(x.clone(), Expr::int(1))), x);
        assert_eq!(simplify(&Expr::mul(x.clone(), Expr::int(0))), Expr::Int(0));
        assert_eq!(simplify(&Expr::sub(x.clone(), x.clone())), Expr::Int(0));
        assert_eq!(simplify(&Expr::div(x.clone(), x.clone())), Expr::Int(1));
        assert_eq!(simplify(&Expr::pow(x.clone(), Expr::int(1))), x);
        assert_eq!(simplify(&Expr::pow(x.clone(), Expr::int(0))), Expr::Int(1));
        assert_eq!(simplify(&Expr::neg(Expr::neg(x.clone()))), x);
    }

    #[test]
    fn integer_folding() {
        // (2 + 3) * x1 -> 5 * x1
        let e = Expr::mul(Expr::add(Expr::int(2), Expr::int(3)), Expr::var(1));
        assert_eq!(simplify(&e), Expr::mul(Expr::Int(5), Expr::var(1)));

        // Out-of-range results stay unfolded.
        let e = Expr::add(Expr::int(4), Expr::int(5));
        assert_eq!(simplify(&e).node_count(), 3);

        assert_eq!(simplify(&Expr::div(Expr::int(4), Expr::int(2))), Expr::Int(2));
        assert_eq!(
            simplify(&Expr::pow(Expr::int(2), Expr::int(2))),
            Expr::Int(4)
        );
    }

    #[test]
    fn real_constant_folding() {
        let e = Expr::add(Expr::constant(2.5), Expr::constant(1.5));
        assert_eq!(simplify(&e), Expr::Const(4.0));
        let e = Expr::unary(UnaryOp::Sqrt, Expr::constant(4.0));
        assert_eq!(simplify(&e), Expr::Const(2.0));
        // Folding that would produce a non-finite value is skipped.
        let e = Expr::unary(UnaryOp::Ln, Expr::constant(0.0));
        assert_eq!(simplify(&e).node_count(), 2);
    }

    #[test]
    fn canonical_ordering() {
        // Sums put numbers last, products put them first.
        let e = Expr::add(Expr::int(1), Expr::var(1));
        assert_eq!(simplify(&e).to_string(), "(x1 + 1)");
        let e = Expr::mul(Expr::var(1), Expr::int(2));
        assert_eq!(simplify(&e).to_string(), "(2 * x1)");
        // Commuted operands normalize to the same tree.
        let a = simplify(&Expr::add(Expr::var(2), Expr::var(1)));
        let b = simplify(&Expr::add(Expr::var(1), Expr::var(2)));
        assert_eq!(a, b);
    }

    #[test]
    fn numeric_equivalence_on_random_points() {
        // Folding oracle for (2 + 3) * x1: both sides agree on random points.
        let e = Expr::mul(Expr::add(Expr::int(2), Expr::int(3)), Expr::var(1));
        let s = simplify(&e);
        let mut x = 0.37;
        for _ in 0..10 {
            x = (x * 997.0).sin() * 10.0;
            let p = [x, 0.0, 0.0];
            assert_eq!(e.evaluate(&p, &[]), s.evaluate(&p, &[]));
        }
    }

    #[test]
    fn snap_integer_constants_recovers_literals() {
        let e = Expr::add(Expr::mul(Expr::constant(1.0), Expr::var(1)), Expr::constant(1.0));
        let snapped = simplify(&snap_integer_constants(&e));
        assert_eq!(snapped.to_string(), "(x1 + 1)");
        assert!(!snapped.contains_const());
        // Non-integral values survive.
        let e = Expr::mul(Expr::constant(2.5), Expr::var(1));
        assert_eq!(snap_integer_constants(&e), e);
    }
}
