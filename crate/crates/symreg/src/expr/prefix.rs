//! Prefix (pre-order) serialization of expression trees, the canonical
//! machine form for pool files, training targets, and decoded beams.

use thiserror::Error;

use super::token::{Token, TokenKind, PLACEHOLDER};
use super::tree::{BinaryOp, Expr, UnaryOp};

/// Pre-order token sequence of a tree, without sos/eos framing.
///
/// Real-constant leaves serialize as the placeholder token: the prefix form
/// is skeleton vocabulary, constants are data.
pub fn to_prefix(expr: &Expr) -> Vec<Token> {
    let mut out = Vec::with_capacity(expr.node_count());
    fn walk(e: &Expr, out: &mut Vec<Token>) {
        match e {
            Expr::Var(i) => out.push(Token::from_variable(*i).unwrap()),
            Expr::Int(n) => out.push(Token::from_integer(*n).unwrap()),
            Expr::Const(_) | Expr::Placeholder => out.push(Token::new(PLACEHOLDER).unwrap()),
            Expr::Unary(op, c) => {
                out.push(op.token());
                walk(c, out);
            }
            Expr::Binary(op, l, r) => {
                out.push(op.token());
                walk(l, out);
                walk(r, out);
            }
        }
    }
    walk(expr, &mut out);
    out
}

pub fn to_prefix_ids(expr: &Expr) -> Vec<u8> {
    to_prefix(expr).iter().map(|t| t.id()).collect()
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PrefixError {
    #[error("sequence ended while an operator at position {pos} still needed children")]
    UnexpectedEnd { pos: usize },
    #[error("{count} trailing tokens after a complete expression")]
    TrailingTokens { count: usize },
    #[error("token id {id} at position {pos} is not an expression symbol")]
    NotExpressionToken { id: u8, pos: usize },
    #[error("empty token sequence")]
    Empty,
}

/// Parses a prefix token sequence back into a tree. The whole sequence must
/// be consumed exactly; anything else marks the sequence as malformed (the
/// signal used to discard invalid beam candidates).
pub fn parse_prefix(tokens: &[Token]) -> Result<Expr, PrefixError> {
    if tokens.is_empty() {
        return Err(PrefixError::Empty);
    }
    let mut pos = 0usize;
    let expr = parse_at(tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(PrefixError::TrailingTokens {
            count: tokens.len() - pos,
        });
    }
    Ok(expr)
}

/// Convenience wrapper over raw ids; unknown ids are malformed.
pub fn parse_prefix_ids(ids: &[u8]) -> Result<Expr, PrefixError> {
    let tokens: Vec<Token> = ids
        .iter()
        .enumerate()
        .map(|(pos, &id)| Token::new(id).ok_or(PrefixError::NotExpressionToken { id, pos }))
        .collect::<Result<_, _>>()?;
    parse_prefix(&tokens)
}

fn parse_at(tokens: &[Token], pos: &mut usize) -> Result<Expr, PrefixError> {
    let Some(&t) = tokens.get(*pos) else {
        return Err(PrefixError::UnexpectedEnd { pos: *pos });
    };
    let here = *pos;
    *pos += 1;
    match t.kind() {
        TokenKind::Variable => Ok(Expr::Var(t.variable_index().unwrap())),
        TokenKind::IntegerLiteral => Ok(Expr::Int(t.integer_value().unwrap())),
        TokenKind::Placeholder => Ok(Expr::Placeholder),
        TokenKind::UnaryOp => {
            let child = parse_at(tokens, pos).map_err(|e| deepen(e, here))?;
            Ok(Expr::unary(UnaryOp::from_token(t).unwrap(), child))
        }
        TokenKind::BinaryOp => {
            let left = parse_at(tokens, pos).map_err(|e| deepen(e, here))?;
            let right = parse_at(tokens, pos).map_err(|e| deepen(e, here))?;
            Ok(Expr::binary(BinaryOp::from_token(t).unwrap(), left, right))
        }
        TokenKind::Padding | TokenKind::Sos | TokenKind::Eos => {
            Err(PrefixError::NotExpressionToken {
                id: t.id(),
                pos: here,
            })
        }
    }
}

// Attribute an underflow to the outermost operator that was left incomplete.
fn deepen(err: PrefixError, op_pos: usize) -> PrefixError {
    match err {
        PrefixError::UnexpectedEnd { .. } => PrefixError::UnexpectedEnd { pos: op_pos },
        other => other,
    }
}
