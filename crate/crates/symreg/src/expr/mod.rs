//! Symbolic expressions: trees, prefix serialization, evaluation,
//! simplification, and the skeleton/placeholder machinery.

mod prefix;
mod simplify;
mod token;
mod tree;

pub use prefix::{parse_prefix, parse_prefix_ids, to_prefix, to_prefix_ids, PrefixError};
pub use simplify::{simplify, snap_integer_constants, structural_order};
pub use token::{Token, TokenKind, EOS, PAD, PLACEHOLDER, SOS, VOCAB_SIZE};
pub use tree::{place_constants, BinaryOp, Expr, ExprError, Skeleton, UnaryOp};
