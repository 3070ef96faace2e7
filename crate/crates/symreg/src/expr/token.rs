//! The fixed 33-symbol vocabulary shared by expressions, training targets,
//! and the decoder output layer.
//!
//! Ids are frozen: changing them invalidates every pool file and checkpoint.

/// Total vocabulary size, padding included.
pub const VOCAB_SIZE: usize = 33;

pub const PAD: u8 = 0;
pub const SOS: u8 = 1;
pub const EOS: u8 = 2;
pub const PLACEHOLDER: u8 = 6;

/// What a token id stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Padding,
    Sos,
    Eos,
    Variable,
    Placeholder,
    UnaryOp,
    BinaryOp,
    IntegerLiteral,
}

/// A validated vocabulary token (id in `0..=32`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Token(u8);

impl Token {
    pub fn new(id: u8) -> Option<Token> {
        ((id as usize) < VOCAB_SIZE).then_some(Token(id))
    }

    pub fn id(self) -> u8 {
        self.0
    }

    pub fn kind(self) -> TokenKind {
        match self.0 {
            0 => TokenKind::Padding,
            1 => TokenKind::Sos,
            2 => TokenKind::Eos,
            3..=5 => TokenKind::Variable,
            6 => TokenKind::Placeholder,
            8 | 14 | 17 | 18 => TokenKind::BinaryOp,
            7 | 9..=13 | 15 | 16 | 19..=23 => TokenKind::UnaryOp,
            24..=32 => TokenKind::IntegerLiteral,
            _ => unreachable!("token id out of range"),
        }
    }

    /// Number of children the symbol takes as an expression node (0 for leaves
    /// and framing symbols).
    pub fn arity(self) -> usize {
        match self.kind() {
            TokenKind::BinaryOp => 2,
            TokenKind::UnaryOp => 1,
            _ => 0,
        }
    }

    /// Variable index (1..=3) for variable tokens.
    pub fn variable_index(self) -> Option<u8> {
        matches!(self.kind(), TokenKind::Variable).then(|| self.0 - 2)
    }

    /// Literal value for integer tokens (ids 24..=32 encode -3..=5).
    pub fn integer_value(self) -> Option<i8> {
        matches!(self.kind(), TokenKind::IntegerLiteral).then(|| self.0 as i8 - 27)
    }

    /// Token id for an integer literal, when the value is in the vocabulary.
    pub fn from_integer(value: i8) -> Option<Token> {
        (-3..=5).contains(&value).then(|| Token((value + 27) as u8))
    }

    pub fn from_variable(index: u8) -> Option<Token> {
        (1..=3).contains(&index).then(|| Token(index + 2))
    }

    /// Human-readable symbol name, matching the infix renderer.
    pub fn symbol(self) -> &'static str {
        match self.0 {
            0 => "<pad>",
            1 => "<sos>",
            2 => "<eos>",
            3 => "x1",
            4 => "x2",
            5 => "x3",
            6 => "C",
            7 => "arccos",
            8 => "+",
            9 => "arcsin",
            10 => "arctan",
            11 => "cos",
            12 => "cosh",
            13 => "coth",
            14 => "/",
            15 => "exp",
            16 => "ln",
            17 => "*",
            18 => "^",
            19 => "sin",
            20 => "sinh",
            21 => "sqrt",
            22 => "tan",
            23 => "tanh",
            24 => "-3",
            25 => "-2",
            26 => "-1",
            27 => "0",
            28 => "1",
            29 => "2",
            30 => "3",
            31 => "4",
            32 => "5",
            _ => unreachable!(),
        }
    }
}
