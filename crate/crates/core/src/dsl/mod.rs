//! A small expression language over scalars, kets, bras and operators.
//!
//! ```text
//! expr  := add
//! add   := mul (('+' | '-') mul)*
//! mul   := unary ('*' unary)*
//! unary := '-' unary | atom
//! atom  := NUMBER [IMAG_UNIT] | IMAG_UNIT | IDENT | 'adj' '(' expr ')'
//!        | '[' expr ',' expr ',' expr ']' | '<' expr '|' expr '>' | '(' expr ')'
//! ```
//!
//! `-a*b` parses as `(-a)*b`. Ternary brackets must be homogeneous: all
//! kets, all operators or all bras.

pub mod eval;
pub mod lexer;
pub mod parser;
pub mod verify;

pub use eval::{eval, eval_str, Kind, Value};
pub use lexer::{tokenize, Pos, Token, TokenKind};
pub use parser::{parse, Expr, Node};
pub use verify::{
    load_corpus, parse_corpus, parse_var_specs, run_corpus, verify_identity, verify_named, Constraint, CorpusEntry,
    CorpusOutcome, Expect, VarKind, VarSpec,
};
