//! Mini C-like language: parsing, control-flow graph, LTS extraction.
//!
//! ```text
//! int x, y;                 // declarations, all of type int
//! L0: while (x > 0) {       // labels name program points
//! L1:   y = x;
//!       skip;
//!     }
//!     assert(y != 0);
//! L4:                       // a trailing label names the exit point
//! ```
//!
//! A file holds declarations followed either by a bare statement list or by
//! one or more `proc name { ... }` blocks. See `GRAMMAR.md` at the repository
//! root for the full grammar.

mod ast;
mod cfg;
mod lexer;
mod parser;

use thiserror::Error;

pub use ast::{BinOp, Expr, Procedure, Program, Statement, UnOp};
pub use cfg::{build_cfg, cfg_to_lts, ActionKind, Cfg, CfgEdge, NodeId, RawAction};
pub use parser::parse_program;

use crate::lts::Lts;

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl std::fmt::Display for Pos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrontendError {
    #[error("{pos}: syntax error: {message}")]
    Syntax { pos: Pos, message: String },
    #[error("{pos}: variable `{name}` is declared twice")]
    DuplicateDeclaration { pos: Pos, name: String },
    #[error("{pos}: undeclared variable `{name}`")]
    UndeclaredVariable { pos: Pos, name: String },
    #[error("{pos}: label `{name}` is defined twice")]
    DuplicateLabel { pos: Pos, name: String },
    #[error("{pos}: procedure `{name}` is defined twice")]
    DuplicateProcedure { pos: Pos, name: String },
}

/// Source text straight to LTS.
pub fn compile(source: &str) -> Result<Lts, FrontendError> {
    let program = parse_program(source)?;
    Ok(cfg_to_lts(&build_cfg(&program)))
}
