use std::collections::BTreeSet;

use crate::lts::VarId;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    /// Declared variables, in declaration order.
    pub variables: Vec<VarId>,
    pub procedures: Vec<Procedure>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Procedure {
    pub name: String,
    pub body: Vec<Statement>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    Assign(VarId, Expr),
    If(Expr, Vec<Statement>, Vec<Statement>),
    While(Expr, Vec<Statement>),
    Assert(Expr),
    Skip,
    /// Names the program point of the statement that follows it.
    Label(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnOp {
    Neg,
    Not,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    And,
    Or,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    Var(VarId),
    Unary(UnOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    /// Variables occurring syntactically in the expression.
    pub fn used_vars(&self) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<VarId>) {
        match self {
            Expr::Int(_) => {}
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Unary(_, e) => e.collect_vars(out),
            Expr::Binary(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

impl Program {
    pub fn labels(&self) -> Vec<&str> {
        fn walk<'a>(stmts: &'a [Statement], out: &mut Vec<&'a str>) {
            for s in stmts {
                match s {
                    Statement::Label(l) => out.push(l),
                    Statement::If(_, t, e) => {
                        walk(t, out);
                        walk(e, out);
                    }
                    Statement::While(_, b) => walk(b, out),
                    _ => {}
                }
            }
        }
        let mut out = Vec::new();
        for p in &self.procedures {
            walk(&p.body, &mut out);
        }
        out
    }
}
