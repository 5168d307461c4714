use std::collections::{HashMap, HashSet};

use super::ast::{BinOp, Expr, Procedure, Program, Statement, UnOp};
use super::lexer::{tokenize, Tok};
use super::{FrontendError, Pos};
use crate::lts::VarId;

/// Parses a mini-language source file. Variables must be declared before
/// use; labels and procedure names must be unique.
pub fn parse_program(source: &str) -> Result<Program, FrontendError> {
    let tokens = tokenize(source)?;
    let mut p = Parser {
        tokens,
        at: 0,
        declared: HashMap::new(),
        variables: Vec::new(),
        labels: HashSet::new(),
    };
    p.program()
}

struct Parser {
    tokens: Vec<(Tok, Pos)>,
    at: usize,
    declared: HashMap<String, Pos>,
    variables: Vec<VarId>,
    labels: HashSet<String>,
}

type PResult<T> = Result<T, FrontendError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].0
    }

    fn peek2(&self) -> &Tok {
        let i = (self.at + 1).min(self.tokens.len() - 1);
        &self.tokens[i].0
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> PResult<T> {
        Err(FrontendError::Syntax {
            pos: self.pos(),
            message: format!("expected {expected}, found {}", self.peek().describe()),
        })
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.error(what)
        }
    }

    fn ident(&mut self) -> PResult<(String, Pos)> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let pos = self.pos();
                self.bump();
                Ok((name, pos))
            }
            _ => self.error("an identifier"),
        }
    }

    fn program(&mut self) -> PResult<Program> {
        self.declarations()?;
        let mut procedures = Vec::new();
        if matches!(self.peek(), Tok::KwProc | Tok::KwVoid) {
            let mut names = HashSet::new();
            while *self.peek() != Tok::Eof {
                let pos = self.pos();
                let proc = self.procedure()?;
                if !names.insert(proc.name.clone()) {
                    return Err(FrontendError::DuplicateProcedure {
                        pos,
                        name: proc.name,
                    });
                }
                procedures.push(proc);
            }
        } else {
            let body = self.statements()?;
            if *self.peek() != Tok::Eof {
                return self.error("a statement");
            }
            procedures.push(Procedure {
                name: "main".to_string(),
                body,
            });
        }
        Ok(Program {
            variables: std::mem::take(&mut self.variables),
            procedures,
        })
    }

    fn declarations(&mut self) -> PResult<()> {
        while self.eat(&Tok::KwInt) {
            loop {
                let (name, pos) = self.ident()?;
                if self.declared.contains_key(&name) {
                    return Err(FrontendError::DuplicateDeclaration { pos, name });
                }
                let var = VarId::new(name.clone()).map_err(|e| FrontendError::Syntax {
                    pos,
                    message: e.to_string(),
                })?;
                self.declared.insert(name, pos);
                self.variables.push(var);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::Semi, "`;` after declaration")?;
        }
        Ok(())
    }

    fn procedure(&mut self) -> PResult<Procedure> {
        let name = if self.eat(&Tok::KwProc) {
            self.ident()?.0
        } else if self.eat(&Tok::KwVoid) {
            let name = self.ident()?.0;
            self.expect(Tok::LParen, "`(`")?;
            self.expect(Tok::RParen, "`)`")?;
            name
        } else {
            return self.error("`proc` or `void`");
        };
        self.expect(Tok::LBrace, "`{`")?;
        self.declarations()?;
        let body = self.statements()?;
        self.expect(Tok::RBrace, "`}`")?;
        Ok(Procedure { name, body })
    }

    /// Statements up to (not including) `}` or end of input.
    fn statements(&mut self) -> PResult<Vec<Statement>> {
        let mut out = Vec::new();
        while !matches!(self.peek(), Tok::RBrace | Tok::Eof) {
            self.statement(&mut out)?;
        }
        Ok(out)
    }

    fn statement(&mut self, out: &mut Vec<Statement>) -> PResult<()> {
        if let (Tok::Ident(name), Tok::Colon) = (self.peek().clone(), self.peek2()) {
            let pos = self.pos();
            self.bump();
            self.bump();
            if !self.labels.insert(name.clone()) {
                return Err(FrontendError::DuplicateLabel { pos, name });
            }
            out.push(Statement::Label(name));
            return Ok(());
        }
        match self.peek().clone() {
            Tok::Ident(_) => {
                let target = self.var_ref()?;
                self.expect(Tok::Assign, "`=`")?;
                let e = self.expr()?;
                self.expect(Tok::Semi, "`;`")?;
                out.push(Statement::Assign(target, e));
            }
            Tok::KwIf => {
                self.bump();
                let cond = self.condition()?;
                let then = self.branch()?;
                let otherwise = if self.eat(&Tok::KwElse) {
                    self.branch()?
                } else {
                    Vec::new()
                };
                out.push(Statement::If(cond, then, otherwise));
            }
            Tok::KwWhile => {
                self.bump();
                let cond = self.condition()?;
                let body = self.branch()?;
                out.push(Statement::While(cond, body));
            }
            Tok::KwAssert => {
                self.bump();
                let e = self.condition()?;
                self.expect(Tok::Semi, "`;`")?;
                out.push(Statement::Assert(e));
            }
            Tok::KwSkip => {
                self.bump();
                self.expect(Tok::Semi, "`;`")?;
                out.push(Statement::Skip);
            }
            Tok::Semi => {
                self.bump();
                out.push(Statement::Skip);
            }
            Tok::LBrace => {
                self.bump();
                let inner = self.statements()?;
                self.expect(Tok::RBrace, "`}`")?;
                out.extend(inner);
            }
            Tok::KwInt => {
                return Err(FrontendError::Syntax {
                    pos: self.pos(),
                    message: "declarations must precede statements".into(),
                })
            }
            _ => return self.error("a statement"),
        }
        Ok(())
    }

    /// `{ stmts }` or a single statement.
    fn branch(&mut self) -> PResult<Vec<Statement>> {
        if self.eat(&Tok::LBrace) {
            let body = self.statements()?;
            self.expect(Tok::RBrace, "`}`")?;
            Ok(body)
        } else {
            let mut out = Vec::new();
            self.statement(&mut out)?;
            Ok(out)
        }
    }

    fn condition(&mut self) -> PResult<Expr> {
        self.expect(Tok::LParen, "`(`")?;
        let e = self.expr()?;
        self.expect(Tok::RParen, "`)`")?;
        Ok(e)
    }

    fn var_ref(&mut self) -> PResult<VarId> {
        let (name, pos) = self.ident()?;
        if !self.declared.contains_key(&name) {
            return Err(FrontendError::UndeclaredVariable { pos, name });
        }
        Ok(VarId::new(name).expect("declared names are valid"))
    }

    fn expr(&mut self) -> PResult<Expr> {
        self.binary(0)
    }

    fn binary(&mut self, min_prec: u8) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        while let Some((op, prec)) = binop(self.peek()) {
            if prec < min_prec {
                break;
            }
            self.bump();
            let rhs = self.binary(prec + 1)?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(Expr::Unary(UnOp::Neg, Box::new(self.unary()?)))
            }
            Tok::Bang => {
                self.bump();
                Ok(Expr::Unary(UnOp::Not, Box::new(self.unary()?)))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> PResult<Expr> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Int(n))
            }
            Tok::Ident(_) => Ok(Expr::Var(self.var_ref()?)),
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => self.error("an expression"),
        }
    }
}

fn binop(tok: &Tok) -> Option<(BinOp, u8)> {
    Some(match tok {
        Tok::OrOr => (BinOp::Or, 1),
        Tok::AndAnd => (BinOp::And, 2),
        Tok::EqEq => (BinOp::Eq, 3),
        Tok::NotEq => (BinOp::Ne, 3),
        Tok::Lt => (BinOp::Lt, 4),
        Tok::Le => (BinOp::Le, 4),
        Tok::Gt => (BinOp::Gt, 4),
        Tok::Ge => (BinOp::Ge, 4),
        Tok::Plus => (BinOp::Add, 5),
        Tok::Minus => (BinOp::Sub, 5),
        Tok::Star => (BinOp::Mul, 6),
        Tok::Slash => (BinOp::Div, 6),
        Tok::Percent => (BinOp::Rem, 6),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(name: &str) -> VarId {
        VarId::new(name).unwrap()
    }

    #[test]
    fn constant_assignment_uses_no_variable() {
        let p = parse_program("int x; L0: x = 0;").unwrap();
        assert_eq!(p.variables, vec![v("x")]);
        assert_eq!(p.procedures.len(), 1);
        let body = &p.procedures[0].body;
        assert_eq!(body[0], Statement::Label("L0".into()));
        match &body[1] {
            Statement::Assign(t, e) => {
                assert_eq!(t, &v("x"));
                assert!(e.used_vars().is_empty());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn undeclared_variable() {
        let err = parse_program("int x; L0: x = z;").unwrap_err();
        assert_eq!(
            err,
            FrontendError::UndeclaredVariable {
                pos: Pos { line: 1, col: 16 },
                name: "z".into()
            }
        );
    }

    #[test]
    fn duplicate_declaration() {
        assert!(matches!(
            parse_program("int x, y;\nint x;"),
            Err(FrontendError::DuplicateDeclaration {
                pos: Pos { line: 2, col: 5 },
                ..
            })
        ));
    }

    #[test]
    fn duplicate_label() {
        assert!(matches!(
            parse_program("L0: skip; L0: skip;"),
            Err(FrontendError::DuplicateLabel { .. })
        ));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_program("int x;\nx = (1 + ;").unwrap_err();
        match err {
            FrontendError::Syntax { pos, message } => {
                assert_eq!(pos, Pos { line: 2, col: 10 });
                assert!(message.contains("expected an expression"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_program("while x > 0 { }").is_err());
        assert!(parse_program("skip; int y;").is_err());
        assert!(parse_program("proc a { skip; } proc a { }").is_err());
        assert!(parse_program("skip; }").is_err());
    }

    #[test]
    fn used_vars_of_expressions() {
        let p = parse_program("int a, b, c; a = -(b * 2) + c % b; if (!(a < c) || b == 1) skip;")
            .unwrap();
        let body = &p.procedures[0].body;
        let Statement::Assign(_, e) = &body[0] else {
            panic!()
        };
        assert_eq!(
            e.used_vars().into_iter().collect::<Vec<_>>(),
            vec![v("b"), v("c")]
        );
        let Statement::If(c, then, other) = &body[1] else {
            panic!()
        };
        assert_eq!(c.used_vars().len(), 3);
        assert_eq!(then, &vec![Statement::Skip]);
        assert!(other.is_empty());
    }

    #[test]
    fn precedence() {
        let p = parse_program("int a; a = 1 + 2 * a;").unwrap();
        let Statement::Assign(_, e) = &p.procedures[0].body[0] else {
            panic!()
        };
        assert_eq!(
            e,
            &Expr::Binary(
                BinOp::Add,
                Box::new(Expr::Int(1)),
                Box::new(Expr::Binary(
                    BinOp::Mul,
                    Box::new(Expr::Int(2)),
                    Box::new(Expr::Var(v("a")))
                ))
            )
        );
    }

    #[test]
    fn procedures_and_local_declarations() {
        let p = parse_program("int g;\nproc p1 { int l; l = g; }\nvoid p2() { g = 1; }").unwrap();
        assert_eq!(p.variables, vec![v("g"), v("l")]);
        let names: Vec<_> = p.procedures.iter().map(|p| p.name.as_str()).collect();
        assert_eq!(names, ["p1", "p2"]);
    }

    #[test]
    fn else_if_chain_and_nested_blocks() {
        let p =
            parse_program("int x; if (x) { { x = 1; } } else if (x > 1) x = 2; else x = 3; L9:")
                .unwrap();
        let body = &p.procedures[0].body;
        let Statement::If(_, then, other) = &body[0] else {
            panic!()
        };
        assert_eq!(then.len(), 1);
        assert!(matches!(other.as_slice(), [Statement::If(..)]));
        assert_eq!(body[1], Statement::Label("L9".into()));
        assert_eq!(p.labels(), vec!["L9"]);
    }
}
