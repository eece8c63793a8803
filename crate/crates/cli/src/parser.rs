//! Recursive-descent parser. A syntax error skips to the next `;` and
//! parsing resumes there, so one pass reports every broken statement.

use crate::ast::*;
use crate::diag::{Diagnostic, Span};
use crate::lexer::{lex, Tok, Token};

/// Parse a whole session. The session is returned even when diagnostics
/// were produced; it then holds only the statements that parsed.
pub fn parse_session(src: &str) -> (Session, Vec<Diagnostic>) {
    let (toks, mut diags) = lex(src);
    let mut p = Parser { toks, pos: 0 };
    let mut stmts = Vec::new();
    while !p.at(&Tok::Eof) {
        match p.statement() {
            Ok(s) => stmts.push(s),
            Err(d) => {
                diags.push(d);
                p.recover();
            }
        }
    }
    diags.sort_by_key(|d| d.span.start);
    (Session { stmts }, diags)
}

type PResult<T> = Result<T, Diagnostic>;

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

fn sym(t: Tok) -> String {
    format!("`{}`", t.symbol())
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn at(&self, t: &Tok) -> bool {
        &self.peek().tok == t
    }

    fn at_word(&self, w: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == w)
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: Vec<String>) -> Diagnostic {
        let t = self.peek();
        Diagnostic::expected(t.span, &t.tok.describe(), expected)
    }

    fn eat(&mut self, t: &Tok) -> Option<Span> {
        if self.at(t) {
            Some(self.bump().span)
        } else {
            None
        }
    }

    fn expect(&mut self, t: Tok) -> PResult<Span> {
        match self.eat(&t) {
            Some(s) => Ok(s),
            None => Err(self.error(vec![sym(t)])),
        }
    }

    fn expect_word(&mut self, w: &str) -> PResult<Span> {
        if self.at_word(w) {
            Ok(self.bump().span)
        } else {
            Err(self.error(vec![format!("`{w}`")]))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<Ident> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let name = s.clone();
                let span = self.bump().span;
                Ok(Ident { name, span })
            }
            _ => Err(self.error(vec![what.to_string()])),
        }
    }

    fn int(&mut self) -> PResult<(u64, Span)> {
        match &self.peek().tok {
            Tok::Int(s) => {
                let t = self.peek().clone();
                let v = s
                    .parse::<u64>()
                    .map_err(|_| Diagnostic::new(t.span, format!("integer `{s}` is too large")))?;
                self.bump();
                Ok((v, t.span))
            }
            _ => Err(self.error(vec!["integer".into()])),
        }
    }

    /// Skip past the next `;` (or to the end).
    fn recover(&mut self) {
        while !self.at(&Tok::Eof) {
            if self.bump().tok == Tok::Semi {
                return;
            }
        }
    }

    fn statement(&mut self) -> PResult<Stmt> {
        let start = self.peek().span;
        let word = match &self.peek().tok {
            Tok::Ident(w) if DEFINERS.contains(&w.as_str()) || VERBS.contains(&w.as_str()) => {
                w.clone()
            }
            _ => return Err(self.error(vec!["a definition".into(), "a command".into()])),
        };
        self.bump();
        let kind = match word.as_str() {
            "ring" => self.ring()?,
            "localize" => self.localize()?,
            "hom" => self.hom()?,
            "module" => self.module()?,
            "tower" => self.tower()?,
            verb => StmtKind::Command(self.command(verb)?),
        };
        let end = self.expect(Tok::Semi)?;
        Ok(Stmt {
            kind,
            span: start.to(end),
        })
    }

    fn field(&mut self) -> PResult<FieldSpec> {
        if self.at_word("QQ") {
            self.bump();
            return Ok(FieldSpec::Rational);
        }
        if self.at_word("Fp") {
            self.bump();
            self.expect(Tok::LParen)?;
            let (p, _) = self.int()?;
            self.expect(Tok::RParen)?;
            return Ok(FieldSpec::Prime(p));
        }
        Err(self.error(vec!["`QQ`".into(), "`Fp`".into()]))
    }

    fn ring(&mut self) -> PResult<StmtKind> {
        let name = self.ident("a ring name")?;
        self.expect(Tok::Eq)?;
        let field = self.field()?;
        self.expect(Tok::LBracket)?;
        let mut vars = Vec::new();
        if self.eat(&Tok::RBracket).is_none() {
            loop {
                vars.push(self.ident("a variable name")?);
                if self.eat(&Tok::Comma).is_some() {
                    continue;
                }
                if self.eat(&Tok::RBracket).is_some() {
                    break;
                }
                return Err(self.error(vec![sym(Tok::RBracket), sym(Tok::Comma)]));
            }
        }
        let relations = if self.eat(&Tok::Slash).is_some() {
            self.expect(Tok::LParen)?;
            Some(self.expr_list(Tok::RParen)?)
        } else {
            None
        };
        Ok(StmtKind::Ring {
            name,
            field,
            vars,
            relations,
        })
    }

    fn localize(&mut self) -> PResult<StmtKind> {
        let name = self.ident("a ring name")?;
        self.expect(Tok::Eq)?;
        let base = self.ident("a ring name")?;
        self.expect(Tok::LBracket)?;
        match &self.peek().tok {
            Tok::Int(s) if s == "1" => {
                self.bump();
            }
            _ => return Err(self.error(vec!["`1`".into()])),
        }
        self.expect(Tok::Slash)?;
        let element = self.expr()?;
        self.expect(Tok::RBracket)?;
        Ok(StmtKind::Localize {
            name,
            base,
            element,
        })
    }

    fn hom(&mut self) -> PResult<StmtKind> {
        let name = self.ident("a map name")?;
        self.expect(Tok::Colon)?;
        let source = self.ident("a ring name")?;
        self.expect(Tok::Arrow)?;
        let target = self.ident("a ring name")?;
        self.expect(Tok::Eq)?;
        self.expect(Tok::LParen)?;
        let images = self.expr_list(Tok::RParen)?;
        Ok(StmtKind::Hom {
            name,
            source,
            target,
            images,
        })
    }

    fn module(&mut self) -> PResult<StmtKind> {
        let name = self.ident("a module name")?;
        self.expect(Tok::Eq)?;
        if self.at_word("omega") && matches!(self.peek_at(1), Tok::Ident(_)) {
            self.bump();
            let ring = self.ident("a ring name")?;
            return Ok(StmtKind::Module {
                name,
                ring,
                source: ModuleSource::Omega,
            });
        }
        let ring = self.ident("a ring name")?;
        let rank = if self.eat(&Tok::Caret).is_some() {
            Some(self.int()?.0)
        } else {
            None
        };
        if self.eat(&Tok::Slash).is_none() {
            return Ok(StmtKind::Module {
                name,
                ring,
                source: ModuleSource::Free { rank },
            });
        }
        self.expect(Tok::LParen)?;
        let source = match rank {
            None => ModuleSource::Cyclic {
                ideal: self.expr_list(Tok::RParen)?,
            },
            Some(rank) => {
                let mut rows = Vec::new();
                if self.eat(&Tok::RParen).is_none() {
                    loop {
                        self.expect(Tok::LBracket)?;
                        rows.push(self.expr_list(Tok::RBracket)?);
                        if self.eat(&Tok::Comma).is_some() {
                            continue;
                        }
                        if self.eat(&Tok::RParen).is_some() {
                            break;
                        }
                        return Err(self.error(vec![sym(Tok::RParen), sym(Tok::Comma)]));
                    }
                }
                ModuleSource::Presented { rank, rows }
            }
        };
        Ok(StmtKind::Module { name, ring, source })
    }

    fn tower(&mut self) -> PResult<StmtKind> {
        let name = self.ident("a tower name")?;
        self.expect(Tok::Eq)?;
        self.expect(Tok::LParen)?;
        let mut steps = Vec::new();
        loop {
            if self.at_word("invert") && self.peek_at(1) == &Tok::LParen {
                self.bump();
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                steps.push(TowerStep::Invert(e));
            } else {
                steps.push(TowerStep::Hom(self.ident("a map name or `invert`")?));
            }
            if self.eat(&Tok::Comma).is_some() {
                continue;
            }
            if self.eat(&Tok::RParen).is_some() {
                break;
            }
            return Err(self.error(vec![sym(Tok::RParen), sym(Tok::Comma)]));
        }
        let assume_domain = if self.at_word("assuming") {
            self.bump();
            self.expect_word("domain")?;
            true
        } else {
            false
        };
        Ok(StmtKind::Tower {
            name,
            steps,
            assume_domain,
        })
    }

    fn form(&mut self) -> PResult<FormRef> {
        let tower = self.ident("a tower name")?;
        self.expect(Tok::Dot)?;
        let (level, _) = self.int()?;
        self.expect(Tok::LParen)?;
        let coeff = self.expr()?;
        let end = self.expect(Tok::RParen)?;
        let span = tower.span.to(end);
        Ok(FormRef {
            tower,
            level,
            coeff,
            span,
        })
    }

    fn command(&mut self, verb: &str) -> PResult<Command> {
        let c = match verb {
            "groebner" => Command::Groebner {
                ring: self.ident("a ring name")?,
            },
            "dim" => Command::Dim {
                ring: self.ident("a ring name")?,
            },
            "omega" => Command::Omega {
                ring: self.ident("a ring name")?,
            },
            "rigidity" => Command::Rigidity {
                ring: self.ident("a ring name")?,
            },
            "hilbert" => Command::Hilbert {
                target: self.ident("a ring or module name")?,
            },
            "betti" => Command::Betti {
                module: self.ident("a module name")?,
            },
            "dualize" => Command::Dualize {
                module: self.ident("a module name")?,
            },
            "etale-pairing" => Command::EtalePairing {
                hom: self.ident("a map name")?,
            },
            "nf" => Command::Nf {
                ring: self.ident("a ring name")?,
                expr: self.expr()?,
            },
            "trace" => Command::Trace {
                hom: self.ident("a map name")?,
                expr: self.expr()?,
            },
            "res" => {
                let module = self.ident("a module name")?;
                let length = if matches!(self.peek().tok, Tok::Int(_)) {
                    Some(self.int()?.0)
                } else {
                    None
                };
                Command::Res { module, length }
            }
            "ext" => {
                let (degree, _) = self.int()?;
                Command::Ext {
                    degree,
                    m: self.ident("a module name")?,
                    n: self.ident("a module name")?,
                }
            }
            "isoprobe" => Command::IsoProbe {
                m: self.ident("a module name")?,
                n: self.ident("a module name")?,
            },
            "shriek" => Command::Shriek {
                hom: self.ident("a map name")?,
                module: self.ident("a module name")?,
            },
            "pullback" => {
                let form = self.form()?;
                self.expect(Tok::Arrow)?;
                Command::Pullback {
                    form,
                    to: self.int()?.0,
                }
            }
            "traceform" => {
                let form = self.form()?;
                let to = if self.eat(&Tok::Arrow).is_some() {
                    Some(self.int()?.0)
                } else {
                    None
                };
                Command::TraceForm { form, to }
            }
            "qform" => Command::QForm { form: self.form()? },
            "check" => {
                let mut filter = Vec::new();
                if !self.at(&Tok::Semi) {
                    loop {
                        match &self.peek().tok {
                            Tok::Ident(s) | Tok::Int(s) => {
                                filter.push(s.clone());
                                self.bump();
                            }
                            _ => {
                                return Err(self.error(vec![
                                    "a check group".into(),
                                    "a criterion number".into(),
                                ]))
                            }
                        }
                        if self.eat(&Tok::Comma).is_none() {
                            break;
                        }
                    }
                }
                Command::Check { filter }
            }
            other => unreachable!("`{other}` is listed as a verb"),
        };
        Ok(c)
    }

    /// Comma-separated expressions up to `close`, which is consumed.
    fn expr_list(&mut self, close: Tok) -> PResult<Vec<Expr>> {
        let mut out = Vec::new();
        if self.eat(&close).is_some() {
            return Ok(out);
        }
        loop {
            out.push(self.expr()?);
            if self.eat(&Tok::Comma).is_some() {
                continue;
            }
            if self.eat(&close).is_some() {
                return Ok(out);
            }
            return Err(self.error(vec![sym(close), sym(Tok::Comma), "an operator".into()]));
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            let span = lhs.span().to(rhs.span());
            lhs = Expr::Bin {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
                span,
            };
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            let span = lhs.span().to(rhs.span());
            lhs = Expr::Bin {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
                span,
            };
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        if let Some(s) = self.eat(&Tok::Minus) {
            let arg = self.unary()?;
            let span = s.to(arg.span());
            return Ok(Expr::Neg {
                arg: Box::new(arg),
                span,
            });
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Expr> {
        let base = self.atom()?;
        if self.eat(&Tok::Caret).is_none() {
            return Ok(base);
        }
        let (e, espan) = self.int()?;
        let exp = u32::try_from(e)
            .map_err(|_| Diagnostic::new(espan, format!("exponent {e} is too large")))?;
        let span = base.span().to(espan);
        Ok(Expr::Pow {
            base: Box::new(base),
            exp,
            span,
        })
    }

    fn atom(&mut self) -> PResult<Expr> {
        match &self.peek().tok {
            Tok::Int(d) => {
                let digits = d.clone();
                let span = self.bump().span;
                Ok(Expr::Num { digits, span })
            }
            Tok::Ident(_) => Ok(Expr::Var(self.ident("a variable")?)),
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            _ => Err(self.error(vec!["integer".into(), "variable".into(), sym(Tok::LParen)])),
        }
    }
}
