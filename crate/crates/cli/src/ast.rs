//! Session syntax tree and its printer. Printing a parsed session and
//! parsing the result gives back the same tree up to spans.

use std::fmt;

use crate::diag::Span;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn prec(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num {
        digits: String,
        span: Span,
    },
    Var(Ident),
    Neg {
        arg: Box<Expr>,
        span: Span,
    },
    Bin {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
        span: Span,
    },
    Pow {
        base: Box<Expr>,
        exp: u32,
        span: Span,
    },
}

impl Expr {
    pub fn span(&self) -> Span {
        match self {
            Expr::Num { span, .. }
            | Expr::Neg { span, .. }
            | Expr::Bin { span, .. }
            | Expr::Pow { span, .. } => *span,
            Expr::Var(id) => id.span,
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Bin { op, .. } => op.prec(),
            Expr::Neg { .. } => 3,
            Expr::Pow { .. } => 4,
            Expr::Num { .. } | Expr::Var(_) => 5,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool| {
            if parens {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            Expr::Num { digits, .. } => write!(f, "{digits}"),
            Expr::Var(id) => write!(f, "{}", id.name),
            Expr::Neg { arg, .. } => {
                write!(f, "-")?;
                wrap(f, arg, arg.prec() < 3)
            }
            Expr::Bin { op, lhs, rhs, .. } => {
                wrap(f, lhs, lhs.prec() < op.prec())?;
                write!(f, " {} ", op.symbol())?;
                // left associative: an equal-precedence right operand keeps its parentheses
                wrap(f, rhs, rhs.prec() <= op.prec())
            }
            Expr::Pow { base, exp, .. } => {
                wrap(f, base, base.prec() < 5)?;
                write!(f, "^{exp}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "QQ"),
            FieldSpec::Prime(p) => write!(f, "Fp({p})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleSource {
    /// `A` or `A^n`.
    Free { rank: Option<u64> },
    /// `A / (g_1, .., g_k)`.
    Cyclic { ideal: Vec<Expr> },
    /// `A^n / ([..], [..])`, one bracketed row per relation.
    Presented { rank: u64, rows: Vec<Vec<Expr>> },
    /// `omega A`.
    Omega,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TowerStep {
    Hom(Ident),
    Invert(Expr),
}

/// `T.k(coefficient)`: a top form on level `k` of tower `T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormRef {
    pub tower: Ident,
    pub level: u64,
    pub coeff: Expr,
    pub span: Span,
}

impl fmt::Display for FormRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}({})", self.tower.name, self.level, self.coeff)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Groebner { ring: Ident },
    Nf { ring: Ident, expr: Expr },
    Dim { ring: Ident },
    Hilbert { target: Ident },
    Res { module: Ident, length: Option<u64> },
    Ext { degree: u64, m: Ident, n: Ident },
    Betti { module: Ident },
    IsoProbe { m: Ident, n: Ident },
    Omega { ring: Ident },
    Rigidity { ring: Ident },
    Dualize { module: Ident },
    Shriek { hom: Ident, module: Ident },
    Trace { hom: Ident, expr: Expr },
    EtalePairing { hom: Ident },
    Pullback { form: FormRef, to: u64 },
    TraceForm { form: FormRef, to: Option<u64> },
    QForm { form: FormRef },
    Check { filter: Vec<String> },
}

impl Command {
    pub fn verb(&self) -> &'static str {
        match self {
            Command::Groebner { .. } => "groebner",
            Command::Nf { .. } => "nf",
            Command::Dim { .. } => "dim",
            Command::Hilbert { .. } => "hilbert",
            Command::Res { .. } => "res",
            Command::Ext { .. } => "ext",
            Command::Betti { .. } => "betti",
            Command::IsoProbe { .. } => "isoprobe",
            Command::Omega { .. } => "omega",
            Command::Rigidity { .. } => "rigidity",
            Command::Dualize { .. } => "dualize",
            Command::Shriek { .. } => "shriek",
            Command::Trace { .. } => "trace",
            Command::EtalePairing { .. } => "etale-pairing",
            Command::Pullback { .. } => "pullback",
            Command::TraceForm { .. } => "traceform",
            Command::QForm { .. } => "qform",
            Command::Check { .. } => "check",
        }
    }
}

pub const VERBS: [&str; 18] = [
    "groebner",
    "nf",
    "dim",
    "hilbert",
    "res",
    "ext",
    "betti",
    "isoprobe",
    "omega",
    "rigidity",
    "dualize",
    "shriek",
    "trace",
    "etale-pairing",
    "pullback",
    "traceform",
    "qform",
    "check",
];

pub const DEFINERS: [&str; 5] = ["ring", "localize", "hom", "module", "tower"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StmtKind {
    Ring {
        name: Ident,
        field: FieldSpec,
        vars: Vec<Ident>,
        relations: Option<Vec<Expr>>,
    },
    Localize {
        name: Ident,
        base: Ident,
        element: Expr,
    },
    Hom {
        name: Ident,
        source: Ident,
        target: Ident,
        images: Vec<Expr>,
    },
    Module {
        name: Ident,
        ring: Ident,
        source: ModuleSource,
    },
    Tower {
        name: Ident,
        steps: Vec<TowerStep>,
        assume_domain: bool,
    },
    Command(Command),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub span: Span,
}

impl Stmt {
    /// The name a definition introduces.
    pub fn defines(&self) -> Option<&Ident> {
        match &self.kind {
            StmtKind::Ring { name, .. }
            | StmtKind::Localize { name, .. }
            | StmtKind::Hom { name, .. }
            | StmtKind::Module { name, .. }
            | StmtKind::Tower { name, .. } => Some(name),
            StmtKind::Command(_) => None,
        }
    }

    pub fn keyword(&self) -> &'static str {
        match &self.kind {
            StmtKind::Ring { .. } => "ring",
            StmtKind::Localize { .. } => "localize",
            StmtKind::Hom { .. } => "hom",
            StmtKind::Module { .. } => "module",
            StmtKind::Tower { .. } => "tower",
            StmtKind::Command(c) => c.verb(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Session {
    pub stmts: Vec<Stmt>,
}

fn list<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            StmtKind::Ring {
                name,
                field,
                vars,
                relations,
            } => {
                let names: Vec<&str> = vars.iter().map(|v| v.name.as_str()).collect();
                write!(f, "ring {} = {field}[{}]", name.name, names.join(", "))?;
                if let Some(rels) = relations {
                    write!(f, " / ({})", list(rels))?;
                }
            }
            StmtKind::Localize {
                name,
                base,
                element,
            } => write!(f, "localize {} = {}[1/({element})]", name.name, base.name)?,
            StmtKind::Hom {
                name,
                source,
                target,
                images,
            } => write!(
                f,
                "hom {} : {} -> {} = ({})",
                name.name,
                source.name,
                target.name,
                list(images)
            )?,
            StmtKind::Module { name, ring, source } => {
                write!(f, "module {} = ", name.name)?;
                match source {
                    ModuleSource::Free { rank: None } => write!(f, "{}", ring.name)?,
                    ModuleSource::Free { rank: Some(r) } => write!(f, "{}^{r}", ring.name)?,
                    ModuleSource::Cyclic { ideal } => {
                        write!(f, "{} / ({})", ring.name, list(ideal))?
                    }
                    ModuleSource::Presented { rank, rows } => {
                        let rows: Vec<String> =
                            rows.iter().map(|r| format!("[{}]", list(r))).collect();
                        write!(f, "{}^{rank} / ({})", ring.name, rows.join(", "))?
                    }
                    ModuleSource::Omega => write!(f, "omega {}", ring.name)?,
                }
            }
            StmtKind::Tower {
                name,
                steps,
                assume_domain,
            } => {
                let steps: Vec<String> = steps
                    .iter()
                    .map(|s| match s {
                        TowerStep::Hom(h) => h.name.clone(),
                        TowerStep::Invert(e) => format!("invert({e})"),
                    })
                    .collect();
                write!(f, "tower {} = ({})", name.name, steps.join(", "))?;
                if *assume_domain {
                    write!(f, " assuming domain")?;
                }
            }
            StmtKind::Command(c) => write_command(f, c)?,
        }
        write!(f, ";")
    }
}

fn write_command(f: &mut fmt::Formatter<'_>, c: &Command) -> fmt::Result {
    let verb = c.verb();
    match c {
        Command::Groebner { ring }
        | Command::Dim { ring }
        | Command::Omega { ring }
        | Command::Rigidity { ring } => {
            write!(f, "{verb} {}", ring.name)
        }
        Command::Hilbert { target } => write!(f, "{verb} {}", target.name),
        Command::Betti { module } | Command::Dualize { module } => {
            write!(f, "{verb} {}", module.name)
        }
        Command::EtalePairing { hom } => write!(f, "{verb} {}", hom.name),
        Command::Nf { ring, expr } => write!(f, "{verb} {} {expr}", ring.name),
        Command::Res { module, length } => {
            write!(f, "{verb} {}", module.name)?;
            if let Some(n) = length {
                write!(f, " {n}")?;
            }
            Ok(())
        }
        Command::Ext { degree, m, n } => write!(f, "{verb} {degree} {} {}", m.name, n.name),
        Command::IsoProbe { m, n } => write!(f, "{verb} {} {}", m.name, n.name),
        Command::Shriek { hom, module } => write!(f, "{verb} {} {}", hom.name, module.name),
        Command::Trace { hom, expr } => write!(f, "{verb} {} {expr}", hom.name),
        Command::Pullback { form, to } => write!(f, "{verb} {form} -> {to}"),
        Command::TraceForm { form, to } => {
            write!(f, "{verb} {form}")?;
            if let Some(to) = to {
                write!(f, " -> {to}")?;
            }
            Ok(())
        }
        Command::QForm { form } => write!(f, "{verb} {form}"),
        Command::Check { filter } => {
            write!(f, "{verb}")?;
            if !filter.is_empty() {
                write!(f, " {}", filter.join(", "))?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Session {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.stmts {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Reset every span to the empty span at 0, for comparisons that ignore
/// source positions.
pub trait EraseSpans {
    fn erase_spans(&mut self);
}

impl EraseSpans for Ident {
    fn erase_spans(&mut self) {
        self.span = Span::default();
    }
}

impl EraseSpans for Expr {
    fn erase_spans(&mut self) {
        match self {
            Expr::Num { span, .. } => *span = Span::default(),
            Expr::Var(id) => id.erase_spans(),
            Expr::Neg { arg, span } => {
                *span = Span::default();
                arg.erase_spans();
            }
            Expr::Bin { lhs, rhs, span, .. } => {
                *span = Span::default();
                lhs.erase_spans();
                rhs.erase_spans();
            }
            Expr::Pow { base, span, .. } => {
                *span = Span::default();
                base.erase_spans();
            }
        }
    }
}

impl<T: EraseSpans> EraseSpans for Vec<T> {
    fn erase_spans(&mut self) {
        self.iter_mut().for_each(EraseSpans::erase_spans);
    }
}

impl EraseSpans for FormRef {
    fn erase_spans(&mut self) {
        self.span = Span::default();
        self.tower.erase_spans();
        self.coeff.erase_spans();
    }
}

impl EraseSpans for Command {
    fn erase_spans(&mut self) {
        match self {
            Command::Groebner { ring }
            | Command::Dim { ring }
            | Command::Omega { ring }
            | Command::Rigidity { ring } => ring.erase_spans(),
            Command::Hilbert { target } => target.erase_spans(),
            Command::Betti { module }
            | Command::Dualize { module }
            | Command::Res { module, .. } => module.erase_spans(),
            Command::EtalePairing { hom } => hom.erase_spans(),
            Command::Nf { ring, expr } => {
                ring.erase_spans();
                expr.erase_spans();
            }
            Command::Ext { m, n, .. } | Command::IsoProbe { m, n } => {
                m.erase_spans();
                n.erase_spans();
            }
            Command::Shriek { hom, module } => {
                hom.erase_spans();
                module.erase_spans();
            }
            Command::Trace { hom, expr } => {
                hom.erase_spans();
                expr.erase_spans();
            }
            Command::Pullback { form, .. }
            | Command::TraceForm { form, .. }
            | Command::QForm { form } => form.erase_spans(),
            Command::Check { .. } => {}
        }
    }
}

impl EraseSpans for Stmt {
    fn erase_spans(&mut self) {
        self.span = Span::default();
        match &mut self.kind {
            StmtKind::Ring {
                name,
                vars,
                relations,
                ..
            } => {
                name.erase_spans();
                vars.erase_spans();
                if let Some(r) = relations {
                    r.erase_spans();
                }
            }
            StmtKind::Localize {
                name,
                base,
                element,
            } => {
                name.erase_spans();
                base.erase_spans();
                element.erase_spans();
            }
            StmtKind::Hom {
                name,
                source,
                target,
                images,
            } => {
                name.erase_spans();
                source.erase_spans();
                target.erase_spans();
                images.erase_spans();
            }
            StmtKind::Module { name, ring, source } => {
                name.erase_spans();
                ring.erase_spans();
                match source {
                    ModuleSource::Cyclic { ideal } => ideal.erase_spans(),
                    ModuleSource::Presented { rows, .. } => {
                        rows.iter_mut().for_each(|r| r.erase_spans())
                    }
                    ModuleSource::Free { .. } | ModuleSource::Omega => {}
                }
            }
            StmtKind::Tower { name, steps, .. } => {
                name.erase_spans();
                for s in steps {
                    match s {
                        TowerStep::Hom(h) => h.erase_spans(),
                        TowerStep::Invert(e) => e.erase_spans(),
                    }
                }
            }
            StmtKind::Command(c) => c.erase_spans(),
        }
    }
}

impl EraseSpans for Session {
    fn erase_spans(&mut self) {
        self.stmts.erase_spans();
    }
}
