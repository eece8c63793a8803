//! Name resolution: every name is defined once, before use, with the kind
//! its use site expects.

use std::collections::HashMap;
use std::fmt;

use crate::ast::*;
use crate::diag::{Diagnostic, Span};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Ring,
    Hom,
    Module,
    Tower,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Ring => "ring",
            Kind::Hom => "map",
            Kind::Module => "module",
            Kind::Tower => "tower",
        })
    }
}

#[derive(Clone, Default)]
struct Scope {
    names: HashMap<String, (Kind, Span)>,
    diags: Vec<Diagnostic>,
}

impl Scope {
    fn define(&mut self, id: &Ident, kind: Kind) {
        if self.names.contains_key(&id.name) {
            self.diags.push(Diagnostic::new(
                id.span,
                format!("`{}` is already defined", id.name),
            ));
            return;
        }
        self.names.insert(id.name.clone(), (kind, id.span));
    }

    fn use_as(&mut self, id: &Ident, allowed: &[Kind]) {
        match self.names.get(&id.name) {
            None => self.diags.push(Diagnostic::new(
                id.span,
                format!("`{}` is not defined", id.name),
            )),
            Some((kind, _)) if !allowed.contains(kind) => {
                let want: Vec<String> = allowed.iter().map(|k| k.to_string()).collect();
                self.diags.push(Diagnostic::new(
                    id.span,
                    format!(
                        "`{}` is a {kind}, expected a {}",
                        id.name,
                        want.join(" or a ")
                    ),
                ));
            }
            Some(_) => {}
        }
    }
}

/// Binding diagnostics for a parsed session. Variables inside polynomial
/// expressions are resolved at run time against the ring in question.
pub fn bind(session: &Session) -> Vec<Diagnostic> {
    Binder::default().bind(&session.stmts)
}

/// Scope that persists across calls, for sessions fed in pieces.
#[derive(Clone, Default)]
pub struct Binder {
    scope: Scope,
}

impl Binder {
    /// Bind `stmts` after everything bound so far. The new names are kept
    /// only when there were no diagnostics.
    pub fn bind(&mut self, stmts: &[Stmt]) -> Vec<Diagnostic> {
        let mut s = self.scope.clone();
        for stmt in stmts {
            bind_stmt(&mut s, stmt);
        }
        let diags = std::mem::take(&mut s.diags);
        if diags.is_empty() {
            self.scope = s;
        }
        diags
    }
}

fn bind_stmt(s: &mut Scope, stmt: &Stmt) {
    match &stmt.kind {
        StmtKind::Ring { name, .. } => s.define(name, Kind::Ring),
        StmtKind::Localize { name, base, .. } => {
            s.use_as(base, &[Kind::Ring]);
            s.define(name, Kind::Ring);
        }
        StmtKind::Hom {
            name,
            source,
            target,
            ..
        } => {
            s.use_as(source, &[Kind::Ring]);
            s.use_as(target, &[Kind::Ring]);
            s.define(name, Kind::Hom);
        }
        StmtKind::Module { name, ring, .. } => {
            s.use_as(ring, &[Kind::Ring]);
            s.define(name, Kind::Module);
        }
        StmtKind::Tower { name, steps, .. } => {
            for step in steps {
                if let TowerStep::Hom(h) = step {
                    s.use_as(h, &[Kind::Hom]);
                }
            }
            s.define(name, Kind::Tower);
        }
        StmtKind::Command(c) => bind_command(s, c),
    }
}

fn bind_command(s: &mut Scope, c: &Command) {
    use Kind::*;
    match c {
        Command::Groebner { ring }
        | Command::Dim { ring }
        | Command::Omega { ring }
        | Command::Rigidity { ring } => s.use_as(ring, &[Ring]),
        Command::Nf { ring, .. } => s.use_as(ring, &[Ring]),
        Command::Hilbert { target } => s.use_as(target, &[Ring, Module]),
        Command::Res { module, .. } | Command::Betti { module } | Command::Dualize { module } => {
            s.use_as(module, &[Module])
        }
        Command::Ext { m, n, .. } | Command::IsoProbe { m, n } => {
            s.use_as(m, &[Module]);
            s.use_as(n, &[Module]);
        }
        Command::Shriek { hom, module } => {
            s.use_as(hom, &[Hom]);
            s.use_as(module, &[Module]);
        }
        Command::Trace { hom, .. } | Command::EtalePairing { hom } => s.use_as(hom, &[Hom]),
        Command::Pullback { form, .. }
        | Command::TraceForm { form, .. }
        | Command::QForm { form } => s.use_as(&form.tower, &[Tower]),
        Command::Check { .. } => {}
    }
}
