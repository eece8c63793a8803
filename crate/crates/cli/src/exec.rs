//! Statement execution against an environment of named objects.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rigiduality_core::algebra::make_algebra_with_order;
use rigiduality_core::duality::{
    classical_trace, dualize, etale_pairing, twisted_inverse_image, DEFAULT_SQUARING_BOUND,
};
use rigiduality_core::forms::LevelKind;
use rigiduality_core::module::{Row, DEFAULT_ATTEMPTS};
use rigiduality_core::smooth::finiteness_basis;
use rigiduality_core::suite::{criteria, groups, run_suite};
use rigiduality_core::{
    canonical_module, ext_module, free_resolution, hilbert_series, iso_probe, make_hom,
    minimal_betti, rigidity_check, Algebra, AlgebraHom, CanonicalData, ExtTable, FPModule, Field,
    HilbertSeries, IsoVerdict, MonomialOrder, Polynomial, SmoothTower, TopForm, Tri,
};
use serde_json::{json, Map, Value};

use crate::ast::*;
use crate::diag::{line_col, Span};
use crate::record::{Location, Provenance, RecordKind, ResultRecord, Status};

#[derive(Clone, Debug)]
pub struct Options {
    pub order: MonomialOrder,
    /// Highest `Ext` index computed by the squaring table.
    pub max_ext: usize,
    pub seed: u64,
    pub fail_fast: bool,
}

impl Default for Options {
    fn default() -> Options {
        Options {
            order: MonomialOrder::GrevLex,
            max_ext: DEFAULT_SQUARING_BOUND,
            seed: 0,
            fail_fast: false,
        }
    }
}

/// A failed statement: the message and, when known, the sub-expression
/// responsible.
#[derive(Debug)]
struct Failure {
    message: String,
    span: Option<Span>,
}

impl Failure {
    fn at(span: Span, message: impl Into<String>) -> Failure {
        Failure {
            message: message.into(),
            span: Some(span),
        }
    }
}

impl From<rigiduality_core::Error> for Failure {
    fn from(e: rigiduality_core::Error) -> Failure {
        Failure {
            message: e.to_string(),
            span: None,
        }
    }
}

type Exec<T> = Result<T, Failure>;

/// What a successful statement produced.
struct Output {
    status: Status,
    summary: String,
    payload: Value,
    bounds: Vec<(&'static str, u64)>,
    notes: Vec<String>,
}

impl Output {
    fn ok(summary: impl Into<String>, payload: Value) -> Output {
        Output {
            status: Status::Ok,
            summary: summary.into(),
            payload,
            bounds: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn bound(mut self, name: &'static str, value: u64) -> Output {
        self.bounds.push((name, value));
        self
    }

    fn note(mut self, note: impl Into<String>) -> Output {
        self.notes.push(note.into());
        self
    }
}

#[derive(Default)]
struct Env {
    rings: HashMap<String, Algebra>,
    homs: HashMap<String, AlgebraHom>,
    modules: HashMap<String, FPModule>,
    towers: HashMap<String, SmoothTower>,
    /// Canonical modules by ring name, computed on first use.
    canonical: HashMap<String, CanonicalData>,
}

/// Runs statements one at a time, keeping the objects they define.
pub struct Executor {
    opts: Options,
    env: Env,
    next_index: usize,
}

/// Execute a bound session. Stops after the first error record when
/// `fail_fast` is set.
pub fn execute(src: &str, session: &Session, opts: &Options) -> Vec<ResultRecord> {
    let mut ex = Executor::new(opts.clone());
    let mut out = Vec::new();
    for stmt in &session.stmts {
        let r = ex.run(src, stmt);
        let failed = r.status == Status::Error;
        out.push(r);
        if failed && opts.fail_fast {
            break;
        }
    }
    out
}

impl Executor {
    pub fn new(opts: Options) -> Executor {
        Executor {
            opts,
            env: Env::default(),
            next_index: 0,
        }
    }

    pub fn options(&self) -> &Options {
        &self.opts
    }

    pub fn run(&mut self, src: &str, stmt: &Stmt) -> ResultRecord {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| self.dispatch(stmt))).unwrap_or_else(|p| {
            Err(Failure {
                message: format!("internal error: {}", panic_text(&p)),
                span: None,
            })
        });
        let elapsed = start.elapsed().as_secs_f64() * 1000.0;
        let mut provenance = Provenance {
            seed: self.opts.seed,
            order: self.opts.order.name(),
            ..Default::default()
        };
        let (status, summary, payload, error) = match outcome {
            Ok(o) => {
                provenance.bounds = o
                    .bounds
                    .into_iter()
                    .map(|(k, v)| (k.to_string(), v))
                    .collect();
                provenance.notes = o.notes;
                (o.status, o.summary, o.payload, None)
            }
            Err(f) => {
                let message = match f.span {
                    Some(s) => {
                        let (line, col) = line_col(src, s.start);
                        format!("{line}:{col}: {}", f.message)
                    }
                    None => f.message,
                };
                (Status::Error, message.clone(), Value::Null, Some(message))
            }
        };
        let index = self.next_index;
        self.next_index += 1;
        ResultRecord {
            index,
            command: stmt.to_string(),
            kind: if stmt.defines().is_some() {
                RecordKind::Definition
            } else {
                RecordKind::Command
            },
            status,
            summary,
            payload,
            provenance,
            wall_time_ms: elapsed,
            location: Location::of(src, stmt.span),
            error,
        }
    }

    fn dispatch(&mut self, stmt: &Stmt) -> Exec<Output> {
        match &stmt.kind {
            StmtKind::Ring {
                name,
                field,
                vars,
                relations,
            } => self.ring(name, field, vars, relations.as_deref()),
            StmtKind::Localize {
                name,
                base,
                element,
            } => {
                let a = self.ring_of(base)?;
                let g = eval(&a, element)?;
                let l = a.localize(&g)?;
                Ok(self.define_ring(name, l))
            }
            StmtKind::Hom {
                name,
                source,
                target,
                images,
            } => {
                let (a, b) = (self.ring_of(source)?, self.ring_of(target)?);
                let imgs = images
                    .iter()
                    .map(|e| eval(&b, e))
                    .collect::<Exec<Vec<_>>>()?;
                let f = make_hom(&a, &b, &imgs)?;
                let images = f.visible_images();
                let summary = format!(
                    "{} : {} -> {} = ({})",
                    name.name,
                    source.name,
                    target.name,
                    images.join(", ")
                );
                self.env.homs.insert(name.name.clone(), f);
                Ok(Output::ok(
                    summary,
                    json!({ "name": name.name, "source": source.name, "target": target.name, "images": images }),
                ))
            }
            StmtKind::Module { name, ring, source } => {
                let a = self.ring_of(ring)?;
                let m = match source {
                    ModuleSource::Free { rank } => FPModule::free(&a, rank.unwrap_or(1) as usize),
                    ModuleSource::Cyclic { ideal } => {
                        let gens = ideal
                            .iter()
                            .map(|e| eval(&a, e))
                            .collect::<Exec<Vec<_>>>()?;
                        FPModule::cyclic(&a, &gens)?
                    }
                    ModuleSource::Presented { rank, rows } => {
                        let mut rels = Vec::with_capacity(rows.len());
                        for row in rows {
                            if row.len() != *rank as usize {
                                let span = row.first().map(|e| e.span()).unwrap_or(stmt.span);
                                return Err(Failure::at(
                                    span,
                                    format!("relation has {} entries, expected {rank}", row.len()),
                                ));
                            }
                            rels.push(row.iter().map(|e| eval(&a, e)).collect::<Exec<Row>>()?);
                        }
                        FPModule::new(&a, *rank as usize, rels)?
                    }
                    ModuleSource::Omega => self.canonical(ring)?.omega.clone(),
                };
                let out = Output::ok(
                    m.to_string(),
                    json!({ "name": name.name, "module": module_json(&m) }),
                );
                self.env.modules.insert(name.name.clone(), m);
                Ok(out)
            }
            StmtKind::Tower {
                name,
                steps,
                assume_domain,
            } => self.tower(name, steps, *assume_domain),
            StmtKind::Command(c) => self.command(c),
        }
    }

    fn ring(
        &mut self,
        name: &Ident,
        field: &FieldSpec,
        vars: &[Ident],
        relations: Option<&[Expr]>,
    ) -> Exec<Output> {
        let k = match field {
            FieldSpec::Rational => Field::Rational,
            FieldSpec::Prime(p) => Field::prime(*p)?,
        };
        let names: Vec<&str> = vars.iter().map(|v| v.name.as_str()).collect();
        let free = make_algebra_with_order(k, &names, &[], &[], false, self.opts.order)?;
        let rels = relations
            .unwrap_or(&[])
            .iter()
            .map(|e| eval(&free, e))
            .collect::<Exec<Vec<_>>>()?;
        let a = make_algebra_with_order(k, &names, &rels, &[], true, self.opts.order)?;
        Ok(self.define_ring(name, a))
    }

    fn define_ring(&mut self, name: &Ident, a: Algebra) -> Output {
        let payload = json!({
            "name": name.name,
            "field": a.field().to_string(),
            "variables": a.visible_vars(),
            "presentation": a.to_string(),
            "dim": a.dim(),
        });
        let out = Output::ok(a.to_string(), payload);
        self.env.rings.insert(name.name.clone(), a);
        out
    }

    fn tower(&mut self, name: &Ident, steps: &[TowerStep], assume_domain: bool) -> Exec<Output> {
        let first = match steps.first() {
            Some(TowerStep::Hom(h)) => self.hom_of(h)?,
            Some(TowerStep::Invert(e)) => {
                return Err(Failure::at(e.span(), "a tower starts with a map"))
            }
            None => {
                return Err(Failure {
                    message: "a tower needs at least one step".into(),
                    span: None,
                })
            }
        };
        let mut tower = SmoothTower::new(&AlgebraHom::from_field(first.source()), assume_domain)?;
        for step in steps {
            match step {
                TowerStep::Hom(h) => {
                    let f = self.hom_of(h)?;
                    tower
                        .push_finite(f, assume_domain)
                        .map_err(|e| Failure::at(h.span, e.to_string()))?;
                }
                TowerStep::Invert(e) => {
                    let top = tower.level(tower.top()).algebra.clone();
                    let g = eval(&top, e)?;
                    tower
                        .push_localization(&g)
                        .map_err(|err| Failure::at(e.span(), err.to_string()))?;
                }
            }
        }
        let levels: Vec<Value> = (0..tower.len())
            .map(|k| {
                let l = tower.level(k);
                let kind = match &l.kind {
                    LevelKind::Coordinate => "coordinate",
                    LevelKind::Monogenic { .. } => "monogenic",
                    LevelKind::Localization { .. } => "localization",
                };
                json!({ "level": k, "algebra": l.algebra.to_string(), "wedge": l.wedge(), "kind": kind })
            })
            .collect();
        let summary = format!(
            "{} levels, relative dimension {}",
            tower.len(),
            tower.rank()
        );
        let payload = json!({ "name": name.name, "rank": tower.rank(), "levels": levels });
        self.env.towers.insert(name.name.clone(), tower);
        let out = Output::ok(summary, payload);
        Ok(if assume_domain {
            out.note("base domain property assumed, not certified")
        } else {
            out
        })
    }

    fn command(&mut self, c: &Command) -> Exec<Output> {
        let seed = self.opts.seed;
        match c {
            Command::Groebner { ring } => {
                let a = self.ring_of(ring)?;
                let gb = a.gb();
                let basis: Vec<String> = gb.generators().iter().map(|g| g.to_string()).collect();
                let summary = format!("[{}]", basis.join(", "));
                Ok(Output::ok(
                    summary,
                    json!({ "order": gb.order().name(), "basis": basis, "reduced": gb.is_reduced() }),
                ))
            }
            Command::Nf { ring, expr } => {
                let a = self.ring_of(ring)?;
                let p = eval(&a, expr)?;
                let nf = a.show(&p);
                Ok(Output::ok(
                    nf.clone(),
                    json!({ "input": expr.to_string(), "normal_form": nf }),
                ))
            }
            Command::Dim { ring } => {
                let a = self.ring_of(ring)?;
                let out = Output::ok(a.dim().to_string(), json!({ "dim": a.dim() }));
                Ok(if a.is_zero_ring() {
                    out.note("zero ring: dimension -1")
                } else {
                    out
                })
            }
            Command::Hilbert { target } => {
                let h = if let Some(a) = self.env.rings.get(&target.name) {
                    hilbert_series(a.gb())?
                } else {
                    self.module_of(target)?.hilbert_series()?
                };
                Ok(Output::ok(h.to_string(), hilbert_json(&h)))
            }
            Command::Res { module, length } => {
                let m = self.module_of(module)?;
                let len = length.map_or(m.algebra().nvars() + 1, |l| l as usize);
                let res = free_resolution(&m, len);
                let diffs: Vec<Value> = (1..res.len())
                    .map(|k| rows_json(res.differential(k)))
                    .collect();
                let truncated = res.len() > len && res.rank(len) > 0;
                let summary = format!("ranks {:?}", res.ranks());
                let out = Output::ok(
                    summary,
                    json!({ "ranks": res.ranks(), "differentials": diffs, "truncated": truncated }),
                )
                .bound("length", len as u64);
                Ok(if truncated {
                    out.note(format!("resolution cut off at F_{len}"))
                } else {
                    out
                })
            }
            Command::Ext { degree, m, n } => {
                let (mm, nn) = (self.module_of(m)?, self.module_of(n)?);
                let e = ext_module(*degree as usize, &mm, &nn)?;
                Ok(Output::ok(
                    e.to_string(),
                    json!({ "degree": degree, "module": module_json(&e) }),
                ))
            }
            Command::Betti { module } => {
                let b = minimal_betti(&self.module_of(module)?)?;
                Ok(Output::ok(format!("{b:?}"), json!({ "betti": b })))
            }
            Command::IsoProbe { m, n } => {
                let v = iso_probe(
                    &self.module_of(m)?,
                    &self.module_of(n)?,
                    seed,
                    DEFAULT_ATTEMPTS,
                )?;
                Ok(verdict_output(
                    v.label().to_string(),
                    json!({ "verdict": v }),
                    &v,
                ))
            }
            Command::Omega { ring } => {
                let cd = self.canonical(ring)?.clone();
                let v = cd.gorenstein(seed)?;
                let gorenstein = match &v {
                    IsoVerdict::IsoFound { .. } => json!(true),
                    IsoVerdict::Mismatch { .. } => json!(false),
                    IsoVerdict::Inconclusive { .. } => Value::Null,
                };
                let payload = json!({
                    "omega": module_json(&cd.omega),
                    "shift": cd.shift,
                    "codim": cd.codim,
                    "route": cd.route,
                    "cm_certificate": cd.cm_certificate,
                    "gorenstein": gorenstein,
                    "gorenstein_probe": v,
                });
                let summary = format!(
                    "omega = {} in degree {}, gorenstein: {gorenstein}",
                    cd.omega, -cd.shift
                );
                Ok(verdict_output(summary, payload, &v).note(format!(
                    "Ext^i_C(A, C) = 0 verified for i in {:?}",
                    cd.cm_certificate
                )))
            }
            Command::Rigidity { ring } => {
                let cd = self.canonical(ring)?.clone();
                let r = rigidity_check(&cd, self.opts.max_ext, seed)?;
                let others: Vec<Value> = r
                    .others
                    .iter()
                    .map(|(d, z)| json!({ "degree": d, "zero": z }))
                    .collect();
                let payload = json!({
                    "rigid": r.rigid,
                    "shift": r.shift,
                    "table": table_json(&r.table),
                    "verdict": r.verdict,
                    "others": others,
                });
                let summary = format!(
                    "rigid: {}",
                    serde_json::to_value(r.rigid)
                        .unwrap_or_default()
                        .as_str()
                        .unwrap_or("?")
                );
                let mut out = Output::ok(summary, payload)
                    .bound("max_ext", self.opts.max_ext as u64)
                    .note(r.table.provenance.clone());
                if r.rigid == Tri::Unknown {
                    out.status = Status::Inconclusive;
                    out = out.bound("attempts", DEFAULT_ATTEMPTS as u64);
                }
                Ok(out)
            }
            Command::Dualize { module } => {
                let m = self.module_of(module)?;
                let ring = self.ring_name_of(m.algebra());
                let cd = self.canonical_by_name(ring.as_deref(), m.algebra())?;
                let t = dualize(&cd, &m)?;
                Ok(table_output(&t))
            }
            Command::Shriek { hom, module } => {
                let f = self.hom_of(hom)?;
                let m = self.module_of(module)?;
                let src_name = self.ring_name_of(f.source());
                let tgt_name = self.ring_name_of(f.target());
                let cs = self.canonical_by_name(src_name.as_deref(), f.source())?;
                let ct = self.canonical_by_name(tgt_name.as_deref(), f.target())?;
                let t = twisted_inverse_image(&f, &cs, &ct, &m, 0)?;
                Ok(table_output(&t))
            }
            Command::Trace { hom, expr } => {
                let f = self.hom_of(hom)?;
                let fin = finiteness_basis(&f)?;
                let b = eval(f.target(), expr)?;
                let tr = f.source().show(&classical_trace(&fin, &b)?);
                Ok(Output::ok(
                    tr.clone(),
                    json!({ "trace": tr, "basis": fin.report() }),
                ))
            }
            Command::EtalePairing { hom } => {
                let f = self.hom_of(hom)?;
                let fin = finiteness_basis(&f)?;
                let p = etale_pairing(&f, &fin)?;
                let summary = format!("det = {}, etale: {}", p.determinant, p.etale);
                Ok(Output::ok(
                    summary,
                    json!({
                        "basis": fin.report().basis,
                        "gram": rows_json(&p.gram),
                        "determinant": p.determinant.to_string(),
                        "etale": p.etale,
                        "evaluation_matches": p.evaluation_matches,
                    }),
                ))
            }
            Command::Pullback { form, to } => {
                let (tower, w) = self.form_of(form)?;
                let r = tower.pullback_form(&w, *to as usize)?;
                Ok(form_output(tower, &r))
            }
            Command::TraceForm { form, to } => {
                let (tower, w) = self.form_of(form)?;
                let r = tower.trace_form(&w, to.unwrap_or(0) as usize)?;
                Ok(form_output(tower, &r))
            }
            Command::QForm { form } => {
                let (tower, w) = self.form_of(form)?;
                let r = tower.localize_form(&w)?;
                Ok(form_output(tower, &r))
            }
            Command::Check { filter } => check(filter, seed),
        }
    }

    fn ring_of(&self, id: &Ident) -> Exec<Algebra> {
        self.env
            .rings
            .get(&id.name)
            .cloned()
            .ok_or_else(|| missing(id))
    }

    fn hom_of(&self, id: &Ident) -> Exec<AlgebraHom> {
        self.env
            .homs
            .get(&id.name)
            .cloned()
            .ok_or_else(|| missing(id))
    }

    fn module_of(&self, id: &Ident) -> Exec<FPModule> {
        self.env
            .modules
            .get(&id.name)
            .cloned()
            .ok_or_else(|| missing(id))
    }

    fn form_of(&self, form: &FormRef) -> Exec<(&SmoothTower, TopForm)> {
        let tower = self
            .env
            .towers
            .get(&form.tower.name)
            .ok_or_else(|| missing(&form.tower))?;
        let k = form.level as usize;
        if k >= tower.len() {
            return Err(Failure::at(
                form.span,
                format!(
                    "tower `{}` has levels 0..{}",
                    form.tower.name,
                    tower.len() - 1
                ),
            ));
        }
        let coeff = eval(&tower.level(k).algebra, &form.coeff)?;
        Ok((tower, tower.form(k, &coeff)?))
    }

    /// The name a ring was defined under, if any.
    fn ring_name_of(&self, a: &Algebra) -> Option<String> {
        self.env
            .rings
            .iter()
            .find(|(_, r)| std::sync::Arc::ptr_eq(r, a))
            .map(|(n, _)| n.clone())
    }

    fn canonical(&mut self, ring: &Ident) -> Exec<&CanonicalData> {
        let a = self.ring_of(ring)?;
        if !self.env.canonical.contains_key(&ring.name) {
            let cd = canonical_module(&a)?;
            self.env.canonical.insert(ring.name.clone(), cd);
        }
        Ok(&self.env.canonical[&ring.name])
    }

    fn canonical_by_name(&mut self, name: Option<&str>, a: &Algebra) -> Exec<CanonicalData> {
        match name {
            Some(n) => {
                if !self.env.canonical.contains_key(n) {
                    let cd = canonical_module(a)?;
                    self.env.canonical.insert(n.to_string(), cd);
                }
                Ok(self.env.canonical[n].clone())
            }
            None => Ok(canonical_module(a)?),
        }
    }
}

fn missing(id: &Ident) -> Failure {
    Failure::at(
        id.span,
        format!(
            "`{}` was not constructed because its definition failed",
            id.name
        ),
    )
}

fn panic_text(p: &Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = p.downcast_ref::<&str>() {
        s.to_string()
    } else if let Some(s) = p.downcast_ref::<String>() {
        s.clone()
    } else {
        "panic".into()
    }
}

fn check(filter: &[String], seed: u64) -> Exec<Output> {
    let known_groups = groups();
    let ids: Vec<String> = criteria().iter().map(|c| c.id.to_string()).collect();
    for f in filter {
        if !known_groups.contains(&f.as_str()) && !ids.contains(f) {
            return Err(Failure {
                message: format!(
                    "unknown check group `{f}`; groups are {}",
                    known_groups.join(", ")
                ),
                span: None,
            });
        }
    }
    let joined = filter.join(",");
    let outcomes = run_suite((!filter.is_empty()).then_some(joined.as_str()), seed);
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let summary = format!("{passed}/{} checks passed", outcomes.len());
    let payload = json!({ "outcomes": outcomes });
    if passed == outcomes.len() {
        Ok(Output::ok(summary, payload))
    } else {
        let lines: Vec<String> = outcomes
            .iter()
            .filter(|o| !o.passed)
            .map(|o| o.summary_line())
            .collect();
        Err(Failure {
            message: format!("{summary}: {}", lines.join("; ")),
            span: None,
        })
    }
}

/// Evaluate an expression in `a`. Division is allowed by units only.
fn eval(a: &Algebra, e: &Expr) -> Exec<Polynomial> {
    let p = match e {
        Expr::Num { digits, span } => a
            .ring()
            .parse(digits)
            .map_err(|err| Failure::at(*span, err.to_string()))?,
        Expr::Var(id) => {
            if !a.visible_vars().iter().any(|v| v == &id.name) {
                return Err(Failure::at(
                    id.span,
                    format!("unknown variable `{}`", id.name),
                ));
            }
            a.var(&id.name)
                .map_err(|err| Failure::at(id.span, err.to_string()))?
        }
        Expr::Neg { arg, .. } => -&eval(a, arg)?,
        Expr::Pow { base, exp, .. } => eval(a, base)?.pow(*exp),
        Expr::Bin { op, lhs, rhs, .. } => {
            let (l, r) = (eval(a, lhs)?, eval(a, rhs)?);
            match op {
                BinOp::Add => &l + &r,
                BinOp::Sub => &l - &r,
                BinOp::Mul => &l * &r,
                BinOp::Div => match a.unit_inverse(&r) {
                    Some(inv) => &l * &inv,
                    None if a.is_zero_elem(&r) => {
                        return Err(Failure::at(rhs.span(), "division by zero"))
                    }
                    None => return Err(Failure::at(rhs.span(), format!("`{rhs}` is not a unit"))),
                },
            }
        }
    };
    Ok(a.reduce(&p))
}

fn rows_json(rows: &[Row]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| Value::Array(r.iter().map(|p| Value::String(p.to_string())).collect()))
            .collect(),
    )
}

fn module_json(m: &FPModule) -> Value {
    json!({
        "generators": m.ngens(),
        "relations": rows_json(m.relations()),
        "zero": m.is_zero(),
        "text": m.to_string(),
    })
}

fn hilbert_json(h: &HilbertSeries) -> Value {
    json!({
        "numerator": h.numerator(),
        "denominator_power": h.denominator_power(),
        "dimension": h.dimension(),
        "multiplicity": h.multiplicity(),
        "series": h.to_string(),
    })
}

fn table_json(t: &ExtTable) -> Value {
    let entries: Map<String, Value> = t
        .entries
        .iter()
        .map(|(d, m)| (d.to_string(), module_json(m)))
        .collect();
    json!({ "entries": entries, "checked": t.checked, "provenance": t.provenance })
}

fn table_output(t: &ExtTable) -> Output {
    let summary = if t.is_zero() {
        "0".to_string()
    } else {
        let parts: Vec<String> = t.entries.iter().map(|(d, m)| format!("{d}: {m}")).collect();
        parts.join("; ")
    };
    Output::ok(summary, table_json(t)).note(t.provenance.clone())
}

fn form_output(tower: &SmoothTower, w: &TopForm) -> Output {
    let d = tower.display(w);
    Output::ok(d.text.clone(), serde_json::to_value(&d).unwrap_or_default())
}

fn verdict_output(summary: String, payload: Value, v: &IsoVerdict) -> Output {
    let mut out = Output::ok(summary, payload).bound("attempts", DEFAULT_ATTEMPTS as u64);
    if matches!(v, IsoVerdict::Inconclusive { .. }) {
        out.status = Status::Inconclusive;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_session;

    fn run(src: &str) -> Vec<ResultRecord> {
        let (s, d) = parse_session(src);
        assert!(d.is_empty(), "{d:?}");
        execute(src, &s, &Options::default())
    }

    #[test]
    fn expressions_with_units_and_constants() {
        let r =
            run("ring A = QQ[x]; localize L = A[1/x]; nf L 1/x * x^2; nf A 3/6 * x; nf A x/x^2;");
        assert_eq!(r[2].summary, "x");
        assert_eq!(r[3].summary, "1/2*x");
        assert_eq!(r[4].status, Status::Error);
        assert!(r[4].summary.contains("is not a unit"), "{}", r[4].summary);
    }

    #[test]
    fn unknown_variable_is_located() {
        let r = run("ring A = QQ[x];\nnf A y;");
        assert_eq!(r[1].status, Status::Error);
        assert_eq!(r[1].summary, "2:6: unknown variable `y`");
    }

    #[test]
    fn failed_definitions_poison_later_uses() {
        let r = run(
            "ring A = QQ[x]; ring B = QQ[y]/(y^2); hom f : B -> A = (x); dim A; etale-pairing f;",
        );
        assert_eq!(r[2].status, Status::Error);
        assert_eq!(r[3].status, Status::Ok);
        assert_eq!(r[4].status, Status::Error);
        assert!(r[4].summary.contains("not constructed"));
    }

    #[test]
    fn fail_fast_stops() {
        let src = "ring A = QQ[x]; nf A y; dim A;";
        let (s, _) = parse_session(src);
        let opts = Options {
            fail_fast: true,
            ..Options::default()
        };
        assert_eq!(execute(src, &s, &opts).len(), 2);
    }

    #[test]
    fn trace_and_pairing() {
        let r = run("ring B = QQ[s]; ring C = QQ[t]; hom f : B -> C = (t^2); trace f t^2; trace f t; etale-pairing f;");
        assert_eq!(r[3].summary, "2*s");
        assert_eq!(r[4].summary, "0");
        assert_eq!(r[5].payload["etale"], json!(false));
    }
}
