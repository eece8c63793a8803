//! Top differential forms along towers of smooth and finite maps, their
//! pullbacks, localizations and traces.
//!
//! A tower starts with a smooth level `B_0` over the base `A` with a free
//! basis `ds_1..ds_n` of differentials. Each further level is either a
//! monogenic finite step `C = B[t]/(f)` with `f` monic, or a localization.
//! Forms on a level are `h * ds_1^...^ds_n` in that level's basis.

use std::fmt;

use serde::Serialize;

use crate::algebra::{make_hom, Algebra, AlgebraHom};
use crate::duality::classical_trace;
use crate::error::{Error, Result};
use crate::matrix::{poly_adjugate, poly_determinant};
use crate::module::linalg::Extended;
use crate::poly::Polynomial;
use crate::smooth::{finiteness_basis, free_differentials, FiniteStructure, FreeDifferentials};

/// An element `num / den` of the fraction field of a domain.
#[derive(Clone, Debug)]
pub struct FracElem {
    pub num: Polynomial,
    pub den: Polynomial,
}

impl FracElem {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<FracElem> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(FracElem { num, den })
    }

    pub fn integral(num: Polynomial) -> FracElem {
        let den = num.ring().one();
        FracElem { num, den }
    }

    pub fn add(&self, other: &FracElem, alg: &Algebra) -> FracElem {
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        FracElem {
            num: alg.reduce(&num),
            den: alg.reduce(&(&self.den * &other.den)),
        }
    }

    pub fn mul(&self, other: &FracElem, alg: &Algebra) -> FracElem {
        FracElem {
            num: alg.reduce(&(&self.num * &other.num)),
            den: alg.reduce(&(&self.den * &other.den)),
        }
    }

    /// Equality in `Frac(alg)`, by cross-multiplication.
    pub fn equals(&self, other: &FracElem, alg: &Algebra) -> bool {
        alg.equal(&(&self.num * &other.den), &(&other.num * &self.den))
    }

    /// The element of `alg` it equals, if any.
    pub fn to_integral(&self, alg: &Algebra) -> Option<Polynomial> {
        if let Some(c) = self.den.constant_value() {
            return Some(alg.reduce(&self.num.scalar_mul(&c.inv().ok()?)));
        }
        let ext = Extended::new(alg.ctx(), &[vec![self.den.clone()]], &[], 1);
        ext.lift(std::slice::from_ref(&self.num))
            .map(|mut v| alg.reduce(&v.remove(0)))
    }
}

/// `tr(h)` for `h = sum h_i t^i` in `Frac(B)[t]/(f)`, `f = t^m + a_{m-1}
/// t^{m-1} + ... + a_0`, through the power sums `p_k = tr(t^k)` given by
/// Newton's identities.
pub fn newton_trace_oracle(b: &Algebra, lower: &[Polynomial], h: &[FracElem]) -> FracElem {
    let m = lower.len();
    let ring = b.ring();
    let a = |i: usize| -> &Polynomial { &lower[i] };
    let mut p: Vec<Polynomial> = Vec::with_capacity(m);
    if m > 0 {
        p.push(ring.int(m as i64));
    }
    for k in 1..m {
        // p_k + a_{m-1} p_{k-1} + ... + a_{m-k+1} p_1 + k a_{m-k} = 0
        let mut acc = &ring.int(k as i64) * a(m - k);
        for j in 1..k {
            acc = &acc + &(a(m - j) * &p[k - j]);
        }
        p.push(b.reduce(&-acc));
    }
    let mut total = FracElem::integral(ring.zero());
    for (hi, pi) in h.iter().zip(&p) {
        total = total.add(&hi.mul(&FracElem::integral(pi.clone()), b), b);
    }
    total
}

#[derive(Clone, Debug)]
pub enum LevelKind {
    /// The smooth base level.
    Coordinate,
    /// `C = B[t]/(f)`, `f = t^m + sum lower[i] t^i` with `lower` in `B`.
    Monogenic {
        generator: usize,
        lower: Vec<Polynomial>,
        finite: Box<FiniteStructure>,
    },
    Localization {
        element: Polynomial,
    },
}

#[derive(Clone, Debug)]
pub struct Level {
    pub algebra: Algebra,
    pub kind: LevelKind,
    /// The map from the previous level (from the base for level 0).
    pub step: Option<AlgebraHom>,
    /// The free basis of `Omega^1` over the tower base.
    pub differentials: FreeDifferentials,
    domain: bool,
}

impl Level {
    /// `ds_1^...^ds_n` in this level's basis.
    pub fn wedge(&self) -> String {
        let names = self.differentials.basis_names();
        if names.is_empty() {
            "1".into()
        } else {
            names.join("∧")
        }
    }
}

#[derive(Clone, Debug)]
pub struct SmoothTower {
    base: Algebra,
    rank: usize,
    levels: Vec<Level>,
}

/// A polynomial ring, possibly localized, is a domain.
fn visibly_domain(a: &Algebra) -> bool {
    a.relations().is_empty() && !a.is_zero_ring()
}

/// `h * ds_1^...^ds_n` on a level of a tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopForm {
    pub level: usize,
    pub coeff: Polynomial,
}

#[derive(Clone, Debug, Serialize)]
pub struct FormDisplay {
    pub level: usize,
    pub coefficient: String,
    pub wedge: String,
    pub text: String,
}

impl SmoothTower {
    /// Start a tower at the smooth level `structure: A -> B_0`. The base
    /// domain property is certified for localized polynomial rings and
    /// otherwise taken from `assume_domain`.
    pub fn new(structure: &AlgebraHom, assume_domain: bool) -> Result<SmoothTower> {
        let b0 = structure.target();
        let differentials = free_differentials(structure, false)?;
        let domain = visibly_domain(b0) || assume_domain;
        if !domain {
            return Err(Error::NotADomain);
        }
        let rank = differentials.rank();
        let level = Level {
            algebra: b0.clone(),
            kind: LevelKind::Coordinate,
            step: Some(structure.clone()),
            differentials,
            domain,
        };
        Ok(SmoothTower {
            base: structure.source().clone(),
            rank,
            levels: vec![level],
        })
    }

    pub fn base(&self) -> &Algebra {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn level(&self, k: usize) -> &Level {
        &self.levels[k]
    }

    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    /// `A -> B_0 -> ... -> top -> algebra` ending with `step`.
    fn structure_map(&self, step: &AlgebraHom) -> Result<AlgebraHom> {
        let mut map = self.levels[0]
            .step
            .clone()
            .expect("level 0 keeps its structure map");
        for l in &self.levels[1..] {
            map = map.then(l.step.as_ref().expect("every higher level has a step"))?;
        }
        map.then(step)
    }

    /// Add `C = B[t]/(f)` over the top level `B` along `f_step: B -> C`;
    /// the finite basis must be `1, t, .., t^(m-1)` for a variable `t`.
    pub fn push_finite(&mut self, f_step: AlgebraHom, assume_domain: bool) -> Result<usize> {
        let prev = &self.levels[self.top()];
        if !std::sync::Arc::ptr_eq(f_step.source(), &prev.algebra) {
            return Err(Error::UnrelatedLevels(
                "finite step must start at the top level".into(),
            ));
        }
        if !prev.domain {
            return Err(Error::NotADomain);
        }
        let c = f_step.target().clone();
        let fin = finiteness_basis(&f_step)?;
        if !fin.is_free() {
            return Err(Error::NoFreeBasis);
        }
        let generator = monogenic_generator(&fin)?;
        let t = c.ring().var(generator);
        let m = fin.len();
        let top = fin.coords(&t.pow(m as u32));
        let lower: Vec<Polynomial> = top.iter().map(|p| -p).collect();
        let structure = self.structure_map(&f_step)?;
        let differentials = free_differentials(&structure, false)?;
        if differentials.rank() != self.rank {
            return Err(Error::Shape(format!(
                "relative dimension {} differs from the tower's {}",
                differentials.rank(),
                self.rank
            )));
        }
        let domain = visibly_domain(&c) || assume_domain;
        self.levels.push(Level {
            algebra: c,
            kind: LevelKind::Monogenic {
                generator,
                lower,
                finite: Box::new(fin),
            },
            step: Some(f_step),
            differentials,
            domain,
        });
        Ok(self.top())
    }

    /// Invert `g` (an element of the top level).
    pub fn push_localization(&mut self, g: &Polynomial) -> Result<usize> {
        let prev = &self.levels[self.top()];
        let step = AlgebraHom::localization(&prev.algebra, g)?;
        let c = step.target().clone();
        let structure = self.structure_map(&step)?;
        let differentials = free_differentials(&structure, false)?;
        let domain = prev.domain;
        self.levels.push(Level {
            algebra: c,
            kind: LevelKind::Localization { element: g.clone() },
            step: Some(step),
            differentials,
            domain,
        });
        Ok(self.top())
    }

    /// The same tower with `g` (an element of level 0) inverted at every
    /// level, and the localization maps `level_k -> level_k[1/g]`.
    pub fn localized(&self, g: &Polynomial) -> Result<(SmoothTower, Vec<AlgebraHom>)> {
        let q0 = AlgebraHom::localization(&self.levels[0].algebra, g)?;
        let start = self.levels[0]
            .step
            .as_ref()
            .expect("level 0 keeps its structure map")
            .then(&q0)?;
        let mut tower = SmoothTower::new(&start, self.levels[0].domain)?;
        let mut qs = vec![q0];
        for (k, level) in self.levels.iter().enumerate().skip(1) {
            let step = level.step.as_ref().expect("every higher level has a step");
            match &level.kind {
                LevelKind::Monogenic { .. } => {
                    let g_here = self.composite(0, k)?.apply(g);
                    let target = AlgebraHom::localization(&level.algebra, &g_here)?;
                    let images: Vec<Polynomial> = step.images()[..step.source().nvisible()]
                        .iter()
                        .map(|p| target.apply(p))
                        .collect();
                    let new_step =
                        make_hom(&tower.levels[k - 1].algebra, target.target(), &images)?;
                    tower.push_finite(new_step, level.domain)?;
                }
                LevelKind::Localization { element } => {
                    tower.push_localization(&qs[k - 1].apply(element))?;
                }
                LevelKind::Coordinate => unreachable!("only level 0 is a coordinate level"),
            }
            let pushed = tower.levels[k].algebra.clone();
            let same: Vec<Polynomial> = (0..level.algebra.nvisible())
                .map(|i| pushed.ring().var(i))
                .collect();
            qs.push(make_hom(&level.algebra, &pushed, &same)?);
        }
        Ok((tower, qs))
    }

    /// A form on level `k` from its coefficient.
    pub fn form(&self, level: usize, coeff: &Polynomial) -> Result<TopForm> {
        let alg = &self
            .levels
            .get(level)
            .ok_or_else(|| Error::UnrelatedLevels(format!("no level {level}")))?
            .algebra;
        Ok(TopForm {
            level,
            coeff: alg.reduce(&coeff.in_ring(alg.ring())),
        })
    }

    pub fn parse_form(&self, level: usize, coeff: &str) -> Result<TopForm> {
        let alg = &self
            .levels
            .get(level)
            .ok_or_else(|| Error::UnrelatedLevels(format!("no level {level}")))?
            .algebra;
        self.form(level, &alg.parse(coeff)?)
    }

    pub fn display(&self, w: &TopForm) -> FormDisplay {
        let level = &self.levels[w.level];
        let coefficient = level.algebra.show(&w.coeff);
        let wedge = level.wedge();
        let text = if w.coeff.is_zero() {
            "0".to_string()
        } else if w.coeff.is_one() {
            wedge.clone()
        } else if w.coeff.len() == 1 {
            format!("{coefficient} * {wedge}")
        } else {
            format!("({coefficient}) * {wedge}")
        };
        FormDisplay {
            level: w.level,
            coefficient,
            wedge,
            text,
        }
    }

    /// The composite map from level `from` to level `to`.
    fn composite(&self, from: usize, to: usize) -> Result<AlgebraHom> {
        if from > to || to >= self.levels.len() {
            return Err(Error::UnrelatedLevels(format!(
                "no map from level {from} to level {to}"
            )));
        }
        let mut map = AlgebraHom::identity(&self.levels[from].algebra);
        for l in &self.levels[from + 1..=to] {
            map = map.then(l.step.as_ref().expect("every higher level has a step"))?;
        }
        Ok(map)
    }

    /// Pullback of forms from level `from` to level `to`.
    pub fn pullback_form(&self, w: &TopForm, to: usize) -> Result<TopForm> {
        let map = self.composite(w.level, to)?;
        Ok(map_form(
            &map,
            &self.levels[w.level],
            &self.levels[to],
            w,
            to,
        ))
    }

    /// Image of a form under the localization step into level `w.level + 1`.
    pub fn localize_form(&self, w: &TopForm) -> Result<TopForm> {
        let next = w.level + 1;
        match self.levels.get(next).map(|l| &l.kind) {
            Some(LevelKind::Localization { .. }) => self.pullback_form(w, next),
            _ => Err(Error::NotLocalization),
        }
    }

    /// Trace of a form on a monogenic level `k` down to level `k - 1`.
    pub fn trace_step(&self, w: &TopForm) -> Result<TraceComputation> {
        let k = w.level;
        let level = &self.levels[k];
        let LevelKind::Monogenic {
            generator,
            lower,
            finite,
        } = &level.kind
        else {
            return Err(Error::UnrelatedLevels(format!(
                "level {k} is not a finite step"
            )));
        };
        let below = &self.levels[k - 1];
        let b = &below.algebra;
        let c = &level.algebra;
        let step = level.step.as_ref().expect("finite levels have a step");
        let fin = finite.as_ref();
        let norm = |x: &Polynomial| -> Polynomial {
            b.reduce(&poly_determinant(b.ring(), &fin.multiplication_matrix(x)))
        };
        // f'(t) must not be a zero divisor: its norm is nonzero in B
        let t = c.ring().var(*generator);
        let m = lower.len();
        let mut fprime = &c.ring().int(m as i64) * &t.pow(m as u32 - 1);
        for (i, a) in lower.iter().enumerate().skip(1) {
            fprime =
                &fprime + &(&(&c.ring().int(i as i64) * &step.apply(a)) * &t.pow(i as u32 - 1));
        }
        let fprime = c.reduce(&fprime);
        if norm(&fprime).is_zero() {
            return Err(Error::ZeroDivisorElement(format!(
                "f'(t) = {}",
                c.show(&fprime)
            )));
        }
        // pullback of the lower wedge: f^*(ds) = J * (wedge of C)
        let jacobian = jacobian(step, &below.differentials, &level.differentials);
        let jnorm = norm(&jacobian);
        if jnorm.is_zero() {
            return Err(Error::ZeroDivisorElement(format!(
                "Jacobian {}",
                c.show(&jacobian)
            )));
        }
        // N/J as an element of C: coords(1) * adj(mult(J))
        let adj = poly_adjugate(b.ring(), &fin.multiplication_matrix(&jacobian));
        let one = fin.coords(&c.ring().one());
        let mut x = vec![b.ring().zero(); m];
        for (i, oi) in one.iter().enumerate() {
            if oi.is_zero() {
                continue;
            }
            for (j, e) in adj[i].iter().enumerate() {
                x[j] = &x[j] + &(oi * e);
            }
        }
        let x = fin.element(&b.ctx().reduce_row(&x), step);
        // w = coeff * wedge_C = (coeff / J) f^*(wedge_B) = (coeff * x / N) f^*(wedge_B)
        let y = c.reduce(&(&w.coeff * &x));
        let h: Vec<FracElem> = fin
            .coords(&y)
            .into_iter()
            .map(|p| FracElem {
                num: p,
                den: jnorm.clone(),
            })
            .collect();
        let companion = FracElem {
            num: classical_trace(fin, &y)?,
            den: jnorm.clone(),
        };
        let newton = newton_trace_oracle(b, lower, &h);
        if !companion.equals(&newton, b) {
            return Err(Error::OracleMismatch(
                b.show(&companion.num),
                b.show(&newton.num),
            ));
        }
        let coeff = companion.to_integral(b).ok_or_else(|| {
            Error::Integrality(format!(
                "{} / {} is not in {b}",
                b.show(&companion.num),
                b.show(&jnorm)
            ))
        })?;
        Ok(TraceComputation {
            jacobian,
            norm: jnorm,
            h,
            companion,
            newton,
            result: TopForm {
                level: k - 1,
                coeff,
            },
        })
    }

    /// `Tr_{C/B/A}` from the level of `w` down to level `to`, composing
    /// single steps.
    pub fn trace_form(&self, w: &TopForm, to: usize) -> Result<TopForm> {
        if to > w.level {
            return Err(Error::UnrelatedLevels(format!(
                "cannot trace from level {} up to {to}",
                w.level
            )));
        }
        let mut cur = w.clone();
        while cur.level > to {
            cur = self.trace_step(&cur)?.result;
        }
        Ok(cur)
    }

    /// The matrix of `c -> (c' -> Tr(c c' f^*(wedge_B)))` on the monomial
    /// basis of the finite level `k`, and its determinant in `B`.
    pub fn nondegeneracy(&self, k: usize) -> Result<(Vec<Vec<Polynomial>>, Polynomial)> {
        let LevelKind::Monogenic { finite, .. } = &self.levels[k].kind else {
            return Err(Error::UnrelatedLevels(format!(
                "level {k} is not a finite step"
            )));
        };
        let b = &self.levels[k - 1].algebra;
        let basis = finite.basis();
        let pulled = self.pullback_form(
            &TopForm {
                level: k - 1,
                coeff: b.ring().one(),
            },
            k,
        )?;
        let mut mat = Vec::with_capacity(basis.len());
        for bi in &basis {
            let mut row = Vec::with_capacity(basis.len());
            for bj in &basis {
                let coeff = self.levels[k].algebra.reduce(&(&(bi * bj) * &pulled.coeff));
                row.push(self.trace_step(&TopForm { level: k, coeff })?.result.coeff);
            }
            mat.push(row);
        }
        let det = b.reduce(&poly_determinant(b.ring(), &mat));
        Ok((mat, det))
    }
}

/// The determinant `J` with `f^*(ds_1^...^ds_n) = J * (dt_1^...^dt_n)`.
fn jacobian(f: &AlgebraHom, src: &FreeDifferentials, dst: &FreeDifferentials) -> Polynomial {
    let rows: Vec<Vec<Polynomial>> = src
        .basis
        .iter()
        .map(|&k| dst.differential(&f.images()[k]))
        .collect();
    let c = f.target();
    c.reduce(&poly_determinant(c.ring(), &rows))
}

pub fn map_form(map: &AlgebraHom, src: &Level, dst: &Level, w: &TopForm, to: usize) -> TopForm {
    let j = jacobian(map, &src.differentials, &dst.differentials);
    let c = &dst.algebra;
    TopForm {
        level: to,
        coeff: c.reduce(&(&map.apply(&w.coeff) * &j)),
    }
}

/// Which variable generates a free finite basis `1, t, .., t^(m-1)`.
fn monogenic_generator(fin: &FiniteStructure) -> Result<usize> {
    let basis = fin.basis();
    let c = fin.target();
    if basis.len() == 1 {
        // degree one: any variable serves
        return c
            .nvars()
            .checked_sub(1)
            .ok_or_else(|| Error::Shape("finite step has no variables".into()));
    }
    let t = basis[1].leading_monomial().and_then(|m| {
        let e = m.exps();
        (e.iter().sum::<u32>() == 1).then(|| e.iter().position(|&x| x == 1).unwrap())
    });
    let Some(t) = t else {
        return Err(Error::Shape("finite step is not monogenic".into()));
    };
    let v = c.ring().var(t);
    for (i, b) in basis.iter().enumerate() {
        if *b != v.pow(i as u32) {
            return Err(Error::Shape("finite step is not monogenic".into()));
        }
    }
    Ok(t)
}

/// Intermediate data of one trace step.
#[derive(Clone, Debug)]
pub struct TraceComputation {
    pub jacobian: Polynomial,
    /// Norm of the Jacobian, the common denominator.
    pub norm: Polynomial,
    /// Coordinates of `coeff / J` in `Frac(B)[t]/(f)`.
    pub h: Vec<FracElem>,
    pub companion: FracElem,
    pub newton: FracElem,
    pub result: TopForm,
}

impl fmt::Display for TopForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "level {}: {}", self.level, self.coeff)
    }
}

#[cfg(test)]
mod tests;
