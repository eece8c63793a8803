//! Submodule computations over `A = C/I` by way of Groebner bases over the
//! polynomial ring `C`.
//!
//! To find syzygies of `v_1..v_k` in `A^r` we compute a Groebner basis of the
//! vectors `(v_i, e_i)` together with `(w, 0)` for the untracked generators
//! and `g e_j` for `g` in `I`, in `C^(r+k)` under an order where the first
//! `r` positions dominate. Basis elements supported on the last `k`
//! positions generate the syzygies; reducing `(w, 0)` expresses `w` in terms
//! of the `v_i` when possible.

use std::sync::Arc;

use crate::groebner::engine::{Engine, ModuleOrder, PositionRule, Term, Vector};
use crate::groebner::{normal_form, GroebnerBasis};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{PolyRing, Polynomial};

pub type Row = Vec<Polynomial>;

pub(crate) fn row_terms(row: &[Polynomial], offset: usize) -> Vec<Term> {
    let mut out = Vec::new();
    for (j, p) in row.iter().enumerate() {
        for (c, m) in p.terms() {
            out.push((c.clone(), m.clone(), offset + j));
        }
    }
    out
}

pub(crate) fn vector_row(ring: &Arc<PolyRing>, v: &Vector, offset: usize, len: usize) -> Row {
    let mut buckets: Vec<Vec<(crate::scalar::Scalar, Monomial)>> = vec![Vec::new(); len];
    for (c, m, p) in &v.terms {
        if *p >= offset && *p < offset + len {
            buckets[p - offset].push((c.clone(), m.clone()));
        }
    }
    buckets
        .into_iter()
        .map(|t| Polynomial::from_terms(ring, t))
        .collect()
}

/// Quotient-ring context: the ambient polynomial ring and a Groebner basis
/// of the defining ideal.
#[derive(Clone, Copy)]
pub struct Ctx<'a> {
    pub ring: &'a Arc<PolyRing>,
    pub ideal: &'a GroebnerBasis,
}

impl Ctx<'_> {
    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        if self.ideal.is_zero_ideal() {
            return f.clone();
        }
        normal_form(f, self.ideal)
    }

    pub fn reduce_row(&self, row: &[Polynomial]) -> Row {
        row.iter().map(|p| self.reduce(p)).collect()
    }

    pub fn zero_row(&self, len: usize) -> Row {
        vec![self.ring.zero(); len]
    }

    pub fn unit_row(&self, len: usize, j: usize) -> Row {
        let mut r = self.zero_row(len);
        r[j] = self.ring.one();
        r
    }
}

/// Groebner basis of `(tracked_i, e_i)`, `(untracked, 0)` and the ideal
/// relations, in `C^(rank + k)`.
pub struct Extended<'a> {
    ctx: Ctx<'a>,
    engine: Engine,
    basis: Vec<Vector>,
    rank: usize,
    k: usize,
    /// Coefficients of syzygies are taken modulo the context ideal unless a
    /// separate ideal was supplied for the tracked block.
    reduce_coeffs: bool,
}

impl<'a> Extended<'a> {
    pub fn new(ctx: Ctx<'a>, tracked: &[Row], untracked: &[Row], rank: usize) -> Extended<'a> {
        Extended::with_order(ctx, tracked, untracked, rank, PositionRule::Top)
    }

    pub fn with_order(
        ctx: Ctx<'a>,
        tracked: &[Row],
        untracked: &[Row],
        rank: usize,
        rule: PositionRule,
    ) -> Extended<'a> {
        Extended::build(ctx, tracked, untracked, rank, rule, None)
    }

    /// `coeff_ideal`, when given, replaces the context ideal on the tracked
    /// block, so syzygy coefficients live modulo that ideal instead.
    pub fn build(
        ctx: Ctx<'a>,
        tracked: &[Row],
        untracked: &[Row],
        rank: usize,
        rule: PositionRule,
        coeff_ideal: Option<&[Polynomial]>,
    ) -> Extended<'a> {
        let k = tracked.len();
        let order = ModuleOrder {
            mono: ctx.ring.order(),
            rule,
            split: Some(rank),
        };
        let engine = Engine::new(order);
        let mut gens: Vec<Vector> = Vec::new();
        for (i, row) in tracked.iter().enumerate() {
            debug_assert_eq!(row.len(), rank);
            let mut t = row_terms(row, 0);
            t.push((
                ctx.ring.field().one(),
                Monomial::one(ctx.ring.nvars()),
                rank + i,
            ));
            gens.push(engine.normalize(t));
        }
        for row in untracked {
            debug_assert_eq!(row.len(), rank);
            gens.push(engine.normalize(row_terms(row, 0)));
        }
        let ideal_row = |g: &Polynomial, j: usize| {
            engine.normalize(
                g.terms()
                    .iter()
                    .map(|(c, m)| (c.clone(), m.clone(), j))
                    .collect(),
            )
        };
        for g in ctx.ideal.generators() {
            let g = g.in_ring(ctx.ring);
            let upto = if coeff_ideal.is_some() {
                rank
            } else {
                rank + k
            };
            for j in 0..upto {
                gens.push(ideal_row(&g, j));
            }
        }
        if let Some(extra) = coeff_ideal {
            for g in extra {
                for j in rank..rank + k {
                    gens.push(ideal_row(g, j));
                }
            }
        }
        let basis = engine.groebner(&gens);
        Extended {
            ctx,
            engine,
            basis,
            rank,
            k,
            reduce_coeffs: coeff_ideal.is_none(),
        }
    }

    /// Generators of `{ a in A^k : sum a_i tracked_i in span(untracked) }`,
    /// reduced modulo the ideal, zero rows dropped.
    pub fn syzygies(&self) -> Vec<Row> {
        let mut out: Vec<Row> = Vec::new();
        for g in &self.basis {
            let (_, _, p) = g.lead().unwrap();
            if *p < self.rank {
                continue;
            }
            let row = vector_row(self.ctx.ring, g, self.rank, self.k);
            let row = if self.reduce_coeffs {
                self.ctx.reduce_row(&row)
            } else {
                row
            };
            if row.iter().any(|e| !e.is_zero()) && !out.contains(&row) {
                out.push(row);
            }
        }
        out
    }

    /// Coefficients `a` with `w = sum a_i tracked_i` modulo the untracked
    /// span and the ideal, if they exist.
    pub fn lift(&self, w: &[Polynomial]) -> Option<Row> {
        let v = self.engine.normalize(row_terms(w, 0));
        let r = self.engine.reduce(&v, &self.basis);
        if r.terms.iter().any(|t| t.2 < self.rank) {
            return None;
        }
        let coeffs = vector_row(self.ctx.ring, &r, self.rank, self.k);
        Some(coeffs.iter().map(|c| self.ctx.reduce(&-c)).collect())
    }

    /// Whether `w` lies in the span of all generators.
    pub fn contains(&self, w: &[Polynomial]) -> bool {
        let v = self.engine.normalize(row_terms(w, 0));
        let r = self.engine.reduce(&v, &self.basis);
        r.terms.iter().all(|t| t.2 >= self.rank)
    }

    /// Normal form of `w` modulo the span (first block only).
    pub fn normal_form(&self, w: &[Polynomial]) -> Row {
        let v = self.engine.normalize(row_terms(w, 0));
        let r = self.engine.reduce(&v, &self.basis);
        vector_row(self.ctx.ring, &r, 0, self.rank)
    }

    /// Leading monomials of the first-block part of the basis, per position.
    pub fn leading_monomials(&self) -> Vec<Vec<Monomial>> {
        let mut out = vec![Vec::new(); self.rank];
        for g in &self.basis {
            let (_, m, p) = g.lead().unwrap();
            if *p < self.rank {
                out[*p].push(m.clone());
            }
        }
        out
    }
}

/// Submodule generated by `gens` (plus the ideal) equals all of `A^rank`.
pub fn spans_everything(ctx: Ctx<'_>, gens: &[Row], rank: usize) -> bool {
    let ext = Extended::new(ctx, &[], gens, rank);
    (0..rank).all(|j| ext.contains(&ctx.unit_row(rank, j)))
}

/// Elimination variant: a basis whose module order compares the first
/// `block` variables before positions, so reduction expresses vectors with
/// coefficients free of those variables whenever possible.
/// Syzygy coefficients are taken modulo `coeff_ideal` only.
pub fn eliminating<'a>(
    ctx: Ctx<'a>,
    tracked: &[Row],
    untracked: &[Row],
    rank: usize,
    block: usize,
    coeff_ideal: &[Polynomial],
) -> Extended<'a> {
    debug_assert!(matches!(ctx.ring.order(), MonomialOrder::Block(b) if b == block) || block == 0);
    Extended::build(
        ctx,
        tracked,
        untracked,
        rank,
        PositionRule::AfterBlock(block),
        Some(coeff_ideal),
    )
}
