//! Finitely presented modules over presented algebras, free complexes,
//! resolutions, Hom/Ext/Tor and tensor products.
//!
//! A module is the cokernel of its relation rows: `A^m / (rows)`. Vectors
//! are rows of polynomials in the algebra's ambient ring, always kept in
//! normal form modulo the defining ideal.

mod iso;
pub mod linalg;

use std::collections::VecDeque;
use std::fmt;

use crate::algebra::{Algebra, AlgebraHom};
use crate::error::{Error, Result};
use crate::groebner::{hilbert_numerator, HilbertSeries};
use crate::matrix;
use crate::poly::Polynomial;

pub use iso::{iso_probe, minimal_betti, IsoVerdict, DEFAULT_ATTEMPTS};
use linalg::Extended;
pub use linalg::Row;

#[derive(Clone)]
pub struct FPModule {
    algebra: Algebra,
    ngens: usize,
    relations: Vec<Row>,
    degrees: Option<Vec<i64>>,
}

impl fmt::Debug for FPModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FPModule({self})")
    }
}

impl fmt::Display for FPModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ngens == 0 {
            return write!(f, "0");
        }
        write!(f, "coker {} gens [", self.ngens)?;
        for (i, r) in self.relations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let cells: Vec<String> = r.iter().map(|p| p.to_string()).collect();
            write!(f, "{}", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

impl FPModule {
    /// `A^ngens / (relations)`; entries are reduced and zero rows dropped.
    pub fn new(algebra: &Algebra, ngens: usize, relations: Vec<Row>) -> Result<FPModule> {
        let ctx = algebra.ctx();
        let mut rows: Vec<Row> = Vec::new();
        for r in relations {
            if r.len() != ngens {
                return Err(Error::Shape(format!(
                    "relation has {} entries, expected {ngens}",
                    r.len()
                )));
            }
            let r: Row = r
                .iter()
                .map(|p| ctx.reduce(&p.in_ring(algebra.ring())))
                .collect();
            if r.iter().any(|p| !p.is_zero()) && !rows.contains(&r) {
                rows.push(r);
            }
        }
        let degrees = if algebra.is_graded() {
            infer_degrees(ngens, &rows)
        } else {
            None
        };
        Ok(FPModule {
            algebra: algebra.clone(),
            ngens,
            relations: rows,
            degrees,
        })
    }

    pub fn free(algebra: &Algebra, rank: usize) -> FPModule {
        FPModule::new(algebra, rank, Vec::new()).expect("free module")
    }

    pub fn zero(algebra: &Algebra) -> FPModule {
        FPModule::free(algebra, 0)
    }

    /// `A / (ideal)`.
    pub fn cyclic(algebra: &Algebra, ideal: &[Polynomial]) -> Result<FPModule> {
        FPModule::new(algebra, 1, ideal.iter().map(|g| vec![g.clone()]).collect())
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn relations(&self) -> &[Row] {
        &self.relations
    }

    /// Generator degrees when the algebra is graded and the relations are
    /// homogeneous for some choice of degrees.
    pub fn degrees(&self) -> Option<&[i64]> {
        self.degrees.as_deref()
    }

    fn extended(&self, tracked: &[Row]) -> Extended<'_> {
        Extended::new(self.algebra.ctx(), tracked, &self.relations, self.ngens)
    }

    pub fn is_zero(&self) -> bool {
        if self.ngens == 0 {
            return true;
        }
        let ctx = self.algebra.ctx();
        let ext = self.extended(&[]);
        (0..self.ngens).all(|j| ext.contains(&ctx.unit_row(self.ngens, j)))
    }

    /// Whether `v` (coordinates in the generators) is zero in the module.
    pub fn vector_is_zero(&self, v: &[Polynomial]) -> bool {
        self.extended(&[]).contains(v)
    }

    /// Rank of `M / mM` at the origin (requires the origin to be a point).
    pub fn fiber_rank(&self) -> Option<usize> {
        if !self.algebra.origin_is_point() {
            return None;
        }
        let m: Vec<Vec<_>> = self
            .relations
            .iter()
            .map(|r| r.iter().map(|p| p.at_origin()).collect())
            .collect();
        Some(self.ngens - if m.is_empty() { 0 } else { matrix::rank(&m) })
    }

    /// Hilbert series for graded modules over graded algebras.
    pub fn hilbert_series(&self) -> Result<HilbertSeries> {
        let degrees = self.degrees.as_ref().ok_or(Error::NonHomogeneous)?;
        let n = self.algebra.nvars();
        let lms = self.extended(&[]).leading_monomials();
        let mut total = HilbertSeries::new(vec![0], n);
        for (j, lm) in lms.iter().enumerate() {
            let num = hilbert_numerator(lm, n);
            total = total.add(&HilbertSeries::new(num, n).shift(degrees[j] as usize));
        }
        Ok(total)
    }

    /// Remove generators that a relation expresses through the others,
    /// pivoting only on nonzero constant entries.
    pub fn prune(&self) -> Pruned {
        let alg = self.algebra.clone();
        let pivot = move |_: usize, p: &Polynomial| -> Option<(u8, Polynomial)> {
            let c = p.constant_value()?;
            Some((0, alg.ring().constant(c.inv().ok()?)))
        };
        prune_with(self, &pivot)
    }

    /// `self (x)_A other`: generators `e_i (x) f_j` at index `i * n + j`.
    pub fn tensor(&self, other: &FPModule) -> Result<FPModule> {
        same_algebra(&self.algebra, &other.algebra)?;
        let (m, n) = (self.ngens, other.ngens);
        let zero = self.algebra.ring().zero();
        let mut rows = Vec::new();
        for r in &self.relations {
            for j in 0..n {
                let mut row = vec![zero.clone(); m * n];
                for i in 0..m {
                    row[i * n + j] = r[i].clone();
                }
                rows.push(row);
            }
        }
        for s in &other.relations {
            for i in 0..m {
                let mut row = vec![zero.clone(); m * n];
                row[i * n..(i + 1) * n].clone_from_slice(s);
                rows.push(row);
            }
        }
        FPModule::new(&self.algebra, m * n, rows)
    }

    /// `B (x)_A M` along `f: A -> B`.
    pub fn base_change(&self, f: &AlgebraHom) -> Result<FPModule> {
        same_algebra(&self.algebra, f.source())?;
        let rows = self
            .relations
            .iter()
            .map(|r| r.iter().map(|p| f.apply(p)).collect())
            .collect();
        FPModule::new(f.target(), self.ngens, rows)
    }

    pub fn direct_sum(&self, other: &FPModule) -> Result<FPModule> {
        same_algebra(&self.algebra, &other.algebra)?;
        let (m, n) = (self.ngens, other.ngens);
        let zero = self.algebra.ring().zero();
        let mut rows = Vec::new();
        for r in &self.relations {
            let mut row = r.clone();
            row.extend(std::iter::repeat_n(zero.clone(), n));
            rows.push(row);
        }
        for s in &other.relations {
            let mut row = vec![zero.clone(); m];
            row.extend(s.iter().cloned());
            rows.push(row);
        }
        FPModule::new(&self.algebra, m + n, rows)
    }

    /// The presentation as a two-term free complex `A^rels -> A^gens`.
    pub fn presentation_complex(&self) -> FreeComplex {
        let mut ranks = vec![self.ngens];
        let mut diffs = Vec::new();
        if !self.relations.is_empty() {
            ranks.push(self.relations.len());
            diffs.push(self.relations.clone());
        }
        FreeComplex {
            algebra: self.algebra.clone(),
            ranks,
            diffs,
            offset: 0,
        }
    }

    /// Same module with extra relations.
    pub fn with_relations(&self, extra: &[Row]) -> Result<FPModule> {
        let mut rows = self.relations.clone();
        rows.extend(extra.iter().cloned());
        FPModule::new(&self.algebra, self.ngens, rows)
    }

    /// Move to another presentation of the same ring (identical variables).
    pub fn transport(&self, target: &Algebra) -> Result<FPModule> {
        if target.ring().vars() != self.algebra.ring().vars() {
            return Err(Error::RingMismatch(
                "transport needs identical variables".into(),
            ));
        }
        let rows = self
            .relations
            .iter()
            .map(|r| r.iter().map(|p| p.in_ring(target.ring())).collect())
            .collect();
        FPModule::new(target, self.ngens, rows)
    }
}

pub(crate) fn same_algebra(a: &Algebra, b: &Algebra) -> Result<()> {
    if std::sync::Arc::ptr_eq(a, b) || (a.ring() == b.ring() && a.gb() == b.gb()) {
        Ok(())
    } else {
        Err(Error::RingMismatch(format!("modules over {a} and {b}")))
    }
}

/// Generator degrees making every relation row homogeneous, normalized so
/// each connected block of generators starts at degree 0.
fn infer_degrees(ngens: usize, rows: &[Row]) -> Option<Vec<i64>> {
    let mut edges: Vec<Vec<(usize, i64)>> = vec![Vec::new(); ngens];
    for r in rows {
        let mut first: Option<(usize, i64)> = None;
        for (j, p) in r.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            if !p.is_homogeneous() {
                return None;
            }
            let d = p.total_degree().unwrap() as i64;
            match first {
                None => first = Some((j, d)),
                Some((j0, d0)) => {
                    // deg e_j + d = deg e_j0 + d0
                    edges[j0].push((j, d0 - d));
                    edges[j].push((j0, d - d0));
                }
            }
        }
    }
    let mut deg: Vec<Option<i64>> = vec![None; ngens];
    for start in 0..ngens {
        if deg[start].is_some() {
            continue;
        }
        deg[start] = Some(0);
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &(v, w) in &edges[u] {
                let want = deg[u].unwrap() + w;
                match deg[v] {
                    None => {
                        deg[v] = Some(want);
                        comp.push(v);
                        queue.push_back(v);
                    }
                    Some(have) if have != want => return None,
                    _ => {}
                }
            }
        }
        let min = comp.iter().map(|&v| deg[v].unwrap()).min().unwrap();
        for v in comp {
            deg[v] = Some(deg[v].unwrap() - min);
        }
    }
    Some(deg.into_iter().map(|d| d.unwrap()).collect())
}

/// Result of pruning: an isomorphic module on a subset of the original
/// generators.
#[derive(Clone, Debug)]
pub struct Pruned {
    pub module: FPModule,
    /// Original generator index of each surviving generator.
    pub kept: Vec<usize>,
    /// Each original generator written in the surviving ones.
    pub express: Vec<Row>,
}

impl Pruned {
    /// Coordinates of an element given in the original generators.
    pub fn convert(&self, v: &[Polynomial]) -> Row {
        let alg = self.module.algebra();
        let mut out = vec![alg.ring().zero(); self.kept.len()];
        for (j, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, e) in self.express[j].iter().enumerate() {
                if !e.is_zero() {
                    out[k] = &out[k] + &(c * e);
                }
            }
        }
        alg.ctx().reduce_row(&out)
    }
}

/// Generic unit elimination: `pivot(col, entry)` returns a priority (lower
/// first) and the inverse of the entry when it may serve as a pivot.
pub(crate) fn prune_with(
    m: &FPModule,
    pivot: &dyn Fn(usize, &Polynomial) -> Option<(u8, Polynomial)>,
) -> Pruned {
    let alg = m.algebra.clone();
    let ctx = alg.ctx();
    let n = m.ngens;
    let mut rows: Vec<Row> = m.relations.clone();
    let mut express: Vec<Row> = (0..n).map(|j| ctx.unit_row(n, j)).collect();
    let mut alive = vec![true; n];
    loop {
        let mut best: Option<(u8, usize, usize, usize, Polynomial)> = None;
        for (ri, r) in rows.iter().enumerate() {
            let weight = r.iter().filter(|p| !p.is_zero()).count();
            for (c, p) in r.iter().enumerate() {
                if p.is_zero() {
                    continue;
                }
                if let Some((prio, inv)) = pivot(c, p) {
                    let key = (prio, weight, usize::MAX - c);
                    if best
                        .as_ref()
                        .is_none_or(|b| key < (b.0, b.1, usize::MAX - b.3))
                    {
                        best = Some((prio, weight, ri, c, inv));
                    }
                }
            }
        }
        let Some((_, _, ri, c, inv)) = best else {
            break;
        };
        let prow = rows.swap_remove(ri);
        // e_c = -inv * sum_{k != c} prow_k e_k
        let elim = |v: &Row| -> Row {
            if v[c].is_zero() {
                return v.clone();
            }
            let f = &v[c] * &inv;
            let mut out: Row = v
                .iter()
                .zip(&prow)
                .map(|(a, b)| ctx.reduce(&(a - &(&f * b))))
                .collect();
            out[c] = alg.ring().zero();
            out
        };
        rows = rows
            .iter()
            .map(elim)
            .filter(|r| r.iter().any(|p| !p.is_zero()))
            .collect();
        express = express.iter().map(elim).collect();
        alive[c] = false;
    }
    let kept: Vec<usize> = (0..n).filter(|&j| alive[j]).collect();
    let restrict = |r: &Row| -> Row { kept.iter().map(|&j| r[j].clone()).collect() };
    let module = FPModule::new(&alg, kept.len(), rows.iter().map(restrict).collect())
        .expect("shape preserved");
    let express = express.iter().map(restrict).collect();
    Pruned {
        module,
        kept,
        express,
    }
}

/// A bounded complex of free modules `F_0 <- F_1 <- ...`; beyond its last
/// term it is zero.
#[derive(Clone, Debug)]
pub struct FreeComplex {
    algebra: Algebra,
    ranks: Vec<usize>,
    /// `diffs[k]` is `d_{k+1}`: one row per basis element of `F_{k+1}`,
    /// giving its image in `F_k`.
    diffs: Vec<Vec<Row>>,
    offset: i64,
}

impl FreeComplex {
    pub fn new(
        algebra: &Algebra,
        ranks: Vec<usize>,
        diffs: Vec<Vec<Row>>,
        offset: i64,
    ) -> Result<FreeComplex> {
        if diffs.len() + 1 != ranks.len().max(1) {
            return Err(Error::Shape(
                "one differential between consecutive terms".into(),
            ));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.len() != ranks[k + 1] || d.iter().any(|r| r.len() != ranks[k]) {
                return Err(Error::Shape(format!(
                    "differential d_{} has the wrong shape",
                    k + 1
                )));
            }
        }
        let c = FreeComplex {
            algebra: algebra.clone(),
            ranks,
            diffs,
            offset,
        };
        if !c.is_complex() {
            return Err(Error::Shape(
                "consecutive differentials do not compose to zero".into(),
            ));
        }
        Ok(c)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn rank(&self, k: usize) -> usize {
        self.ranks.get(k).copied().unwrap_or(0)
    }

    /// `d_k : F_k -> F_{k-1}` as rows, `k >= 1`; empty beyond the end.
    pub fn differential(&self, k: usize) -> &[Row] {
        if k == 0 {
            return &[];
        }
        self.diffs.get(k - 1).map_or(&[], |d| d.as_slice())
    }

    /// `d_k . d_{k+1} = 0` for all `k`, checked exactly.
    pub fn is_complex(&self) -> bool {
        let ring = self.algebra.ring();
        let ctx = self.algebra.ctx();
        for k in 1..self.diffs.len() {
            let prod = matrix::poly_matmul(ring, &self.diffs[k], &self.diffs[k - 1])
                .expect("shapes agree");
            if prod
                .iter()
                .any(|r| r.iter().any(|p| !ctx.reduce(p).is_zero()))
            {
                return false;
            }
        }
        true
    }

    /// Apply `f` entrywise (as a complex over the target).
    pub fn base_change(&self, f: &AlgebraHom) -> Result<FreeComplex> {
        same_algebra(&self.algebra, f.source())?;
        let diffs = self
            .diffs
            .iter()
            .map(|d| {
                d.iter()
                    .map(|r| r.iter().map(|p| f.apply(p)).collect())
                    .collect()
            })
            .collect();
        FreeComplex::new(f.target(), self.ranks.clone(), diffs, self.offset)
    }
}

/// Kernel generators of `rows` viewed as a map `A^rows.len() -> A^rank`
/// modulo `untracked`.
fn kernel(alg: &Algebra, rows: &[Row], untracked: &[Row], rank: usize) -> Vec<Row> {
    if rows.is_empty() {
        return Vec::new();
    }
    if rank == 0 {
        let ctx = alg.ctx();
        return (0..rows.len())
            .map(|i| ctx.unit_row(rows.len(), i))
            .collect();
    }
    Extended::new(alg.ctx(), rows, untracked, rank).syzygies()
}

/// Drop generators of `F_k` made redundant by syzygies with a unit entry:
/// prunes `upper = d_{k+1}` against `lower = d_k`.
fn prune_pair(alg: &Algebra, lower: &mut Vec<Row>, upper: &mut Vec<Row>) {
    let ctx = alg.ctx();
    loop {
        let mut found = None;
        'search: for (si, s) in upper.iter().enumerate() {
            for (c, p) in s.iter().enumerate() {
                if let Some(v) = p.constant_value() {
                    if !v.is_zero() {
                        found = Some((si, c, v));
                        break 'search;
                    }
                }
            }
        }
        let Some((si, c, v)) = found else { break };
        let s = upper.swap_remove(si);
        let inv = v.inv().expect("nonzero constant");
        for t in upper.iter_mut() {
            if t[c].is_zero() {
                continue;
            }
            let f = t[c].scalar_mul(&inv);
            for (k, x) in t.iter_mut().enumerate() {
                *x = ctx.reduce(&(&*x - &(&f * &s[k])));
            }
        }
        for t in upper.iter_mut() {
            t.remove(c);
        }
        upper.retain(|t| t.iter().any(|p| !p.is_zero()));
        lower.remove(c);
    }
}

/// Free resolution of `m` through `F_length` (fewer terms if it stops).
pub fn free_resolution(m: &FPModule, length: usize) -> FreeComplex {
    let alg = &m.algebra;
    let mut ranks = vec![m.ngens];
    let mut diffs: Vec<Vec<Row>> = Vec::new();
    if length >= 1 && !m.relations.is_empty() {
        diffs.push(m.relations.clone());
        ranks.push(m.relations.len());
    }
    while !diffs.is_empty() && diffs.len() < length {
        let k = diffs.len();
        let prev = diffs[k - 1].clone();
        let mut syz = kernel(alg, &prev, &[], ranks[k - 1]);
        let mut lower = prev;
        prune_pair(alg, &mut lower, &mut syz);
        ranks[k] = lower.len();
        diffs[k - 1] = lower;
        if syz.is_empty() {
            break;
        }
        for r in &mut syz {
            *r = alg.ctx().reduce_row(r);
        }
        ranks.push(syz.len());
        diffs.push(syz);
    }
    // the first relations may have been thinned: keep shapes consistent
    if diffs.first().is_some_and(|d| d.is_empty()) {
        diffs.clear();
        ranks.truncate(1);
    }
    let c = FreeComplex {
        algebra: alg.clone(),
        ranks,
        diffs,
        offset: 0,
    };
    debug_assert!(c.is_complex());
    c
}

/// A subquotient `<K> / (<K> cap <L>)` of `A^rank`, presented on (a subset
/// of) the vectors of `K`.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub module: FPModule,
    /// Representatives in the ambient free module of the generators.
    pub gens: Vec<Row>,
    /// The submodule divided out, and the ambient rank.
    pub(crate) divisor: Vec<Row>,
    pub(crate) rank: usize,
}

impl Subquotient {
    fn empty(alg: &Algebra) -> Subquotient {
        Subquotient {
            module: FPModule::zero(alg),
            gens: Vec::new(),
            divisor: Vec::new(),
            rank: 0,
        }
    }

    /// Coordinates in `gens` of an ambient vector representing an element
    /// of the subquotient.
    pub fn coordinates(&self, v: &[Polynomial]) -> Option<Row> {
        if self.gens.is_empty() {
            return if v.iter().all(|p| p.is_zero()) {
                Some(Vec::new())
            } else {
                None
            };
        }
        let alg = self.module.algebra();
        Extended::new(alg.ctx(), &self.gens, &self.divisor, self.rank).lift(v)
    }
}

pub fn subquotient(alg: &Algebra, k: &[Row], l: &[Row], rank: usize) -> Subquotient {
    if k.is_empty() {
        return Subquotient::empty(alg);
    }
    let rels = if rank == 0 {
        kernel(alg, k, l, 0)
    } else {
        Extended::new(alg.ctx(), k, l, rank).syzygies()
    };
    let module = FPModule::new(alg, k.len(), rels).expect("syzygy rows have the generator count");
    let pruned = module.prune();
    let gens = pruned.kept.iter().map(|&j| k[j].clone()).collect();
    Subquotient {
        module: pruned.module,
        gens,
        divisor: l.to_vec(),
        rank,
    }
}

/// `H^i Hom(C, N)`. Elements of `Hom(F_i, N)` are vectors in `A^(n r_i)`,
/// block `j` holding the image of the `j`-th basis element of `F_i`.
pub fn complex_cohomology_gens(
    c: &FreeComplex,
    target: &FPModule,
    i: usize,
) -> Result<Subquotient> {
    same_algebra(&c.algebra, &target.algebra)?;
    let alg = &c.algebra;
    let ctx = alg.ctx();
    let n = target.ngens;
    let ri = c.rank(i);
    if ri == 0 || n == 0 {
        return Ok(Subquotient::empty(alg));
    }
    let blocks = |count: usize| -> Vec<Row> {
        let mut out = Vec::new();
        for b in 0..count {
            for rel in &target.relations {
                let mut row = ctx.zero_row(n * count);
                row[b * n..(b + 1) * n].clone_from_slice(rel);
                out.push(row);
            }
        }
        out
    };
    // delta(E_{j,p}) in Hom(F_{k+1}, N): component (l, p) = d_{k+1}[l][j]
    let delta = |k: usize| -> Vec<Row> {
        let d = c.differential(k + 1);
        let rk = c.rank(k);
        let rk1 = d.len();
        let mut out = Vec::with_capacity(rk * n);
        for j in 0..rk {
            for p in 0..n {
                let mut row = ctx.zero_row(n * rk1);
                for (l, dl) in d.iter().enumerate() {
                    row[l * n + p] = dl[j].clone();
                }
                out.push(row);
            }
        }
        out
    };
    let next_rank = c.differential(i + 1).len();
    let kernel_gens = if next_rank == 0 {
        (0..n * ri).map(|q| ctx.unit_row(n * ri, q)).collect()
    } else {
        kernel(alg, &delta(i), &blocks(next_rank), n * next_rank)
    };
    let mut image = if i >= 1 { delta(i - 1) } else { Vec::new() };
    image.retain(|r| r.iter().any(|p| !p.is_zero()));
    image.extend(blocks(ri));
    Ok(subquotient(alg, &kernel_gens, &image, n * ri))
}

pub fn complex_cohomology(c: &FreeComplex, target: &FPModule, i: usize) -> Result<FPModule> {
    Ok(complex_cohomology_gens(c, target, i)?.module)
}

/// `H_j(C)`: kernel of `d_j` modulo the image of `d_{j+1}` in `F_j`.
pub fn complex_homology(c: &FreeComplex, j: usize) -> Subquotient {
    let alg = &c.algebra;
    let ctx = alg.ctx();
    let rj = c.rank(j);
    if rj == 0 {
        return Subquotient::empty(alg);
    }
    let d = c.differential(j);
    let ker = if j == 0 || d.is_empty() {
        (0..rj).map(|q| ctx.unit_row(rj, q)).collect()
    } else {
        kernel(alg, d, &[], c.rank(j - 1))
    };
    subquotient(alg, &ker, c.differential(j + 1), rj)
}

/// `Ext^i_A(M, N)` with generators as vectors of `N^(r_i)`.
pub fn ext_module_gens(i: usize, m: &FPModule, n: &FPModule) -> Result<Subquotient> {
    same_algebra(&m.algebra, &n.algebra)?;
    let res = if i == 0 {
        m.presentation_complex()
    } else {
        free_resolution(m, i + 1)
    };
    complex_cohomology_gens(&res, n, i)
}

pub fn ext_module(i: usize, m: &FPModule, n: &FPModule) -> Result<FPModule> {
    Ok(ext_module_gens(i, m, n)?.module)
}

/// `Hom_A(M, N)`; each generator is the matrix of images of the generators
/// of `M` (one row of length `N.ngens` per generator of `M`).
pub fn hom_module(m: &FPModule, n: &FPModule) -> Result<(FPModule, Vec<Vec<Row>>)> {
    let sq = ext_module_gens(0, m, n)?;
    let k = n.ngens;
    let maps = sq
        .gens
        .iter()
        .map(|v| v.chunks(k.max(1)).map(|c| c.to_vec()).collect())
        .collect();
    Ok((sq.module, maps))
}

/// `Tor_j^A(M, N)` as the homology of a resolution of `M` tensored with `N`.
pub fn tor_module(j: usize, m: &FPModule, n: &FPModule) -> Result<FPModule> {
    same_algebra(&m.algebra, &n.algebra)?;
    let res = free_resolution(m, j + 1);
    // F (x) N = F (x) A^n / relations: homology of the tensored complex is
    // computed by presenting each term as a module with relations from N.
    let alg = &m.algebra;
    let ctx = alg.ctx();
    let k = n.ngens;
    let rj = res.rank(j);
    if rj == 0 || k == 0 {
        return Ok(FPModule::zero(alg));
    }
    // d (x) 1 on basis e_i (x) f_p: block structure as in cohomology
    let tensored = |d: &[Row], src: usize, dst: usize| -> Vec<Row> {
        let mut out = Vec::with_capacity(src * k);
        for row in d.iter().take(src) {
            for p in 0..k {
                let mut v = ctx.zero_row(dst * k);
                for (l, e) in row.iter().enumerate() {
                    v[l * k + p] = e.clone();
                }
                out.push(v);
            }
        }
        out
    };
    let rel_blocks = |count: usize| -> Vec<Row> {
        let mut out = Vec::new();
        for b in 0..count {
            for rel in &n.relations {
                let mut row = ctx.zero_row(k * count);
                row[b * k..(b + 1) * k].clone_from_slice(rel);
                out.push(row);
            }
        }
        out
    };
    let dj = res.differential(j);
    let ker = if j == 0 || dj.is_empty() {
        (0..rj * k).map(|q| ctx.unit_row(rj * k, q)).collect()
    } else {
        let r_prev = res.rank(j - 1);
        kernel(
            alg,
            &tensored(dj, rj, r_prev),
            &rel_blocks(r_prev),
            r_prev * k,
        )
    };
    let mut image = tensored(res.differential(j + 1), res.rank(j + 1), rj);
    image.extend(rel_blocks(rj));
    Ok(subquotient(alg, &ker, &image, rj * k).module)
}
