//! Canonical modules and the duality constructions built on them: the
//! squaring operation and rigidity, the auto-duality functor, `f^flat` for
//! finite maps, `f^sharp` for smooth maps, the twisted inverse image, and
//! traces along finite maps.
//!
//! Degrees are cohomological. A dualizing complex `omega[d]` has its module
//! in degree `-d`; tables store absolute degrees.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{make_hom, Algebra, AlgebraHom, Tri};
use crate::error::{Error, Result};
use crate::matrix::poly_determinant;
use crate::module::linalg::Extended;
use crate::module::{
    complex_cohomology, complex_cohomology_gens, complex_homology, ext_module, free_resolution,
    iso_probe, FPModule, FreeComplex, IsoVerdict, Row, DEFAULT_ATTEMPTS,
};
use crate::poly::Polynomial;
use crate::smooth::{prune_units, smoothness_rank, FiniteStructure};

/// Default truncation bound for the squaring operation.
pub const DEFAULT_SQUARING_BOUND: usize = 6;

/// How a [`CanonicalData`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// `Ext^c_C(A, C)` over the ambient polynomial ring.
    Direct,
    /// `omega_A (x) Omega^n_{B/A}` along a smooth map.
    SmoothTwist,
    /// `Ext_A(B, omega_A)` along a finite map.
    FiniteShriek,
}

/// The canonical module `omega` with shift `d`: the rigid dualizing complex
/// is `omega[d]`.
#[derive(Clone, Debug)]
pub struct CanonicalData {
    pub algebra: Algebra,
    /// `C = K[t_1..t_n]`, auxiliary variables included.
    pub ambient: Algebra,
    pub codim: usize,
    pub omega: FPModule,
    pub shift: i64,
    /// Indices `i != codim` in `[0, n]` with `Ext^i_C(A, C) = 0` verified.
    /// Empty for routes other than the direct one.
    pub cm_certificate: Vec<usize>,
    pub route: Route,
}

impl CanonicalData {
    /// Whether `omega` is free of rank one (three-valued).
    pub fn gorenstein(&self, seed: u64) -> Result<IsoVerdict> {
        iso_probe(
            &self.omega,
            &FPModule::free(&self.algebra, 1),
            seed,
            DEFAULT_ATTEMPTS,
        )
    }
}

/// Cohomology modules of an object of the derived category, by degree.
#[derive(Clone, Debug)]
pub struct ExtTable {
    pub algebra: Algebra,
    /// Nonzero entries only.
    pub entries: BTreeMap<i64, FPModule>,
    /// Every degree that was computed, zero or not.
    pub checked: Vec<i64>,
    pub provenance: String,
}

impl ExtTable {
    fn new(algebra: &Algebra, provenance: String) -> ExtTable {
        ExtTable {
            algebra: algebra.clone(),
            entries: BTreeMap::new(),
            checked: Vec::new(),
            provenance,
        }
    }

    fn record(&mut self, degree: i64, m: FPModule) {
        self.checked.push(degree);
        if !m.is_zero() {
            self.entries.insert(degree, m);
        }
    }

    pub fn get(&self, degree: i64) -> Option<&FPModule> {
        self.entries.get(&degree)
    }

    /// The entry at `degree`, or the zero module.
    pub fn entry(&self, degree: i64) -> FPModule {
        self.get(degree)
            .cloned()
            .unwrap_or_else(|| FPModule::zero(&self.algebra))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nonzero_degrees(&self) -> Vec<i64> {
        self.entries.keys().copied().collect()
    }

    /// The single nonzero entry, if there is exactly one.
    pub fn concentrated(&self) -> Option<(i64, &FPModule)> {
        if self.entries.len() == 1 {
            self.entries.iter().next().map(|(d, m)| (*d, m))
        } else {
            None
        }
    }

    fn require_concentrated(&self) -> Result<Option<(i64, FPModule)>> {
        match self.entries.len() {
            0 => Ok(None),
            1 => Ok(self.concentrated().map(|(d, m)| (d, m.clone()))),
            _ => Err(Error::NotConcentrated(self.nonzero_degrees())),
        }
    }
}

fn tidy(m: &FPModule) -> FPModule {
    prune_units(m).module
}

/// `A` as a cyclic module over its ambient polynomial ring.
fn as_ambient_module(a: &Algebra) -> Result<(Algebra, FPModule)> {
    let c = a.ambient();
    let m = FPModule::cyclic(&c, a.gb().generators())?;
    Ok((c, m))
}

/// `Ext^i_C(A, C)` for `i` in `[0, n]`, placed at degree `i - n`; this is
/// the cohomology of the dualizing complex whether or not `A` is
/// Cohen-Macaulay.
pub fn dualizing_table(a: &Algebra) -> Result<ExtTable> {
    if a.is_zero_ring() {
        return Err(Error::ZeroRing);
    }
    let n = a.nvars();
    let (c, quotient) = as_ambient_module(a)?;
    let res = free_resolution(&quotient, n + 1);
    let free = FPModule::free(&c, 1);
    let mut table = ExtTable::new(a, format!("Ext^i_C(A, C) at degree i - {n}, i in [0, {n}]"));
    for i in 0..=n {
        let e = complex_cohomology(&res, &free, i)?;
        table.record(i as i64 - n as i64, tidy(&e.transport(a)?));
    }
    Ok(table)
}

/// `omega_A = Ext^c_C(A, C)` with `c = n - dim A`, after checking that the
/// other `Ext^i_C(A, C)` vanish.
pub fn canonical_module(a: &Algebra) -> Result<CanonicalData> {
    if a.is_zero_ring() {
        return Err(Error::ZeroRing);
    }
    let n = a.nvars();
    let d = a.dim();
    let codim = n - d as usize;
    let (c, quotient) = as_ambient_module(a)?;
    let res = free_resolution(&quotient, n + 1);
    let free = FPModule::free(&c, 1);
    let mut omega = None;
    let mut cm_certificate = Vec::new();
    let mut bad = Vec::new();
    for i in 0..=n {
        let e = complex_cohomology(&res, &free, i)?;
        if i == codim {
            omega = Some(e);
        } else if e.is_zero() {
            cm_certificate.push(i);
        } else {
            bad.push(i);
        }
    }
    if !bad.is_empty() {
        return Err(Error::NotCohenMacaulay(bad));
    }
    let omega = tidy(&omega.expect("codimension lies in [0, n]").transport(a)?);
    Ok(CanonicalData {
        algebra: a.clone(),
        ambient: c,
        codim,
        omega,
        shift: d,
        cm_certificate,
        route: Route::Direct,
    })
}

/// `omega_B = omega_A (x)_A Omega^n_{B/A}` and `d_B = d_A + n` for a smooth
/// map with a free basis of differentials (so the top power is free on
/// the wedge of that basis).
pub fn smooth_twist(
    f: &AlgebraHom,
    cd: &CanonicalData,
    assume_separable: bool,
) -> Result<CanonicalData> {
    let cert = smoothness_rank(f, assume_separable)?;
    cert.free.as_ref().ok_or(Error::NotFree)?;
    let b = f.target();
    let shift = cd.shift + cert.rank as i64;
    if shift != b.dim() {
        return Err(Error::Shape(format!(
            "twisted shift {shift} disagrees with dim {}",
            b.dim()
        )));
    }
    let omega = tidy(&cd.omega.base_change(f)?);
    Ok(CanonicalData {
        algebra: b.clone(),
        ambient: b.ambient(),
        codim: b.nvars() - shift as usize,
        omega,
        shift,
        cm_certificate: Vec::new(),
        route: Route::SmoothTwist,
    })
}

/// Lift multiplication `phi0` on `F_0` (rows: images of basis vectors) to
/// an endomorphism of the whole resolution.
fn lift_chain_map(res: &FreeComplex, phi0: Vec<Row>) -> Vec<Vec<Row>> {
    let alg = res.algebra();
    let ctx = alg.ctx();
    let mut maps = vec![phi0];
    for i in 1..res.len() {
        let d = res.differential(i);
        let prev_rank = res.rank(i - 1);
        let ext = Extended::new(alg.ctx(), d, &[], prev_rank);
        let prev = &maps[i - 1];
        let mut phi = Vec::with_capacity(d.len());
        for row in d {
            let mut w = ctx.zero_row(prev_rank);
            for (l, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (k, e) in prev[l].iter().enumerate() {
                    w[k] = &w[k] + &(c * e);
                }
            }
            let w = ctx.reduce_row(&w);
            phi.push(ext.lift(&w).expect("chain maps lift along a resolution"));
        }
        maps.push(phi);
    }
    maps
}

/// `f^flat M = RHom_A(B, M)` for finite `f`: entry `Ext^i_A(B, M)` at
/// degree `i - shift`, each with its `B`-module structure, for `i` up to
/// the number of ambient variables of `A`.
pub fn finite_upper_shriek(
    f: &AlgebraHom,
    fin: &FiniteStructure,
    m: &FPModule,
    shift: i64,
) -> Result<ExtTable> {
    if f.finite_flag() != Tri::Yes {
        return Err(Error::NotFinite("finiteness not certified".into()));
    }
    let a = f.source();
    let b = f.target();
    if !std::sync::Arc::ptr_eq(fin.source(), a) || !std::sync::Arc::ptr_eq(fin.target(), b) {
        return Err(Error::UnrelatedLevels(
            "finite structure belongs to another map".into(),
        ));
    }
    let bound = a.nvars();
    let res = free_resolution(&fin.as_module(), bound + 1);
    let actions: Vec<Vec<Vec<Row>>> = (0..b.nvars())
        .map(|v| lift_chain_map(&res, fin.multiplication_matrix(&b.ring().var(v))))
        .collect();
    let mut table = ExtTable::new(
        b,
        format!("Ext^i_A(B, M) at degree i - {shift}, i in [0, {bound}]"),
    );
    let n = m.ngens();
    for i in 0..=bound {
        let sq = complex_cohomology_gens(&res, m, i)?;
        let g = sq.gens.len();
        let degree = i as i64 - shift;
        if g == 0 {
            table.record(degree, FPModule::zero(b));
            continue;
        }
        let mut rows: Vec<Row> = sq
            .module
            .relations()
            .iter()
            .map(|r| r.iter().map(|p| f.apply(p)).collect())
            .collect();
        for (v, maps) in actions.iter().enumerate() {
            let phi = &maps[i];
            let y = b.ring().var(v);
            for (j, gen) in sq.gens.iter().enumerate() {
                // psi . phi: block j is sum_l phi[j][l] * block l
                let mut moved = vec![a.ring().zero(); gen.len()];
                for (jj, prow) in phi.iter().enumerate() {
                    for (l, c) in prow.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        for p in 0..n {
                            let e = &gen[l * n + p];
                            if !e.is_zero() {
                                moved[jj * n + p] = &moved[jj * n + p] + &(c * e);
                            }
                        }
                    }
                }
                let moved = a.ctx().reduce_row(&moved);
                let coeffs = sq
                    .coordinates(&moved)
                    .expect("the action preserves cohomology");
                let mut row: Row = coeffs.iter().map(|c| -f.apply(c)).collect();
                row[j] = &row[j] + &y;
                rows.push(row);
            }
        }
        table.record(degree, tidy(&FPModule::new(b, g, rows)?));
    }
    Ok(table)
}

/// `omega_B` via `f^flat(omega_A[d_A])`, which must be concentrated.
pub fn finite_route(
    f: &AlgebraHom,
    fin: &FiniteStructure,
    cd: &CanonicalData,
) -> Result<CanonicalData> {
    let table = finite_upper_shriek(f, fin, &cd.omega, cd.shift)?;
    let b = f.target();
    let (degree, omega) = table.require_concentrated()?.ok_or(Error::ZeroRing)?;
    let shift = -degree;
    Ok(CanonicalData {
        algebra: b.clone(),
        ambient: b.ambient(),
        codim: (b.nvars() as i64 - shift).max(0) as usize,
        omega,
        shift,
        cm_certificate: Vec::new(),
        route: Route::FiniteShriek,
    })
}

/// Evaluation at 1, `Hom_A(B, M) -> M`, on the generators of the Hom.
#[derive(Clone, Debug)]
pub struct EvalTrace {
    pub hom: FPModule,
    /// Each generator as the images of the basis of `B` (rows in `M`).
    pub maps: Vec<Vec<Row>>,
    /// `phi(1)` for each generator.
    pub values: Vec<Row>,
}

/// `phi(1)` for `phi` given by the images of the basis of `B`.
fn evaluate_at_one(fin: &FiniteStructure, map: &[Row], m: &FPModule) -> Row {
    let a = fin.source();
    let one = fin.coords(&fin.target().ring().one());
    let mut out = a.ctx().zero_row(m.ngens());
    for (c, img) in one.iter().zip(map) {
        if c.is_zero() {
            continue;
        }
        for (k, e) in img.iter().enumerate() {
            out[k] = &out[k] + &(c * e);
        }
    }
    a.ctx().reduce_row(&out)
}

pub fn eval_trace(f: &AlgebraHom, fin: &FiniteStructure, m: &FPModule) -> Result<EvalTrace> {
    if f.finite_flag() != Tri::Yes {
        return Err(Error::NotFinite("finiteness not certified".into()));
    }
    let (hom, maps) = crate::module::hom_module(&fin.as_module(), m)?;
    let values = maps
        .iter()
        .map(|map| evaluate_at_one(fin, map, m))
        .collect();
    Ok(EvalTrace { hom, maps, values })
}

/// `tr_{B/A}(b)`: trace of multiplication by `b` in a free basis.
pub fn classical_trace(fin: &FiniteStructure, b: &Polynomial) -> Result<Polynomial> {
    if !fin.is_free() {
        return Err(Error::NoFreeBasis);
    }
    let a = fin.source();
    let mat = fin.multiplication_matrix(b);
    let mut acc = a.ring().zero();
    for (i, row) in mat.iter().enumerate() {
        acc = &acc + &row[i];
    }
    Ok(a.reduce(&acc))
}

/// The trace pairing `(b_i, b_j) -> tr(b_i b_j)` on a free basis.
#[derive(Clone, Debug)]
pub struct EtalePairing {
    pub gram: Vec<Row>,
    pub determinant: Polynomial,
    /// The determinant is a unit of the source.
    pub etale: bool,
    /// When `etale`: for every basis vector `b_i`, the functional
    /// `b_i (x) 1 -> (b -> tr(b_i b))` evaluated at 1 equals `tr(b_i)`.
    pub evaluation_matches: Option<bool>,
}

pub fn etale_pairing(f: &AlgebraHom, fin: &FiniteStructure) -> Result<EtalePairing> {
    if f.finite_flag() != Tri::Yes {
        return Err(Error::NotFinite("finiteness not certified".into()));
    }
    if !fin.is_free() {
        return Err(Error::NoFreeBasis);
    }
    let a = fin.source();
    let basis = fin.basis();
    let mut gram = Vec::with_capacity(basis.len());
    for bi in &basis {
        let row = basis
            .iter()
            .map(|bj| classical_trace(fin, &(bi * bj)))
            .collect::<Result<Row>>()?;
        gram.push(row);
    }
    let determinant = a.reduce(&poly_determinant(a.ring(), &gram));
    let etale = a.is_unit(&determinant);
    let evaluation_matches = if etale {
        let m = FPModule::free(a, 1);
        let mut ok = true;
        for (i, bi) in basis.iter().enumerate() {
            let map: Vec<Row> = gram[i].iter().map(|g| vec![g.clone()]).collect();
            let value = evaluate_at_one(fin, &map, &m);
            ok &= a.equal(&value[0], &classical_trace(fin, bi)?);
        }
        Some(ok)
    } else {
        None
    };
    Ok(EtalePairing {
        gram,
        determinant,
        etale,
        evaluation_matches,
    })
}

/// `Sq_{A/K} M = RHom_{A (x) A}(A, M (x)_K M)` for `M[d]`: entry
/// `Ext^i_{A(x)A}(A, M (x) M)` at degree `i - 2d`, for `i` in `[0, bound]`.
/// A rigid `M[d]` has `M` at degree `-d` and nothing else.
pub fn squaring_table(a: &Algebra, m: &FPModule, d: i64, bound: usize) -> Result<ExtTable> {
    crate::module::same_algebra(a, m.algebra())?;
    let ts = a.tensor_square()?;
    let aa = &ts.algebra;
    let ring2 = aa.ring();
    let diag: Vec<Polynomial> = (0..a.nvars())
        .map(|i| &ring2.var(ts.left[i]) - &ring2.var(ts.right[i]))
        .collect();
    let delta = FPModule::cyclic(aa, &diag)?;
    let k = m.ngens();
    let zero = ring2.zero();
    let mut rows = Vec::new();
    for r in m.relations() {
        for j in 0..k {
            let mut row = vec![zero.clone(); k * k];
            for i in 0..k {
                row[i * k + j] = r[i].embed(ring2, &ts.left);
            }
            rows.push(row);
        }
    }
    for s in m.relations() {
        for i in 0..k {
            let mut row = vec![zero.clone(); k * k];
            for j in 0..k {
                row[i * k + j] = s[j].embed(ring2, &ts.right);
            }
            rows.push(row);
        }
    }
    let square = FPModule::new(aa, k * k, rows)?;
    let nv = a.nvisible();
    let images: Vec<Polynomial> = (0..2 * nv).map(|i| a.ring().var(i % nv.max(1))).collect();
    let back = make_hom(aa, a, &images)?;
    let res = free_resolution(&delta, bound + 1);
    let stopped = res.len() <= bound + 1;
    let mut table = ExtTable::new(
        a,
        format!(
            "Ext^i_(A(x)A)(A, M(x)M) at degree i - {}, i in [0, {bound}]{}",
            2 * d,
            if stopped {
                "; resolution finite"
            } else {
                "; resolution truncated"
            }
        ),
    );
    for i in 0..=bound {
        let e = complex_cohomology(&res, &square, i)?;
        table.record(i as i64 - 2 * d, tidy(&e.base_change(&back)?));
    }
    Ok(table)
}

#[derive(Clone, Debug)]
pub struct RigidityReport {
    pub algebra: Algebra,
    pub omega: FPModule,
    pub shift: i64,
    pub bound: usize,
    pub seed: u64,
    pub table: ExtTable,
    /// `iso_probe` of the entry at degree `-d` against `omega`.
    pub verdict: IsoVerdict,
    /// Other checked degrees with their vanishing.
    pub others: Vec<(i64, bool)>,
    pub rigid: Tri,
}

pub fn rigidity_check(cd: &CanonicalData, bound: usize, seed: u64) -> Result<RigidityReport> {
    let a = &cd.algebra;
    let table = squaring_table(a, &cd.omega, cd.shift, bound)?;
    let target = -cd.shift;
    let verdict = iso_probe(&table.entry(target), &cd.omega, seed, DEFAULT_ATTEMPTS)?;
    let others: Vec<(i64, bool)> = table
        .checked
        .iter()
        .filter(|&&deg| deg != target)
        .map(|&deg| (deg, table.get(deg).is_none()))
        .collect();
    let rigid = match &verdict {
        _ if others.iter().any(|(_, zero)| !zero) => Tri::No,
        IsoVerdict::IsoFound { .. } => Tri::Yes,
        IsoVerdict::Mismatch { .. } => Tri::No,
        IsoVerdict::Inconclusive { .. } => Tri::Unknown,
    };
    Ok(RigidityReport {
        algebra: a.clone(),
        omega: cd.omega.clone(),
        shift: cd.shift,
        bound,
        seed,
        table,
        verdict,
        others,
        rigid,
    })
}

/// `D_A(M[-p]) = RHom_A(M[-p], omega[d])`: `Ext^i_A(M, omega)` at degree
/// `i - d - p`, for `i` in `[0, d]` (the injective dimension of `omega`).
pub fn dualize_at(cd: &CanonicalData, m: &FPModule, p: i64) -> Result<ExtTable> {
    crate::module::same_algebra(&cd.algebra, m.algebra())?;
    let d = cd.shift;
    let mut table = ExtTable::new(
        &cd.algebra,
        format!("Ext^i_A(M, omega) at degree i - {d} - {p}, i in [0, {d}]"),
    );
    for i in 0..=d.max(0) as usize {
        let e = ext_module(i, m, &cd.omega)?;
        table.record(i as i64 - d - p, tidy(&e));
    }
    Ok(table)
}

/// `D_A(M) = RHom_A(M, omega[d])` for `M` in degree 0.
pub fn dualize(cd: &CanonicalData, m: &FPModule) -> Result<ExtTable> {
    dualize_at(cd, m, 0)
}

/// `f^! (M[-p]) = D_B L f^* D_A (M[-p])`. Requires `D_A(M)` concentrated in
/// one degree and the base change of that module to be exact.
pub fn twisted_inverse_image(
    f: &AlgebraHom,
    cd_source: &CanonicalData,
    cd_target: &CanonicalData,
    m: &FPModule,
    p: i64,
) -> Result<ExtTable> {
    let b = f.target();
    if f.is_identity() {
        let mut table = ExtTable::new(b, "identity map".into());
        table.record(p, m.clone());
        return Ok(table);
    }
    let dual = dualize_at(cd_source, m, p)?;
    let Some((q, e)) = dual.require_concentrated()? else {
        return Ok(ExtTable::new(b, "zero module".into()));
    };
    let a = f.source();
    let res = free_resolution(&e, a.nvars() + 1).base_change(f)?;
    for j in 1..res.len() {
        if !complex_homology(&res, j).module.is_zero() {
            return Err(Error::NotTorIndependent(j));
        }
    }
    let eb = e.base_change(f)?;
    let mut table = dualize_at(cd_target, &eb, q)?;
    table.provenance = format!(
        "D_B(B (x) E) with E = D_A(M) in degree {q}; {}",
        table.provenance
    );
    Ok(table)
}

#[cfg(test)]
mod tests;
