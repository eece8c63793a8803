//! Ideal-level Groebner bases: membership, normal forms, syzygies,
//! Krull dimension and Hilbert series.

pub(crate) mod engine;
mod hilbert;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{PolyRing, Polynomial};

pub(crate) use engine::{Engine, Vector};
pub use engine::{ModuleOrder, PositionRule};
pub(crate) use hilbert::hilbert_numerator;
pub use hilbert::HilbertSeries;

/// A Groebner basis of an ideal. Generators live in a ring whose order is
/// the basis order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: Arc<PolyRing>,
    generators: Vec<Polynomial>,
    reduced: bool,
}

pub(crate) fn poly_terms(p: &Polynomial, pos: usize) -> Vec<engine::Term> {
    p.terms()
        .iter()
        .map(|(c, m)| (c.clone(), m.clone(), pos))
        .collect()
}

pub(crate) fn vector_component(ring: &Arc<PolyRing>, v: &Vector, pos: usize) -> Polynomial {
    Polynomial::from_terms(
        ring,
        v.terms
            .iter()
            .filter(|t| t.2 == pos)
            .map(|(c, m, _)| (c.clone(), m.clone()))
            .collect(),
    )
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn order(&self) -> MonomialOrder {
        self.ring.order()
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.generators
            .iter()
            .any(|g| g.is_constant() && !g.is_zero())
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.generators
            .iter()
            .map(|g| g.leading_monomial().unwrap().clone())
            .collect()
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        normal_form(f, self).is_zero()
    }

    /// Ideal is generated by homogeneous polynomials (checked on the reduced basis).
    pub fn is_homogeneous(&self) -> bool {
        self.generators.iter().all(|g| g.is_homogeneous())
    }

    /// Checks Buchberger's criterion directly: every S-polynomial reduces to zero.
    pub fn satisfies_buchberger_criterion(&self) -> bool {
        let eng = Engine::new(ModuleOrder::ideal(self.ring.order()));
        let vecs: Vec<Vector> = self
            .generators
            .iter()
            .map(|g| eng.normalize(poly_terms(g, 0)))
            .collect();
        for i in 0..vecs.len() {
            for j in i + 1..vecs.len() {
                if !eng.reduce(&eng.spoly(&vecs[i], &vecs[j]), &vecs).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// Reduced Groebner basis of the ideal generated by `generators` in `ring`
/// under `order`.
pub fn buchberger(
    ring: &Arc<PolyRing>,
    generators: &[Polynomial],
    order: MonomialOrder,
) -> Result<GroebnerBasis> {
    let target = if ring.order() == order {
        ring.clone()
    } else {
        ring.reorder(order)
    };
    let eng = Engine::new(ModuleOrder::ideal(order));
    let mut vecs = Vec::with_capacity(generators.len());
    for g in generators {
        if g.ring().vars() != ring.vars() {
            return Err(Error::RingMismatch(format!(
                "{:?} vs {:?}",
                g.ring().vars(),
                ring.vars()
            )));
        }
        if g.ring().field() != ring.field() {
            return Err(Error::CharacteristicMismatch(
                g.ring().field().characteristic(),
                ring.field().characteristic(),
            ));
        }
        vecs.push(eng.normalize(poly_terms(g, 0)));
    }
    let basis = eng.groebner(&vecs);
    let generators = basis
        .iter()
        .map(|v| vector_component(&target, v, 0))
        .collect();
    Ok(GroebnerBasis {
        ring: target,
        generators,
        reduced: true,
    })
}

/// The unique remainder of `f` modulo the ideal, returned in `f`'s ring.
pub fn normal_form(f: &Polynomial, gb: &GroebnerBasis) -> Polynomial {
    let eng = Engine::new(ModuleOrder::ideal(gb.ring.order()));
    let basis: Vec<Vector> = gb
        .generators
        .iter()
        .map(|g| eng.normalize(poly_terms(g, 0)))
        .collect();
    let v = eng.normalize(poly_terms(f, 0));
    let r = eng.reduce(&v, &basis);
    vector_component(f.ring(), &r, 0)
}

/// Generators of the syzygy module of the basis elements, built from the
/// S-pair reductions (Schreyer). Each returned vector has one entry per
/// basis element and satisfies `sum_k s_k g_k = 0`.
pub fn syzygy_matrix(gb: &GroebnerBasis) -> Vec<Vec<Polynomial>> {
    let g = &gb.generators;
    let ring = &gb.ring;
    let mut out = Vec::new();
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            let (ci, mi) = g[i].leading_term().unwrap();
            let (cj, mj) = g[j].leading_term().unwrap();
            let l = mi.lcm(mj);
            let ui = Polynomial::from_terms(ring, vec![(cj.clone(), mi.quotient(&l))]);
            let uj = Polynomial::from_terms(ring, vec![(ci.clone(), mj.quotient(&l))]);
            let s = &(&ui * &g[i]) - &(&uj * &g[j]);
            let (q, r) = s.divmod(g).expect("basis elements are nonzero");
            debug_assert!(r.is_zero());
            let mut syz: Vec<Polynomial> = q.iter().map(|qk| -qk).collect();
            syz[i] = &syz[i] + &ui;
            syz[j] = &syz[j] - &uj;
            out.push(syz);
        }
    }
    out
}

/// Krull dimension of `K[vars]/I`: the largest set of variables independent
/// modulo the initial ideal. The unit ideal has dimension -1.
pub fn krull_dimension(gb: &GroebnerBasis) -> i64 {
    if gb.is_unit_ideal() {
        return -1;
    }
    let n = gb.ring.nvars();
    let lms = gb.leading_monomials();
    independent_set_dimension(&lms, n) as i64
}

pub(crate) fn independent_set_dimension(lms: &[Monomial], n: usize) -> usize {
    let mut best = 0;
    for mask in 0u64..(1u64 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let allowed: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        if lms.iter().all(|m| !m.only_involves(&allowed)) {
            best = size;
        }
    }
    best
}

/// Hilbert series of `K[vars]/I` for a homogeneous ideal.
pub fn hilbert_series(gb: &GroebnerBasis) -> Result<HilbertSeries> {
    if !gb.is_homogeneous() {
        return Err(Error::NonHomogeneous);
    }
    let n = gb.ring.nvars();
    Ok(HilbertSeries::new(
        hilbert_numerator(&gb.leading_monomials(), n),
        n,
    ))
}

/// Groebner basis of `I ∩ K[remaining vars]`, using a block order that
/// eliminates the first `k` variables. The returned generators live in the
/// block-ordered ring and do not involve the eliminated variables.
pub fn eliminate(
    ring: &Arc<PolyRing>,
    generators: &[Polynomial],
    k: usize,
) -> Result<Vec<Polynomial>> {
    let gb = buchberger(ring, generators, MonomialOrder::Block(k))?;
    Ok(gb
        .generators
        .into_iter()
        .filter(|g| (0..k).all(|v| !g.involves(v)))
        .collect())
}
