//! Buchberger's algorithm for submodules of free modules `C^r` over a
//! polynomial ring `C`. Ideals are the rank-one case.

use std::cmp::Ordering;

use crate::monomial::{grevlex_slice, Monomial, MonomialOrder};
use crate::scalar::Scalar;

/// How positions interact with monomials in a module order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PositionRule {
    /// Position first (lower index is larger), then monomial.
    Pot,
    /// Monomial first, then position.
    Top,
    /// Compare the first `k` variables (graded reverse lex), then the
    /// position, then the remaining variables. Used to eliminate variables
    /// from module elements.
    AfterBlock(usize),
}

/// A module monomial order. With `split = Some(s)`, every term at a
/// position `< s` is larger than every term at a position `>= s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModuleOrder {
    pub mono: MonomialOrder,
    pub rule: PositionRule,
    pub split: Option<usize>,
}

impl ModuleOrder {
    pub fn ideal(mono: MonomialOrder) -> ModuleOrder {
        ModuleOrder {
            mono,
            rule: PositionRule::Top,
            split: None,
        }
    }

    pub fn compare(&self, a: &Monomial, pa: usize, b: &Monomial, pb: usize) -> Ordering {
        if let Some(s) = self.split {
            let (ba, bb) = (pa >= s, pb >= s);
            if ba != bb {
                return bb.cmp(&ba);
            }
        }
        match self.rule {
            PositionRule::Pot => pb.cmp(&pa).then_with(|| self.mono.compare(a, b)),
            PositionRule::Top => self.mono.compare(a, b).then_with(|| pb.cmp(&pa)),
            PositionRule::AfterBlock(k) => grevlex_slice(&a.exps()[..k], &b.exps()[..k])
                .then_with(|| pb.cmp(&pa))
                .then_with(|| self.mono.compare_tail(a, b, k)),
        }
    }
}

pub type Term = (Scalar, Monomial, usize);

/// A module element: terms sorted strictly descending in the active order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Vector {
    pub terms: Vec<Term>,
}

impl Vector {
    pub fn zero() -> Vector {
        Vector { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&Term> {
        self.terms.first()
    }
}

pub struct Engine {
    pub order: ModuleOrder,
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    pos: usize,
}

impl Engine {
    pub fn new(order: ModuleOrder) -> Engine {
        Engine { order }
    }

    pub fn cmp_terms(&self, a: &Term, b: &Term) -> Ordering {
        self.order.compare(&a.1, a.2, &b.1, b.2)
    }

    /// Sort and combine arbitrary terms into a vector.
    pub fn normalize(&self, mut terms: Vec<Term>) -> Vector {
        terms.sort_by(|a, b| self.cmp_terms(b, a));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.1 == t.1 && last.2 == t.2 => last.0 = last.0.add(&t.0),
                _ => out.push(t),
            }
            if matches!(out.last(), Some(l) if l.0.is_zero()) {
                out.pop();
            }
        }
        Vector { terms: out }
    }

    /// `a + c * m * b`.
    pub fn add_scaled(&self, a: &Vector, c: &Scalar, m: &Monomial, b: &Vector) -> Vector {
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        let bt: Vec<Term> = b
            .terms
            .iter()
            .map(|(d, n, p)| (c.mul(d), n.mul(m), *p))
            .collect();
        let at = &a.terms;
        while i < at.len() && j < bt.len() {
            match self.cmp_terms(&at[i], &bt[j]) {
                Ordering::Greater => {
                    out.push(at[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(bt[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let s = at[i].0.add(&bt[j].0);
                    if !s.is_zero() {
                        out.push((s, at[i].1.clone(), at[i].2));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&at[i..]);
        out.extend_from_slice(&bt[j..]);
        Vector { terms: out }
    }

    pub fn scale(&self, a: &Vector, c: &Scalar) -> Vector {
        if c.is_zero() {
            return Vector::zero();
        }
        Vector {
            terms: a
                .terms
                .iter()
                .map(|(d, m, p)| (c.mul(d), m.clone(), *p))
                .collect(),
        }
    }

    pub fn monic(&self, a: &Vector) -> Vector {
        match a.lead() {
            Some((c, _, _)) if !c.is_one() => self.scale(a, &c.inv().unwrap()),
            _ => a.clone(),
        }
    }

    fn find_reducer<'a>(&self, basis: &[&'a Vector], m: &Monomial, p: usize) -> Option<&'a Vector> {
        basis.iter().copied().find(|g| {
            let (_, gm, gp) = g.lead().unwrap();
            *gp == p && gm.divides(m)
        })
    }

    /// Full reduction of `v` modulo `basis`.
    pub fn reduce(&self, v: &Vector, basis: &[Vector]) -> Vector {
        let refs: Vec<&Vector> = basis.iter().collect();
        self.reduce_by(v, &refs)
    }

    pub fn reduce_by(&self, v: &Vector, basis: &[&Vector]) -> Vector {
        let mut p = v.clone();
        let mut rem: Vec<Term> = Vec::new();
        while let Some((c, m, pos)) = p.terms.first().cloned() {
            match self.find_reducer(basis, &m, pos) {
                Some(g) => {
                    let (gc, gm, _) = g.lead().unwrap();
                    let q = c.div(gc).unwrap().neg();
                    let qm = gm.quotient(&m);
                    p = self.add_scaled(&p, &q, &qm, g);
                }
                None => {
                    rem.push((c, m, pos));
                    p.terms.remove(0);
                }
            }
        }
        Vector { terms: rem }
    }

    pub fn spoly(&self, f: &Vector, g: &Vector) -> Vector {
        let (fc, fm, _) = f.lead().unwrap();
        let (gc, gm, _) = g.lead().unwrap();
        let l = fm.lcm(gm);
        let a = self.scale(f, &gc.clone());
        let a = Vector {
            terms: a
                .terms
                .iter()
                .map(|(c, m, p)| (c.clone(), m.mul(&fm.quotient(&l)), *p))
                .collect(),
        };
        self.add_scaled(&a, &fc.neg(), &gm.quotient(&l), g)
    }

    /// Reduced Groebner basis of the submodule generated by `gens`,
    /// sorted ascending by leading term.
    pub fn groebner(&self, gens: &[Vector]) -> Vec<Vector> {
        let rank_one = gens.iter().all(|g| g.terms.iter().all(|t| t.2 == 0));
        let mut polys: Vec<Vector> = Vec::new();
        let mut active: Vec<bool> = Vec::new();
        let mut pairs: Vec<Pair> = Vec::new();

        let mut seeds: Vec<Vector> = gens
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| self.monic(g))
            .collect();
        seeds.sort_by(|a, b| self.cmp_terms(a.lead().unwrap(), b.lead().unwrap()));
        for g in seeds {
            let active_basis: Vec<&Vector> = polys
                .iter()
                .zip(&active)
                .filter(|(_, a)| **a)
                .map(|(p, _)| p)
                .collect();
            let r = self.reduce_by(&g, &active_basis);
            if !r.is_zero() {
                self.update(
                    &mut polys,
                    &mut active,
                    &mut pairs,
                    self.monic(&r),
                    rank_one,
                );
            }
        }

        while !pairs.is_empty() {
            let best = (0..pairs.len())
                .min_by(|&a, &b| {
                    let (pa, pb) = (&pairs[a], &pairs[b]);
                    pa.lcm
                        .degree()
                        .cmp(&pb.lcm.degree())
                        .then_with(|| self.order.compare(&pa.lcm, pa.pos, &pb.lcm, pb.pos))
                        .then_with(|| (pa.i, pa.j).cmp(&(pb.i, pb.j)))
                })
                .unwrap();
            let pair = pairs.swap_remove(best);
            let s = self.spoly(&polys[pair.i], &polys[pair.j]);
            let active_basis: Vec<&Vector> = polys
                .iter()
                .zip(&active)
                .filter(|(_, a)| **a)
                .map(|(p, _)| p)
                .collect();
            let r = self.reduce_by(&s, &active_basis);
            if !r.is_zero() {
                self.update(
                    &mut polys,
                    &mut active,
                    &mut pairs,
                    self.monic(&r),
                    rank_one,
                );
            }
        }

        let minimal: Vec<Vector> = polys
            .into_iter()
            .zip(active)
            .filter(|(_, a)| *a)
            .map(|(p, _)| p)
            .collect();
        let mut reduced = Vec::with_capacity(minimal.len());
        for (k, g) in minimal.iter().enumerate() {
            let others: Vec<&Vector> = minimal
                .iter()
                .enumerate()
                .filter(|(l, _)| *l != k)
                .map(|(_, h)| h)
                .collect();
            let head = Vector {
                terms: vec![g.terms[0].clone()],
            };
            let tail = self.reduce_by(
                &Vector {
                    terms: g.terms[1..].to_vec(),
                },
                &others,
            );
            let mut terms = head.terms;
            terms.extend(tail.terms);
            reduced.push(self.monic(&Vector { terms }));
        }
        reduced.sort_by(|a, b| self.cmp_terms(a.lead().unwrap(), b.lead().unwrap()));
        reduced
    }

    // Gebauer-Moeller installation of a new basis element.
    fn update(
        &self,
        polys: &mut Vec<Vector>,
        active: &mut Vec<bool>,
        pairs: &mut Vec<Pair>,
        h: Vector,
        rank_one: bool,
    ) {
        let hidx = polys.len();
        let (_, hm, hp) = h.lead().unwrap().clone();
        polys.push(h);
        active.push(true);

        let mut cands: Vec<(usize, Monomial, bool)> = Vec::new();
        for (g, poly) in polys.iter().enumerate().take(hidx) {
            if !active[g] {
                continue;
            }
            let (_, gm, gp) = poly.lead().unwrap();
            if *gp != hp {
                continue;
            }
            cands.push((g, hm.lcm(gm), rank_one && hm.is_coprime(gm)));
        }
        // chain criterion among the new pairs
        let mut remaining: std::collections::VecDeque<(usize, Monomial, bool)> = cands.into();
        let mut accepted: Vec<(usize, Monomial, bool)> = Vec::new();
        while let Some((g, l, coprime)) = remaining.pop_front() {
            let dominated = remaining
                .iter()
                .chain(accepted.iter())
                .any(|(_, l2, _)| l2.divides(&l));
            if coprime || !dominated {
                accepted.push((g, l, coprime));
            }
        }
        // old pairs made redundant by the new leading term
        pairs.retain(|p| {
            if p.pos != hp || !hm.divides(&p.lcm) {
                return true;
            }
            let li = polys[p.i].lead().unwrap().1.lcm(&hm);
            let lj = polys[p.j].lead().unwrap().1.lcm(&hm);
            li == p.lcm || lj == p.lcm
        });
        for (g, l, coprime) in accepted {
            if !coprime {
                pairs.push(Pair {
                    i: g,
                    j: hidx,
                    lcm: l,
                    pos: hp,
                });
            }
        }
        for g in 0..hidx {
            if active[g] {
                let (_, gm, gp) = polys[g].lead().unwrap();
                if *gp == hp && hm.divides(gm) {
                    active[g] = false;
                }
            }
        }
    }
}
