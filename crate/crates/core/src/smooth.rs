//! Kähler differentials, smoothness via Fitting ideals, finiteness via
//! elimination, and étaleness.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{Algebra, AlgebraHom, Tri};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, normal_form, GroebnerBasis};
use crate::matrix::minors;
use crate::module::linalg::{eliminating, Ctx};
use crate::module::{prune_with, FPModule, Pruned, Row};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{PolyRing, Polynomial};

/// `Omega^1_{B/A}` presented on `dt_k` for every ambient variable of `B`.
#[derive(Clone, Debug)]
pub struct KahlerModule {
    pub module: FPModule,
    /// Jacobian rows of the defining relations of `B` (auxiliary relations
    /// `u*g - 1` included), in the order of `B::defining_ideal`.
    pub jacobian_rows: Vec<Row>,
    /// Rows `d f(a)` for the visible variables `a` of the source.
    pub relative_rows: Vec<Row>,
}

fn gradient(f: &Polynomial, n: usize) -> Row {
    (0..n)
        .map(|k| f.partial_derivative(k).expect("index in range"))
        .collect()
}

pub fn kahler_module(f: &AlgebraHom) -> KahlerModule {
    let b = f.target();
    let n = b.nvars();
    let jacobian_rows: Vec<Row> = b.defining_ideal().iter().map(|r| gradient(r, n)).collect();
    let relative_rows: Vec<Row> = f.images()[..f.source().nvisible()]
        .iter()
        .map(|p| gradient(p, n))
        .collect();
    let mut rows = jacobian_rows.clone();
    rows.extend(relative_rows.iter().cloned());
    let module = FPModule::new(b, n, rows).expect("gradients have one entry per variable");
    KahlerModule {
        module,
        jacobian_rows,
        relative_rows,
    }
}

/// Fitting ideal `F_r` of a presentation with `m` generators: the
/// `(m - r)`-minors together with the defining ideal.
pub fn fitting_ideal(m: &FPModule, r: usize) -> Result<GroebnerBasis> {
    let alg = m.algebra();
    let ring = alg.ring();
    let mut gens = alg.gb().generators().to_vec();
    if r >= m.ngens() {
        gens.push(ring.one());
    } else {
        gens.extend(minors(ring, m.relations(), m.ngens() - r));
    }
    buchberger(ring, &gens, ring.order())
}

fn is_zero_ideal_mod(alg: &Algebra, gb: &GroebnerBasis) -> bool {
    gb.generators().iter().all(|g| alg.is_zero_elem(g))
}

/// A free basis of `Omega^1` drawn from the `dt_k`, with coordinates of
/// every `dt_k` in it.
#[derive(Clone, Debug)]
pub struct FreeDifferentials {
    pub algebra: Algebra,
    /// Ambient variable indices whose differentials form the basis.
    pub basis: Vec<usize>,
    /// `coords[k]` expresses `dt_k` in the basis.
    pub coords: Vec<Row>,
}

impl FreeDifferentials {
    /// Coordinates of `dg` in the basis.
    pub fn differential(&self, g: &Polynomial) -> Row {
        let ctx = self.algebra.ctx();
        let mut out = ctx.zero_row(self.basis.len());
        for (k, c) in self.coords.iter().enumerate() {
            let d = g.partial_derivative(k).expect("index in range");
            if d.is_zero() {
                continue;
            }
            for (i, e) in c.iter().enumerate() {
                out[i] = &out[i] + &(&d * e);
            }
        }
        ctx.reduce_row(&out)
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_names(&self) -> Vec<String> {
        self.basis
            .iter()
            .map(|&k| format!("d{}", self.algebra.ring().vars()[k]))
            .collect()
    }
}

/// Certificate from [`smoothness_rank`].
#[derive(Clone, Debug)]
pub struct SmoothCertificate {
    pub rank: usize,
    /// `F_rank` is the unit ideal; `F_{rank-1}` vanishes.
    pub fitting_unit: usize,
    pub free: Option<FreeDifferentials>,
}

/// Prune `Omega^1`, pivoting on unit entries; auxiliary-variable
/// generators go first, then constant units, then other units.
pub(crate) fn prune_units(k: &FPModule) -> Pruned {
    let alg = k.algebra().clone();
    let nvis = alg.nvisible();
    let mut cache: HashMap<Polynomial, Option<Polynomial>> = HashMap::new();
    let cache = std::cell::RefCell::new(&mut cache);
    let pivot = |col: usize, p: &Polynomial| -> Option<(u8, Polynomial)> {
        let aux = col >= nvis;
        if let Some(c) = p.constant_value() {
            let inv = alg.ring().constant(c.inv().ok()?);
            return Some((if aux { 0 } else { 1 }, inv));
        }
        let inv = cache
            .borrow_mut()
            .entry(p.clone())
            .or_insert_with(|| alg.unit_inverse(p))
            .clone()?;
        Some((if aux { 0 } else { 2 }, inv))
    };
    prune_with(k, &pivot)
}

/// Certify `Omega^1_{B/A}` locally free of rank `r` via `F_{r-1} = 0` and
/// `F_r = (1)`, and look for a free basis among the `dt_k`. In positive
/// characteristic the caller must assert separability.
pub fn smoothness_rank(f: &AlgebraHom, assume_separable: bool) -> Result<SmoothCertificate> {
    let p = f.target().field().characteristic();
    if p != 0 && !assume_separable {
        return Err(Error::SeparabilityRequired(p));
    }
    let omega = kahler_module(f);
    let pruned = prune_units(&omega.module);
    let m = &pruned.module;
    let alg = f.target();
    let mut r = 0;
    loop {
        let fr = fitting_ideal(m, r)?;
        if fr.is_unit_ideal() {
            break;
        }
        r += 1;
    }
    if r > 0 {
        let prev = fitting_ideal(m, r - 1)?;
        if !is_zero_ideal_mod(alg, &prev) {
            let _ = f.smooth_rank.set(None);
            let shown: Vec<String> = prev.generators().iter().map(|g| g.to_string()).collect();
            return Err(Error::NotSmooth {
                index: r - 1,
                ideal: shown.join(", "),
            });
        }
    }
    let free = if m.relations().is_empty() && m.ngens() == r {
        let basis = pruned.kept.clone();
        Some(FreeDifferentials {
            algebra: alg.clone(),
            basis,
            coords: pruned.express.clone(),
        })
    } else {
        None
    };
    let _ = f.smooth_rank.set(Some(r));
    let _ = f.etale.set(if r == 0 { Tri::Yes } else { Tri::No });
    Ok(SmoothCertificate {
        rank: r,
        fitting_unit: r,
        free,
    })
}

/// Free basis of `Omega^1_{B/A}`, failing if smooth but not visibly free.
pub fn free_differentials(f: &AlgebraHom, assume_separable: bool) -> Result<FreeDifferentials> {
    smoothness_rank(f, assume_separable)?
        .free
        .ok_or(Error::NotFree)
}

/// `is_etale`: smooth of rank 0; the certificate is `F_0 = (1)`.
pub fn is_etale(f: &AlgebraHom, assume_separable: bool) -> Result<bool> {
    match smoothness_rank(f, assume_separable) {
        Ok(c) => Ok(c.rank == 0),
        Err(Error::NotSmooth { .. }) => {
            let _ = f.etale.set(Tri::No);
            Ok(false)
        }
        Err(e) => Err(e),
    }
}

/// `B` as a finitely generated `A`-module, computed in the graph ring
/// `K[y, x] / (I_B(y), I_A(x), x_i - f(x_i)(y))` under a block order that
/// eliminates the target variables `y`.
#[derive(Clone, Debug)]
pub struct FiniteStructure {
    source: Algebra,
    target: Algebra,
    graph: Arc<PolyRing>,
    gb: GroebnerBasis,
    ny: usize,
    /// Exponent vectors (in the target variables) of the generators.
    basis: Vec<Monomial>,
    /// `A`-linear relations among the generators.
    relations: Vec<Row>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiniteReport {
    pub basis: Vec<String>,
    pub free: bool,
}

/// Generators of the target over the source, or a failure saying whether
/// infiniteness is proved (dimension grows) or merely not certified.
pub fn finiteness_basis(f: &AlgebraHom) -> Result<FiniteStructure> {
    let a = f.source();
    let b = f.target();
    let ny = b.nvars();
    let nx = a.nvars();
    let mut names: Vec<String> = b.ring().vars().to_vec();
    names.extend(a.ring().vars().iter().map(|v| format!("{v}#")));
    let graph = PolyRing::new(b.field(), names, MonomialOrder::Block(ny));
    let ymap: Vec<usize> = (0..ny).collect();
    let xmap: Vec<usize> = (ny..ny + nx).collect();
    let mut gens: Vec<Polynomial> = b
        .gb()
        .generators()
        .iter()
        .map(|g| g.embed(&graph, &ymap))
        .collect();
    gens.extend(a.gb().generators().iter().map(|g| g.embed(&graph, &xmap)));
    for (i, img) in f.images().iter().enumerate() {
        gens.push(&graph.var(ny + i) - &img.embed(&graph, &ymap));
    }
    let gb = buchberger(&graph, &gens, MonomialOrder::Block(ny))?;
    // pure powers of each target variable among the leading monomials
    let pure: Vec<Monomial> = gb
        .leading_monomials()
        .into_iter()
        .filter(|m| m.exps()[ny..].iter().all(|&e| e == 0))
        .collect();
    let mut bounds = Vec::with_capacity(ny);
    for v in 0..ny {
        let e = pure
            .iter()
            .filter(|m| {
                m.exps()[..ny]
                    .iter()
                    .enumerate()
                    .all(|(k, &e)| k == v || e == 0)
            })
            .map(|m| m.exps()[v])
            .min();
        match e {
            Some(e) => bounds.push(e),
            None => {
                let _ = f.finite.set(if b.dim() > a.dim() {
                    Tri::No
                } else {
                    Tri::Unknown
                });
                let why = if b.dim() > a.dim() {
                    format!(
                        "target dimension {} exceeds source dimension {}",
                        b.dim(),
                        a.dim()
                    )
                } else {
                    format!(
                        "no integral relation certified for `{}`",
                        b.ring().vars()[v]
                    )
                };
                return Err(Error::NotFinite(why));
            }
        }
    }
    // standard monomials in y modulo the pure-y leading monomials
    let mut basis: Vec<Monomial> = Vec::new();
    let mut exps = vec![0u32; ny];
    loop {
        let mut full = exps.clone();
        full.extend(std::iter::repeat_n(0, nx));
        let m = Monomial::new(full);
        if !pure.iter().any(|p| p.divides(&m)) {
            basis.push(m);
        }
        // odometer over the box of bounds
        let mut k = 0;
        while k < ny {
            exps[k] += 1;
            if exps[k] < bounds[k] {
                break;
            }
            exps[k] = 0;
            k += 1;
        }
        if k == ny {
            break;
        }
    }
    basis.sort_by(|p, q| MonomialOrder::GrevLex.compare(p, q));
    let ctx = Ctx {
        ring: &graph,
        ideal: &gb,
    };
    let tracked: Vec<Row> = basis
        .iter()
        .map(|m| {
            vec![Polynomial::from_terms(
                &graph,
                vec![(b.field().one(), m.clone())],
            )]
        })
        .collect();
    let source_ideal: Vec<Polynomial> = a
        .gb()
        .generators()
        .iter()
        .map(|g| g.embed(&graph, &xmap))
        .collect();
    let ext = eliminating(ctx, &tracked, &[], 1, ny, &source_ideal);
    let relations: Vec<Row> = ext
        .syzygies()
        .into_iter()
        .filter(|r| r.iter().all(|p| (0..ny).all(|v| !p.involves(v))))
        .map(|r| r.iter().map(|p| to_source(p, a, ny)).collect::<Row>())
        .map(|r| a.ctx().reduce_row(&r))
        .filter(|r| r.iter().any(|p| !p.is_zero()))
        .collect();
    let _ = f.finite.set(Tri::Yes);
    Ok(FiniteStructure {
        source: a.clone(),
        target: b.clone(),
        graph,
        gb,
        ny,
        basis,
        relations,
    })
}

/// Move a polynomial free of the first `ny` graph variables into `a`.
fn to_source(p: &Polynomial, a: &Algebra, ny: usize) -> Polynomial {
    let terms = p
        .terms()
        .iter()
        .map(|(c, m)| (c.clone(), Monomial::new(m.exps()[ny..].to_vec())))
        .collect();
    Polynomial::from_terms(a.ring(), terms)
}

impl FiniteStructure {
    pub fn source(&self) -> &Algebra {
        &self.source
    }

    pub fn target(&self) -> &Algebra {
        &self.target
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// No `A`-linear relations: the generators form a free basis.
    pub fn is_free(&self) -> bool {
        self.relations.is_empty()
    }

    /// Generators as elements of the target.
    pub fn basis(&self) -> Vec<Polynomial> {
        let ring = self.target.ring();
        self.basis
            .iter()
            .map(|m| {
                Polynomial::from_terms(
                    ring,
                    vec![(
                        ring.field().one(),
                        Monomial::new(m.exps()[..self.ny].to_vec()),
                    )],
                )
            })
            .collect()
    }

    pub fn report(&self) -> FiniteReport {
        FiniteReport {
            basis: self.basis().iter().map(|p| p.to_string()).collect(),
            free: self.is_free(),
        }
    }

    pub fn relations(&self) -> &[Row] {
        &self.relations
    }

    /// The target as an `A`-module on the generators.
    pub fn as_module(&self) -> FPModule {
        FPModule::new(&self.source, self.basis.len(), self.relations.clone())
            .expect("relation rows fit the basis")
    }

    /// Coordinates over the source of a target element.
    pub fn coords(&self, b: &Polynomial) -> Row {
        let ymap: Vec<usize> = (0..self.ny).collect();
        let nf = normal_form(&b.embed(&self.graph, &ymap), &self.gb);
        let mut buckets: Vec<Vec<(crate::scalar::Scalar, Monomial)>> =
            vec![Vec::new(); self.basis.len()];
        for (c, m) in nf.terms() {
            let mut y = m.exps()[..self.ny].to_vec();
            y.extend(std::iter::repeat_n(0, m.nvars() - self.ny));
            let idx = self
                .basis
                .iter()
                .position(|b| b.exps() == y.as_slice())
                .expect("normal forms use standard monomials");
            buckets[idx].push((c.clone(), Monomial::new(m.exps()[self.ny..].to_vec())));
        }
        let ring = self.source.ring();
        buckets
            .into_iter()
            .map(|t| self.source.reduce(&Polynomial::from_terms(ring, t)))
            .collect()
    }

    /// Matrix of multiplication by `b`: row `i` holds the coordinates of
    /// `b * basis_i`.
    pub fn multiplication_matrix(&self, b: &Polynomial) -> Vec<Row> {
        self.basis().iter().map(|e| self.coords(&(b * e))).collect()
    }

    /// Recombine coordinates into a target element.
    pub fn element(&self, coords: &[Polynomial], f: &AlgebraHom) -> Polynomial {
        let mut acc = self.target.ring().zero();
        for (c, e) in coords.iter().zip(self.basis()) {
            acc = &acc + &(&f.apply(c) * &e);
        }
        self.target.reduce(&acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{algebra_from_strs, make_hom_strs, AlgebraPresentation};
    use crate::module::iso_probe;
    use crate::scalar::Field;

    #[test]
    fn differentials_of_the_plane_and_the_cusp() {
        let a = AlgebraPresentation::polynomial(Field::Rational, &["x", "y"]);
        let f = AlgebraHom::from_field(&a);
        let c = smoothness_rank(&f, false).unwrap();
        assert_eq!(c.rank, 2);
        assert_eq!(c.free.unwrap().basis, vec![0, 1]);
        assert_eq!(f.smooth_rank_flag(), Some(2));

        let cusp = algebra_from_strs(Field::Rational, &["x", "y"], &["y^2 - x^3"], &[]).unwrap();
        let g = AlgebraHom::from_field(&cusp);
        let k = kahler_module(&g);
        assert_eq!(
            k.jacobian_rows,
            vec![vec![
                cusp.parse("-3*x^2").unwrap(),
                cusp.parse("2*y").unwrap()
            ]]
        );
        match smoothness_rank(&g, false) {
            Err(Error::NotSmooth { index, ideal }) => {
                assert_eq!(index, 1);
                let gb = buchberger(
                    cusp.ring(),
                    &[cusp.parse("x^2").unwrap(), cusp.parse("y").unwrap()],
                    MonomialOrder::GrevLex,
                )
                .unwrap();
                let shown: Vec<String> = gb.generators().iter().map(|g| g.to_string()).collect();
                assert_eq!(ideal, shown.join(", "));
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn square_root_becomes_etale_after_inverting_s() {
        let b = algebra_from_strs(Field::Rational, &["s"], &[], &["s"]).unwrap();
        let c = algebra_from_strs(Field::Rational, &["s", "t"], &["t^2 - s"], &["s"]).unwrap();
        let f = make_hom_strs(&b, &c, &["s"]).unwrap();
        assert!(kahler_module(&f).module.is_zero());
        assert_eq!(smoothness_rank(&f, false).unwrap().rank, 0);
        assert!(is_etale(&f, false).unwrap());

        let b0 = AlgebraPresentation::polynomial(Field::Rational, &["s"]);
        let c0 = algebra_from_strs(Field::Rational, &["s", "t"], &["t^2 - s"], &[]).unwrap();
        let f0 = make_hom_strs(&b0, &c0, &["s"]).unwrap();
        assert!(!is_etale(&f0, false).unwrap());
    }

    #[test]
    fn localizations_are_etale() {
        let a = AlgebraPresentation::polynomial(Field::Rational, &["x", "y"]);
        let l = AlgebraHom::localization(&a, &a.parse("x*y - 1").unwrap()).unwrap();
        assert!(is_etale(&l, false).unwrap());
        assert!(matches!(finiteness_basis(&l), Err(Error::NotFinite(_))));
    }

    #[test]
    fn characteristic_p_needs_assertion() {
        let a = AlgebraPresentation::polynomial(Field::prime(5).unwrap(), &["x"]);
        let f = AlgebraHom::from_field(&a);
        assert_eq!(
            smoothness_rank(&f, false).unwrap_err(),
            Error::SeparabilityRequired(5)
        );
        assert_eq!(smoothness_rank(&f, true).unwrap().rank, 1);
    }

    #[test]
    fn newest_differential_survives() {
        // Q[s] -> Q[t], s = t^3: the free basis of Omega_{C/Q} is dt
        let c = AlgebraPresentation::polynomial(Field::Rational, &["t"]);
        let free = free_differentials(&AlgebraHom::from_field(&c), false).unwrap();
        assert_eq!(free.basis_names(), vec!["dt"]);
        let l = algebra_from_strs(Field::Rational, &["s", "t"], &["t^2 - s"], &[]).unwrap();
        let free = free_differentials(&AlgebraHom::from_field(&l), false).unwrap();
        assert_eq!(free.basis_names(), vec!["dt"]);
        assert_eq!(
            free.differential(&l.parse("s").unwrap()),
            vec![l.parse("2*t").unwrap()]
        );
    }

    #[test]
    fn monogenic_finite_basis() {
        let b = AlgebraPresentation::polynomial(Field::Rational, &["s"]);
        let c = AlgebraPresentation::polynomial(Field::Rational, &["t"]);
        let f = make_hom_strs(&b, &c, &["t^3"]).unwrap();
        let fin = finiteness_basis(&f).unwrap();
        let shown: Vec<String> = fin.basis().iter().map(|p| p.to_string()).collect();
        assert_eq!(shown, vec!["1", "t", "t^2"]);
        assert!(fin.is_free());
        assert_eq!(f.finite_flag(), Tri::Yes);
        assert_eq!(
            fin.coords(&c.parse("t^4 + 2").unwrap()),
            vec![
                b.parse("2").unwrap(),
                b.parse("s").unwrap(),
                b.ring().zero()
            ]
        );

        let id = AlgebraHom::identity(&b);
        assert_eq!(finiteness_basis(&id).unwrap().len(), 1);

        let two = AlgebraPresentation::polynomial(Field::Rational, &["s", "t"]);
        let g = make_hom_strs(&b, &two, &["s"]).unwrap();
        assert!(matches!(finiteness_basis(&g), Err(Error::NotFinite(_))));
        assert_eq!(g.finite_flag(), Tri::No);
    }

    #[test]
    fn quotient_is_finite_with_relations() {
        let a = AlgebraPresentation::polynomial(Field::Rational, &["x"]);
        let b = algebra_from_strs(Field::Rational, &["x"], &["x^2"], &[]).unwrap();
        let f = make_hom_strs(&a, &b, &["x"]).unwrap();
        let fin = finiteness_basis(&f).unwrap();
        // cyclic: generated by 1 with relation x^2
        assert_eq!(fin.len(), 1);
        assert!(!fin.is_free());
        let expected = FPModule::cyclic(&a, &[a.parse("x^2").unwrap()]).unwrap();
        assert!(iso_probe(&fin.as_module(), &expected, 0, 64)
            .unwrap()
            .is_iso());
    }
}
