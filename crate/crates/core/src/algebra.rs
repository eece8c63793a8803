//! Presentations `K[t_1..t_n]/I` with finitely many inverted elements, and
//! homomorphisms between them.
//!
//! Each inverted element `g` is realized by an auxiliary variable `u` with
//! the relation `u*g - 1`. Auxiliary variables come after the visible ones
//! and are printed as `(1/g)`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::groebner::{buchberger, krull_dimension, normal_form, GroebnerBasis};
use crate::module::linalg::{Ctx, Extended};
use crate::monomial::MonomialOrder;
use crate::poly::{PolyRing, Polynomial};
use crate::scalar::Field;

pub type Algebra = Arc<AlgebraPresentation>;

pub struct AlgebraPresentation {
    ring: Arc<PolyRing>,
    nvisible: usize,
    relations: Vec<Polynomial>,
    inverted: Vec<Polynomial>,
    gb: GroebnerBasis,
    dim: i64,
}

impl fmt::Debug for AlgebraPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra({self})")
    }
}

/// Build `field[vars]/(relations)[1/inverted]`. Relations and inverted
/// elements may live in any ring whose variables are among `vars`.
pub fn make_algebra(
    field: Field,
    vars: &[&str],
    relations: &[Polynomial],
    inverted: &[Polynomial],
    allow_zero: bool,
) -> Result<Algebra> {
    make_algebra_with_order(
        field,
        vars,
        relations,
        inverted,
        allow_zero,
        MonomialOrder::GrevLex,
    )
}

pub fn make_algebra_with_order(
    field: Field,
    vars: &[&str],
    relations: &[Polynomial],
    inverted: &[Polynomial],
    allow_zero: bool,
    order: MonomialOrder,
) -> Result<Algebra> {
    let names: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
    for (i, v) in names.iter().enumerate() {
        if names[..i].contains(v) {
            return Err(Error::Shape(format!("variable `{v}` listed twice")));
        }
    }
    let base = PolyRing::new(field, names.clone(), order);
    let rels = relations
        .iter()
        .map(|r| rename(r, &base))
        .collect::<Result<Vec<_>>>()?;
    let mut alg = AlgebraPresentation::assemble(base, names.len(), rels, Vec::new(), allow_zero)?;
    for g in inverted {
        let g = rename(g, alg.ring())?;
        alg = alg.localize_with(&g, allow_zero)?;
    }
    Ok(alg)
}

/// Parse relations and inverted elements as text in the given variables.
pub fn algebra_from_strs(
    field: Field,
    vars: &[&str],
    relations: &[&str],
    inverted: &[&str],
) -> Result<Algebra> {
    let ring = PolyRing::with_vars(field, vars);
    let rels = relations
        .iter()
        .map(|r| ring.parse(r))
        .collect::<Result<Vec<_>>>()?;
    let inv = inverted
        .iter()
        .map(|r| ring.parse(r))
        .collect::<Result<Vec<_>>>()?;
    make_algebra(field, vars, &rels, &inv, false)
}

/// Move `f` into `target` by matching variable names.
fn rename(f: &Polynomial, target: &Arc<PolyRing>) -> Result<Polynomial> {
    if f.ring().field() != target.field() {
        return Err(Error::CharacteristicMismatch(
            f.ring().field().characteristic(),
            target.field().characteristic(),
        ));
    }
    let mut map = Vec::with_capacity(f.ring().nvars());
    for (i, v) in f.ring().vars().iter().enumerate() {
        match target.var_index(v) {
            Some(j) => map.push(j),
            None if !f.involves(i) => map.push(usize::MAX),
            None => return Err(Error::UnknownVariable(v.clone())),
        }
    }
    if map.iter().all(|&j| j != usize::MAX) {
        return Ok(f.embed(target, &map));
    }
    // variables not in the target must be absent from every term
    let images: Vec<Polynomial> = map
        .iter()
        .map(|&j| {
            if j == usize::MAX {
                target.zero()
            } else {
                target.var(j)
            }
        })
        .collect();
    Ok(f.substitute_into(target, &images))
}

impl AlgebraPresentation {
    /// Validate and cache Groebner data. `relations` and `inverted` are in
    /// `ring`; the last `inverted.len()` variables are the auxiliary ones.
    fn assemble(
        ring: Arc<PolyRing>,
        nvisible: usize,
        relations: Vec<Polynomial>,
        inverted: Vec<Polynomial>,
        allow_zero: bool,
    ) -> Result<Algebra> {
        debug_assert_eq!(ring.nvars(), nvisible + inverted.len());
        let mut gens: Vec<Polynomial> =
            relations.iter().filter(|r| !r.is_zero()).cloned().collect();
        for (j, g) in inverted.iter().enumerate() {
            gens.push(&(&ring.var(nvisible + j) * g) - &ring.one());
        }
        let gb = buchberger(&ring, &gens, ring.order())?;
        if gb.is_unit_ideal() && !allow_zero {
            return Err(Error::ZeroRing);
        }
        let dim = krull_dimension(&gb);
        let relations = relations.into_iter().filter(|r| !r.is_zero()).collect();
        Ok(Arc::new(AlgebraPresentation {
            ring,
            nvisible,
            relations,
            inverted,
            gb,
            dim,
        }))
    }

    /// The base field as an algebra.
    pub fn field_algebra(field: Field) -> Algebra {
        make_algebra(field, &[], &[], &[], false).expect("the field is a valid algebra")
    }

    /// Polynomial ring `field[vars]`.
    pub fn polynomial(field: Field, vars: &[&str]) -> Algebra {
        make_algebra(field, vars, &[], &[], false).expect("polynomial rings are valid algebras")
    }

    pub fn field(&self) -> Field {
        self.ring.field()
    }

    /// The ambient polynomial ring as an algebra (same ring object, so
    /// modules move between the two without renaming).
    pub fn ambient(&self) -> Algebra {
        AlgebraPresentation::assemble(
            self.ring.clone(),
            self.ring.nvars(),
            Vec::new(),
            Vec::new(),
            false,
        )
        .expect("polynomial rings are valid algebras")
    }

    /// Ambient polynomial ring, auxiliary variables included.
    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn nvisible(&self) -> usize {
        self.nvisible
    }

    pub fn visible_vars(&self) -> &[String] {
        &self.ring.vars()[..self.nvisible]
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    pub fn inverted(&self) -> &[Polynomial] {
        &self.inverted
    }

    /// All defining relations in the ambient ring, `u*g - 1` included.
    pub fn defining_ideal(&self) -> Vec<Polynomial> {
        let mut out = self.relations.clone();
        for (j, g) in self.inverted.iter().enumerate() {
            out.push(&(&self.ring.var(self.nvisible + j) * g) - &self.ring.one());
        }
        out
    }

    pub fn gb(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn ctx(&self) -> Ctx<'_> {
        Ctx {
            ring: &self.ring,
            ideal: &self.gb,
        }
    }

    /// Krull dimension; `-1` for the zero ring.
    pub fn dim(&self) -> i64 {
        self.dim
    }

    pub fn is_zero_ring(&self) -> bool {
        self.gb.is_unit_ideal()
    }

    /// No relations and nothing inverted.
    pub fn is_polynomial_ring(&self) -> bool {
        self.relations.is_empty() && self.inverted.is_empty()
    }

    /// Standard-graded: nothing inverted and a homogeneous ideal.
    pub fn is_graded(&self) -> bool {
        self.inverted.is_empty() && self.gb.is_homogeneous()
    }

    /// The origin lies on the variety, so evaluation at zero is a ring map.
    pub fn origin_is_point(&self) -> bool {
        !self.is_zero_ring()
            && self
                .gb
                .generators()
                .iter()
                .all(|g| g.constant_term().is_zero())
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial> {
        Ok(self.reduce(&self.ring.parse(text)?))
    }

    pub fn var(&self, name: &str) -> Result<Polynomial> {
        self.ring.var_named(name)
    }

    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        if self.gb.is_zero_ideal() {
            return f.clone();
        }
        normal_form(f, &self.gb)
    }

    pub fn is_zero_elem(&self, f: &Polynomial) -> bool {
        self.reduce(f).is_zero()
    }

    pub fn equal(&self, a: &Polynomial, b: &Polynomial) -> bool {
        self.is_zero_elem(&(a - b))
    }

    /// The inverse of `f` in the algebra, if `f` is a unit.
    pub fn unit_inverse(&self, f: &Polynomial) -> Option<Polynomial> {
        let f = self.reduce(f);
        if let Some(c) = f.constant_value() {
            return c.inv().ok().map(|c| self.ring.constant(c));
        }
        let ext = Extended::new(self.ctx(), &[vec![f]], &[], 1);
        ext.lift(&[self.ring.one()]).map(|mut v| v.remove(0))
    }

    pub fn is_unit(&self, f: &Polynomial) -> bool {
        self.unit_inverse(f).is_some()
    }

    /// `self[1/g]` with `g` in the ambient ring.
    pub fn localize(&self, g: &Polynomial) -> Result<Algebra> {
        self.localize_with(g, false)
    }

    fn localize_with(&self, g: &Polynomial, allow_zero: bool) -> Result<Algebra> {
        let g = rename(g, &self.ring)?;
        if self.is_zero_elem(&g) {
            return Err(Error::InvertedIsZero(self.show(&g)));
        }
        let mut names = self.ring.vars().to_vec();
        names.push(inverse_name(&self.show(&g)));
        let ring = PolyRing::new(self.field(), names, self.ring.order());
        let n = self.ring.nvars();
        let map: Vec<usize> = (0..n).collect();
        let relations = self
            .relations
            .iter()
            .map(|r| r.embed(&ring, &map))
            .collect();
        let mut inverted: Vec<Polynomial> =
            self.inverted.iter().map(|r| r.embed(&ring, &map)).collect();
        inverted.push(g.embed(&ring, &map));
        AlgebraPresentation::assemble(ring, self.nvisible, relations, inverted, allow_zero)
    }

    /// Same algebra presented with another monomial order.
    pub fn with_order(&self, order: MonomialOrder) -> Result<Algebra> {
        let ring = self.ring.reorder(order);
        let relations = self.relations.iter().map(|r| r.in_ring(&ring)).collect();
        let inverted = self.inverted.iter().map(|r| r.in_ring(&ring)).collect();
        AlgebraPresentation::assemble(ring, self.nvisible, relations, inverted, true)
    }

    /// Display an element in normal form.
    pub fn show(&self, f: &Polynomial) -> String {
        self.reduce(f).to_string()
    }

    /// `A (x) A` over the field, in doubled variables `v` and `v'`, together
    /// with the variable indices of the left and right copies.
    pub fn tensor_square(&self) -> Result<TensorSquare> {
        let n = self.ring.nvars();
        let nv = self.nvisible;
        let na = n - nv;
        let prime = |s: &String| format!("{s}'");
        let mut visible: Vec<String> = self.ring.vars()[..nv].to_vec();
        visible.extend(self.ring.vars()[..nv].iter().map(prime));
        // left map: visible i -> i, aux j -> 2nv + j; right: nv + i, 2nv + na + j
        let left: Vec<usize> = (0..n)
            .map(|i| if i < nv { i } else { 2 * nv + (i - nv) })
            .collect();
        let right: Vec<usize> = (0..n)
            .map(|i| {
                if i < nv {
                    nv + i
                } else {
                    2 * nv + na + (i - nv)
                }
            })
            .collect();
        let mut primed_names = vec![String::new(); 2 * n];
        for i in 0..n {
            primed_names[left[i]] = self.ring.vars()[i].clone();
            primed_names[right[i]] = prime(&self.ring.vars()[i]);
        }
        // auxiliary names follow the inverted elements of each copy
        for (j, g) in self.inverted.iter().enumerate() {
            let rn: Vec<String> = (0..n).map(|i| primed_names[right[i]].clone()).collect();
            primed_names[right[nv + j]] = inverse_name(&g.to_string_with(&rn));
        }
        let ring = PolyRing::new(self.field(), primed_names, self.ring.order());
        let mut relations = Vec::new();
        for r in &self.relations {
            relations.push(r.embed(&ring, &left));
            relations.push(r.embed(&ring, &right));
        }
        let mut inverted = Vec::new();
        for g in &self.inverted {
            inverted.push(g.embed(&ring, &left));
        }
        for g in &self.inverted {
            inverted.push(g.embed(&ring, &right));
        }
        let algebra = AlgebraPresentation::assemble(ring, 2 * nv, relations, inverted, false)?;
        Ok(TensorSquare {
            algebra,
            left,
            right,
        })
    }
}

fn inverse_name(g: &str) -> String {
    if g.chars()
        .all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
    {
        format!("(1/{g})")
    } else {
        format!("(1/({g}))")
    }
}

impl fmt::Display for AlgebraPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.field(), self.visible_vars().join(", "))?;
        if !self.relations.is_empty() {
            let rels: Vec<String> = self.relations.iter().map(|r| r.to_string()).collect();
            write!(f, "/({})", rels.join(", "))?;
        }
        for g in &self.inverted {
            write!(f, "[1/{g}]")?;
        }
        Ok(())
    }
}

pub struct TensorSquare {
    pub algebra: Algebra,
    /// Variable `i` of `A` is variable `left[i]` of `A (x) A`.
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

/// Three-valued certificate state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

/// A homomorphism `source -> target` given by images of every ambient
/// source variable (auxiliary ones map to inverses).
#[derive(Clone)]
pub struct AlgebraHom {
    source: Algebra,
    target: Algebra,
    images: Vec<Polynomial>,
    localization: bool,
    pub(crate) finite: OnceLock<Tri>,
    pub(crate) smooth_rank: OnceLock<Option<usize>>,
    pub(crate) etale: OnceLock<Tri>,
}

impl fmt::Debug for AlgebraHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "AlgebraHom({} -> {}: {:?})",
            self.source,
            self.target,
            self.visible_images()
        )
    }
}

/// `source -> target` sending the visible variables of `source` to `images`
/// (polynomials in the target ring, or parsed text).
pub fn make_hom(source: &Algebra, target: &Algebra, images: &[Polynomial]) -> Result<AlgebraHom> {
    if images.len() != source.nvisible {
        return Err(Error::ImageCount {
            expected: source.nvisible,
            got: images.len(),
        });
    }
    let mut all: Vec<Polynomial> = Vec::with_capacity(source.nvars());
    for p in images {
        all.push(target.reduce(&rename(p, target.ring())?));
    }
    for g in source.inverted() {
        let partial: Vec<Polynomial> = all
            .iter()
            .cloned()
            .chain(std::iter::repeat(target.ring.zero()))
            .take(source.nvars())
            .collect();
        let img = target.reduce(&g.substitute_into(target.ring(), &partial));
        let inv = target
            .unit_inverse(&img)
            .ok_or_else(|| Error::NotAUnit(source.show(g)))?;
        all.push(inv);
    }
    for r in source.relations() {
        let img = target.reduce(&r.substitute_into(target.ring(), &all));
        if !img.is_zero() {
            return Err(Error::NotAHomomorphism(r.to_string(), target.show(&img)));
        }
    }
    let localization = is_localization_shape(source, target, &all);
    let hom = AlgebraHom {
        source: source.clone(),
        target: target.clone(),
        images: all,
        localization,
        finite: OnceLock::new(),
        smooth_rank: OnceLock::new(),
        etale: OnceLock::new(),
    };
    Ok(hom)
}

pub fn make_hom_strs(source: &Algebra, target: &Algebra, images: &[&str]) -> Result<AlgebraHom> {
    let imgs = images
        .iter()
        .map(|s| target.ring().parse(s))
        .collect::<Result<Vec<_>>>()?;
    make_hom(source, target, &imgs)
}

/// The canonical map `A -> A[1/g_k]...[1/g_m]`: same visible variables and
/// relations, identity on visible variables, target inverts a superset.
fn is_localization_shape(source: &Algebra, target: &Algebra, images: &[Polynomial]) -> bool {
    if source.visible_vars() != target.visible_vars()
        || source.relations.len() != target.relations.len()
    {
        return false;
    }
    if target.inverted.len() < source.inverted.len() {
        return false;
    }
    let n = source.nvars();
    for (i, img) in images.iter().enumerate().take(source.nvisible) {
        if *img != target.ring.var(i) {
            return false;
        }
    }
    let map: Vec<usize> = (0..n).collect();
    let same = |a: &Polynomial, b: &Polynomial| a.embed(target.ring(), &map) == *b;
    source
        .relations
        .iter()
        .zip(&target.relations)
        .all(|(a, b)| same(a, b))
        && source
            .inverted
            .iter()
            .zip(&target.inverted)
            .all(|(a, b)| same(a, b))
}

impl AlgebraHom {
    pub fn identity(a: &Algebra) -> AlgebraHom {
        let images: Vec<Polynomial> = (0..a.nvisible).map(|i| a.ring.var(i)).collect();
        make_hom(a, a, &images).expect("identity is a homomorphism")
    }

    /// The localization map `A -> A[1/g]`.
    pub fn localization(a: &Algebra, g: &Polynomial) -> Result<AlgebraHom> {
        let target = a.localize(g)?;
        let images: Vec<Polynomial> = (0..a.nvisible).map(|i| target.ring.var(i)).collect();
        make_hom(a, &target, &images)
    }

    /// Structure map from the base field.
    pub fn from_field(a: &Algebra) -> AlgebraHom {
        make_hom(&AlgebraPresentation::field_algebra(a.field()), a, &[])
            .expect("field maps to every algebra")
    }

    pub fn source(&self) -> &Algebra {
        &self.source
    }

    pub fn target(&self) -> &Algebra {
        &self.target
    }

    /// Images of all ambient source variables, auxiliary ones included.
    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn visible_images(&self) -> Vec<String> {
        self.images[..self.source.nvisible]
            .iter()
            .map(|p| p.to_string())
            .collect()
    }

    pub fn is_localization(&self) -> bool {
        self.localization
    }

    pub fn is_identity(&self) -> bool {
        Arc::ptr_eq(&self.source, &self.target)
            && self
                .images
                .iter()
                .enumerate()
                .all(|(i, p)| *p == self.target.ring.var(i))
    }

    pub fn finite_flag(&self) -> Tri {
        self.finite.get().copied().unwrap_or(Tri::Unknown)
    }

    pub fn smooth_rank_flag(&self) -> Option<usize> {
        self.smooth_rank.get().copied().flatten()
    }

    pub fn etale_flag(&self) -> Tri {
        self.etale.get().copied().unwrap_or(Tri::Unknown)
    }

    /// Image of a source element, in normal form.
    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        self.target
            .reduce(&f.substitute_into(self.target.ring(), &self.images))
    }

    /// `g . self`: first `self`, then `next`.
    pub fn then(&self, next: &AlgebraHom) -> Result<AlgebraHom> {
        if !Arc::ptr_eq(&self.target, &next.source) {
            return Err(Error::UnrelatedLevels(
                "composition of maps with mismatched ends".into(),
            ));
        }
        let images: Vec<Polynomial> = self.images[..self.source.nvisible]
            .iter()
            .map(|p| next.apply(p))
            .collect();
        make_hom(&self.source, &next.target, &images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cusp_has_dimension_one() {
        let a = algebra_from_strs(Field::Rational, &["x", "y"], &["y^2 - x^3"], &[]).unwrap();
        assert_eq!(a.dim(), 1);
        assert!(a.is_zero_elem(&a.ring().parse("y^2 - x^3").unwrap()));
        assert!(a.origin_is_point());
    }

    #[test]
    fn laurent_ring() {
        let a = algebra_from_strs(Field::Rational, &["s"], &[], &["s"]).unwrap();
        assert_eq!(a.dim(), 1);
        let s = a.var("s").unwrap();
        let inv = a.unit_inverse(&s).unwrap();
        assert!(a.equal(&(&s * &inv), &a.ring().one()));
        assert!(!a.origin_is_point());
        assert_eq!(a.to_string(), "QQ[s][1/s]");
    }

    #[test]
    fn the_field_itself() {
        let k = AlgebraPresentation::field_algebra(Field::Rational);
        assert_eq!(k.dim(), 0);
        assert_eq!(k.nvars(), 0);
    }

    #[test]
    fn zero_ring_and_zero_inverse_are_rejected() {
        assert_eq!(
            algebra_from_strs(Field::Rational, &["x"], &["x", "x - 1"], &[]).unwrap_err(),
            Error::ZeroRing
        );
        let e = algebra_from_strs(Field::Rational, &["x"], &["x^2"], &["x^3"]).unwrap_err();
        assert!(matches!(e, Error::InvertedIsZero(_)));
        // nilpotent but nonzero: localization is the zero ring
        assert_eq!(
            algebra_from_strs(Field::Rational, &["x"], &["x^2"], &["x"]).unwrap_err(),
            Error::ZeroRing
        );
    }

    #[test]
    fn homomorphisms() {
        let b = AlgebraPresentation::polynomial(Field::Rational, &["s"]);
        let c = AlgebraPresentation::polynomial(Field::Rational, &["t"]);
        let f = make_hom_strs(&b, &c, &["t^3"]).unwrap();
        assert_eq!(
            f.apply(&b.parse("s^2 + 1").unwrap()),
            c.parse("t^6 + 1").unwrap()
        );
        assert!(!f.is_localization());
        assert!(AlgebraHom::identity(&b).is_identity());

        let d = algebra_from_strs(Field::Rational, &["x"], &["x^2"], &[]).unwrap();
        let px = AlgebraPresentation::polynomial(Field::Rational, &["x"]);
        assert!(matches!(
            make_hom_strs(&d, &px, &["x"]),
            Err(Error::NotAHomomorphism(..))
        ));
        assert!(matches!(
            make_hom_strs(&b, &c, &[]),
            Err(Error::ImageCount { .. })
        ));
    }

    #[test]
    fn localization_maps() {
        let b = AlgebraPresentation::polynomial(Field::Rational, &["s"]);
        let l = AlgebraHom::localization(&b, &b.parse("s").unwrap()).unwrap();
        assert!(l.is_localization());
        // s -> t^2 from Q[s][1/s] needs t invertible
        let c = AlgebraPresentation::polynomial(Field::Rational, &["t"]);
        assert!(matches!(
            make_hom_strs(l.target(), &c, &["t^2"]),
            Err(Error::NotAUnit(_))
        ));
        let ct = c.localize(&c.parse("t").unwrap()).unwrap();
        let h = make_hom_strs(l.target(), &ct, &["t^2"]).unwrap();
        let u = l.target().ring().var(1);
        let img = h.apply(&u);
        assert!(ct.equal(&(&img * &ct.parse("t^2").unwrap()), &ct.ring().one()));
    }

    #[test]
    fn tensor_square_doubles_variables() {
        let a = algebra_from_strs(Field::Rational, &["x"], &["x^2"], &[]).unwrap();
        let sq = a.tensor_square().unwrap();
        assert_eq!(
            sq.algebra.visible_vars(),
            &["x".to_string(), "x'".to_string()]
        );
        assert_eq!(sq.algebra.dim(), 0);
        let l = algebra_from_strs(Field::Rational, &["s"], &[], &["s"]).unwrap();
        let sq = l.tensor_square().unwrap();
        assert_eq!(sq.algebra.dim(), 2);
        assert_eq!(sq.algebra.nvars(), 4);
    }
}
