//! Workloads shared by the benchmarks.

use std::sync::Arc;

use rigiduality_core::algebra::make_hom_strs;
use rigiduality_core::{
    algebra_from_strs, AlgebraHom, AlgebraPresentation, FPModule, Field, MonomialOrder, PolyRing,
    Polynomial, Result, SmoothTower,
};

/// The cyclic-`n` system in `n` variables.
pub fn cyclic(field: Field, n: usize, order: MonomialOrder) -> (Arc<PolyRing>, Vec<Polynomial>) {
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let ring = PolyRing::new(field, names, order);
    let mut gens = Vec::with_capacity(n);
    for len in 1..n {
        let mut sum = ring.zero();
        for start in 0..n {
            let mut term = ring.one();
            for k in 0..len {
                term = &term * &ring.var((start + k) % n);
            }
            sum = &sum + &term;
        }
        gens.push(sum);
    }
    let mut prod = ring.one();
    for i in 0..n {
        prod = &prod * &ring.var(i);
    }
    gens.push(&prod - &ring.one());
    (ring, gens)
}

/// The residue field of `field[x_1..x_n]` at the origin.
pub fn residue_field(field: Field, n: usize) -> Result<FPModule> {
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let vars: Vec<&str> = names.iter().map(String::as_str).collect();
    let a = algebra_from_strs(field, &vars, &[], &[])?;
    let ideal: Vec<Polynomial> = (0..n).map(|i| a.ring().var(i)).collect();
    FPModule::cyclic(&a, &ideal)
}

/// `Q -> Q[s] -> Q[t]` with `s = t^n`.
pub fn power_tower(n: u32) -> Result<SmoothTower> {
    let b = AlgebraPresentation::polynomial(Field::Rational, &["s"]);
    let c = AlgebraPresentation::polynomial(Field::Rational, &["t"]);
    let mut tower = SmoothTower::new(&AlgebraHom::from_field(&b), false)?;
    tower.push_finite(make_hom_strs(&b, &c, &[&format!("t^{n}")])?, false)?;
    Ok(tower)
}

/// `(x + 2y - z)^n` written out as text, for the parser.
pub fn power_text(n: u32) -> String {
    format!("(x + 2*y - z)^{n} * (x - y)^2 / 7")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rigiduality_core::{buchberger, free_resolution};

    #[test]
    fn cyclic_three_has_a_finite_variety() {
        let (ring, gens) = cyclic(Field::Rational, 3, MonomialOrder::GrevLex);
        let gb = buchberger(&ring, &gens, MonomialOrder::GrevLex).unwrap();
        assert_eq!(rigiduality_core::krull_dimension(&gb), 0);
    }

    #[test]
    fn residue_field_resolution_is_koszul() {
        let res = free_resolution(&residue_field(Field::Rational, 3).unwrap(), 4);
        assert_eq!(res.ranks(), &[1, 3, 3, 1]);
    }

    #[test]
    fn power_tower_top_form_traces_to_ds() {
        let t = power_tower(4).unwrap();
        let w = t.parse_form(1, "t^3").unwrap();
        assert_eq!(t.display(&t.trace_form(&w, 0).unwrap()).text, "ds");
    }
}
