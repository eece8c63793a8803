//! Sparse multivariate polynomials over a [`Field`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialOrder};
use crate::scalar::{Field, Scalar};

/// Ambient polynomial ring: coefficient field, variable names, term order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyRing {
    field: Field,
    vars: Vec<String>,
    order: MonomialOrder,
}

impl PolyRing {
    pub fn new(field: Field, vars: Vec<String>, order: MonomialOrder) -> Arc<PolyRing> {
        Arc::new(PolyRing { field, vars, order })
    }

    pub fn with_vars(field: Field, vars: &[&str]) -> Arc<PolyRing> {
        PolyRing::new(
            field,
            vars.iter().map(|v| v.to_string()).collect(),
            MonomialOrder::GrevLex,
        )
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Same variables and field, different order.
    pub fn reorder(&self, order: MonomialOrder) -> Arc<PolyRing> {
        PolyRing::new(self.field, self.vars.clone(), order)
    }

    pub fn zero(self: &Arc<Self>) -> Polynomial {
        Polynomial {
            ring: self.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(self: &Arc<Self>) -> Polynomial {
        self.constant(self.field.one())
    }

    pub fn constant(self: &Arc<Self>, c: Scalar) -> Polynomial {
        Polynomial::from_terms(self, vec![(c, Monomial::one(self.nvars()))])
    }

    pub fn int(self: &Arc<Self>, n: i64) -> Polynomial {
        self.constant(self.field.from_i64(n))
    }

    pub fn var(self: &Arc<Self>, index: usize) -> Polynomial {
        Polynomial::from_terms(
            self,
            vec![(self.field.one(), Monomial::var(self.nvars(), index, 1))],
        )
    }

    pub fn var_named(self: &Arc<Self>, name: &str) -> Result<Polynomial> {
        self.var_index(name)
            .map(|i| self.var(i))
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn parse(self: &Arc<Self>, text: &str) -> Result<Polynomial> {
        crate::parse::parse_polynomial(self, text)
    }
}

/// A polynomial: terms sorted strictly descending under the ring order,
/// with no zero coefficients and no repeated monomials.
#[derive(Clone)]
pub struct Polynomial {
    ring: Arc<PolyRing>,
    terms: Vec<(Scalar, Monomial)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring)
            && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state)
    }
}

impl Polynomial {
    /// Build from arbitrary terms: sorts, merges duplicates, drops zeros.
    pub fn from_terms(ring: &Arc<PolyRing>, mut terms: Vec<(Scalar, Monomial)>) -> Polynomial {
        let order = ring.order;
        terms.sort_by(|a, b| order.compare(&b.1, &a.1));
        let mut out: Vec<(Scalar, Monomial)> = Vec::with_capacity(terms.len());
        for (c, m) in terms {
            match out.last_mut() {
                Some((lc, lm)) if *lm == m => *lc = lc.add(&c),
                _ => out.push((c, m)),
            }
            if matches!(out.last(), Some((lc, _)) if lc.is_zero()) {
                out.pop();
            }
        }
        Polynomial {
            ring: ring.clone(),
            terms: out,
        }
    }

    /// Terms already sorted descending with no zeros or duplicates.
    pub(crate) fn from_sorted(ring: &Arc<PolyRing>, terms: Vec<(Scalar, Monomial)>) -> Polynomial {
        debug_assert!(terms
            .windows(2)
            .all(|w| ring.order.compare(&w[0].1, &w[1].1) == Ordering::Greater));
        debug_assert!(terms.iter().all(|t| !t.0.is_zero()));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Scalar, Monomial)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Scalar, Monomial)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(_, m)| m.is_one())
    }

    /// The constant value, if the polynomial is constant.
    pub fn constant_value(&self) -> Option<Scalar> {
        match self.terms.as_slice() {
            [] => Some(self.ring.field.zero()),
            [(c, m)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn constant_term(&self) -> Scalar {
        match self.terms.last() {
            Some((c, m)) if m.is_one() => c.clone(),
            _ => self.ring.field.zero(),
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_term(&self) -> Option<&(Scalar, Monomial)> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(_, m)| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((_, m)) => self.terms.iter().all(|(_, n)| n.degree() == m.degree()),
        }
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms
            .iter()
            .map(|(_, m)| m.exps()[var])
            .max()
            .unwrap_or(0)
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.iter().any(|(_, m)| m.exps()[var] > 0)
    }

    fn check_same(&self, other: &Polynomial) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring {
            return Ok(());
        }
        if self.ring.field != other.ring.field {
            return Err(Error::CharacteristicMismatch(
                self.ring.field.characteristic(),
                other.ring.field.characteristic(),
            ));
        }
        Err(Error::RingMismatch(format!(
            "{:?} vs {:?}",
            self.ring.vars, other.ring.vars
        )))
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let order = self.ring.order;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() && j < b.len() {
            match order.compare(&a[i].1, &b[j].1) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { b[j].0.neg() } else { b[j].0.clone() };
                    out.push((c, b[j].1.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        a[i].0.sub(&b[j].0)
                    } else {
                        a[i].0.add(&b[j].0)
                    };
                    if !c.is_zero() {
                        out.push((c, a[i].1.clone()));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate { t.0.neg() } else { t.0.clone() };
            out.push((c, t.1.clone()));
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    fn mul_unchecked(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return self.ring.zero();
        }
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = self.ring.zero();
        for (c, m) in &small.terms {
            acc = acc.merge(&large.mul_term(c, m), false);
        }
        acc
    }

    /// Multiply by a single term `c*m`.
    pub fn mul_term(&self, c: &Scalar, m: &Monomial) -> Polynomial {
        if c.is_zero() {
            return self.ring.zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(d, n)| (c.mul(d), n.mul(m)))
            .collect();
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn scalar_mul(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return self.ring.zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(d, m)| (c.mul(d), m.clone()))
            .collect();
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut result = self.ring.one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Scale so the leading coefficient is one.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coeff() {
            None => self.clone(),
            Some(c) => self.scalar_mul(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Multivariate division: `f = sum q_i g_i + r` with no term of `r`
    /// divisible by a leading monomial of any `g_i`.
    pub fn divmod(&self, divisors: &[Polynomial]) -> Result<(Vec<Polynomial>, Polynomial)> {
        for (i, g) in divisors.iter().enumerate() {
            self.check_same(g)?;
            if g.is_zero() {
                return Err(Error::ZeroDivisor(i));
            }
        }
        let mut quotients = vec![self.ring.zero(); divisors.len()];
        let mut remainder = Vec::new();
        let mut p = self.clone();
        while let Some((c, m)) = p.terms.first().cloned() {
            let hit = divisors
                .iter()
                .position(|g| g.leading_monomial().unwrap().divides(&m));
            match hit {
                Some(i) => {
                    let g = &divisors[i];
                    let (gc, gm) = g.leading_term().unwrap();
                    let qc = c.div(gc)?;
                    let qm = gm.quotient(&m);
                    let term = Polynomial::from_sorted(&self.ring, vec![(qc.clone(), qm.clone())]);
                    quotients[i] = quotients[i].merge(&term, false);
                    p = p.merge(&g.mul_term(&qc, &qm), true);
                }
                None => {
                    remainder.push((c, m));
                    p.terms.remove(0);
                }
            }
        }
        Ok((
            quotients,
            Polynomial {
                ring: self.ring.clone(),
                terms: remainder,
            },
        ))
    }

    pub fn partial_derivative(&self, var: usize) -> Result<Polynomial> {
        let n = self.ring.nvars();
        if var >= n {
            return Err(Error::IndexOutOfRange {
                index: var,
                nvars: n,
            });
        }
        let terms = self
            .terms
            .iter()
            .filter(|(_, m)| m.exps()[var] > 0)
            .map(|(c, m)| {
                let mut e = m.exps().to_vec();
                let k = e[var];
                e[var] -= 1;
                (c.mul_int(k as u64), Monomial::new(e))
            })
            .collect();
        Ok(Polynomial::from_terms(&self.ring, terms))
    }

    /// Ring homomorphism substitution: variable `i` is sent to `images[i]`.
    pub fn substitute(&self, images: &[Polynomial]) -> Polynomial {
        let target = images
            .first()
            .map(|p| p.ring.clone())
            .unwrap_or_else(|| self.ring.clone());
        self.substitute_into(&target, images)
    }

    /// Substitution with an explicit target ring (needed when there are no
    /// variables to carry it).
    pub fn substitute_into(&self, target: &Arc<PolyRing>, images: &[Polynomial]) -> Polynomial {
        let target = target.clone();
        assert_eq!(images.len(), self.ring.nvars(), "one image per variable");
        let mut cache: Vec<Vec<Polynomial>> = vec![Vec::new(); images.len()];
        let mut acc = target.zero();
        for (c, m) in &self.terms {
            let mut t = target.constant(c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let powers = &mut cache[i];
                if powers.is_empty() {
                    powers.push(target.one());
                }
                while powers.len() <= e as usize {
                    let next = &powers[powers.len() - 1] * &images[i];
                    powers.push(next);
                }
                t = &t * &powers[e as usize];
            }
            acc = acc.merge(&t, false);
        }
        acc
    }

    /// Move into another ring by renaming variables: variable `i` of this
    /// ring becomes variable `map[i]` of `target`.
    pub fn embed(&self, target: &Arc<PolyRing>, map: &[usize]) -> Polynomial {
        let n = target.nvars();
        let terms = self
            .terms
            .iter()
            .map(|(c, m)| {
                let mut e = vec![0; n];
                for (i, &k) in m.exps().iter().enumerate() {
                    e[map[i]] += k;
                }
                (c.clone(), Monomial::new(e))
            })
            .collect();
        Polynomial::from_terms(target, terms)
    }

    /// Re-sort under the same variables in a ring with another order.
    pub fn in_ring(&self, target: &Arc<PolyRing>) -> Polynomial {
        if Arc::ptr_eq(&self.ring, target) {
            return self.clone();
        }
        assert_eq!(self.ring.nvars(), target.nvars());
        Polynomial::from_terms(target, self.terms.clone())
    }

    /// Evaluate all variables at zero.
    pub fn at_origin(&self) -> Scalar {
        self.constant_term()
    }

    /// Collect coefficients with respect to one variable:
    /// `self = sum_k coeffs[k] * var^k`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Polynomial> {
        let d = self.degree_in(var) as usize;
        let mut buckets: Vec<Vec<(Scalar, Monomial)>> = vec![Vec::new(); d + 1];
        for (c, m) in &self.terms {
            let k = m.exps()[var] as usize;
            let mut e = m.exps().to_vec();
            e[var] = 0;
            buckets[k].push((c.clone(), Monomial::new(e)));
        }
        buckets
            .into_iter()
            .map(|t| Polynomial::from_terms(&self.ring, t))
            .collect()
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        struct W<'a>(&'a Polynomial, &'a [String]);
        impl fmt::Display for W<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt_with(self.1, f)
            }
        }
        W(self, names).to_string()
    }

    fn fmt_with(&self, names: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, m)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                m.fmt_with(names, f)?;
            }
        }
        Ok(())
    }

    pub fn from_int_coeffs(ring: &Arc<PolyRing>, terms: &[(i64, &[u32])]) -> Polynomial {
        let t = terms
            .iter()
            .map(|(c, e)| (ring.field.from_i64(*c), Monomial::new(e.to_vec())))
            .collect();
        Polynomial::from_terms(ring, t)
    }

    pub fn rational_constant(ring: &Arc<PolyRing>, num: i64, den: i64) -> Result<Polynomial> {
        Ok(ring.constant(
            ring.field
                .from_ratio(&BigInt::from(num), &BigInt::from(den))?,
        ))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.ring.vars.clone();
        self.fmt_with(&names, f)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs)
            .expect("ring mismatch in polynomial addition")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs)
            .expect("ring mismatch in polynomial subtraction")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs)
            .expect("ring mismatch in polynomial multiplication")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(c, m)| (c.neg(), m.clone()))
            .collect();
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qring(vars: &[&str]) -> Arc<PolyRing> {
        PolyRing::with_vars(Field::Rational, vars)
    }

    #[test]
    fn binomial_square() {
        let r = qring(&["x", "y"]);
        let s = r.parse("x + y").unwrap();
        assert_eq!(&s * &s, r.parse("x^2 + 2*x*y + y^2").unwrap());
        assert_eq!((&s * &s).to_string(), "x^2 + 2*x*y + y^2");
    }

    #[test]
    fn additive_inverse_is_empty() {
        let r = qring(&["x", "y"]);
        let f = r.parse("3/2*x^2*y - y + 1").unwrap();
        let z = &f + &(-&f);
        assert!(z.is_zero());
        assert!(z.terms().is_empty());
    }

    #[test]
    fn frobenius_identity_in_prime_characteristic() {
        // fields are QQ or Fp for odd p, so check (x+y)^p = x^p + y^p at p = 3
        let r = PolyRing::with_vars(Field::prime(3).unwrap(), &["x", "y"]);
        let s = r.parse("x + y").unwrap();
        assert_eq!(s.pow(3), r.parse("x^3 + y^3").unwrap());
    }

    #[test]
    fn division_examples() {
        let r = qring(&["x"]);
        let x = r.parse("x").unwrap();
        let (q, rem) = x.divmod(std::slice::from_ref(&x)).unwrap();
        assert!(q[0].is_one() && rem.is_zero());

        let r = PolyRing::new(
            Field::Rational,
            vec!["x".into(), "y".into()],
            MonomialOrder::Lex,
        );
        let f = r.parse("x^2*y").unwrap();
        let g = r.parse("x*y - 1").unwrap();
        let (q, rem) = f.divmod(std::slice::from_ref(&g)).unwrap();
        assert_eq!(q[0], r.parse("x").unwrap());
        assert_eq!(rem, r.parse("x").unwrap());
        // multiply-back oracle
        assert_eq!(&(&q[0] * &g) + &rem, f);

        let one = r.one();
        let (q, rem) = f.divmod(&[one]).unwrap();
        assert_eq!(q[0], f);
        assert!(rem.is_zero());
    }

    #[test]
    fn division_rejects_zero_divisor() {
        let r = qring(&["x"]);
        let f = r.parse("x").unwrap();
        assert_eq!(f.divmod(&[r.zero()]).unwrap_err(), Error::ZeroDivisor(0));
    }

    #[test]
    fn derivatives() {
        let r = qring(&["t", "s"]);
        let f = r.parse("t^5 - s").unwrap();
        assert_eq!(f.partial_derivative(0).unwrap(), r.parse("5*t^4").unwrap());
        assert!(r.int(7).partial_derivative(1).unwrap().is_zero());
        assert!(f.partial_derivative(2).is_err());
        let r3 = PolyRing::with_vars(Field::prime(3).unwrap(), &["x"]);
        assert!(r3
            .parse("x^3")
            .unwrap()
            .partial_derivative(0)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn mismatched_rings_are_errors() {
        let a = qring(&["x"]).parse("x").unwrap();
        let b = qring(&["y"]).parse("y").unwrap();
        assert!(matches!(a.checked_add(&b), Err(Error::RingMismatch(_))));
        let c = PolyRing::with_vars(Field::prime(5).unwrap(), &["x"])
            .parse("x")
            .unwrap();
        assert!(matches!(
            a.checked_mul(&c),
            Err(Error::CharacteristicMismatch(0, 5))
        ));
    }

    #[test]
    fn substitution_is_a_ring_map() {
        let r = qring(&["s"]);
        let t = qring(&["t"]);
        let f = r.parse("s^2 + 3*s").unwrap();
        let img = f.substitute(&[t.parse("t^3").unwrap()]);
        assert_eq!(img, t.parse("t^6 + 3*t^3").unwrap());
    }
}
