use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Exponent vector with cached total degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Box<[u32]>,
    degree: u32,
}

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial {
            exps: vec![0; nvars].into_boxed_slice(),
            degree: 0,
        }
    }

    pub fn new(exps: Vec<u32>) -> Monomial {
        let degree = exps.iter().sum();
        Monomial {
            exps: exps.into_boxed_slice(),
            degree,
        }
    }

    pub fn var(nvars: usize, index: usize, power: u32) -> Monomial {
        let mut e = vec![0; nvars];
        e[index] = power;
        Monomial::new(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps: Vec<u32> = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(a, b)| a + b)
            .collect();
        Monomial {
            exps: exps.into_boxed_slice(),
            degree: self.degree + other.degree,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient(&self, other: &Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        let exps: Vec<u32> = other
            .exps
            .iter()
            .zip(self.exps.iter())
            .map(|(a, b)| a - b)
            .collect();
        Monomial {
            exps: exps.into_boxed_slice(),
            degree: other.degree - self.degree,
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial::new(
            self.exps
                .iter()
                .zip(other.exps.iter())
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(other.exps.iter())
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Support restricted to a set of variables.
    pub fn only_involves(&self, vars: &[bool]) -> bool {
        self.exps
            .iter()
            .zip(vars)
            .all(|(e, allowed)| *e == 0 || *allowed)
    }

    pub fn fmt_with(&self, names: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, name) in self.exps.iter().zip(names) {
            if *e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// A monomial order. `Block(k)` compares the first `k` variables by
/// graded reverse lex and breaks ties by graded reverse lex on the rest,
/// which makes it an elimination order for the first block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum MonomialOrder {
    Lex,
    #[default]
    GrevLex,
    Block(usize),
}

pub(crate) fn grevlex_slice(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for (x, y) in a.iter().zip(b.iter()).rev() {
        match x.cmp(y) {
            Ordering::Equal => continue,
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
            MonomialOrder::GrevLex => match a.degree.cmp(&b.degree) {
                Ordering::Equal => grevlex_slice(&a.exps, &b.exps),
                o => o,
            },
            MonomialOrder::Block(k) => {
                let k = (*k).min(a.exps.len());
                match grevlex_slice(&a.exps[..k], &b.exps[..k]) {
                    Ordering::Equal => grevlex_slice(&a.exps[k..], &b.exps[k..]),
                    o => o,
                }
            }
        }
    }

    /// Compare only the variables after the first `k` (used by module
    /// orders that interleave positions between two blocks).
    pub(crate) fn compare_tail(&self, a: &Monomial, b: &Monomial, k: usize) -> Ordering {
        grevlex_slice(&a.exps[k..], &b.exps[k..])
    }

    pub fn name(&self) -> String {
        match self {
            MonomialOrder::Lex => "lex".into(),
            MonomialOrder::GrevLex => "grevlex".into(),
            MonomialOrder::Block(k) => format!("block({k})"),
        }
    }

    pub fn parse(s: &str) -> Option<MonomialOrder> {
        match s {
            "lex" => Some(MonomialOrder::Lex),
            "grevlex" => Some(MonomialOrder::GrevLex),
            _ => s
                .strip_prefix("block(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|k| k.parse().ok())
                .map(MonomialOrder::Block),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn grevlex_textbook() {
        let o = MonomialOrder::GrevLex;
        // x*y^2 > ... : degree first
        assert_eq!(o.compare(&m(&[1, 2, 0]), &m(&[2, 0, 0])), Ordering::Greater);
        // x^2 z < x y^2 under grevlex (smallest last variable wins)
        assert_eq!(o.compare(&m(&[2, 0, 1]), &m(&[1, 2, 0])), Ordering::Less);
        assert_eq!(
            MonomialOrder::Lex.compare(&m(&[2, 0, 1]), &m(&[1, 2, 0])),
            Ordering::Greater
        );
    }

    #[test]
    fn block_eliminates_first_block() {
        let o = MonomialOrder::Block(1);
        assert_eq!(o.compare(&m(&[1, 0, 0]), &m(&[0, 5, 5])), Ordering::Greater);
        assert_eq!(o.compare(&m(&[1, 1, 0]), &m(&[1, 0, 1])), Ordering::Greater);
    }

    #[test]
    fn divisibility_and_lcm() {
        let a = m(&[1, 2]);
        let b = m(&[2, 1]);
        assert_eq!(a.lcm(&b), m(&[2, 2]));
        assert!(a.divides(&m(&[1, 3])));
        assert_eq!(a.quotient(&m(&[3, 3])), m(&[2, 1]));
        assert!(!a.is_coprime(&b));
    }
}
