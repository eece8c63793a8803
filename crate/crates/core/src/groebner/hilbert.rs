use std::fmt;

use serde::{Deserialize, Serialize};

use crate::monomial::Monomial;

/// `numerator(T) / (1 - T)^denominator_power`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSeries {
    numerator: Vec<i64>,
    denominator_power: usize,
}

fn trim(mut v: Vec<i64>) -> Vec<i64> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    if v.is_empty() {
        v.push(0);
    }
    v
}

impl HilbertSeries {
    pub fn new(numerator: Vec<i64>, denominator_power: usize) -> HilbertSeries {
        HilbertSeries {
            numerator: trim(numerator),
            denominator_power,
        }
    }

    pub fn zero() -> HilbertSeries {
        HilbertSeries::new(vec![0], 0)
    }

    pub fn numerator(&self) -> &[i64] {
        &self.numerator
    }

    pub fn denominator_power(&self) -> usize {
        self.denominator_power
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.iter().all(|c| *c == 0)
    }

    /// Cancel factors of `(1 - T)`: returns `(h, dim)` with
    /// `series = h(T) / (1 - T)^dim` and `h(1) != 0` (unless zero).
    pub fn reduced(&self) -> (Vec<i64>, usize) {
        if self.is_zero() {
            return (vec![0], 0);
        }
        let mut h = self.numerator.clone();
        let mut d = self.denominator_power;
        while d > 0 && h.iter().sum::<i64>() == 0 {
            // synthetic division by (1 - T): h = (1 - T) q  =>  q_k = sum_{i<=k} h_i
            let mut q = Vec::with_capacity(h.len());
            let mut acc = 0;
            for c in &h[..h.len() - 1] {
                acc += c;
                q.push(acc);
            }
            h = trim(q);
            d -= 1;
        }
        (h, d)
    }

    /// Krull dimension of the graded object.
    pub fn dimension(&self) -> i64 {
        if self.is_zero() {
            return -1;
        }
        self.reduced().1 as i64
    }

    /// `h(1)` of the reduced form: the multiplicity (length when dimension 0).
    pub fn multiplicity(&self) -> i64 {
        self.reduced().0.iter().sum()
    }

    /// Same series with every degree shifted up by `k`.
    pub fn shift(&self, k: usize) -> HilbertSeries {
        let mut v = vec![0; k];
        v.extend_from_slice(&self.numerator);
        HilbertSeries::new(v, self.denominator_power)
    }

    pub fn add(&self, other: &HilbertSeries) -> HilbertSeries {
        assert_eq!(self.denominator_power, other.denominator_power);
        let n = self.numerator.len().max(other.numerator.len());
        let v = (0..n)
            .map(|i| {
                self.numerator.get(i).copied().unwrap_or(0)
                    + other.numerator.get(i).copied().unwrap_or(0)
            })
            .collect();
        HilbertSeries::new(v, self.denominator_power)
    }
}

impl fmt::Display for HilbertSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, &c) in self.numerator.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "T".to_string(),
                _ => format!("T^{k}"),
            };
            let mag = c.abs();
            let body = if mono.is_empty() {
                mag.to_string()
            } else if mag == 1 {
                mono
            } else {
                format!("{mag}*{mono}")
            };
            if parts.is_empty() {
                parts.push(if c < 0 { format!("-{body}") } else { body });
            } else {
                parts.push(if c < 0 {
                    format!("- {body}")
                } else {
                    format!("+ {body}")
                });
            }
        }
        let num = if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" ")
        };
        let num = if parts.len() > 1 {
            format!("({num})")
        } else {
            num
        };
        match self.denominator_power {
            0 => write!(f, "{num}"),
            1 => write!(f, "{num}/(1-T)"),
            d => write!(f, "{num}/(1-T)^{d}"),
        }
    }
}

fn minimize(gens: &[Monomial]) -> Vec<Monomial> {
    let mut sorted: Vec<Monomial> = gens.to_vec();
    sorted.sort_by_key(|m| m.degree());
    sorted.dedup();
    let mut out: Vec<Monomial> = Vec::new();
    for m in sorted {
        if !out.iter().any(|g| g.divides(&m)) {
            out.push(m);
        }
    }
    out
}

/// Numerator of the Hilbert series of `K[x_1..x_n] / (gens)` over `(1-T)^n`.
pub(crate) fn hilbert_numerator(gens: &[Monomial], nvars: usize) -> Vec<i64> {
    let gens = minimize(gens);
    numerator_rec(gens, nvars)
}

fn poly_sub_shifted(a: &mut Vec<i64>, b: &[i64], shift: usize) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, 0);
    }
    for (i, c) in b.iter().enumerate() {
        a[i + shift] -= c;
    }
}

fn numerator_rec(mut gens: Vec<Monomial>, nvars: usize) -> Vec<i64> {
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|m| m.is_one()) {
        return vec![0];
    }
    // pairwise coprime generators (e.g. pure powers): product formula
    let coprime = gens
        .iter()
        .enumerate()
        .all(|(i, a)| gens[i + 1..].iter().all(|b| a.is_coprime(b)));
    if coprime {
        let mut acc = vec![1i64];
        for m in &gens {
            let mut next = acc.clone();
            poly_sub_shifted(&mut next, &acc, m.degree() as usize);
            acc = next;
        }
        return acc;
    }
    let pivot = gens.pop().unwrap();
    let colon: Vec<Monomial> = gens
        .iter()
        .map(|g| {
            Monomial::new(
                g.exps()
                    .iter()
                    .zip(pivot.exps())
                    .map(|(a, b)| a.saturating_sub(*b))
                    .collect(),
            )
        })
        .collect();
    let mut base = numerator_rec(gens, nvars);
    let inner = numerator_rec(minimize(&colon), nvars);
    poly_sub_shifted(&mut base, &inner, pivot.degree() as usize);
    trim(base)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_form_and_multiplicity() {
        // (1 - T^2)/(1-T)^3 = (1 + T)/(1-T)^2
        let h = HilbertSeries::new(vec![1, 0, -1], 3);
        assert_eq!(h.reduced(), (vec![1, 1], 2));
        assert_eq!(h.multiplicity(), 2);
        assert_eq!(h.dimension(), 2);
    }

    #[test]
    fn monomial_ideal_numerators() {
        // (x^2, xy) in K[x, y]: quotient basis 1, x, y^k, x... : series (1 - 2T^2 + T^3)/(1-T)^2
        let gens = [Monomial::new(vec![2, 0]), Monomial::new(vec![1, 1])];
        assert_eq!(hilbert_numerator(&gens, 2), vec![1, 0, -2, 1]);
        // (x, y) in K[x,y]: 1 - 2T + T^2
        let gens = [Monomial::new(vec![1, 0]), Monomial::new(vec![0, 1])];
        assert_eq!(hilbert_numerator(&gens, 2), vec![1, -2, 1]);
    }
}
