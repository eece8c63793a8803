//! Isomorphism probing and minimal Betti numbers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::linalg::spans_everything;
use super::{free_resolution, hom_module, same_algebra, FPModule, Row};
use crate::error::{Error, Result};
use crate::matrix;
use crate::monomial::Monomial;
use crate::poly::Polynomial;

pub const DEFAULT_ATTEMPTS: usize = 64;

/// Outcome of [`iso_probe`].
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum IsoVerdict {
    /// `forward` (rows: images of the generators of `M` in `N`) and
    /// `backward` are both surjective, hence mutually inverse up to
    /// automorphism: the modules are isomorphic.
    IsoFound {
        #[serde(serialize_with = "ser_matrix")]
        forward: Vec<Row>,
        #[serde(serialize_with = "ser_matrix")]
        backward: Vec<Row>,
    },
    /// An invariant differs, which proves the modules are not isomorphic.
    Mismatch {
        invariant: String,
    },
    Inconclusive {
        attempts: usize,
    },
}

fn ser_matrix<S: serde::Serializer>(m: &[Row], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<Vec<String>> = m
        .iter()
        .map(|r| r.iter().map(|p| p.to_string()).collect())
        .collect();
    v.serialize(s)
}

impl IsoVerdict {
    pub fn is_iso(&self) -> bool {
        matches!(self, IsoVerdict::IsoFound { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            IsoVerdict::IsoFound { .. } => "iso_found",
            IsoVerdict::Mismatch { .. } => "mismatch",
            IsoVerdict::Inconclusive { .. } => "inconclusive",
        }
    }
}

/// Image of the generators of `M` under `map` spans `N`.
fn is_surjective(map: &[Row], n: &FPModule) -> bool {
    let mut gens: Vec<Row> = map.to_vec();
    gens.extend(n.relations().iter().cloned());
    spans_everything(n.algebra().ctx(), &gens, n.ngens())
}

fn combine(maps: &[Vec<Row>], coeffs: &[Polynomial], n: &FPModule) -> Vec<Row> {
    let ctx = n.algebra().ctx();
    let rows = maps[0].len();
    let cols = n.ngens();
    let mut out = vec![ctx.zero_row(cols); rows];
    for (phi, c) in maps.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (i, r) in phi.iter().enumerate() {
            for (j, e) in r.iter().enumerate() {
                if !e.is_zero() {
                    out[i][j] = &out[i][j] + &(c * e);
                }
            }
        }
    }
    out.iter().map(|r| ctx.reduce_row(r)).collect()
}

/// Random polynomial of degree at most `deg` in the visible variables with
/// small integer coefficients.
fn random_poly(rng: &mut ChaCha8Rng, m: &FPModule, deg: u32) -> Polynomial {
    let alg = m.algebra();
    let ring = alg.ring();
    let nv = alg.nvisible();
    let mut terms = Vec::new();
    let count = rng.gen_range(1..=3);
    for _ in 0..count {
        let mut e = vec![0u32; ring.nvars()];
        let d = if nv == 0 { 0 } else { rng.gen_range(0..=deg) };
        for _ in 0..d {
            e[rng.gen_range(0..nv)] += 1;
        }
        let c = rng.gen_range(-3i64..=3);
        terms.push((ring.field().from_i64(c), Monomial::new(e)));
    }
    Polynomial::from_terms(ring, terms)
}

/// Search for a surjection `M -> N` among the generators of `Hom(M, N)`
/// and seeded random combinations of them.
fn find_surjection(
    maps: &[Vec<Row>],
    n: &FPModule,
    rng: &mut ChaCha8Rng,
    attempts: usize,
) -> Option<Vec<Row>> {
    if maps.is_empty() {
        return None;
    }
    let ring = n.algebra().ring().clone();
    for t in 0..attempts {
        let candidate = if t < maps.len() {
            maps[t].clone()
        } else {
            let deg = if t < maps.len() + attempts / 2 { 0 } else { 2 };
            let coeffs: Vec<Polynomial> = maps
                .iter()
                .map(|_| {
                    if deg == 0 {
                        ring.int(rng.gen_range(-3i64..=3))
                    } else {
                        random_poly(rng, n, deg)
                    }
                })
                .collect();
            combine(maps, &coeffs, n)
        };
        if is_surjective(&candidate, n) {
            return Some(candidate);
        }
    }
    None
}

/// Three-valued isomorphism test. Non-isomorphism is proved by invariants:
/// vanishing, fiber rank at the origin, Hilbert dimension and
/// multiplicity (graded case), or vanishing of `Hom`.
pub fn iso_probe(m: &FPModule, n: &FPModule, seed: u64, attempts: usize) -> Result<IsoVerdict> {
    same_algebra(m.algebra(), n.algebra())?;
    let (mz, nz) = (m.is_zero(), n.is_zero());
    if mz && nz {
        return Ok(IsoVerdict::IsoFound {
            forward: vec![Vec::new(); m.ngens()],
            backward: vec![Vec::new(); n.ngens()],
        });
    }
    if mz != nz {
        return Ok(IsoVerdict::Mismatch {
            invariant: "one module is zero, the other is not".into(),
        });
    }
    if let (Some(a), Some(b)) = (m.fiber_rank(), n.fiber_rank()) {
        if a != b {
            return Ok(IsoVerdict::Mismatch {
                invariant: format!("minimal generator counts at the origin differ: {a} vs {b}"),
            });
        }
    }
    if let (Ok(h1), Ok(h2)) = (m.hilbert_series(), n.hilbert_series()) {
        if h1.dimension() != h2.dimension() || h1.multiplicity() != h2.multiplicity() {
            return Ok(IsoVerdict::Mismatch {
                invariant: format!(
                    "Hilbert dimension/multiplicity differ: ({}, {}) vs ({}, {})",
                    h1.dimension(),
                    h1.multiplicity(),
                    h2.dimension(),
                    h2.multiplicity()
                ),
            });
        }
    }
    let (_, fwd) = hom_module(m, n)?;
    if fwd.is_empty() {
        return Ok(IsoVerdict::Mismatch {
            invariant: "Hom(M, N) = 0".into(),
        });
    }
    let (_, bwd) = hom_module(n, m)?;
    if bwd.is_empty() {
        return Ok(IsoVerdict::Mismatch {
            invariant: "Hom(N, M) = 0".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let Some(forward) = find_surjection(&fwd, n, &mut rng, attempts) else {
        return Ok(IsoVerdict::Inconclusive { attempts });
    };
    let Some(backward) = find_surjection(&bwd, m, &mut rng, attempts) else {
        return Ok(IsoVerdict::Inconclusive { attempts });
    };
    Ok(IsoVerdict::IsoFound { forward, backward })
}

/// Betti numbers `dim_K Tor_i(M, K)` with `K = A/(all variables)`, for
/// `i` up to the number of ambient variables; trailing zeros dropped.
pub fn minimal_betti(m: &FPModule) -> Result<Vec<usize>> {
    let alg = m.algebra();
    if !alg.origin_is_point() {
        return Err(Error::NotGradable);
    }
    let bound = alg.nvars();
    let res = free_resolution(m, bound + 1);
    let rank_at_origin = |k: usize| -> usize {
        let d = res.differential(k);
        if d.is_empty() {
            return 0;
        }
        let mat: Vec<Vec<_>> = d
            .iter()
            .map(|r| r.iter().map(|p| p.at_origin()).collect())
            .collect();
        matrix::rank(&mat)
    };
    let mut betti: Vec<usize> = (0..=bound)
        .map(|i| res.rank(i) - rank_at_origin(i) - rank_at_origin(i + 1))
        .collect();
    while betti.len() > 1 && *betti.last().unwrap() == 0 {
        betti.pop();
    }
    if m.is_zero() {
        betti = vec![0];
    }
    Ok(betti)
}
