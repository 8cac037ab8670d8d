//! Stability `CL(ξ) = CL(ψ(ξ))` on `𝔓^stab` and the direct-limit basis of
//! `L(Λ0)` built from stable CPL vectors.

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::combinatorics::{enum_p, partition_count, partitions_bounded, IndexTriple};
use crate::cpl;
use crate::fock::FockVector;
use crate::linalg;
use crate::rational::int;
use crate::weights::{self, AffineWeight};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilityViolation {
    #[serde(serialize_with = "as_text")]
    pub xi: IndexTriple,
    pub reason: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct StabilityReport {
    pub n: u32,
    pub checked: usize,
    pub violations: Vec<StabilityViolation>,
}

impl StabilityReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

fn as_text<T: std::fmt::Display, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn stability_of(xi: &IndexTriple) -> Option<String> {
    let image = xi.psi();
    if !image.is_stable() {
        return Some(format!("ψ({xi}) = {image} is not stable"));
    }
    match (cpl::cl_vec(xi), cpl::cl_vec(&image)) {
        (Ok(a), Ok(b)) if a == b => None,
        (Ok(_), Ok(_)) => Some(format!("CL({xi}) ≠ CL({image})")),
        (Err(e), _) | (_, Err(e)) => Some(e.to_string()),
    }
}

/// Checks `CL(ξ) = CL(ψ(ξ))` and `ψ(ξ) ∈ 𝔓^stab` for every `ξ ∈ 𝔓^stab(n)`.
pub fn check_stability(n: u32) -> StabilityReport {
    let stable: Vec<IndexTriple> = enum_p(n).into_iter().filter(|xi| xi.is_stable()).collect();
    let violations = stable
        .par_iter()
        .filter_map(|xi| stability_of(xi).map(|reason| StabilityViolation { xi: xi.clone(), reason }))
        .collect();
    StabilityReport {
        n,
        checked: stable.len(),
        violations,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StableVector {
    #[serde(serialize_with = "as_text")]
    pub xi: IndexTriple,
    pub vector: FockVector,
}

/// `𝓑_μ` for `μ = t_{jα1}(Λ0) − dδ` (or `t_{jα1}(Λ1) − dδ` in the odd sector).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StableBasisEntry {
    pub mu: AffineWeight,
    pub j: i64,
    pub d: u32,
    pub chosen_n: u32,
    pub vectors: Vec<StableVector>,
}

/// The triples `(n, k, λ)` with `k = j + ⌈n/2⌉` and `|λ| = d`.
fn triples_at(j: i64, d: u32, n: u32) -> Result<Vec<IndexTriple>> {
    let k = j + (n as i64 + 1) / 2;
    if k < 0 || k > n as i64 {
        return Ok(Vec::new());
    }
    let k = k as u32;
    partitions_bounded(d, k, (n - k) as usize)
        .into_iter()
        .map(|lam| IndexTriple::new(n, k, lam))
        .collect()
}

fn vectors_at(triples: &[IndexTriple]) -> Result<Vec<StableVector>> {
    triples
        .par_iter()
        .map(|xi| {
            Ok(StableVector {
                xi: xi.clone(),
                vector: cpl::cl_vec(xi)?,
            })
        })
        .collect()
}

fn build_entry(j: i64, d: u32, n: u32, base: AffineWeight) -> Result<StableBasisEntry> {
    let mu = &weights::translate_half_steps(&base, 2 * j) - &AffineWeight::new(0, 0, int(d as i64));
    let triples = triples_at(j, d, n)?;
    let expected = partition_count(d);
    if triples.len() != expected {
        return Err(Error::Inconsistent(format!("|𝔓_μ({n})| = {} ≠ p({d}) = {expected}", triples.len())));
    }
    if let Some(xi) = triples.iter().find(|xi| !xi.is_stable()) {
        return Err(Error::NotStable(xi.to_string()));
    }
    let vectors = vectors_at(&triples)?;
    for v in &vectors {
        if v.vector.weight().as_ref() != Some(&mu) {
            return Err(Error::Inconsistent(format!("CL({}) does not have weight {mu}", v.xi)));
        }
    }
    let plain: Vec<FockVector> = vectors.iter().map(|v| v.vector.clone()).collect();
    if linalg::rank(&plain) != expected {
        return Err(Error::Inconsistent(format!("𝓑_μ for μ = {mu} is linearly dependent")));
    }
    let lifted = vectors_at(&triples.iter().map(IndexTriple::psi).collect::<Vec<_>>())?;
    if lifted.iter().zip(&vectors).any(|(a, b)| a.vector != b.vector) {
        return Err(Error::Inconsistent(format!("𝓑_μ for μ = {mu} changes between n = {n} and n = {}", n + 2)));
    }
    Ok(StableBasisEntry {
        mu,
        j,
        d,
        chosen_n: n,
        vectors,
    })
}

/// `𝓑_μ` computed at `n = 2(d + |j|)`, checked for size `p(d)`, weight,
/// independence, and agreement with the recomputation at `n + 2`.
pub fn stable_basis_at(j: i64, d: u32) -> Result<StableBasisEntry> {
    let n = 2 * (d + j.unsigned_abs() as u32);
    build_entry(j, d, n, AffineWeight::lambda0())
}

/// The odd-sector analogue in `L(Λ1)`, at `n = 2(d + |j|) + 1`.
pub fn stable_basis_odd_at(j: i64, d: u32) -> Result<StableBasisEntry> {
    let n = 2 * (d + j.unsigned_abs() as u32) + 1;
    build_entry(j, d, n, AffineWeight::lambda1())
}

/// All `𝓑_μ` with `j² + d ≤ dmax`, ordered by `(j, d)`.
pub fn basis_up_to(dmax: u32) -> Result<Vec<StableBasisEntry>> {
    let mut jd = Vec::new();
    let jmax = (0i64..).take_while(|j| j * j <= dmax as i64).last().unwrap_or(0);
    for j in -jmax..=jmax {
        for d in 0..=dmax - (j * j) as u32 {
            jd.push((j, d));
        }
    }
    jd.into_par_iter().map(|(j, d)| stable_basis_at(j, d)).collect()
}
