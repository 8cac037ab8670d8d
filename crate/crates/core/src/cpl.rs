//! The vectors `w_n`, `B(ξ)`, `CL(ξ)` and `B̄(ξ)` of the local Weyl module `W(n)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use serde::Serialize;

use crate::combinatorics::IndexTriple;
use crate::fkops;
use crate::fock::{AlgebraGen, FockVector, Letter};
use crate::rational::{factorial, sign_pow, Rational};
use crate::wedge::{self, WedgeVector};
use crate::{Error, Result};

/// `m_j`, `z(ξ)` and `ε(ξ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalizationData {
    /// `m[j]` is the number of `i ≤ n − k` with `λ_i = j`, for `0 ≤ j ≤ k`.
    pub m: Vec<usize>,
    #[serde(with = "crate::rational::serde_text")]
    pub z: Rational,
    pub eps: i64,
}

pub fn normalization(xi: &IndexTriple) -> NormalizationData {
    let (n, k) = (xi.n() as i64, xi.k() as i64);
    let mut m = vec![0usize; k as usize + 1];
    m[0] = xi.m0();
    for &part in xi.lam().parts() {
        m[part as usize] += 1;
    }
    let e = n / 4 - (n - k) / 2;
    let eps = if e.rem_euclid(2) == 0 { 1 } else { -1 };
    let denom: BigInt = m.iter().map(|&mj| factorial(mj as u64)).product();
    NormalizationData {
        m,
        z: Rational::new(BigInt::from(eps), denom),
        eps,
    }
}

/// The word and start vector defining `w_n`.
pub fn wn_word(n: u32) -> (Vec<Letter>, FockVector) {
    let n = n as i64;
    if n % 2 == 0 {
        (vec![(AlgebraGen::x(-n / 2), (n / 2) as u32)], FockVector::vacuum0())
    } else {
        (vec![(AlgebraGen::x(-(n + 1) / 2), ((n - 1) / 2) as u32)], FockVector::vacuum1())
    }
}

fn wn_wedge(n: u32) -> Arc<WedgeVector> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<WedgeVector>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().unwrap().get(&n) {
        return hit.clone();
    }
    let (word, start) = wn_word(n);
    let w = Arc::new(wedge::apply_word(&word, &wedge::from_fock(&start)));
    cache.lock().unwrap().insert(n, w.clone());
    w
}

/// `w_n = (x t^{−n/2})^{(n/2)} v_{Λ0}` for even `n`,
/// `(x t^{−(n+1)/2})^{((n−1)/2)} v_{Λ1}` for odd `n`.
pub fn make_wn(n: u32) -> FockVector {
    wedge::to_fock(&wn_wedge(n))
}

/// Groups `∏_i y t^{modes_i}` into divided powers, highest mode acting first.
/// Returns the word and the factor `∏ m_j!` relating plain and divided powers.
fn grouped_y_word(modes: impl IntoIterator<Item = i64>) -> (Vec<Letter>, BigInt) {
    let mut counts: BTreeMap<i64, u32> = BTreeMap::new();
    for m in modes {
        *counts.entry(m).or_default() += 1;
    }
    let factor = counts.values().map(|&c| factorial(c as u64)).product();
    let word = counts.into_iter().map(|(m, c)| (AlgebraGen::y(m), c)).collect();
    (word, factor)
}

fn on_wn(n: u32, word: &[Letter]) -> FockVector {
    wedge::to_fock(&wedge::apply_word(word, &wn_wedge(n)))
}

fn lam_padded(xi: &IndexTriple) -> impl Iterator<Item = i64> + '_ {
    let len = (xi.n() - xi.k()) as usize;
    (1..=len).map(move |i| xi.lam().part(i) as i64)
}

/// `B(ξ) = (∏_{i=1}^{n−k} y t^{λ_i}) w_n`.
pub fn b_vec(xi: &IndexTriple) -> FockVector {
    let (word, factor) = grouped_y_word(lam_padded(xi));
    on_wn(xi.n(), &word).scale(&Rational::from_integer(factor))
}

/// `CL(ξ) = ε(ξ) · y^{(m_k)} (y t)^{(m_{k−1})} ⋯ (y t^k)^{(m_0)} w_n`.
pub fn cl_vec(xi: &IndexTriple) -> Result<FockVector> {
    let data = normalization(xi);
    let k = xi.k() as i64;
    let word: Vec<Letter> = data
        .m
        .iter()
        .enumerate()
        .filter(|(_, &mj)| mj > 0)
        .map(|(j, &mj)| (AlgebraGen::y(k - j as i64), mj as u32))
        .collect();
    Ok(on_wn(xi.n(), &word).scale(&Rational::from_integer(BigInt::from(data.eps))))
}

/// `CL(ξ)` computed both as `ε ·` divided powers and as `z(ξ) ·` the plain
/// product `∏ y t^{k−λ_i}` applied letter by letter; the two must agree.
pub fn cl_vec_checked(xi: &IndexTriple) -> Result<FockVector> {
    let divided = cl_vec(xi)?;
    let data = normalization(xi);
    let k = xi.k() as i64;
    let mut plain: Vec<Letter> = lam_padded(xi).map(|l| (AlgebraGen::y(k - l), 1)).collect();
    plain.sort_by_key(|(g, _)| g.degree);
    let product = on_wn(xi.n(), &plain).scale(&data.z);
    if product != divided {
        return Err(Error::Inconsistent(format!("normalizations of CL({xi}) disagree")));
    }
    Ok(divided)
}

/// `v_n = (y t^{−n/2})^{(n/2)} v_{Λ0}` for even `n`.
pub fn make_vn(n: u32) -> Result<FockVector> {
    if n % 2 != 0 {
        return Err(Error::Parity(format!("v_n is defined for even n, got {n}")));
    }
    let word = [(AlgebraGen::y(-(n as i64) / 2), n / 2)];
    Ok(wedge::to_fock(&wedge::apply_word(&word, &wedge::from_fock(&FockVector::vacuum0()))))
}

/// `B̄(ξ) = (∏ x t^{λ_i}) v_n` for even `n`; for odd `n` the image of `B(ξ)`
/// under the intertwiner `G′: L(Λ1) → L(Λ1)^{σ̃φ̃σ̃⁻¹}`.
pub fn bbar_vec(xi: &IndexTriple) -> Result<FockVector> {
    let n = xi.n();
    if n % 2 == 1 {
        return fkops::g_prime_intertwiner(&b_vec(xi));
    }
    let mut counts: BTreeMap<i64, u32> = BTreeMap::new();
    for l in lam_padded(xi) {
        *counts.entry(l).or_default() += 1;
    }
    let factor: BigInt = counts.values().map(|&c| factorial(c as u64)).product();
    let mut word: Vec<Letter> = counts.into_iter().map(|(m, c)| (AlgebraGen::x(m), c)).collect();
    word.push((AlgebraGen::y(-(n as i64) / 2), n / 2));
    let v = wedge::apply_word(&word, &wedge::from_fock(&FockVector::vacuum0()));
    Ok(wedge::to_fock(&v).scale(&Rational::from_integer(factor)))
}

/// `z(ξ) · B(ξ^c)`, which equals `CL(ξ)`.
pub fn cl_via_complement(xi: &IndexTriple) -> FockVector {
    b_vec(&xi.complement()).scale(&normalization(xi).z)
}

/// The four defining relations of `W(n)` on `w_n`, for `0 ≤ s ≤ s_max`.
pub fn wn_relations_hold(n: u32, s_max: i64) -> bool {
    let w = wn_wedge(n);
    let kills = |g: AlgebraGen| wedge::act(g, &w).is_zero();
    let x_ok = (0..=s_max).all(|s| kills(AlgebraGen::x(s)));
    let h_ok = (0..=s_max).all(|s| kills(AlgebraGen::h(s + 1)));
    let h0 = wedge::act(AlgebraGen::h(0), &w) == w.scale(&Rational::from_integer(BigInt::from(n)));
    let y_ok = wedge::apply_word(&[(AlgebraGen::y(0), n + 1)], &w).is_zero();
    x_ok && h_ok && h0 && y_ok
}

/// `ε` for `ξ = (n, n, ∅)`: `(−1)^{[n/4]}`.
pub fn eps_top(n: u32) -> Rational {
    sign_pow((n / 4) as i64)
}
