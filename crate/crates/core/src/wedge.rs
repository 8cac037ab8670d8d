//! Two-species fermionic model of `L(Λ0) ⊕ L(Λ1)`.
//!
//! Each species is a semi-infinite wedge described by a charge `c` and a
//! partition `λ`: the occupied positions are `c + λ_i − i` for `i ≥ 1`.
//! The generators act by
//!
//! - `x t^n = Σ_j ψ¹_{j−n} ψ²*_j`, `y t^n = Σ_j ψ²_{j−n} ψ¹*_j`,
//! - `h t^n = J¹(n) − J²(n)` with `J(n) = Σ_j ψ_{j−n} ψ*_j` for `n ≠ 0`,
//!   and `h t^0 = c1 − c2`,
//!
//! where species-2 operators carry the Klein sign `(−1)^{c1}`.
//! A lattice state `|m; μ⟩` corresponds to `s(c1) · (p¹ − p²)_μ |c1, c2⟩`
//! with `c1 − c2 = m`, `c1 + c2 ∈ {0, 1}`, `s(c) = (−1)^{c(c−1)/2}` and
//! `p_k ↔ J(−k)`. Only the species-1 part of a vector is needed to read it
//! back, via the Murnaghan–Nakayama rule.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::combinatorics::{partitions_of, Partition};
use crate::fock::{AlgebraGen, FockState, FockVector, GenKind, Letter};
use crate::rational::{factorial, frac, int, Rational};

/// One wedge species.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Species {
    c: i64,
    lam: Vec<u32>,
}

impl Species {
    fn vacuum(c: i64) -> Self {
        Self { c, lam: Vec::new() }
    }

    /// Every position below this one is occupied.
    fn floor(&self) -> i64 {
        self.c - self.lam.len() as i64 - 1
    }

    fn occupied(&self, p: i64) -> bool {
        if p <= self.floor() {
            return true;
        }
        self.lam
            .iter()
            .enumerate()
            .any(|(i, &l)| self.c + l as i64 - (i as i64 + 1) == p)
    }

    /// Occupied positions `≥ low`, descending.
    fn positions(&self, low: i64) -> Vec<i64> {
        let mut out: Vec<i64> = self
            .lam
            .iter()
            .enumerate()
            .map(|(i, &l)| self.c + l as i64 - (i as i64 + 1))
            .filter(|&p| p >= low)
            .collect();
        let mut p = self.floor();
        while p >= low {
            out.push(p);
            p -= 1;
        }
        out
    }

    fn from_positions(c: i64, positions: &[i64]) -> Self {
        let mut lam = Vec::with_capacity(positions.len());
        for (i, &p) in positions.iter().enumerate() {
            let part = p - c + i as i64 + 1;
            debug_assert!(part >= 0);
            if part == 0 {
                break;
            }
            lam.push(part as u32);
        }
        Self { c, lam }
    }

    /// Removes the particle at `p`; returns the sign `(−1)^{#above}`.
    fn remove(&self, p: i64) -> Option<(bool, Species)> {
        if !self.occupied(p) {
            return None;
        }
        let low = p.min(self.floor());
        let mut pos = self.positions(low);
        let idx = pos.iter().position(|&q| q == p)?;
        pos.remove(idx);
        Some((idx % 2 == 1, Species::from_positions(self.c - 1, &pos)))
    }

    /// Inserts a particle at `p`; returns the sign `(−1)^{#above}`.
    fn insert(&self, p: i64) -> Option<(bool, Species)> {
        if self.occupied(p) {
            return None;
        }
        let low = p.min(self.floor());
        let mut pos = self.positions(low);
        let idx = pos.iter().position(|&q| q < p).unwrap_or(pos.len());
        pos.insert(idx, p);
        Some((idx % 2 == 1, Species::from_positions(self.c + 1, &pos)))
    }

    /// `J(n)` restricted to one species, `n ≠ 0`: all moves `j → j − n`.
    fn current(&self, n: i64) -> Vec<(bool, Species)> {
        let mut out = Vec::new();
        // A target above the floor is needed, so j − n > floor.
        let low = self.floor() + n + 1;
        for j in self.positions(low) {
            let t = j - n;
            if self.occupied(t) {
                continue;
            }
            let (s1, mid) = self.remove(j).expect("occupied");
            let (s2, end) = mid.insert(t).expect("free");
            out.push((s1 ^ s2, end));
        }
        out
    }

    fn degree(&self) -> u32 {
        self.lam.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WedgeState {
    s1: Species,
    s2: Species,
}

impl WedgeState {
    pub fn charges(&self) -> (i64, i64) {
        (self.s1.c, self.s2.c)
    }

    pub fn degree(&self) -> u32 {
        self.s1.degree() + self.s2.degree()
    }
}

/// A finite linear combination of wedge states.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WedgeVector {
    terms: HashMap<WedgeState, Rational>,
}

impl WedgeVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest `|c1 − c2| + degree` among the terms.
    pub fn size_bound(&self) -> u64 {
        self.terms
            .keys()
            .map(|s| (s.s1.c - s.s2.c).unsigned_abs() + s.degree() as u64)
            .max()
            .unwrap_or(0)
    }

    fn add_term(&mut self, state: WedgeState, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(state) {
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::hash_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn merge(&mut self, other: WedgeVector) {
        for (s, c) in other.terms {
            self.add_term(s, c);
        }
    }

    pub fn scale(&self, c: &Rational) -> WedgeVector {
        if c.is_zero() {
            return WedgeVector::zero();
        }
        WedgeVector {
            terms: self.terms.iter().map(|(s, x)| (s.clone(), x * c)).collect(),
        }
    }

    pub fn add(&self, other: &WedgeVector) -> WedgeVector {
        let mut out = self.clone();
        out.merge(other.clone());
        out
    }

    pub fn sub(&self, other: &WedgeVector) -> WedgeVector {
        self.add(&other.scale(&-Rational::one()))
    }

    /// True if every `J¹(k) + J²(k)`, `k > 0`, kills the vector, i.e. the vector
    /// lies in the image of [`from_fock`].
    pub fn is_charge_neutral(&self) -> bool {
        let max = self.terms.keys().map(WedgeState::degree).max().unwrap_or(0) as i64;
        (1..=max).all(|k| {
            let mut out = WedgeVector::zero();
            for (s, c) in &self.terms {
                for (neg, s1) in s.s1.current(k) {
                    let sign = if neg { -c.clone() } else { c.clone() };
                    out.add_term(WedgeState { s1, s2: s.s2.clone() }, sign);
                }
                for (neg, s2) in s.s2.current(k) {
                    let sign = if neg { -c.clone() } else { c.clone() };
                    out.add_term(WedgeState { s1: s.s1.clone(), s2 }, sign);
                }
            }
            out.is_zero()
        })
    }
}

fn klein(c1: i64) -> bool {
    c1.rem_euclid(2) == 1
}

fn act_on_state(g: AlgebraGen, s: &WedgeState, coeff: &Rational, out: &mut WedgeVector) {
    let signed = |neg: bool| if neg { -coeff.clone() } else { coeff.clone() };
    let n = g.degree;
    match g.kind {
        GenKind::C => out.add_term(s.clone(), coeff.clone()),
        GenKind::D => {
            let m = s.s1.c - s.s2.c;
            let e = -(frac(m * m, 4) + int(s.degree() as i64));
            out.add_term(s.clone(), coeff * e);
        }
        GenKind::H if n == 0 => out.add_term(s.clone(), coeff * int(s.s1.c - s.s2.c)),
        GenKind::H => {
            for (neg, s1) in s.s1.current(n) {
                out.add_term(WedgeState { s1, s2: s.s2.clone() }, signed(neg));
            }
            for (neg, s2) in s.s2.current(n) {
                out.add_term(WedgeState { s1: s.s1.clone(), s2 }, signed(!neg));
            }
        }
        GenKind::X => {
            // j ∈ S2 with j − n free in S1.
            let low = s.s1.floor() + n + 1;
            for j in s.s2.positions(low) {
                if s.s1.occupied(j - n) {
                    continue;
                }
                let (a, s2) = s.s2.remove(j).expect("occupied");
                let (b, s1) = s.s1.insert(j - n).expect("free");
                out.add_term(WedgeState { s1, s2 }, signed(a ^ b ^ klein(s.s1.c)));
            }
        }
        GenKind::Y => {
            let low = s.s2.floor() + n + 1;
            for j in s.s1.positions(low) {
                if s.s2.occupied(j - n) {
                    continue;
                }
                let (a, s1) = s.s1.remove(j).expect("occupied");
                let (b, s2) = s.s2.insert(j - n).expect("free");
                out.add_term(WedgeState { s1, s2 }, signed(a ^ b ^ klein(s.s1.c - 1)));
            }
        }
    }
}

const PARALLEL_THRESHOLD: usize = 256;

pub fn act(g: AlgebraGen, v: &WedgeVector) -> WedgeVector {
    if v.len() < PARALLEL_THRESHOLD {
        let mut out = WedgeVector::zero();
        for (s, c) in &v.terms {
            act_on_state(g, s, c, &mut out);
        }
        return out;
    }
    let entries: Vec<(&WedgeState, &Rational)> = v.terms.iter().collect();
    entries
        .par_chunks(PARALLEL_THRESHOLD / 4)
        .map(|chunk| {
            let mut out = WedgeVector::zero();
            for (s, c) in chunk {
                act_on_state(g, s, c, &mut out);
            }
            out
        })
        .reduce(WedgeVector::zero, |mut a, b| {
            if a.len() < b.len() {
                let mut b = b;
                b.merge(a);
                return b;
            }
            a.merge(b);
            a
        })
}

/// Applies a word right to left with divided powers.
pub fn apply_word(word: &[Letter], v: &WedgeVector) -> WedgeVector {
    let mut cur = v.clone();
    for &(g, p) in word.iter().rev() {
        for _ in 0..p {
            if cur.is_zero() {
                return cur;
            }
            cur = act(g, &cur);
        }
        if p > 1 {
            cur = cur.scale(&Rational::new(BigInt::one(), factorial(p as u64)));
        }
    }
    cur
}

/// Bitmask form of a two-species state: bit `i` is position `base + i`, and
/// every position below `base` is occupied.
type Masks = (u128, u128);

const MARGIN: u32 = 8;
const LOW: u128 = (1u128 << MARGIN) - 1;
const HIGH: u128 = LOW << (128 - MARGIN);

struct Window {
    base: i64,
}

impl Window {
    fn mask(&self, s: &Species) -> Option<u128> {
        if s.floor() < self.base + MARGIN as i64 - 1 {
            return None;
        }
        let mut m = 0u128;
        for p in s.positions(self.base) {
            let bit = p - self.base;
            if !(0..128).contains(&bit) {
                return None;
            }
            m |= 1u128 << bit;
        }
        (m & HIGH == 0).then_some(m)
    }

    fn species(&self, m: u128) -> Species {
        let c = self.base + m.count_ones() as i64;
        let positions: Vec<i64> = (0..128).rev().filter(|&i| m >> i & 1 == 1).map(|i| self.base + i as i64).collect();
        Species::from_positions(c, &positions)
    }
}

fn in_window(m: u128) -> bool {
    m & LOW == LOW && m & HIGH == 0
}

fn above(m: u128, bit: u32) -> bool {
    bit < 127 && (m >> (bit + 1)).count_ones() % 2 == 1
}

/// `x t^n` or `y t^n` on one bitmask state; `None` if a result leaves the window.
fn act_masks(g: AlgebraGen, base: i64, s: Masks, c: i128, out: &mut FxHashMap<Masks, i128>) -> Option<()> {
    let n = g.degree;
    let (from, to, klein_c) = match g.kind {
        GenKind::X => (s.1, s.0, base + s.0.count_ones() as i64),
        GenKind::Y => (s.0, s.1, base + s.0.count_ones() as i64 - 1),
        _ => return None,
    };
    let mut rest = from;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        let t = j as i64 - n;
        if t < 0 || to >> t & 1 == 1 {
            continue;
        }
        if t >= 128 {
            return None;
        }
        let t = t as u32;
        let new_from = from & !(1u128 << j);
        let new_to = to | (1u128 << t);
        if !in_window(new_from) || !in_window(new_to) {
            return None;
        }
        let neg = above(from, j) ^ above(to, t) ^ klein(klein_c);
        let key = match g.kind {
            GenKind::X => (new_to, new_from),
            _ => (new_from, new_to),
        };
        let e = out.entry(key).or_insert(0);
        *e = if neg { e.checked_sub(c)? } else { e.checked_add(c)? };
    }
    Some(())
}

/// `exp(±E_r) ⋯ exp(±E_1) v` with `E_i = x t^k` or `y t^k`, in exact integer
/// arithmetic on bitmask states. `factors` are listed in order of application.
/// Returns `None` when the states outgrow the window, a coefficient overflows,
/// or a series runs past `guard` terms; callers then use [`act`].
pub fn exp_chain_fast(factors: &[(AlgebraGen, bool)], v: &WedgeVector, guard: usize) -> Option<WedgeVector> {
    let base = v.terms.keys().map(|s| s.s1.floor().min(s.s2.floor())).min()? - 40;
    let window = Window { base };
    let den = v
        .terms
        .values()
        .fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    let mut cur: FxHashMap<Masks, i128> = FxHashMap::default();
    for (s, c) in &v.terms {
        let key = (window.mask(&s.s1)?, window.mask(&s.s2)?);
        let num = c.numer() * (&den / c.denom());
        cur.insert(key, i128::try_from(num).ok()?);
    }
    for &(g, negative) in factors {
        let mut total = cur.clone();
        let mut term = cur;
        for j in 1..=guard + 1 {
            if j > guard {
                return None;
            }
            let mut next: FxHashMap<Masks, i128> = FxHashMap::default();
            for (&s, &c) in &term {
                act_masks(g, base, s, c, &mut next)?;
            }
            next.retain(|_, c| *c != 0);
            if next.is_empty() {
                break;
            }
            let jj = j as i128;
            for c in next.values_mut() {
                if *c % jj != 0 {
                    return None;
                }
                *c /= jj;
            }
            let neg = negative && j % 2 == 1;
            for (&s, &c) in &next {
                let e = total.entry(s).or_insert(0);
                *e = if neg { e.checked_sub(c)? } else { e.checked_add(c)? };
            }
            term = next;
        }
        total.retain(|_, c| *c != 0);
        cur = total;
    }
    let mut out = WedgeVector::zero();
    for ((m1, m2), c) in cur {
        let state = WedgeState {
            s1: window.species(m1),
            s2: window.species(m2),
        };
        out.add_term(state, Rational::new(BigInt::from(c), den.clone()));
    }
    Some(out)
}

fn lattice_sign(c1: i64) -> bool {
    (c1 * (c1 - 1) / 2).rem_euclid(2) == 1
}

fn vacuum_state(charge: i64) -> WedgeState {
    let t = charge.rem_euclid(2);
    let c1 = (charge + t) / 2;
    let c2 = c1 - charge;
    WedgeState {
        s1: Species::vacuum(c1),
        s2: Species::vacuum(c2),
    }
}

/// Embeds a lattice-model vector.
pub fn from_fock(v: &FockVector) -> WedgeVector {
    let mut out = WedgeVector::zero();
    for (state, coeff) in v.terms() {
        let vac = vacuum_state(state.charge);
        let c = if lattice_sign(vac.s1.c) { -coeff.clone() } else { coeff.clone() };
        let mut w = WedgeVector::zero();
        w.add_term(vac, c);
        for &part in state.mu.parts() {
            w = act(AlgebraGen::h(-(part as i64)), &w);
        }
        out.merge(w);
    }
    out
}

/// Reads a vector in the image of [`from_fock`] back into the lattice model.
pub fn to_fock(w: &WedgeVector) -> FockVector {
    let mut out = FockVector::zero();
    let mut rows: Vec<(&WedgeState, &Rational)> = w.terms.iter().filter(|(s, _)| s.s2.lam.is_empty()).collect();
    rows.sort_by(|a, b| a.0.cmp(b.0));
    for (s, coeff) in rows {
        let charge = s.s1.c - s.s2.c;
        let c = if lattice_sign(s.s1.c) { -coeff.clone() } else { coeff.clone() };
        let lam = Partition::new(s.s1.lam.clone()).expect("wedge partitions are valid");
        for (rho, x) in schur_to_power(&lam).iter() {
            out.add_term(FockState::new(charge, rho.clone()), &c * x);
        }
    }
    out
}

/// `s_λ = Σ_ρ χ^λ(ρ)/z_ρ · p_ρ`, zero coefficients dropped.
fn schur_to_power(lam: &Partition) -> Arc<Vec<(Partition, Rational)>> {
    static CACHE: OnceLock<Mutex<HashMap<Partition, Arc<Vec<(Partition, Rational)>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().unwrap().get(lam) {
        return hit.clone();
    }
    let mut memo = HashMap::new();
    let row: Vec<(Partition, Rational)> = partitions_of(lam.weight())
        .into_iter()
        .filter_map(|rho| {
            let chi = character(lam.parts(), rho.parts(), &mut memo);
            if chi == 0 {
                return None;
            }
            let z: BigInt = rho
                .multiplicities()
                .into_iter()
                .map(|(k, m)| BigInt::from(k).pow(m as u32) * factorial(m as u64))
                .product();
            Some((rho, Rational::new(BigInt::from(chi), z)))
        })
        .collect();
    let row = Arc::new(row);
    cache.lock().unwrap().insert(lam.clone(), row.clone());
    row
}

/// `χ^λ(ρ)` by the Murnaghan–Nakayama rule, stripping `ρ` from the front.
fn character(lam: &[u32], rho: &[u32], memo: &mut HashMap<(Vec<u32>, Vec<u32>), i64>) -> i64 {
    if rho.is_empty() {
        return if lam.is_empty() { 1 } else { 0 };
    }
    let key = (lam.to_vec(), rho.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let k = rho[0] as i64;
    let sp = Species {
        c: 0,
        lam: lam.to_vec(),
    };
    let mut total = 0;
    for j in sp.positions(sp.floor() + 1) {
        let t = j - k;
        if t <= sp.floor() || sp.occupied(t) {
            continue;
        }
        let (s1, mid) = sp.remove(j).expect("occupied");
        let (s2, end) = mid.insert(t).expect("free");
        let sub = character(&end.lam, &rho[1..], memo);
        total += if s1 ^ s2 { -sub } else { sub };
    }
    memo.insert(key, total);
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{act as fock_act, basis_states, generators_up_to};

    #[test]
    fn species_moves() {
        let v = Species::vacuum(0);
        assert_eq!(v.floor(), -1);
        assert!(v.occupied(-1) && !v.occupied(0));
        let (neg, s) = v.insert(0).unwrap();
        assert!(!neg);
        assert_eq!(s, Species::vacuum(1));
        let (neg, s) = v.insert(2).unwrap();
        assert!(!neg);
        assert_eq!(s, Species { c: 1, lam: vec![2] });
        let (neg, s) = v.remove(-3).unwrap();
        assert!(!neg);
        assert_eq!(s, Species { c: -1, lam: vec![1, 1] });
    }

    #[test]
    fn characters_small() {
        let mut memo = HashMap::new();
        assert_eq!(character(&[2, 1], &[1, 1, 1], &mut memo), 2);
        assert_eq!(character(&[2, 1], &[3], &mut memo), -1);
        assert_eq!(character(&[2, 1], &[2, 1], &mut memo), 0);
        assert_eq!(character(&[1, 1, 1], &[2, 1], &mut memo), -1);
        assert_eq!(character(&[3, 2], &[1, 1, 1, 1, 1], &mut memo), 5);
    }

    #[test]
    fn roundtrip_through_wedge() {
        for state in basis_states(3, 4) {
            let v = FockVector::basis(state);
            let w = from_fock(&v);
            assert!(w.is_charge_neutral());
            assert_eq!(to_fock(&w), v);
        }
    }

    #[test]
    fn generators_agree_with_lattice_model() {
        for state in basis_states(3, 4) {
            let v = FockVector::basis(state.clone());
            let w = from_fock(&v);
            for g in generators_up_to(3) {
                let lattice = fock_act(g, &v);
                let fermionic = to_fock(&act(g, &w));
                assert_eq!(fermionic, lattice, "{g} on {state:?}");
            }
        }
    }
}
