//! The level-one lattice realization of `L(Λ0) ⊕ L(Λ1)`.
//!
//! A basis state `|m; μ⟩` is the lattice vector `e^{mω1}` dressed with the
//! Heisenberg monomial `h_{−μ1} h_{−μ2} ⋯`. Even charges span `L(Λ0)`, odd
//! charges span `L(Λ1)`. Writing `a_k` for `h t^{−k}`, the currents act by
//!
//! - `h t^{−k}`: multiplication by `a_k`,
//! - `h t^{k}`: `2k ∂/∂a_k` for `k > 0`, and the charge `m` for `k = 0`,
//! - `x t^n`, `y t^n`: the `z^{−n−1}` coefficient of the vertex operators
//!   `z^{±m} exp(±Σ a_k z^k/k) exp(∓Σ h t^k z^{−k}/k)` shifting the charge by `±2`.
//!
//! The cocycle is trivial. It is validated by [`check_relations`], not assumed.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{partitions_bounded, partitions_of, Partition};
use crate::rational::{self, binomial, factorial, frac, int, Rational};
use crate::wedge;
use crate::weights::{weight_of_state, AffineWeight};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GenKind {
    X,
    Y,
    H,
    C,
    D,
}

/// One of `x t^m`, `y t^m`, `h t^m`, `c`, `d`. The degree is ignored for `c`, `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AlgebraGen {
    pub kind: GenKind,
    pub degree: i64,
}

impl AlgebraGen {
    pub fn x(m: i64) -> Self {
        Self { kind: GenKind::X, degree: m }
    }

    pub fn y(m: i64) -> Self {
        Self { kind: GenKind::Y, degree: m }
    }

    pub fn h(m: i64) -> Self {
        Self { kind: GenKind::H, degree: m }
    }

    pub fn c() -> Self {
        Self { kind: GenKind::C, degree: 0 }
    }

    pub fn d() -> Self {
        Self { kind: GenKind::D, degree: 0 }
    }

    /// The weight this generator adds to a weight vector.
    pub fn weight_shift(&self) -> AffineWeight {
        let m = int(self.degree);
        match self.kind {
            GenKind::X => AffineWeight::new(0, 2, m),
            GenKind::Y => AffineWeight::new(0, -2, m),
            GenKind::H => AffineWeight::new(0, 0, m),
            GenKind::C | GenKind::D => AffineWeight::zero(),
        }
    }
}

impl fmt::Display for AlgebraGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GenKind::X => write!(f, "x t^{}", self.degree),
            GenKind::Y => write!(f, "y t^{}", self.degree),
            GenKind::H => write!(f, "h t^{}", self.degree),
            GenKind::C => f.write_str("c"),
            GenKind::D => f.write_str("d"),
        }
    }
}

impl FromStr for AlgebraGen {
    type Err = Error;

    /// Accepts `x`, `y`, `h` optionally followed by a mode: `x-2`, `y3`, `h0`,
    /// `x t^-2`; and the bare letters `c`, `d`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad generator `{s}`"));
        let mut chars = s.chars();
        let head = chars.next().ok_or_else(bad)?;
        let rest: String = chars.collect::<String>().replace("t^", "").replace(' ', "");
        let degree = if rest.is_empty() { 0 } else { rest.parse::<i64>().map_err(|_| bad())? };
        match head {
            'x' => Ok(Self::x(degree)),
            'y' => Ok(Self::y(degree)),
            'h' => Ok(Self::h(degree)),
            'c' if rest.is_empty() => Ok(Self::c()),
            'd' if rest.is_empty() => Ok(Self::d()),
            _ => Err(bad()),
        }
    }
}

/// A finite linear combination of generators.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<AlgebraGen, Rational>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn gen(g: AlgebraGen) -> Self {
        Self::zero().plus(g, Rational::one())
    }

    pub fn plus(mut self, g: AlgebraGen, coeff: Rational) -> Self {
        let entry = self.terms.entry(normalize_gen(g)).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&normalize_gen(g));
        }
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (&AlgebraGen, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// If this element is `±g` for a single generator, returns it.
    pub fn as_single(&self) -> Option<(AlgebraGen, Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(g, c)| (*g, c.clone()))
        } else {
            None
        }
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = rational::write_terms(self.terms.iter().map(|(g, c)| (c, g.to_string())));
        f.write_str(&text)
    }
}

fn normalize_gen(g: AlgebraGen) -> AlgebraGen {
    match g.kind {
        GenKind::C | GenKind::D => AlgebraGen { kind: g.kind, degree: 0 },
        _ => g,
    }
}

/// `[a, b]` in affine `sl2`: `[A t^m, B t^n] = [A,B] t^{m+n} + m δ_{m,−n} (A|B) c`
/// and `[d, A t^m] = m A t^m`, with `(x|y) = 1`, `(h|h) = 2`.
pub fn bracket(a: AlgebraGen, b: AlgebraGen) -> AlgebraElement {
    use GenKind::*;
    let (m, n) = (a.degree, b.degree);
    let central = |form: i64| {
        if m + n == 0 && m != 0 {
            AlgebraElement::zero().plus(AlgebraGen::c(), int(m * form))
        } else {
            AlgebraElement::zero()
        }
    };
    match (a.kind, b.kind) {
        (C, _) | (_, C) | (D, D) => AlgebraElement::zero(),
        (D, _) => AlgebraElement::zero().plus(b, int(n)),
        (_, D) => AlgebraElement::zero().plus(a, int(-m)),
        (X, Y) => central(1).plus(AlgebraGen::h(m + n), Rational::one()),
        (Y, X) => central(1).plus(AlgebraGen::h(m + n), -Rational::one()),
        (H, X) => AlgebraElement::zero().plus(AlgebraGen::x(m + n), int(2)),
        (X, H) => AlgebraElement::zero().plus(AlgebraGen::x(m + n), int(-2)),
        (H, Y) => AlgebraElement::zero().plus(AlgebraGen::y(m + n), int(-2)),
        (Y, H) => AlgebraElement::zero().plus(AlgebraGen::y(m + n), int(2)),
        (H, H) => central(2),
        (X, X) | (Y, Y) => AlgebraElement::zero(),
    }
}

/// `|m; μ⟩`. Ordered by charge, then degree, then reverse-lex on `μ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FockState {
    pub charge: i64,
    pub mu: Partition,
}

impl FockState {
    pub fn new(charge: i64, mu: Partition) -> Self {
        Self { charge, mu }
    }

    pub fn vacuum(charge: i64) -> Self {
        Self::new(charge, Partition::empty())
    }

    pub fn degree(&self) -> u32 {
        self.mu.weight()
    }

    pub fn weight(&self) -> AffineWeight {
        weight_of_state(self.charge, self.degree())
    }

    /// Eigenvalue of `d`: `−(m²/4 + |μ|)`.
    pub fn energy(&self) -> Rational {
        -(frac(self.charge * self.charge, 4) + int(self.degree() as i64))
    }

    fn monomial_text(&self) -> String {
        let mut factors: Vec<String> = Vec::new();
        for (part, count) in self.mu.multiplicities().into_iter().rev() {
            if count == 1 {
                factors.push(format!("h[-{part}]"));
            } else {
                factors.push(format!("h[-{part}]^{count}"));
            }
        }
        factors.push(format!("e{{{}}}", self.charge));
        factors.join("·")
    }
}

/// All states with `|charge| ≤ max_charge` and degree `≤ max_degree`.
pub fn basis_states(max_charge: i64, max_degree: u32) -> Vec<FockState> {
    let mut out = Vec::new();
    for charge in -max_charge..=max_charge {
        for d in 0..=max_degree {
            out.extend(partitions_of(d).into_iter().map(|mu| FockState::new(charge, mu)));
        }
    }
    out
}

/// A finite exact linear combination of Fock states. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FockVector {
    terms: BTreeMap<FockState, Rational>,
}

impl FockVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(state: FockState) -> Self {
        Self::from_terms([(state, Rational::one())])
    }

    /// `v_{Λ0} = |0; ∅⟩`
    pub fn vacuum0() -> Self {
        Self::basis(FockState::vacuum(0))
    }

    /// `v_{Λ1} = |1; ∅⟩`
    pub fn vacuum1() -> Self {
        Self::basis(FockState::vacuum(1))
    }

    pub fn from_terms<I: IntoIterator<Item = (FockState, Rational)>>(terms: I) -> Self {
        let mut v = Self::zero();
        for (s, c) in terms {
            v.add_term(s, c);
        }
        v
    }

    pub fn add_term(&mut self, state: FockState, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(state) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FockState, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, state: &FockState) -> Rational {
        self.terms.get(state).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> FockVector {
        if c.is_zero() {
            return FockVector::zero();
        }
        FockVector {
            terms: self.terms.iter().map(|(s, x)| (s.clone(), x * c)).collect(),
        }
    }

    pub fn add(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(s.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(s.clone(), -c.clone());
        }
        out
    }

    /// The common weight of all terms, or `None` for zero or inhomogeneous vectors.
    pub fn weight(&self) -> Option<AffineWeight> {
        let mut it = self.terms.keys().map(FockState::weight);
        let first = it.next()?;
        it.all(|w| w == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.weight().is_some()
    }

    /// Largest `|m| + |μ|` among the terms.
    pub fn size_bound(&self) -> u64 {
        self.terms
            .keys()
            .map(|s| s.charge.unsigned_abs() + s.degree() as u64)
            .max()
            .unwrap_or(0)
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(FockState::degree).max().unwrap_or(0)
    }

    pub fn charges_all(&self, pred: impl Fn(i64) -> bool) -> bool {
        self.terms.keys().all(|s| pred(s.charge))
    }

    /// `Some(c)` if `self = c · other`.
    pub fn ratio_to(&self, other: &FockVector) -> Option<Rational> {
        let (s, c) = other.terms.iter().next()?;
        let ratio = self.coeff(s) / c;
        (self == &other.scale(&ratio)).then_some(ratio)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&FockVectorJson::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: FockVectorJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        FockVector::try_from(raw)
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = rational::write_terms(self.terms.iter().map(|(s, c)| (c, s.monomial_text())));
        f.write_str(&text)
    }
}

impl FromStr for FockVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut v = FockVector::zero();
        for (coeff, body) in rational::split_terms(s)? {
            v.add_term(parse_state(&body)?, coeff);
        }
        Ok(v)
    }
}

fn parse_state(body: &str) -> Result<FockState> {
    let bad = || Error::Parse(format!("bad Fock monomial `{body}`"));
    let mut parts = Vec::new();
    let mut charge = None;
    for factor in body.split('·') {
        if let Some(inner) = factor.strip_prefix("e{").and_then(|r| r.strip_suffix('}')) {
            charge = Some(inner.parse::<i64>().map_err(|_| bad())?);
        } else {
            let (k, e) = parse_h_factor(factor).ok_or_else(bad)?;
            parts.extend(std::iter::repeat(k).take(e));
        }
    }
    Ok(FockState::new(charge.ok_or_else(bad)?, Partition::from_unsorted(parts)))
}

/// Parses `h[-k]` or `h[-k]^e`.
pub(crate) fn parse_h_factor(factor: &str) -> Option<(u32, usize)> {
    let rest = factor.strip_prefix("h[-")?;
    let (k, tail) = rest.split_once(']')?;
    let k: u32 = k.parse().ok().filter(|&k| k > 0)?;
    let e = match tail.strip_prefix('^') {
        Some(e) => e.parse().ok().filter(|&e| e > 0)?,
        None if tail.is_empty() => 1,
        None => return None,
    };
    Some((k, e))
}

#[derive(Serialize, Deserialize)]
struct FockTermJson {
    charge: i64,
    mu: Vec<u32>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct FockVectorJson {
    terms: Vec<FockTermJson>,
}

impl From<&FockVector> for FockVectorJson {
    fn from(v: &FockVector) -> Self {
        FockVectorJson {
            terms: v
                .terms
                .iter()
                .map(|(s, c)| FockTermJson {
                    charge: s.charge,
                    mu: s.mu.parts().to_vec(),
                    coeff: rational::format(c),
                })
                .collect(),
        }
    }
}

impl TryFrom<FockVectorJson> for FockVector {
    type Error = Error;
    fn try_from(raw: FockVectorJson) -> Result<Self> {
        let mut v = FockVector::zero();
        for t in raw.terms {
            v.add_term(FockState::new(t.charge, Partition::new(t.mu)?), rational::parse(&t.coeff)?);
        }
        Ok(v)
    }
}

impl Serialize for FockVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FockVectorJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FockVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = FockVectorJson::deserialize(d)?;
        FockVector::try_from(raw).map_err(serde::de::Error::custom)
    }
}

/// Coefficient of `z^i` in `exp(sign · Σ_k a_k z^k / k)`:
/// `Σ_{ν ⊢ i} sign^{ℓ(ν)} a^ν / z_ν`.
fn creation_series(sign: i64, i: u32) -> Arc<Vec<(Partition, Rational)>> {
    static CACHE: OnceLock<Mutex<HashMap<(i64, u32), Arc<Vec<(Partition, Rational)>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().unwrap().get(&(sign, i)) {
        return hit.clone();
    }
    let series: Vec<(Partition, Rational)> = partitions_of(i)
        .into_iter()
        .map(|nu| {
            let z: BigInt = nu
                .multiplicities()
                .into_iter()
                .map(|(k, m)| BigInt::from(k).pow(m as u32) * factorial(m as u64))
                .product();
            let sgn = if sign < 0 && nu.supp() % 2 == 1 { -1 } else { 1 };
            (nu, Rational::new(BigInt::from(sgn), z))
        })
        .collect();
    let series = Arc::new(series);
    cache.lock().unwrap().insert((sign, i), series.clone());
    series
}

/// `creation_series` with every coefficient multiplied by `i!`, as machine integers.
fn creation_series_scaled(sign: i64, i: u32) -> Option<Arc<Vec<(Partition, i128)>>> {
    static CACHE: OnceLock<Mutex<HashMap<(i64, u32), Option<Arc<Vec<(Partition, i128)>>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().unwrap().get(&(sign, i)) {
        return hit.clone();
    }
    let fact = factorial(i as u64);
    let scaled: Option<Vec<(Partition, i128)>> = creation_series(sign, i)
        .iter()
        .map(|(nu, c)| {
            let q = c * Rational::from_integer(fact.clone());
            q.to_integer().to_i128().map(|v| (nu.clone(), v))
        })
        .collect();
    let scaled = scaled.map(Arc::new);
    cache.lock().unwrap().insert((sign, i), scaled.clone());
    scaled
}

/// The removal choices of [`vertex_on_state`]: remaining partition, integer
/// weight and creation degree `i ≥ 0`.
fn vertex_choices(sign: i64, n: i64, state: &FockState) -> Vec<(Partition, BigInt, u32)> {
    let m = state.charge;
    let mults: Vec<(u32, usize)> = state.mu.multiplicities().into_iter().collect();
    // Choose how many copies t_k of each a_k are replaced by −2·sign·z^{−k}.
    let mut choice = vec![0usize; mults.len()];
    let mut out = Vec::new();
    loop {
        let mut weight = BigInt::one();
        let mut j: i64 = 0;
        let mut removed = 0usize;
        let mut rest: Vec<u32> = Vec::new();
        for (&(k, mk), &t) in mults.iter().zip(&choice) {
            weight *= binomial(mk as u64, t as u64);
            j += k as i64 * t as i64;
            removed += t;
            rest.extend(std::iter::repeat(k).take(mk - t));
        }
        let i = j - n - 1 - sign * m;
        if i >= 0 {
            weight *= BigInt::from(-2 * sign).pow(removed as u32);
            out.push((Partition::from_unsorted(rest), weight, i as u32));
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == choice.len() {
                return out;
            }
            if choice[pos] < mults[pos].1 {
                choice[pos] += 1;
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

/// Integer numerators over the common denominator `i_max!`, or `None` on overflow.
fn vertex_numerators(sign: i64, choices: &[(Partition, BigInt, u32)]) -> Option<(HashMap<Partition, i128>, BigInt)> {
    let imax = choices.iter().map(|c| c.2).max()?;
    let mut acc: HashMap<Partition, i128> = HashMap::new();
    for (rest, weight, i) in choices {
        let lift = (factorial(imax as u64) / factorial(*i as u64)) * weight;
        let lift = lift.to_i128()?;
        for (nu, c) in creation_series_scaled(sign, *i)?.iter() {
            let term = lift.checked_mul(*c)?;
            let slot = acc.entry(rest.union(nu)).or_insert(0);
            *slot = slot.checked_add(term)?;
        }
    }
    Some((acc, factorial(imax as u64)))
}

/// Applies `x t^n` (`sign = 1`) or `y t^n` (`sign = −1`) to one state.
fn vertex_on_state(sign: i64, n: i64, state: &FockState, coeff: &Rational, out: &mut FockVector) {
    let target = state.charge + 2 * sign;
    let choices = vertex_choices(sign, n, state);
    if let Some((acc, den)) = vertex_numerators(sign, &choices) {
        for (mu, num) in acc {
            if num != 0 {
                out.add_term(FockState::new(target, mu), coeff * Rational::new(BigInt::from(num), den.clone()));
            }
        }
        return;
    }
    for (rest, weight, i) in choices {
        let w = coeff * Rational::from_integer(weight);
        for (nu, c) in creation_series(sign, i).iter() {
            out.add_term(FockState::new(target, rest.union(nu)), &w * c);
        }
    }
}

/// Applies `x t^n` (`sign = 1`) or `y t^n` (`sign = −1`) to one state.
#[cfg(test)]
fn vertex_on_state_exact(sign: i64, n: i64, state: &FockState, coeff: &Rational, out: &mut FockVector) {
    let m = state.charge;
    let target = m + 2 * sign;
    let mults: Vec<(u32, usize)> = state.mu.multiplicities().into_iter().collect();
    // Choose how many copies t_k of each a_k are replaced by −2·sign·z^{−k}.
    let mut choice = vec![0usize; mults.len()];
    loop {
        let mut weight = BigInt::one();
        let mut j: i64 = 0;
        let mut removed = 0usize;
        let mut rest: Vec<u32> = Vec::new();
        for (&(k, mk), &t) in mults.iter().zip(&choice) {
            weight *= binomial(mk as u64, t as u64);
            j += k as i64 * t as i64;
            removed += t;
            rest.extend(std::iter::repeat(k).take(mk - t));
        }
        let mut w = Rational::from_integer(weight * BigInt::from(-2 * sign).pow(removed as u32));
        w *= coeff;
        let i = j - n - 1 - sign * m;
        if i >= 0 {
            let rest = Partition::from_unsorted(rest);
            for (nu, c) in creation_series(sign, i as u32).iter() {
                out.add_term(FockState::new(target, rest.union(nu)), &w * c);
            }
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == choice.len() {
                return;
            }
            if choice[pos] < mults[pos].1 {
                choice[pos] += 1;
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

fn act_on_state(g: AlgebraGen, state: &FockState, coeff: &Rational, out: &mut FockVector) {
    match g.kind {
        GenKind::C => out.add_term(state.clone(), coeff.clone()),
        GenKind::D => out.add_term(state.clone(), coeff * state.energy()),
        GenKind::H => match g.degree {
            0 => out.add_term(state.clone(), coeff * int(state.charge)),
            k if k < 0 => out.add_term(
                FockState::new(state.charge, state.mu.with_part((-k) as u32)),
                coeff.clone(),
            ),
            k => {
                let mult = state.mu.mult(k as u32);
                if let Some(rest) = state.mu.without_part(k as u32) {
                    out.add_term(FockState::new(state.charge, rest), coeff * int(2 * k * mult as i64));
                }
            }
        },
        GenKind::X => vertex_on_state(1, g.degree, state, coeff, out),
        GenKind::Y => vertex_on_state(-1, g.degree, state, coeff, out),
    }
}

/// The action of a single generator in the lattice model.
pub fn act(g: AlgebraGen, v: &FockVector) -> FockVector {
    let mut out = FockVector::zero();
    for (s, c) in v.terms() {
        act_on_state(g, s, c, &mut out);
    }
    out
}

pub fn act_element(e: &AlgebraElement, v: &FockVector) -> FockVector {
    let mut out = FockVector::zero();
    for (g, c) in e.terms() {
        out = out.add(&act(*g, v).scale(c));
    }
    out
}

/// One letter of a word: a generator raised to a divided power `g^{(p)} = g^p / p!`.
pub type Letter = (AlgebraGen, u32);

/// Applies a word right to left: the last letter acts first.
///
/// Evaluation goes through the fermionic model in [`wedge`], which keeps
/// long products sparse. [`apply_word_direct`] is the same map computed with
/// [`act`] alone.
pub fn apply_word(word: &[Letter], v: &FockVector) -> FockVector {
    let w = wedge::from_fock(v);
    wedge::to_fock(&wedge::apply_word(word, &w))
}

/// [`apply_word`] evaluated by repeated lattice-model [`act`].
pub fn apply_word_direct(word: &[Letter], v: &FockVector) -> FockVector {
    let mut cur = v.clone();
    for &(g, p) in word.iter().rev() {
        for _ in 0..p {
            cur = act(g, &cur);
        }
        if p > 1 {
            cur = cur.scale(&Rational::new(BigInt::one(), factorial(p as u64)));
        }
    }
    cur
}

/// A failed instance of `[a, b]·v = a(b v) − b(a v)`.
#[derive(Debug, Clone)]
pub struct RelationViolation {
    pub a: AlgebraGen,
    pub b: AlgebraGen,
    pub state: FockState,
    pub discrepancy: FockVector,
}

#[derive(Debug, Clone, Default)]
pub struct RelationReport {
    pub checked: usize,
    pub violations: Vec<RelationViolation>,
}

impl RelationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every generator `x t^m, y t^m, h t^m` with `|m| ≤ m_range`, plus `c` and `d`.
pub fn generators_up_to(m_range: i64) -> Vec<AlgebraGen> {
    let mut gens = Vec::new();
    for m in -m_range..=m_range {
        gens.extend([AlgebraGen::x(m), AlgebraGen::y(m), AlgebraGen::h(m)]);
    }
    gens.push(AlgebraGen::c());
    gens.push(AlgebraGen::d());
    gens
}

type Small = num_rational::Ratio<i128>;

fn to_small(c: &Rational) -> Option<Small> {
    Some(Small::new_raw(c.numer().to_i128()?, c.denom().to_i128()?))
}

/// A vector with machine-size coefficients, when every coefficient fits.
fn small_terms(v: &FockVector) -> Option<Vec<(FockState, Small)>> {
    v.terms().map(|(s, c)| Some((s.clone(), to_small(c)?))).collect()
}

/// A vector written as integer numerators over one common denominator.
struct IntImage {
    den: i128,
    terms: Vec<(FockState, i128)>,
}

fn int_image(v: &FockVector) -> Option<IntImage> {
    let mut den: i128 = 1;
    for (_, c) in v.terms() {
        den = checked_lcm(den, c.denom().to_i128()?)?;
    }
    let terms = v
        .terms()
        .map(|(s, c)| {
            let scale = den / c.denom().to_i128()?;
            Some((s.clone(), c.numer().to_i128()?.checked_mul(scale)?))
        })
        .collect::<Option<_>>()?;
    Some(IntImage { den, terms })
}

fn checked_lcm(a: i128, b: i128) -> Option<i128> {
    (a / num_integer::gcd(a, b)).checked_mul(b)
}

/// Images of single states under the generators, reused across the many
/// vectors of one relation sweep.
#[derive(Default)]
struct ImageCache {
    map: HashMap<AlgebraGen, HashMap<FockState, (FockVector, Option<IntImage>)>>,
}

impl ImageCache {
    fn fill(&mut self, g: AlgebraGen, v: &FockVector) {
        let images = self.map.entry(g).or_default();
        for s in v.terms.keys() {
            images.entry(s.clone()).or_insert_with(|| {
                let img = act(g, &FockVector::basis(s.clone()));
                let int = int_image(&img);
                (img, int)
            });
        }
    }

    /// Checks `Σ sign · g v − rhs = 0` in machine integers; `None` on overflow.
    fn vanishes_small(&self, parts: &[(AlgebraGen, &[(FockState, Small)], i128)], rhs: &[(FockState, Small)]) -> Option<bool> {
        let mut den: i128 = 1;
        for &(g, v, _) in parts {
            let images = self.map.get(&g)?;
            for (s, c) in v {
                let img = images.get(s)?.1.as_ref()?;
                den = checked_lcm(den, c.denom().checked_mul(img.den)?)?;
            }
        }
        for (_, c) in rhs {
            den = checked_lcm(den, *c.denom())?;
        }
        let mut acc: HashMap<&FockState, i128> = HashMap::new();
        for &(g, v, sign) in parts {
            let images = &self.map[&g];
            for (s, c) in v {
                let img = images[s].1.as_ref()?;
                let factor = (den / (c.denom() * img.den)).checked_mul(c.numer() * sign)?;
                for (t, d) in &img.terms {
                    let slot = acc.entry(t).or_insert(0);
                    *slot = slot.checked_add(factor.checked_mul(*d)?)?;
                }
            }
        }
        for (t, c) in rhs {
            let slot = acc.entry(t).or_insert(0);
            *slot = slot.checked_sub(c.numer().checked_mul(den / c.denom())?)?;
        }
        Some(acc.values().all(|&x| x == 0))
    }

    fn act_exact(&self, g: AlgebraGen, v: &FockVector) -> FockVector {
        let mut out = FockVector::zero();
        for (s, c) in v.terms() {
            for (t, d) in self.map[&g][s].0.terms() {
                out.add_term(t.clone(), c * d);
            }
        }
        out
    }

    fn evict_below(&mut self, charge: i64) {
        for images in self.map.values_mut() {
            images.retain(|s, _| s.charge >= charge);
        }
    }
}

/// Verifies the affine bracket on all states with `|charge| ≤ charge_bound`
/// and degree `≤ degree_bound`, for all generator pairs with modes `≤ m_range`.
pub fn check_relations(degree_bound: u32, charge_bound: i64, m_range: i64) -> RelationReport {
    let gens = generators_up_to(m_range);
    let mut states = basis_states(charge_bound, degree_bound);
    states.sort_by_key(|s| s.charge);
    let pairs: Vec<(AlgebraGen, AlgebraGen)> = gens
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| gens[i + 1..].iter().map(move |&b| (a, b)))
        .collect();

    let mut cache = ImageCache::default();
    let mut report = RelationReport::default();
    for state in &states {
        cache.evict_below(state.charge - 2);
        let v = FockVector::basis(state.clone());
        let once: HashMap<AlgebraGen, FockVector> = gens.iter().map(|&g| (g, act(g, &v))).collect();
        let once_small: HashMap<AlgebraGen, Option<Vec<(FockState, Small)>>> =
            once.iter().map(|(&g, w)| (g, small_terms(w))).collect();
        for &a in &gens {
            for w in once.values() {
                cache.fill(a, w);
            }
        }
        for &(a, b) in &pairs {
            let bracket_v = act_element(&bracket(a, b), &v);
            report.checked += 1;
            let fast = match (&once_small[&b], &once_small[&a], small_terms(&bracket_v)) {
                (Some(wb), Some(wa), Some(rhs)) => cache.vanishes_small(&[(a, wb, 1), (b, wa, -1)], &rhs),
                _ => None,
            };
            if fast == Some(true) {
                continue;
            }
            let lhs = cache.act_exact(a, &once[&b]).sub(&cache.act_exact(b, &once[&a]));
            if lhs != bracket_v {
                report.violations.push(RelationViolation {
                    a,
                    b,
                    state: state.clone(),
                    discrepancy: lhs.sub(&bracket_v),
                });
            }
        }
    }
    report
}

/// Number of states of weight `Λ0 + jα1 − (j² + d)δ`: charge `2j`, degree `d`.
pub fn count_states_of_weight(mu: &AffineWeight) -> usize {
    match crate::weights::state_data_of_weight(mu) {
        Some((_, d)) => partitions_bounded(d, d, usize::MAX).len(),
        None => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(charge: i64, mu: &[u32]) -> FockState {
        FockState::new(charge, Partition::new(mu.to_vec()).unwrap())
    }

    #[test]
    fn integer_path_matches_exact() {
        for s in basis_states(4, 5) {
            for sign in [1, -1] {
                for n in -4..=3 {
                    let mut fast = FockVector::zero();
                    let mut exact = FockVector::zero();
                    vertex_on_state(sign, n, &s, &frac(2, 3), &mut fast);
                    vertex_on_state_exact(sign, n, &s, &frac(2, 3), &mut exact);
                    assert_eq!(fast, exact, "{sign} {n} {s:?}");
                }
            }
        }
    }

    #[test]
    fn machine_check_sees_discrepancies() {
        let g = AlgebraGen::x(-1);
        let v = FockVector::vacuum0();
        let mut cache = ImageCache::default();
        cache.fill(g, &v);
        let vs = small_terms(&v).unwrap();
        let image = small_terms(&act(g, &v)).unwrap();
        assert_eq!(cache.vanishes_small(&[(g, &vs, 1)], &image), Some(true));
        assert_eq!(cache.vanishes_small(&[(g, &vs, 1)], &[]), Some(false));
        assert_eq!(cache.vanishes_small(&[(g, &vs, 2)], &image), Some(false));
    }

    #[test]
    fn act_examples() {
        assert!(act(AlgebraGen::y(0), &FockVector::vacuum0()).is_zero());
        assert_eq!(act(AlgebraGen::h(-1), &FockVector::vacuum0()), FockVector::basis(st(0, &[1])));
        let v = act(AlgebraGen::x(-1), &FockVector::vacuum0());
        assert_eq!(v.len(), 1);
        let (s, c) = v.terms().next().unwrap();
        assert_eq!(s, &st(2, &[]));
        assert_eq!(num_traits::Signed::abs(c), Rational::one());
    }

    #[test]
    fn heisenberg_relation() {
        let v = FockVector::basis(st(0, &[1]));
        let lhs = act(AlgebraGen::h(1), &act(AlgebraGen::h(-1), &v))
            .sub(&act(AlgebraGen::h(-1), &act(AlgebraGen::h(1), &v)));
        assert_eq!(lhs, v.scale(&int(2)));
    }

    #[test]
    fn xy_commutator_on_state() {
        let v = FockVector::basis(st(0, &[2]));
        let lhs = act(AlgebraGen::x(1), &act(AlgebraGen::y(-1), &v))
            .sub(&act(AlgebraGen::y(-1), &act(AlgebraGen::x(1), &v)));
        let rhs = act(AlgebraGen::h(0), &v).add(&v);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn d_and_c_act_diagonally() {
        let v = FockVector::basis(st(3, &[2, 1]));
        assert_eq!(act(AlgebraGen::c(), &v), v);
        assert_eq!(act(AlgebraGen::d(), &v), v.scale(&(-(frac(9, 4) + int(3)))));
    }

    #[test]
    fn small_relation_check_is_clean() {
        let report = check_relations(3, 2, 2);
        assert!(report.checked > 0);
        assert!(report.is_clean(), "first violation: {:?}", report.violations.first());
    }

    #[test]
    fn x_commutes_with_x() {
        for state in basis_states(2, 3) {
            let v = FockVector::basis(state);
            for (m, n) in [(0, -1), (-2, 1), (-1, -3)] {
                let lhs = act(AlgebraGen::x(m), &act(AlgebraGen::x(n), &v))
                    .sub(&act(AlgebraGen::x(n), &act(AlgebraGen::x(m), &v)));
                assert!(lhs.is_zero());
            }
        }
    }

    #[test]
    fn weight_homogeneity_of_actions() {
        for state in basis_states(2, 3) {
            let v = FockVector::basis(state.clone());
            for g in generators_up_to(2) {
                let out = act(g, &v);
                if out.is_zero() {
                    continue;
                }
                assert_eq!(out.weight().unwrap(), &state.weight() + &g.weight_shift());
            }
        }
    }

    #[test]
    fn text_roundtrip_and_format() {
        let v = FockVector::from_terms([(st(0, &[3]), frac(1, 3)), (st(0, &[1, 1, 1]), frac(-1, 3))]);
        assert_eq!(v.to_string(), "1/3·h[-3]·e{0} \u{2212} 1/3·h[-1]^3·e{0}");
        assert_eq!(v.to_string().parse::<FockVector>().unwrap(), v);
        assert_eq!(FockVector::zero().to_string(), "0");
        assert_eq!("0".parse::<FockVector>().unwrap(), FockVector::zero());
        let w = FockVector::from_terms([(st(-2, &[]), int(-1)), (st(1, &[2, 2]), int(3))]);
        assert_eq!(w.to_string().parse::<FockVector>().unwrap(), w);
    }

    #[test]
    fn json_format() {
        let v = FockVector::from_terms([(st(0, &[3]), frac(1, 3))]);
        assert_eq!(v.to_json(), r#"{"terms":[{"charge":0,"mu":[3],"coeff":"1/3"}]}"#);
        assert_eq!(FockVector::from_json(&v.to_json()).unwrap(), v);
        assert!(FockVector::from_json(r#"{"terms":[{"charge":0,"mu":[1,2],"coeff":"1"}]}"#).is_err());
    }

    #[test]
    fn generator_parsing() {
        assert_eq!("x-2".parse::<AlgebraGen>().unwrap(), AlgebraGen::x(-2));
        assert_eq!("y t^3".parse::<AlgebraGen>().unwrap(), AlgebraGen::y(3));
        assert_eq!("h".parse::<AlgebraGen>().unwrap(), AlgebraGen::h(0));
        assert_eq!("c".parse::<AlgebraGen>().unwrap(), AlgebraGen::c());
        assert!("q1".parse::<AlgebraGen>().is_err());
        assert!("c2".parse::<AlgebraGen>().is_err());
    }

    #[test]
    fn bracket_is_antisymmetric() {
        let gens = generators_up_to(2);
        for &a in &gens {
            for &b in &gens {
                let ab = bracket(a, b);
                let ba = bracket(b, a);
                let mut sum = ab.clone();
                for (g, c) in ba.terms() {
                    sum = sum.plus(*g, c.clone());
                }
                assert!(sum.is_zero(), "[{a},{b}] = {ab}, [{b},{a}] = {ba}");
            }
        }
    }
}
