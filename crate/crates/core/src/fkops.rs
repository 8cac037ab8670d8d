//! Frenkel–Kac reflection and translation operators, the adjoint translations,
//! and the automorphisms `σ̃`, `φ̃` with their intertwiners.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combinatorics::{partitions_of, IndexTriple};
use crate::cpl;
use crate::linalg;
use crate::fock::{AlgebraElement, AlgebraGen, FockState, FockVector, GenKind, Letter};
use crate::rational::{factorial, Rational};
use crate::wedge::{self, WedgeVector};
use crate::{Error, Result};

/// A real-root generator paired with the sign of its exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpFactor {
    pub gen: AlgebraGen,
    pub negative: bool,
}

/// A product of exponentials `exp(±E)` of real-root generators, applied right to left.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModuleOperator {
    factors: Vec<ExpFactor>,
}

impl ModuleOperator {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn factors(&self) -> &[ExpFactor] {
        &self.factors
    }

    /// `self ∘ other`: `other` acts first.
    pub fn compose(&self, other: &ModuleOperator) -> ModuleOperator {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        ModuleOperator { factors }
    }

    pub fn inverse(&self) -> ModuleOperator {
        ModuleOperator {
            factors: self
                .factors
                .iter()
                .rev()
                .map(|f| ExpFactor {
                    gen: f.gen,
                    negative: !f.negative,
                })
                .collect(),
        }
    }

    /// Each exponential series is cut off after `2·(size + |k|) + 8` terms,
    /// where `size` bounds the charge plus degree of the current vector and
    /// `k` is the mode of the generator; reaching the cap is an error.
    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        let mut cur = wedge::from_fock(v);
        let chain: Vec<(AlgebraGen, bool)> = self.factors.iter().rev().map(|f| (f.gen, f.negative)).collect();
        if let Some(fast) = wedge::exp_chain_fast(&chain, &cur, 256) {
            return Ok(wedge::to_fock(&fast));
        }
        for f in self.factors.iter().rev() {
            let guard = 2 * (cur.size_bound() + f.gen.degree.unsigned_abs()) as usize + 8;
            cur = exp_apply(f, &cur, guard)?;
        }
        Ok(wedge::to_fock(&cur))
    }
}

/// `exp(±E) v = Σ_j (±1)^j E^{(j)} v`, stopping when a term vanishes.
fn exp_apply(f: &ExpFactor, v: &WedgeVector, guard: usize) -> Result<WedgeVector> {
    let mut total = v.clone();
    let mut term = v.clone();
    for j in 1..=guard {
        term = wedge::act(f.gen, &term);
        if term.is_zero() {
            return Ok(total);
        }
        let mut c = Rational::new(BigInt::one(), factorial(j as u64));
        if f.negative && j % 2 == 1 {
            c = -c;
        }
        total = total.add(&term.scale(&c));
    }
    Err(Error::NilpotencyGuard(guard))
}

fn exp(gen: AlgebraGen, negative: bool) -> ExpFactor {
    ExpFactor { gen, negative }
}

/// `r_α = e^{−E_α} e^{E_{−α}} e^{−E_α}` for `α = ±α1 + kδ`, `E_α = x t^k` or `y t^k`.
pub fn r_alpha(positive: bool, k: i64) -> ModuleOperator {
    let (e, f) = if positive {
        (AlgebraGen::x(k), AlgebraGen::y(-k))
    } else {
        (AlgebraGen::y(k), AlgebraGen::x(-k))
    };
    ModuleOperator {
        factors: vec![exp(e, true), exp(f, false), exp(e, true)],
    }
}

/// `T_{α1} = r_{δ−α1} r_{α1}`.
pub fn t_unit() -> ModuleOperator {
    r_alpha(false, 1).compose(&r_alpha(true, 0))
}

/// `T_{pα1}`: the `p`-fold power of `T_{α1}`, or of its inverse for `p < 0`.
pub fn t_op(p: i64) -> ModuleOperator {
    let unit = if p >= 0 { t_unit() } else { t_unit().inverse() };
    let mut out = ModuleOperator::identity();
    for _ in 0..p.unsigned_abs() {
        out = out.compose(&unit);
    }
    out
}

fn unit_on_state(state: &FockState) -> Result<FockVector> {
    static CACHE: OnceLock<Mutex<HashMap<FockState, FockVector>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().unwrap().get(state) {
        return Ok(hit.clone());
    }
    let image = t_unit().apply(&FockVector::basis(state.clone()))?;
    cache.lock().unwrap().insert(state.clone(), image.clone());
    Ok(image)
}

/// `T_{α1}^{-1} v`, solved weight space by weight space against images of `T_{α1}`.
fn unit_inverse(v: &FockVector) -> Result<FockVector> {
    let mut blocks: BTreeMap<(i64, u32), FockVector> = BTreeMap::new();
    for (s, c) in v.terms() {
        blocks.entry((s.charge, s.degree())).or_insert_with(FockVector::zero).add_term(s.clone(), c.clone());
    }
    let mut out = FockVector::zero();
    for ((charge, degree), block) in blocks {
        let sources: Vec<FockState> = partitions_of(degree).into_iter().map(|mu| FockState::new(charge - 2, mu)).collect();
        let images = sources.iter().map(unit_on_state).collect::<Result<Vec<_>>>()?;
        let coeffs = linalg::solve(&images, &block)
            .ok_or_else(|| Error::Inconsistent(format!("T_α1 does not reach charge {charge}, degree {degree}")))?;
        for (s, c) in sources.into_iter().zip(coeffs) {
            out.add_term(s, c);
        }
    }
    Ok(out)
}

/// `T_{pα1} v`. Negative powers invert `T_{α1}` on each weight space.
pub fn translate(p: i64, v: &FockVector) -> Result<FockVector> {
    if p >= 0 {
        return t_op(p).apply(v);
    }
    let mut cur = v.clone();
    for _ in 0..p.unsigned_abs() {
        cur = unit_inverse(&cur)?;
    }
    Ok(cur)
}

/// `T^{ad}_{pα1}` on `x t^k` and `y t^k`.
pub fn t_ad(p: i64, g: AlgebraGen) -> Result<AlgebraGen> {
    match g.kind {
        GenKind::X => Ok(AlgebraGen::x(g.degree - 2 * p)),
        GenKind::Y => Ok(AlgebraGen::y(g.degree + 2 * p)),
        _ => Err(Error::UnsupportedGenerator(format!("T_ad is only defined on x and y, got {g}"))),
    }
}

/// `σ̃`: `y t^m ↦ x t^{m−1}`, `x t^m ↦ y t^{m+1}`, `h t^m ↦ −h t^m + δ_{m,0} c`.
/// `d` is not in the image of the stated formulas and is rejected.
pub fn sigma_tilde(g: AlgebraGen) -> Result<AlgebraElement> {
    let one = Rational::one();
    Ok(match g.kind {
        GenKind::X => AlgebraElement::gen(AlgebraGen::y(g.degree + 1)),
        GenKind::Y => AlgebraElement::gen(AlgebraGen::x(g.degree - 1)),
        GenKind::H if g.degree == 0 => AlgebraElement::zero()
            .plus(AlgebraGen::h(0), -one.clone())
            .plus(AlgebraGen::c(), one),
        GenKind::H => AlgebraElement::zero().plus(g, -one),
        GenKind::C => AlgebraElement::gen(g),
        GenKind::D => return Err(Error::UnsupportedGenerator("σ̃(d)".into())),
    })
}

/// `φ̃`: `x t^m ↔ y t^m`, `h t^m ↦ −h t^m`, fixing `c` and `d`.
pub fn phi_tilde(g: AlgebraGen) -> AlgebraElement {
    match g.kind {
        GenKind::X => AlgebraElement::gen(AlgebraGen::y(g.degree)),
        GenKind::Y => AlgebraElement::gen(AlgebraGen::x(g.degree)),
        GenKind::H => AlgebraElement::zero().plus(g, -Rational::one()),
        GenKind::C | GenKind::D => AlgebraElement::gen(g),
    }
}

/// Extends a generator map linearly to algebra elements.
pub fn map_element(e: &AlgebraElement, f: impl Fn(AlgebraGen) -> Result<AlgebraElement>) -> Result<AlgebraElement> {
    let mut out = AlgebraElement::zero();
    for (g, c) in e.terms() {
        for (h, d) in f(*g)?.terms() {
            out = out.plus(*h, c * d);
        }
    }
    Ok(out)
}

fn odd_len_sign(state: &FockState) -> Rational {
    if state.mu.supp() % 2 == 1 {
        -Rational::one()
    } else {
        Rational::one()
    }
}

/// `G: L(Λ0) → L(Λ0)^{φ̃}` with `G(v_{Λ0}) = v_{Λ0}`: `|m; μ⟩ ↦ (−1)^{ℓ(μ)} |−m; μ⟩`.
pub fn g_intertwiner(v: &FockVector) -> Result<FockVector> {
    if !v.charges_all(|m| m % 2 == 0) {
        return Err(Error::WrongSector("even-charge"));
    }
    Ok(FockVector::from_terms(
        v.terms()
            .map(|(s, c)| (FockState::new(-s.charge, s.mu.clone()), c * odd_len_sign(s))),
    ))
}

/// `F: L(Λ1) → L(Λ0)^{σ̃φ̃}` with `F(v_{Λ1}) = v_{Λ0}`: `|m; μ⟩ ↦ |m − 1; μ⟩`.
pub fn f_intertwiner(v: &FockVector) -> Result<FockVector> {
    if !v.charges_all(|m| m.rem_euclid(2) == 1) {
        return Err(Error::WrongSector("odd-charge"));
    }
    Ok(FockVector::from_terms(
        v.terms().map(|(s, c)| (FockState::new(s.charge - 1, s.mu.clone()), c.clone())),
    ))
}

/// `G′ = F⁻¹ ∘ G ∘ F: L(Λ1) → L(Λ1)^{σ̃φ̃σ̃⁻¹}`, fixing `v_{Λ1}`:
/// `|m; μ⟩ ↦ (−1)^{ℓ(μ)} |2 − m; μ⟩`.
pub fn g_prime_intertwiner(v: &FockVector) -> Result<FockVector> {
    if !v.charges_all(|m| m.rem_euclid(2) == 1) {
        return Err(Error::WrongSector("odd-charge"));
    }
    Ok(FockVector::from_terms(
        v.terms()
            .map(|(s, c)| (FockState::new(2 - s.charge, s.mu.clone()), c * odd_len_sign(s))),
    ))
}

/// Applies a word of generators through an automorphism: each letter `g^{(p)}`
/// becomes `θ(g)^{(p)}`. Only automorphisms sending generators to single
/// generators (up to sign) are allowed on divided powers.
pub fn twist_word(word: &[Letter], theta: impl Fn(AlgebraGen) -> Result<AlgebraElement>) -> Result<Vec<(AlgebraElement, u32)>> {
    word.iter().map(|&(g, p)| Ok((theta(g)?, p))).collect()
}

/// Applies `Π e_i^{(p_i)}` for algebra elements `e_i`, right to left.
pub fn apply_element_word(word: &[(AlgebraElement, u32)], v: &FockVector) -> FockVector {
    let mut cur = v.clone();
    for (e, p) in word.iter().rev() {
        for _ in 0..*p {
            cur = crate::fock::act_element(e, &cur);
        }
        if *p > 1 {
            cur = cur.scale(&Rational::new(BigInt::one(), factorial(*p as u64)));
        }
    }
    cur
}

/// `ξ† = (2(n−k), n−k, λ)` and `k − n/2`, after checking
/// `CL(ξ) = T_{(k−n/2)α1}(CL(ξ†))` in the module.
pub fn offdiag_reduce(xi: &IndexTriple) -> Result<(IndexTriple, i64)> {
    let (n, k) = (xi.n(), xi.k());
    if n % 2 != 0 {
        return Err(Error::Parity(format!("offdiag_reduce needs even n, got {xi}")));
    }
    if !xi.is_stable() {
        return Err(Error::NotStable(xi.to_string()));
    }
    let dagger = IndexTriple::new(2 * (n - k), n - k, xi.lam().clone())?;
    if !dagger.is_stable() {
        return Err(Error::Inconsistent(format!("{dagger} is not stable")));
    }
    let gamma = k as i64 - n as i64 / 2;
    let lhs = cpl::cl_vec(xi)?;
    let rhs = translate(gamma, &cpl::cl_vec(&dagger)?)?;
    if lhs != rhs {
        return Err(Error::Inconsistent(format!("CL({xi}) ≠ T_{gamma}(CL({dagger}))")));
    }
    Ok((dagger, gamma))
}

/// `true` if `v` is a nonzero multiple of `w`, returning the ratio.
pub fn proportional(v: &FockVector, w: &FockVector) -> Option<Rational> {
    v.ratio_to(w).filter(|r| !r.is_zero())
}
