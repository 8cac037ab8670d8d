//! Straightening `(∏ y t^{p_i})(∏ x t^{−q_j}) v_{Λ0}` into polynomials in the
//! Heisenberg creation operators `H[−k] = h t^{−k}`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{partitions_of, permutations, set_partitions_of_type, Partition, SetPartition};
use crate::fock::{parse_h_factor, FockState, FockVector};
use crate::rational::{self, binomial, factorial, sign_pow, Rational};
use crate::{Error, Result};

/// A polynomial in commuting variables `H[−1], H[−2], …`; monomials are partitions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HeisenbergPoly {
    terms: BTreeMap<Partition, Rational>,
}

impl HeisenbergPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Partition::empty())
    }

    pub fn monomial(mu: Partition) -> Self {
        let mut p = Self::zero();
        p.add_term(mu, Rational::one());
        p
    }

    pub fn add_term(&mut self, mu: Partition, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(mu.clone()).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&mu);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mu: &Partition) -> Rational {
        self.terms.get(mu).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Total degree when every monomial has the same `|μ|`.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Partition::weight);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (mu, x) in &self.terms {
            out.add_term(mu.clone(), x * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (mu, x) in &other.terms {
            out.add_term(mu.clone(), x.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.union(b), x * y);
            }
        }
        out
    }

    /// The action on a lattice-model vector: each `H[−k]` acts as `h t^{−k}`.
    pub fn apply(&self, v: &FockVector) -> FockVector {
        let mut out = FockVector::zero();
        for (state, c) in v.terms() {
            for (mu, x) in &self.terms {
                out.add_term(FockState::new(state.charge, state.mu.union(mu)), c * x);
            }
        }
        out
    }

    /// `self · v_{Λ0}`.
    pub fn on_vacuum(&self) -> FockVector {
        self.apply(&FockVector::vacuum0())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn monomial_text(mu: &Partition) -> String {
    mu.multiplicities()
        .into_iter()
        .rev()
        .map(|(k, e)| if e == 1 { format!("h[-{k}]") } else { format!("h[-{k}]^{e}") })
        .collect::<Vec<_>>()
        .join("·")
}

impl fmt::Display for HeisenbergPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&rational::write_terms(self.terms.iter().map(|(mu, c)| (c, monomial_text(mu)))))
    }
}

impl FromStr for HeisenbergPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut out = Self::zero();
        for (coeff, body) in rational::split_terms(s)? {
            let mut parts = Vec::new();
            if !body.is_empty() {
                for factor in body.split('·') {
                    let (k, e) =
                        parse_h_factor(factor).ok_or_else(|| Error::Parse(format!("bad monomial `{body}`")))?;
                    parts.extend(std::iter::repeat(k).take(e));
                }
            }
            out.add_term(Partition::from_unsorted(parts), coeff);
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct PolyTermJson {
    mu: Vec<u32>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    terms: Vec<PolyTermJson>,
}

impl Serialize for HeisenbergPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            terms: self
                .terms
                .iter()
                .map(|(mu, c)| PolyTermJson {
                    mu: mu.parts().to_vec(),
                    coeff: rational::format(c),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HeisenbergPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyJson::deserialize(d)?;
        let mut out = HeisenbergPoly::zero();
        for t in raw.terms {
            let mu = Partition::new(t.mu).map_err(serde::de::Error::custom)?;
            let c = rational::parse(&t.coeff).map_err(serde::de::Error::custom)?;
            out.add_term(mu, c);
        }
        Ok(out)
    }
}

/// `C(π) = ∏ π_i! (π_i − 1)!`
pub fn coeff_c(pi: &Partition) -> Rational {
    Rational::from_integer(
        pi.parts()
            .iter()
            .map(|&p| factorial(p as u64) * factorial(p as u64 - 1))
            .product(),
    )
}

/// `C′(π) = ∏ (π_i − 1)!`
pub fn coeff_cprime(pi: &Partition) -> Rational {
    Rational::from_integer(pi.parts().iter().map(|&p| factorial(p as u64 - 1)).product())
}

fn pi_factorials(pi: &Partition) -> BigInt {
    pi.parts().iter().map(|&p| factorial(p as u64)).product()
}

fn check_lengths(p: &[i64], q: &[i64]) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::SizeMismatch {
            expected: p.len(),
            got: q.len(),
        });
    }
    Ok(())
}

/// `W(B, σ; p, q) = ∏_j H[Σ_{i∈B_j} (p_i − q_{σ(i)})]`, with `σ` 0-based.
pub fn w_monomial(b: &SetPartition, sigma: &[usize], p: &[i64], q: &[i64]) -> Result<HeisenbergPoly> {
    check_lengths(p, q)?;
    if b.size() != p.len() || sigma.len() != p.len() {
        return Err(Error::SizeMismatch {
            expected: p.len(),
            got: b.size().max(sigma.len()),
        });
    }
    let mut parts = Vec::with_capacity(b.blocks().len());
    for block in b.blocks() {
        let sum: i64 = block
            .iter()
            .map(|&i| {
                let i = i as usize - 1;
                p[i] - q[sigma[i]]
            })
            .sum();
        if sum >= 0 {
            return Err(Error::HypothesisOne(format!("block {block:?} has mode sum {sum} ≥ 0")));
        }
        parts.push((-sum) as u32);
    }
    Ok(HeisenbergPoly::monomial(Partition::from_unsorted(parts)))
}

/// `ℋ(π; p, q)` by the literal double sum over `B ∈ 𝒴(π)` and `σ ∈ S_r`.
pub fn h_pq_naive(pi: &Partition, p: &[i64], q: &[i64]) -> Result<HeisenbergPoly> {
    check_lengths(p, q)?;
    let r = p.len();
    let mut out = HeisenbergPoly::zero();
    let perms = permutations(r);
    for b in set_partitions_of_type(r, pi)? {
        for sigma in &perms {
            out = out.add(&w_monomial(&b, sigma, p, q)?);
        }
    }
    Ok(out.scale(&Rational::new(BigInt::one(), pi_factorials(pi))))
}

/// `ℋ(π; p, q)`. For a fixed block structure the `σ`-sum only depends on which
/// sub-multiset of `q` lands in each block; those choices are counted with
/// binomial weights instead of enumerated.
pub fn h_pq(pi: &Partition, p: &[i64], q: &[i64]) -> Result<HeisenbergPoly> {
    check_lengths(p, q)?;
    let r = p.len();
    let mut q_counts: BTreeMap<i64, usize> = BTreeMap::new();
    for &x in q {
        *q_counts.entry(x).or_default() += 1;
    }
    let q_values: Vec<(i64, usize)> = q_counts.into_iter().collect();
    let mut out = HeisenbergPoly::zero();
    for b in set_partitions_of_type(r, pi)? {
        let block_p: Vec<(i64, usize)> = b
            .blocks()
            .iter()
            .map(|blk| (blk.iter().map(|&i| p[i as usize - 1]).sum(), blk.len()))
            .collect();
        let inner: BigInt = block_p.iter().map(|&(_, len)| factorial(len as u64)).product();
        let mut avail: Vec<usize> = q_values.iter().map(|&(_, c)| c).collect();
        let mut parts = Vec::with_capacity(block_p.len());
        distribute(&block_p, &q_values, &mut avail, &mut parts, BigInt::one(), &mut |parts, w| {
            out.add_term(Partition::from_unsorted(parts.iter().copied()), Rational::from_integer(w * &inner));
        })?;
    }
    Ok(out.scale(&Rational::new(BigInt::one(), pi_factorials(pi))))
}

/// Assigns sub-multisets of the remaining `q` values to each block in turn.
fn distribute(
    blocks: &[(i64, usize)],
    q_values: &[(i64, usize)],
    avail: &mut [usize],
    parts: &mut Vec<u32>,
    weight: BigInt,
    emit: &mut dyn FnMut(&[u32], BigInt),
) -> Result<()> {
    let Some((&(p_sum, size), rest)) = blocks.split_first() else {
        emit(parts, weight);
        return Ok(());
    };
    let mut take = vec![0usize; q_values.len()];
    choose(0, size, q_values, avail, &mut take, &mut |take| {
        let q_sum: i64 = take.iter().zip(q_values).map(|(&t, &(v, _))| t as i64 * v).sum();
        let mode = p_sum - q_sum;
        if mode >= 0 {
            return Err(Error::HypothesisOne(format!("a block has mode sum {mode} ≥ 0")));
        }
        let w: BigInt = take
            .iter()
            .zip(avail.iter())
            .map(|(&t, &a)| binomial(a as u64, t as u64))
            .product();
        let mut next_avail: Vec<usize> = avail.iter().zip(take).map(|(&a, &t)| a - t).collect();
        parts.push((-mode) as u32);
        let res = distribute(rest, q_values, &mut next_avail, parts, &weight * w, emit);
        parts.pop();
        res
    })
}

fn choose(
    idx: usize,
    remaining: usize,
    q_values: &[(i64, usize)],
    avail: &[usize],
    take: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if remaining == 0 {
        return visit(take);
    }
    if idx == q_values.len() {
        return Ok(());
    }
    for t in (0..=avail[idx].min(remaining)).rev() {
        take[idx] = t;
        choose(idx + 1, remaining - t, q_values, avail, take, visit)?;
    }
    take[idx] = 0;
    Ok(())
}

/// Checks hypotheses (1) and (2) of the straightening theorem, naming a
/// witness when one fails.
pub fn check_hypotheses(p: &[i64], q: &[i64]) -> Result<()> {
    check_lengths(p, q)?;
    if let Some(&pmax) = p.iter().max() {
        let qmin = *q.iter().min().expect("same length");
        if pmax >= qmin {
            let i = p.iter().position(|&x| x == pmax).unwrap() + 1;
            let j = q.iter().position(|&x| x == qmin).unwrap() + 1;
            return Err(Error::HypothesisOne(format!("p_{i} = {pmax} ≥ q_{j} = {qmin}")));
        }
    }
    // Σ_A p − Σ_B q is smallest for the |A| smallest p and the |B| largest q.
    let mut p_idx: Vec<usize> = (0..p.len()).collect();
    p_idx.sort_by_key(|&i| p[i]);
    let mut q_idx: Vec<usize> = (0..q.len()).collect();
    q_idx.sort_by_key(|&j| std::cmp::Reverse(q[j]));
    for s in 0..p.len() {
        let a = &p_idx[..=s];
        let b = &q_idx[..s];
        let pa: i64 = a.iter().map(|&i| p[i]).sum();
        let qb: i64 = b.iter().map(|&j| q[j]).sum();
        if pa < qb {
            let one_based = |v: &[usize]| v.iter().map(|&i| i + 1).collect::<Vec<_>>();
            return Err(Error::HypothesisTwo(format!(
                "A = {:?}, B = {:?}: Σp = {pa} < Σq = {qb}",
                one_based(a),
                one_based(b)
            )));
        }
    }
    Ok(())
}

/// `(−1)^r Σ_{π ⊢ r} C(π) ℋ(π; p, q)`, the straightened form of
/// `(∏ y t^{p_i})(∏ x t^{−q_j}) v_{Λ0}`.
pub fn straighten_yx(p: &[i64], q: &[i64]) -> Result<HeisenbergPoly> {
    check_hypotheses(p, q)?;
    straighten_unchecked(p, q)
}

/// The right-hand side of [`straighten_yx`] without certifying hypothesis (2).
/// Block sums must still be negative.
pub fn straighten_unchecked(p: &[i64], q: &[i64]) -> Result<HeisenbergPoly> {
    let r = p.len();
    let mut out = HeisenbergPoly::zero();
    for pi in partitions_of(r as u32) {
        out = out.add(&h_pq(&pi, p, q)?.scale(&coeff_c(&pi)));
    }
    Ok(out.scale(&sign_pow(r as i64)))
}

/// `ℋ(π, λ) = Σ_{B ∈ 𝒴(π)} ∏_p H[−Σ_{j∈B_p} λ_j]`.
pub fn h_lambda(pi: &Partition, lam: &Partition) -> Result<HeisenbergPoly> {
    let r = lam.supp();
    if pi.weight() as usize != r {
        return Err(Error::SizeMismatch {
            expected: r,
            got: pi.weight() as usize,
        });
    }
    let mut out = HeisenbergPoly::zero();
    for b in set_partitions_of_type(r, pi)? {
        let parts = b.blocks().iter().map(|blk| blk.iter().map(|&j| lam.part(j as usize)).sum());
        out.add_term(Partition::from_unsorted(parts), Rational::one());
    }
    Ok(out)
}

/// `f_λ = ((−1)^r / ∏ m_j(λ)!) Σ_{π ⊢ r} C′(π) ℋ(π, λ)`, and `f_∅ = 1`.
pub fn f_lambda(lam: &Partition) -> HeisenbergPoly {
    let r = lam.supp();
    if r == 0 {
        return HeisenbergPoly::one();
    }
    let mut out = HeisenbergPoly::zero();
    for pi in partitions_of(r as u32) {
        out = out.add(&h_lambda(&pi, lam).expect("|π| = supp λ").scale(&coeff_cprime(&pi)));
    }
    let m_fact: BigInt = lam.multiplicities().values().map(|&m| factorial(m as u64)).product();
    out.scale(&(sign_pow(r as i64) / Rational::from_integer(m_fact)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{apply_word_direct, AlgebraGen};
    use crate::rational::{frac, int};

    fn part(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn poly(entries: &[(&[u32], Rational)]) -> HeisenbergPoly {
        let mut p = HeisenbergPoly::zero();
        for (mu, c) in entries {
            p.add_term(part(mu), c.clone());
        }
        p
    }

    /// `C(π)` from the two inductive cases: a part equal to one contributes
    /// nothing; otherwise lower the smallest part by one at cost `π_s(π_s − 1)`.
    fn coeff_c_recursive(pi: &[u32]) -> BigInt {
        let Some((&last, rest)) = pi.split_last() else { return BigInt::one() };
        if last == 1 {
            return coeff_c_recursive(rest);
        }
        let mut lowered = rest.to_vec();
        lowered.push(last - 1);
        BigInt::from(last * (last - 1)) * coeff_c_recursive(&lowered)
    }

    #[test]
    fn c_coefficients() {
        assert_eq!(coeff_c(&part(&[3])), int(12));
        assert_eq!(coeff_cprime(&part(&[3])), int(2));
        assert_eq!(coeff_c(&part(&[1, 1, 1, 1])), int(1));
        assert_eq!(coeff_cprime(&part(&[1, 1, 1, 1])), int(1));
        assert_eq!(coeff_c(&part(&[2, 2])), int(4));
        assert_eq!(coeff_cprime(&part(&[2, 2])), int(1));
        for r in 1..=7 {
            for pi in partitions_of(r) {
                assert_eq!(coeff_c(&pi), Rational::from_integer(coeff_c_recursive(pi.parts())));
            }
        }
    }

    #[test]
    fn w_monomial_examples() {
        let b = SetPartition::new(vec![vec![1, 2]]).unwrap();
        assert_eq!(w_monomial(&b, &[0, 1], &[1, 2], &[3, 3]).unwrap(), poly(&[(&[3], int(1))]));
        let b = SetPartition::new(vec![vec![1], vec![2]]).unwrap();
        assert_eq!(w_monomial(&b, &[0, 1], &[0, 0], &[1, 1]).unwrap(), poly(&[(&[1, 1], int(1))]));
        assert_eq!(w_monomial(&b, &[1, 0], &[0, 1], &[2, 3]).unwrap(), poly(&[(&[3, 1], int(1))]));
        assert!(matches!(w_monomial(&b, &[0, 1], &[3, 0], &[2, 3]), Err(Error::HypothesisOne(_))));
    }

    #[test]
    fn h_pq_examples() {
        assert_eq!(h_pq(&part(&[1]), &[2], &[5]).unwrap(), poly(&[(&[3], int(1))]));
        assert_eq!(h_pq(&part(&[2]), &[1, 2], &[3, 3]).unwrap(), poly(&[(&[3], int(1))]));
    }

    #[test]
    fn h_pq_fast_matches_naive() {
        let cases: &[(&[i64], &[i64])] = &[
            (&[0, 1, 2], &[3, 3, 3]),
            (&[1, 2, 0], &[4, 3, 5]),
            (&[0, 0, 1, 2], &[3, 4, 4, 6]),
            (&[2, 2, 3, 3], &[4, 4, 4, 5]),
        ];
        for (p, q) in cases {
            for pi in partitions_of(p.len() as u32) {
                assert_eq!(h_pq(&pi, p, q).unwrap(), h_pq_naive(&pi, p, q).unwrap(), "{pi} {p:?} {q:?}");
            }
        }
    }

    #[test]
    fn constant_q_collapse() {
        let lam = part(&[3, 1, 1]);
        let k = 5;
        let p: Vec<i64> = lam.parts().iter().map(|&l| k - l as i64).collect();
        let q = vec![k; 3];
        for pi in partitions_of(3) {
            let scale = Rational::new(factorial(3), pi_factorials(&pi));
            assert_eq!(h_pq(&pi, &p, &q).unwrap(), h_lambda(&pi, &lam).unwrap().scale(&scale));
        }
    }

    #[test]
    fn hypotheses_are_reported() {
        assert!(check_hypotheses(&[1, 2], &[3, 3]).is_ok());
        assert!(matches!(check_hypotheses(&[3, 0], &[3, 4]), Err(Error::HypothesisOne(_))));
        assert!(matches!(check_hypotheses(&[0, 0], &[1, 1]), Err(Error::HypothesisTwo(_))));
        assert!(matches!(straighten_yx(&[0, 1, 2], &[3, 3, 3]), Err(Error::HypothesisTwo(_))));
        assert!(matches!(check_hypotheses(&[0], &[1, 2]), Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn base_case_and_oracle() {
        assert_eq!(straighten_yx(&[1], &[4]).unwrap(), poly(&[(&[3], int(-1))]));
        for (p, q) in [
            (vec![1i64, 2], vec![3i64, 3]),
            (vec![2, 2, 2], vec![3, 3, 3]),
            (vec![3, 3, 4], vec![5, 5, 5]),
        ] {
            let lhs = straighten_yx(&p, &q).unwrap().on_vacuum();
            let mut word: Vec<_> = p.iter().map(|&pi| (AlgebraGen::y(pi), 1)).collect();
            word.extend(q.iter().map(|&qj| (AlgebraGen::x(-qj), 1)));
            assert_eq!(lhs, apply_word_direct(&word, &FockVector::vacuum0()));
        }
    }

    #[test]
    fn h_lambda_examples() {
        let lam = part(&[5, 3, 2]);
        assert_eq!(h_lambda(&part(&[3]), &lam).unwrap(), poly(&[(&[10], int(1))]));
        assert_eq!(
            h_lambda(&part(&[2, 1]), &lam).unwrap(),
            poly(&[(&[8, 2], int(1)), (&[7, 3], int(1)), (&[5, 5], int(1))])
        );
        assert_eq!(h_lambda(&part(&[1, 1, 1]), &lam).unwrap(), poly(&[(&[5, 3, 2], int(1))]));
        assert!(h_lambda(&part(&[2]), &lam).is_err());
    }

    #[test]
    fn f_lambda_examples() {
        assert_eq!(f_lambda(&Partition::empty()), HeisenbergPoly::one());
        assert_eq!(f_lambda(&part(&[2, 1])), poly(&[(&[3], int(1)), (&[2, 1], int(1))]));
        assert_eq!(f_lambda(&part(&[1, 1])), poly(&[(&[2], frac(1, 2)), (&[1, 1], frac(1, 2))]));
        for d in 0..=6 {
            for lam in partitions_of(d) {
                let f = f_lambda(&lam);
                assert_eq!(f.degree(), Some(d));
            }
        }
    }

    #[test]
    fn text_and_json_roundtrip() {
        let p = f_lambda(&part(&[1, 1]));
        assert_eq!(p.to_string(), "1/2·h[-2] + 1/2·h[-1]^2");
        assert_eq!(p.to_string().parse::<HeisenbergPoly>().unwrap(), p);
        assert_eq!(HeisenbergPoly::one().to_string(), "1");
        assert_eq!("1".parse::<HeisenbergPoly>().unwrap(), HeisenbergPoly::one());
        assert_eq!(p.to_json(), r#"{"terms":[{"mu":[2],"coeff":"1/2"},{"mu":[1,1],"coeff":"1/2"}]}"#);
        assert_eq!(HeisenbergPoly::from_json(&p.to_json()).unwrap(), p);
    }
}
