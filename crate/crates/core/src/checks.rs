//! Named verification suites. Each suite sweeps one family of identities over
//! a finite grid and reports every failing instance.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combinatorics::{enum_p, partition_count, partitions_bounded, partitions_of, IndexTriple, Partition};
use crate::cpl;
use crate::fkops::{self, t_op};
use crate::fock::{self, act, apply_word, apply_word_direct, AlgebraElement, AlgebraGen, FockState, FockVector, GenKind, Letter};
use crate::limit;
use crate::linalg;
use crate::rational::{frac, int, sign_pow, Rational};
use crate::straighten::{self, HeisenbergPoly};
use crate::weights::{self, AffineWeight};
use crate::{Error, Result};

pub const SUITES: [&str; 14] = [
    "examples",
    "relations",
    "weyl",
    "rank",
    "t1",
    "c2",
    "t2",
    "appendix",
    "fkprop",
    "offdiag",
    "automorphisms",
    "stability",
    "multiplicities",
    "limit",
];

pub const DEFAULT_SEED: u64 = 20_240_611;

#[derive(Debug, Clone)]
pub struct CheckOptions {
    /// Overrides the suite's default bound on `n` where the suite has one.
    pub n_max: Option<u32>,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            n_max: None,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub failures: Vec<String>,
    pub elapsed_ms: u128,
}

#[derive(Default)]
struct Tally {
    checked: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn eq<T: PartialEq>(&mut self, a: &T, b: &T, what: impl FnOnce() -> String) {
        self.check(a == b, what);
    }

    /// Unwraps a computation, recording an error as a failure.
    fn ok<T>(&mut self, r: Result<T>, what: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.checked += 1;
                self.failures.push(format!("{}: {e}", what()));
                None
            }
        }
    }
}

pub fn run_suite(name: &str, opts: &CheckOptions) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut t = Tally::default();
    match name {
        "examples" => examples(&mut t),
        "relations" => relations(&mut t),
        "weyl" => weyl(&mut t, opts.n_max.unwrap_or(8)),
        "rank" => rank(&mut t, opts.n_max.unwrap_or(8)),
        "t1" => t1(&mut t, opts.seed),
        "c2" => c2(&mut t),
        "t2" => t2(&mut t, opts.n_max.map_or(6, |n| n / 2)),
        "appendix" => appendix(&mut t),
        "fkprop" => fkprop(&mut t),
        "offdiag" => offdiag(&mut t, opts.n_max.unwrap_or(10)),
        "automorphisms" => automorphisms(&mut t, opts.n_max.unwrap_or(7)),
        "stability" => stability(&mut t, opts.n_max.unwrap_or(12)),
        "multiplicities" => multiplicities(&mut t, opts.n_max.unwrap_or(8)),
        "limit" => limit_suite(&mut t, opts.n_max.unwrap_or(6)),
        other => return Err(Error::Parse(format!("unknown suite `{other}`; expected one of {}", SUITES.join(", ")))),
    }
    Ok(SuiteReport {
        name: name.to_string(),
        passed: t.failures.is_empty(),
        checked: t.checked,
        failures: t.failures,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

pub fn run_all(opts: &CheckOptions) -> Vec<SuiteReport> {
    SUITES.iter().map(|s| run_suite(s, opts).expect("known suite")).collect()
}

fn v0() -> FockVector {
    FockVector::vacuum0()
}

fn state(charge: i64, mu: &[u32]) -> FockVector {
    FockVector::basis(FockState::new(charge, Partition::from_unsorted(mu.iter().copied())))
}

fn xi(n: u32, k: u32, lam: Partition) -> IndexTriple {
    IndexTriple::new(n, k, lam).expect("valid triple")
}

fn scaled(v: &FockVector, c: Rational) -> FockVector {
    v.scale(&c)
}

fn x(m: i64) -> Letter {
    (AlgebraGen::x(m), 1)
}

fn y(m: i64) -> Letter {
    (AlgebraGen::y(m), 1)
}

/// `∏_{i=1}^{r} g t^{s(2i−1)}` as letters.
fn odd_run(gen: fn(i64) -> Letter, r: i64, s: i64) -> Vec<Letter> {
    (1..=r).map(|i| gen(s * (2 * i - 1))).collect()
}

fn examples(t: &mut Tally) {
    let a = t.ok(cpl::cl_vec_checked(&"4:2:2,1".parse().unwrap()), || "CL(4:2:2,1)".into());
    let b = t.ok(cpl::cl_vec_checked(&"6:3:2,1".parse().unwrap()), || "CL(6:3:2,1)".into());
    let (Some(a), Some(b)) = (a, b) else { return };
    let expect_a = state(0, &[3]).sub(&state(0, &[1, 1, 1])).scale(&frac(1, 3));
    let expect_b = state(0, &[3]).add(&state(0, &[2, 1]));
    t.eq(&a, &expect_a, || format!("CL(4:2:2,1) = {a}"));
    t.eq(&b, &expect_b, || format!("CL(6:3:2,1) = {b}"));
    t.check(a != b, || "CL(4:2:2,1) = CL(6:3:2,1)".into());
    let weight = &AffineWeight::lambda0() - &AffineWeight::new(0, 0, int(3));
    t.eq(&a.weight(), &Some(weight.clone()), || "weight of CL(4:2:2,1)".into());
    t.eq(&b.weight(), &Some(weight), || "weight of CL(6:3:2,1)".into());
}

fn relations(t: &mut Tally) {
    let report = fock::check_relations(6, 4, 4);
    t.checked += report.checked;
    for v in report.violations.iter().take(20) {
        t.failures.push(format!("[{}, {}] on {:?}: {}", v.a, v.b, v.state, v.discrepancy));
    }
    if report.violations.len() > 20 {
        t.failures.push(format!("… {} violations in total", report.violations.len()));
    }

    for (v, lam) in [(FockVector::vacuum0(), AffineWeight::lambda0()), (FockVector::vacuum1(), AffineWeight::lambda1())] {
        let name = if lam == AffineWeight::lambda0() { "v_Λ0" } else { "v_Λ1" };
        // h, c, d act by the weight
        t.eq(&act(AlgebraGen::h(0), &v), &v.scale(&int(lam.pair_h())), || format!("h {name}"));
        t.eq(&act(AlgebraGen::c(), &v), &v.scale(&int(lam.pair_c())), || format!("c {name}"));
        t.eq(&act(AlgebraGen::d(), &v), &v.scale(&lam.delta), || format!("d {name}"));
        // e1 = x, e0 = y t
        t.check(act(AlgebraGen::x(0), &v).is_zero(), || format!("e1 {name} ≠ 0"));
        t.check(act(AlgebraGen::y(1), &v).is_zero(), || format!("e0 {name} ≠ 0"));
        // f1 = y, f0 = x t^{−1}
        let p1 = lam.pair_h() as u32;
        let p0 = lam.pair_alpha0_coroot() as u32;
        for (f, p, label) in [(AlgebraGen::y(0), p1, "f1"), (AlgebraGen::x(-1), p0, "f0")] {
            t.check(apply_word_direct(&[(f, p + 1)], &v).is_zero(), || format!("{label}^{} {name} ≠ 0", p + 1));
            t.check(!apply_word_direct(&[(f, p)], &v).is_zero(), || format!("{label}^{p} {name} = 0"));
        }
    }
    t.check(apply_word_direct(&[(AlgebraGen::y(-1), 2)], &v0()).is_zero(), || "(y t^{-1})² v_Λ0 ≠ 0".into());
}

fn weyl(t: &mut Tally, n_max: u32) {
    for n in 0..=n_max {
        let w = cpl::make_wn(n);
        t.check(!w.is_zero(), || format!("w_{n} = 0"));
        t.check(cpl::wn_relations_hold(n, 4), || format!("w_{n} violates a defining relation"));
        t.eq(&w.weight(), &Some(weights::weight_of_wn(n)), || format!("weight of w_{n}"));
        t.eq(&weights::weight_of_wn(n).pair_h(), &(n as i64), || format!("⟨wt w_{n}, h⟩"));
    }
    for n in n_max + 1..=10 {
        t.check(!cpl::make_wn(n).is_zero(), || format!("w_{n} = 0"));
    }
}

fn rank(t: &mut Tally, n_max: u32) {
    for n in 0..=n_max {
        let triples = enum_p(n);
        t.eq(&triples.len(), &(1usize << n), || format!("|𝔓({n})|"));
        let bs: Vec<FockVector> = triples.iter().map(cpl::b_vec).collect();
        let mut cls = Vec::new();
        for x in &triples {
            let checked = if n <= 6 { cpl::cl_vec_checked(x) } else { cpl::cl_vec(x) };
            if let Some(v) = t.ok(checked, || format!("CL({x})")) {
                t.eq(&v.weight(), &Some(weights::weight_of_cl(x)), || format!("weight of CL({x})"));
                cls.push(v);
            }
        }
        t.eq(&linalg::rank(&bs), &(1usize << n), || format!("rank of B over 𝔓({n})"));
        t.eq(&linalg::rank(&cls), &(1usize << n), || format!("rank of CL over 𝔓({n})"));
        if n <= 6 {
            for (x, v) in triples.iter().zip(&cls) {
                t.eq(&cpl::cl_via_complement(x), v, || format!("z·B(ξ^c) ≠ CL(ξ) at {x}"));
            }
            let upper: Vec<FockVector> = enum_p(n + 2).iter().filter_map(|x| cpl::cl_vec(x).ok()).collect();
            let span = linalg::span_of(&upper);
            for (x, v) in triples.iter().zip(&cls) {
                t.check(linalg::in_span(&span, v), || format!("CL({x}) not in the span over 𝔓({})", n + 2));
            }
        }
    }
}

fn t1_case(t: &mut Tally, p: &[i64], q: &[i64]) {
    let Some(poly) = t.ok(straighten::straighten_yx(p, q), || format!("straighten {p:?} {q:?}")) else {
        return;
    };
    let mut word: Vec<Letter> = p.iter().map(|&pi| y(pi)).collect();
    word.extend(q.iter().map(|&qj| x(-qj)));
    let direct = apply_word(&word, &v0());
    t.eq(&poly.on_vacuum(), &direct, || format!("straightening fails at p={p:?} q={q:?}"));
}

/// Weakly increasing tuples of length `r` with entries in `0..=max`.
fn multisets(r: usize, max: i64) -> Vec<Vec<i64>> {
    if r == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in multisets(r - 1, max) {
        let lo = rest.last().copied().unwrap_or(0);
        for v in lo..=max {
            let mut next = rest.clone();
            next.push(v);
            out.push(next);
        }
    }
    out
}

fn t1(t: &mut Tally, seed: u64) {
    for r in 1..=3 {
        for p in multisets(r, 6) {
            for q in multisets(r, 6) {
                if straighten::check_hypotheses(&p, &q).is_ok() {
                    t1_case(t, &p, &q);
                }
            }
        }
    }
    // Random cases cluster around a base value: hypothesis (2) forces p and q
    // to be nearly constant, so uniform draws would almost never qualify.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for r in [4usize, 5] {
        let mut found = 0;
        while found < 60 {
            let base: i64 = rng.gen_range(1..=8);
            let mut q: Vec<i64> = (0..r).map(|_| base + rng.gen_range(0..=2)).collect();
            let mut p: Vec<i64> = (0..r).map(|_| base - 1 - rng.gen_range(0..=2)).collect();
            q.shuffle(&mut rng);
            p.shuffle(&mut rng);
            let in_range = q.iter().all(|&v| v <= 8) && p.iter().all(|&v| v >= 0);
            if in_range && straighten::check_hypotheses(&p, &q).is_ok() {
                t1_case(t, &p, &q);
                found += 1;
            }
        }
    }
}

fn c2(t: &mut Tally) {
    for size in 1..=6 {
        for lam in partitions_of(size) {
            let r = lam.supp();
            let mut rhs = HeisenbergPoly::zero();
            for pi in partitions_of(r as u32) {
                if let Some(h) = t.ok(straighten::h_lambda(&pi, &lam), || format!("ℋ({pi:?}, {lam:?})")) {
                    rhs = rhs.add(&h.scale(&straighten::coeff_cprime(&pi)));
                }
            }
            let rhs = rhs.scale(&sign_pow(r as i64)).on_vacuum();
            for k in size..=size + 3 {
                let k = k as i64;
                let mut word: Vec<Letter> = lam.parts().iter().map(|&l| y(k - l as i64)).collect();
                word.push((AlgebraGen::x(-k), r as u32));
                let lhs = apply_word(&word, &v0());
                t.eq(&lhs, &rhs, || format!("Corollary c2 fails at λ={lam:?}, k={k}"));
            }
        }
    }
}

fn t2(t: &mut Tally, k_max: u32) {
    for k in 0..=k_max {
        for lam in (0..=k).flat_map(|d| partitions_bounded(d, k, k as usize)) {
            let x = xi(2 * k, k, lam.clone());
            if !x.is_stable() {
                continue;
            }
            if let Some(cl) = t.ok(cpl::cl_vec(&x), || format!("CL({x})")) {
                t.eq(&cl, &straighten::f_lambda(&lam).on_vacuum(), || format!("CL ≠ f_λ v_Λ0 at {x}"));
            }
        }
    }
}

fn appendix(t: &mut Tally) {
    let v = v0();
    // (1)
    for m in 1..=6i64 {
        for l in 1..=m {
            let lhs = apply_word(&[(AlgebraGen::y(m), l as u32), (AlgebraGen::x(-m), m as u32)], &v);
            let rhs = apply_word(&[(AlgebraGen::x(-m), (m - l) as u32)], &v);
            t.eq(&lhs, &rhs, || format!("appendix (1) m={m} l={l}"));
        }
    }
    // (2), (3)
    for r in 1..=6 {
        let mut w2 = odd_run(x, r, 1);
        w2.extend(odd_run(y, r, -1));
        t.eq(&apply_word(&w2, &v), &v, || format!("appendix (2) r={r}"));
        let mut w3 = odd_run(y, r, 1);
        w3.extend(odd_run(x, r, -1));
        t.eq(&apply_word(&w3, &v), &v, || format!("appendix (3) r={r}"));
    }
    // (4) on v_a = ∏_{i ≤ a} x t^{−(2i−1)} v_Λ0, whenever its hypotheses hold
    let mut instances = 0;
    for a in 0..=3 {
        let va = apply_word(&odd_run(x, a, -1), &v);
        for q in 0..=6i64 {
            for p in q + 1..=q + 6 {
                let hyp = act(AlgebraGen::y(p), &va).is_zero() && act(AlgebraGen::h(p - q), &va).is_zero();
                if !hyp {
                    continue;
                }
                instances += 1;
                for s in 2..=5u32 {
                    let lhs = apply_word(&[y(p), (AlgebraGen::x(-q), s)], &va);
                    let rhs = apply_word(&[(AlgebraGen::x(-q), s - 2), x(p - 2 * q)], &va).scale(&int(-1));
                    t.eq(&lhs, &rhs, || format!("appendix (4) a={a} p={p} q={q} s={s}"));
                }
            }
        }
    }
    t.check(instances > 0, || "appendix (4): no instance satisfied the hypotheses".into());
    // (5), (6)
    for r in 1..=6i64 {
        let even = r % 2 == 0;
        let jmax = if even { r / 2 } else { (r - 1) / 2 };
        for j in 0..=jmax {
            let (ys, xpow, xs) = if even { (r / 2 + j, 2 * j, r / 2 - j) } else { ((r + 1) / 2 + j, 2 * j + 1, (r - 1) / 2 - j) };
            let mut word = odd_run(y, ys, 1);
            word.push((AlgebraGen::x(-r), xpow as u32));
            word.extend(odd_run(x, xs, -1));
            let item = if even { 5 } else { 6 };
            t.eq(&apply_word(&word, &v), &scaled(&v, sign_pow(j)), || format!("appendix ({item}) r={r} j={j}"));
        }
    }
    // (7), (8)
    for r in 1..=6i64 {
        let sign = sign_pow(r / 2);
        let xr = apply_word(&[(AlgebraGen::x(-r), r as u32)], &v);
        let mut w7 = odd_run(y, r, 1);
        w7.push((AlgebraGen::x(-r), r as u32));
        t.eq(&apply_word(&w7, &v), &scaled(&v, sign.clone()), || format!("appendix (7) r={r}"));
        if let Some(tv) = t.ok(t_op(r).apply(&v), || format!("T({r}) v_Λ0")) {
            t.eq(&xr, &tv.scale(&sign), || format!("appendix (8) r={r}"));
            t.check(!xr.is_zero(), || format!("appendix (8) r={r}: vector is zero"));
        }
    }
}

/// Even-charge states with `|charge| ≤ 2` and degree `≤ degree`.
fn sector0_states(degree: u32) -> Vec<FockVector> {
    fock::basis_states(2, degree)
        .into_iter()
        .filter(|s| s.charge % 2 == 0)
        .map(FockVector::basis)
        .collect()
}

fn fkprop(t: &mut Tally) {
    let up = fkops::t_unit();
    let down = up.inverse();
    let step = |v: &FockVector, p: i64| -> Result<FockVector> {
        let op = if p >= 0 { &up } else { &down };
        let mut cur = v.clone();
        for _ in 0..p.unsigned_abs() {
            cur = op.apply(&cur)?;
        }
        Ok(cur)
    };
    // (3) and weight transport
    for v in sector0_states(4) {
        let mut images = std::collections::BTreeMap::new();
        images.insert(0i64, v.clone());
        for s in 1..=3i64 {
            for sign in [1, -1] {
                let prev = images[&(sign * (s - 1))].clone();
                if let Some(next) = t.ok(step(&prev, sign), || format!("T({sign}) on {v}")) {
                    images.insert(sign * s, next);
                }
            }
        }
        let mu = v.weight().expect("basis state");
        for (&p, img) in &images {
            t.eq(&img.weight(), &Some(weights::translate_half_steps(&mu, 2 * p)), || format!("weight of T({p}) {v}"));
        }
        // T(p) is a power of T(±1), so same-sign pairs hold by construction.
        for q in -3..=3i64 {
            for p in -3..=3i64 {
                if p * q >= 0 {
                    continue;
                }
                let (Some(base), Some(target)) = (images.get(&q), images.get(&(p + q))) else { continue };
                if let Some(lhs) = t.ok(step(base, p), || format!("T({p})T({q}) {v}")) {
                    t.eq(&lhs, target, || format!("fkprop (3) p={p} q={q} on {v}"));
                }
            }
        }
    }
    // (4)
    for v in sector0_states(3) {
        for p in [1i64, -1] {
            for m in -2..=2 {
                for g in [AlgebraGen::x(m), AlgebraGen::y(m)] {
                    let lhs = t_op(-p).apply(&v).map(|w| act(g, &w)).and_then(|w| t_op(p).apply(&w));
                    let Some(lhs) = t.ok(lhs, || format!("T({p}) {g} T({}) {v}", -p)) else { continue };
                    let Some(g2) = t.ok(fkops::t_ad(p, g), || format!("T_ad({p}, {g})")) else { continue };
                    t.eq(&lhs, &act(g2, &v), || format!("fkprop (4) p={p} g={g} on {v}"));
                }
            }
        }
    }
    t.eq(&fkops::t_ad(1, AlgebraGen::x(0)).ok(), &Some(AlgebraGen::x(-2)), || "T_ad(1, x)".into());
    t.eq(&fkops::t_ad(1, AlgebraGen::y(2)).ok(), &Some(AlgebraGen::y(4)), || "T_ad(1, y t^2)".into());
    t.check(fkops::t_ad(1, AlgebraGen::h(0)).is_err(), || "T_ad on h accepted".into());
    // (5), (6)
    for p in 1..=3i64 {
        for (gen, sign, item) in [(x as fn(i64) -> Letter, 1i64, 5), (y as fn(i64) -> Letter, -1, 6)] {
            let expect = apply_word(&odd_run(gen, p, -1), &v0());
            if let Some(got) = t.ok(t_op(sign * p).apply(&v0()), || format!("T({}) v_Λ0", sign * p)) {
                t.eq(&got, &expect, || format!("fkprop ({item}) p={p}"));
            }
        }
    }
    // reflections: weight transport and (r_α)² = ±1 per vector
    let r = fkops::r_alpha(true, 0);
    for v in sector0_states(3) {
        let Some(rv) = t.ok(r.apply(&v), || format!("r on {v}")) else { continue };
        let mu = v.weight().expect("basis state");
        t.eq(&rv.weight(), &Some(weights::reflect(&mu, 1)), || format!("weight of r {v}"));
        if let Some(rrv) = t.ok(r.apply(&rv), || format!("r² on {v}")) {
            let ratio = fkops::proportional(&rrv, &v);
            t.check(ratio.as_ref().is_some_and(|c| *c == int(1) || *c == int(-1)), || format!("r² {v} is not ±{v}"));
        }
    }
}

fn offdiag(t: &mut Tally, n_max: u32) {
    for n in (0..=n_max).step_by(2) {
        let half = n as i64 / 2;
        let w = cpl::make_wn(n);
        let sign = sign_pow(n as i64 / 4);
        if let Some(tv) = t.ok(t_op(half).apply(&v0()), || format!("T({half}) v_Λ0")) {
            t.eq(&w.scale(&sign), &tv, || format!("offdiag (1) n={n}"));
        }
        for k in 0..=n {
            let gamma = k as i64 - half;
            let rhs = fkops::translate(gamma, &cpl::make_wn(2 * (n - k)));
            if let Some(rhs) = t.ok(rhs, || format!("T({gamma}) w_{}", 2 * (n - k))) {
                let rhs = rhs.scale(&sign_pow(((n - k) / 2) as i64));
                t.eq(&w.scale(&sign), &rhs, || format!("offdiag (2) n={n} k={k}"));
            }
        }
        for x in enum_p(n).into_iter().filter(IndexTriple::is_stable) {
            let Some((dagger, gamma)) = t.ok(fkops::offdiag_reduce(&x), || format!("offdiag (3) at {x}")) else {
                continue;
            };
            t.check(dagger.is_stable(), || format!("{dagger} not stable"));
            let closed = fkops::translate(gamma, &straighten::f_lambda(x.lam()).on_vacuum());
            if let (Some(closed), Some(cl)) = (t.ok(closed, || format!("T({gamma}) f_λ")), cpl::cl_vec(&x).ok()) {
                t.eq(&cl, &closed, || format!("CL({x}) ≠ T({gamma}) f_λ v_Λ0"));
            }
        }
    }
}

fn element_bracket(a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (g, c) in a.terms() {
        for (h, d) in b.terms() {
            for (k, e) in fock::bracket(*g, *h).terms() {
                out = out.plus(*k, c * d * e);
            }
        }
    }
    out
}

fn tau_inverse(g: AlgebraGen) -> Result<AlgebraElement> {
    fkops::map_element(&fkops::sigma_tilde(g)?, |h| Ok(fkops::phi_tilde(h)))
}

fn words(gens: &[AlgebraGen], max_len: usize) -> Vec<Vec<Letter>> {
    let mut all = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &g in gens {
                let mut w2: Vec<Letter> = w.clone();
                w2.push((g, 1));
                next.push(w2);
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

fn automorphisms(t: &mut Tally, n_max: u32) {
    let sigma = |g| fkops::sigma_tilde(g);
    let phi = |g| Ok(fkops::phi_tilde(g));
    t.eq(&sigma(AlgebraGen::x(0)).ok(), &Some(AlgebraElement::gen(AlgebraGen::y(1))), || "σ̃(e1) ≠ e0".into());
    t.eq(&sigma(AlgebraGen::y(0)).ok(), &Some(AlgebraElement::gen(AlgebraGen::x(-1))), || "σ̃(f1) ≠ f0".into());
    let h_image = AlgebraElement::zero().plus(AlgebraGen::h(0), int(-1)).plus(AlgebraGen::c(), int(1));
    t.eq(&sigma(AlgebraGen::h(0)).ok(), &Some(h_image), || "σ̃(h) ≠ −h + c".into());

    let mut gens: Vec<AlgebraGen> = fock::generators_up_to(3).into_iter().filter(|g| g.kind != GenKind::D).collect();
    for g in &gens {
        let e = AlgebraElement::gen(*g);
        for (name, theta) in [("σ̃", &sigma as &dyn Fn(AlgebraGen) -> Result<AlgebraElement>), ("φ̃", &phi)] {
            let twice = fkops::map_element(&e, theta).and_then(|x| fkops::map_element(&x, theta));
            t.eq(&twice.ok(), &Some(e.clone()), || format!("{name}² ≠ id on {g}"));
        }
    }
    gens.retain(|g| g.degree.abs() <= 2);
    for &a in &gens {
        for &b in &gens {
            for (name, theta) in [("σ̃", &sigma as &dyn Fn(AlgebraGen) -> Result<AlgebraElement>), ("φ̃", &phi)] {
                let lhs = fkops::map_element(&fock::bracket(a, b), theta);
                let rhs = theta(a).and_then(|ta| theta(b).map(|tb| element_bracket(&ta, &tb)));
                t.eq(&lhs.ok(), &rhs.ok(), || format!("{name} does not preserve [{a}, {b}]"));
            }
        }
    }

    // Intertwining on words of length ≤ 3.
    let mut g_gens = gens.clone();
    g_gens.push(AlgebraGen::d());
    for w in words(&g_gens, 3) {
        let lhs = fkops::g_intertwiner(&apply_word_direct(&w, &v0()));
        let rhs = fkops::twist_word(&w, phi).map(|tw| fkops::apply_element_word(&tw, &v0()));
        t.eq(&lhs.ok(), &rhs.ok(), || format!("G fails to intertwine on {w:?}"));
    }
    for w in words(&gens, 3) {
        let lhs = fkops::f_intertwiner(&apply_word_direct(&w, &FockVector::vacuum1()));
        let rhs = fkops::twist_word(&w, tau_inverse).map(|tw| fkops::apply_element_word(&tw, &v0()));
        t.eq(&lhs.ok(), &rhs.ok(), || format!("F fails to intertwine on {w:?}"));
    }

    t.eq(&fkops::g_intertwiner(&v0()).ok(), &Some(v0()), || "G(v_Λ0) ≠ v_Λ0".into());
    t.eq(&fkops::f_intertwiner(&FockVector::vacuum1()).ok(), &Some(v0()), || "F(v_Λ1) ≠ v_Λ0".into());
    for n in [2, 4, 6] {
        t.eq(&fkops::g_intertwiner(&cpl::make_wn(n)).ok(), &cpl::make_vn(n).ok(), || format!("G(w_{n}) ≠ v_{n}"));
    }
    for n in (1..=n_max).step_by(2) {
        for x in enum_p(n).into_iter().filter(IndexTriple::is_stable) {
            let lower = xi(n - 1, x.k() - 1, x.lam().clone());
            let lhs = cpl::cl_vec(&x).and_then(|v| fkops::f_intertwiner(&v));
            t.eq(&lhs.ok(), &cpl::cl_vec(&lower).ok(), || format!("F(CL({x})) ≠ CL({lower})"));
        }
    }
    for n in 0..=6u32 {
        let bbar: Vec<FockVector> = enum_p(n).iter().filter_map(|x| cpl::bbar_vec(x).ok()).collect();
        t.eq(&linalg::rank(&bbar), &(1usize << n), || format!("rank of B̄ over 𝔓({n})"));
        if n % 2 == 0 {
            for x in enum_p(n) {
                let g = fkops::g_intertwiner(&cpl::b_vec(&x));
                t.eq(&g.ok(), &cpl::bbar_vec(&x).ok(), || format!("G(B({x})) ≠ B̄({x})"));
            }
        }
    }
}

fn stability(t: &mut Tally, n_max: u32) {
    for n in 0..=n_max {
        let report = limit::check_stability(n);
        t.checked += report.checked;
        for v in report.violations {
            t.failures.push(format!("{}: {}", v.xi, v.reason));
        }
    }
    let x: IndexTriple = "4:2:2,1".parse().unwrap();
    t.check(!x.is_stable(), || "4:2:2,1 reported stable".into());
    let differ = matches!((cpl::cl_vec(&x), cpl::cl_vec(&x.psi())), (Ok(a), Ok(b)) if a != b);
    t.check(differ, || "negative control: CL(4:2:2,1) = CL(6:3:2,1)".into());
}

fn multiplicities(t: &mut Tally, n_max: u32) {
    for d in 0..=7u32 {
        for j in -3..=3i64 {
            let mu = &weights::translate_half_steps(&AffineWeight::lambda0(), 2 * j) - &AffineWeight::new(0, 0, int(d as i64));
            t.eq(&fock::count_states_of_weight(&mu), &partition_count(d), || format!("dim L(Λ0) at j={j} d={d}"));
        }
    }
    for n in (0..=n_max).step_by(2) {
        for x in enum_p(n) {
            let w = weights::weight_of_cl(&x);
            let j = x.k() as i64 - n as i64 / 2;
            let d = x.lam().weight() as i64;
            let shape = &(&AffineWeight::lambda0() + &AffineWeight::alpha1().scale(j)) - &AffineWeight::new(0, 0, int(j * j + d));
            t.eq(&w, &shape, || format!("weight of CL({x}) is not Λ0 + jα1 − (j² + d)δ"));
        }
    }
}

fn limit_suite(t: &mut Tally, dmax: u32) {
    let Some(entries) = t.ok(limit::basis_up_to(dmax), || format!("basis_up_to({dmax})")) else { return };
    let mut expected_total = 0;
    for j in -3..=3i64 {
        for d in 0..=dmax as i64 {
            if j * j + d <= dmax as i64 {
                expected_total += partition_count(d as u32);
            }
        }
    }
    let total: usize = entries.iter().map(|e| e.vectors.len()).sum();
    t.eq(&total, &expected_total, || format!("|𝓑| up to {dmax}"));
    for e in &entries {
        t.eq(&e.vectors.len(), &partition_count(e.d), || format!("|𝓑_μ| at j={} d={}", e.j, e.d));
        t.eq(&e.chosen_n, &(2 * (e.d + e.j.unsigned_abs() as u32)), || format!("chosen n at j={} d={}", e.j, e.d));
        let space = fock::count_states_of_weight(&e.mu);
        t.eq(&space, &e.vectors.len(), || format!("𝓑_μ does not fill the weight space at j={} d={}", e.j, e.d));
        for sv in &e.vectors {
            let closed = fkops::translate(e.j, &straighten::f_lambda(sv.xi.lam()).on_vacuum());
            if let Some(closed) = t.ok(closed, || format!("T({}) f_λ", e.j)) {
                t.eq(&sv.vector, &closed, || format!("CL({}) ≠ T({}) f_λ v_Λ0", sv.xi, e.j));
            }
        }
    }
    for j in -1..=1 {
        for d in 0..=3 {
            let e = t.ok(limit::stable_basis_odd_at(j, d), || format!("odd 𝓑_μ at j={j} d={d}"));
            if let Some(e) = e {
                t.eq(&e.vectors.len(), &partition_count(d), || format!("odd |𝓑_μ| at j={j} d={d}"));
            }
        }
    }
}
