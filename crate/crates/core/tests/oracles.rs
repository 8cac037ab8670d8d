use cplstab::combinatorics::{enum_p, partition_count, IndexTriple};
use cplstab::cpl;
use cplstab::fkops;
use cplstab::fock::{act, apply_word_direct, AlgebraGen, FockVector};
use cplstab::rational::{frac, int};
use cplstab::straighten;
use cplstab::Rational;

fn xi(s: &str) -> IndexTriple {
    s.parse().unwrap()
}

/// Euler's pentagonal recurrence, independent of the library's table.
fn pentagonal_count(n: usize) -> Vec<i64> {
    let mut p = vec![0i64; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut k = 1i64;
        loop {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > m {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            p[m] += sign * p[m - g1];
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= m {
                p[m] += sign * p[m - g2];
            }
            k += 1;
        }
    }
    p
}

/// `exp(±E)` evaluated with the lattice-model action only.
fn exp_lattice(gen: AlgebraGen, negative: bool, v: &FockVector) -> FockVector {
    let mut total = v.clone();
    let mut term = v.clone();
    for j in 1..64i64 {
        term = act(gen, &term).scale(&frac(1, j));
        if term.is_zero() {
            return total;
        }
        let c = if negative && j % 2 == 1 { int(-1) } else { int(1) };
        total = total.add(&term.scale(&c));
    }
    panic!("series did not terminate");
}

fn translate_lattice(p: i64, v: &FockVector) -> FockVector {
    let unit = if p >= 0 { fkops::t_unit() } else { fkops::t_unit().inverse() };
    let mut cur = v.clone();
    for _ in 0..p.unsigned_abs() {
        for f in unit.factors().iter().rev() {
            cur = exp_lattice(f.gen, f.negative, &cur);
        }
    }
    cur
}

#[test]
fn partition_counts() {
    let p = pentagonal_count(40);
    for d in 0..=40 {
        assert_eq!(partition_count(d as u32) as i64, p[d], "p({d})");
    }
}

#[test]
fn weyl_module_dimensions() {
    for n in 0..=12 {
        assert_eq!(enum_p(n).len(), 1 << n);
    }
}

#[test]
fn counterexample_vectors() {
    let a = cpl::cl_vec_checked(&xi("4:2:2,1")).unwrap();
    let b = cpl::cl_vec_checked(&xi("6:3:2,1")).unwrap();
    let expect_a: FockVector = "1/3·h[-3]·e{0} − 1/3·h[-1]^3·e{0}".parse().unwrap();
    let expect_b: FockVector = "h[-3]·e{0} + h[-2]·h[-1]·e{0}".parse().unwrap();
    assert_eq!(a, expect_a);
    assert_eq!(b, expect_b);
    assert_ne!(a, b);
}

#[test]
fn translation_against_lattice_series() {
    let lower = cpl::cl_vec(&xi("4:2:1")).unwrap();
    let upper = cpl::cl_vec(&xi("6:4:1")).unwrap();
    assert_eq!(translate_lattice(1, &lower), upper);
    assert_eq!(fkops::translate(1, &lower).unwrap(), upper);
    assert_eq!(fkops::translate(-1, &upper).unwrap(), lower);
    assert_eq!(fkops::offdiag_reduce(&xi("6:4:1")).unwrap(), (xi("4:2:1"), 1));
    for p in -2..=2 {
        let v = FockVector::vacuum0();
        assert_eq!(fkops::translate(p, &v).unwrap(), translate_lattice(p, &v), "T({p}) v_Λ0");
    }
}

#[test]
fn straightening_against_lattice_words() {
    for (p, q) in [(vec![0], vec![1]), (vec![1, 1], vec![2, 2]), (vec![3, 2], vec![4, 4]), (vec![2, 2, 2], vec![3, 3, 3])] {
        let mut word: Vec<_> = p.iter().map(|&a| (AlgebraGen::y(a), 1)).collect();
        word.extend(q.iter().map(|&b| (AlgebraGen::x(-b), 1)));
        let direct = apply_word_direct(&word, &FockVector::vacuum0());
        let poly = straighten::straighten_yx(&p, &q).unwrap();
        assert_eq!(poly.on_vacuum(), direct, "p = {p:?}, q = {q:?}");
    }
}

#[test]
fn normalization_constants() {
    let data = cpl::normalization(&xi("6:3:2,2,1"));
    assert_eq!(data.m, vec![0, 1, 2, 0]);
    assert_eq!(data.z, Rational::new(data.eps.into(), 2.into()));
}
