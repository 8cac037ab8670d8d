use proptest::prelude::*;

use cplstab::combinatorics::{enum_p, partitions_in_box, partitions_of, set_partitions_of_type, IndexTriple, Partition};
use cplstab::fock::{apply_word, apply_word_direct, AlgebraGen, FockState, FockVector, Letter};
use cplstab::rational::frac;
use cplstab::straighten::{self, HeisenbergPoly};
use cplstab::weights;

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

fn partition() -> impl Strategy<Value = Partition> {
    prop::collection::vec(1u32..=4, 0..=3).prop_map(Partition::from_unsorted)
}

fn triple(max_n: u32) -> impl Strategy<Value = IndexTriple> {
    (0..=max_n, any::<prop::sample::Index>()).prop_map(|(n, i)| {
        let all = enum_p(n);
        all[i.index(all.len())].clone()
    })
}

fn fock_vector() -> impl Strategy<Value = FockVector> {
    prop::collection::vec((-3i64..=3, partition(), -6i64..=6, 1i64..=4), 0..5).prop_map(|terms| {
        FockVector::from_terms(terms.into_iter().map(|(m, mu, a, b)| (FockState::new(m, mu), frac(a, b))))
    })
}

fn letter() -> impl Strategy<Value = Letter> {
    (0u8..3, -2i64..=2, 1u32..=2).prop_map(|(kind, m, p)| {
        let g = match kind {
            0 => AlgebraGen::x(m),
            1 => AlgebraGen::y(m),
            _ => AlgebraGen::h(m),
        };
        (g, p)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn box_counts_are_binomial(a in 0u32..=5, b in 0u32..=5) {
        prop_assert_eq!(partitions_in_box(a, b).len() as u64, binomial((a + b) as u64, a as u64));
    }

    #[test]
    fn set_partition_counts(r in 1usize..=6, i in any::<prop::sample::Index>()) {
        let all = partitions_of(r as u32);
        let pi = &all[i.index(all.len())];
        let mut denom = 1;
        for &part in pi.parts() {
            denom *= factorial(part as u64);
        }
        for mult in pi.multiplicities().values() {
            denom *= factorial(*mult as u64);
        }
        let found = set_partitions_of_type(r, pi).unwrap();
        prop_assert_eq!(found.len() as u64, factorial(r as u64) / denom);
        for b in &found {
            prop_assert_eq!(&b.block_type(), pi);
        }
    }

    #[test]
    fn complement_is_an_involution(xi in triple(9)) {
        let c = xi.complement();
        prop_assert_eq!((c.n(), c.k()), (xi.n(), xi.k()));
        prop_assert_eq!(c.lam().weight() + xi.lam().weight(), xi.k() * (xi.n() - xi.k()));
        prop_assert_eq!(c.complement(), xi);
    }

    #[test]
    fn psi_preserves_stability_and_weight(xi in triple(10)) {
        prop_assume!(xi.is_stable());
        let image = xi.psi();
        prop_assert!(image.is_stable());
        prop_assert_eq!(weights::weight_of_cl(&image), weights::weight_of_cl(&xi));
    }

    #[test]
    fn fast_h_pq_matches_double_sum(
        p in prop::collection::vec(-3i64..=2, 1..=4),
        shift in prop::collection::vec(1i64..=4, 4),
        i in any::<prop::sample::Index>(),
    ) {
        let q: Vec<i64> = p.iter().zip(&shift).map(|(a, s)| a + s).collect();
        let all = partitions_of(p.len() as u32);
        let pi = &all[i.index(all.len())];
        prop_assert_eq!(straighten::h_pq(pi, &p, &q).ok(), straighten::h_pq_naive(pi, &p, &q).ok());
    }

    #[test]
    fn straightening_ignores_order(
        base in 1i64..=5,
        dp in prop::collection::vec(0i64..=1, 2..=4),
        dq in prop::collection::vec(0i64..=1, 4),
        rot in 0usize..4,
    ) {
        let p: Vec<i64> = dp.iter().map(|d| base - 1 - d).collect();
        let q: Vec<i64> = dq[..p.len()].iter().map(|d| base + d).collect();
        prop_assume!(straighten::check_hypotheses(&p, &q).is_ok());
        let (mut p2, mut q2) = (p.clone(), q.clone());
        p2.rotate_left(rot % p.len());
        q2.reverse();
        prop_assert_eq!(straighten::straighten_yx(&p, &q).unwrap(), straighten::straighten_yx(&p2, &q2).unwrap());
    }

    #[test]
    fn fock_vector_round_trips(v in fock_vector()) {
        prop_assert_eq!(&FockVector::from_json(&v.to_json()).unwrap(), &v);
        prop_assert_eq!(&v.to_string().parse::<FockVector>().unwrap(), &v);
    }

    #[test]
    fn heisenberg_poly_round_trips(terms in prop::collection::vec((partition(), -5i64..=5, 1i64..=3), 0..4)) {
        let mut poly = HeisenbergPoly::zero();
        for (mu, a, b) in terms {
            poly.add_term(mu, frac(a, b));
        }
        prop_assert_eq!(HeisenbergPoly::from_json(&poly.to_json()).unwrap(), poly);
    }

    #[test]
    fn triple_text_round_trips(xi in triple(8)) {
        prop_assert_eq!(xi.to_string().parse::<IndexTriple>().unwrap(), xi);
    }

    #[test]
    fn wedge_words_match_lattice_words(
        word in prop::collection::vec(letter(), 0..=3),
        m in -2i64..=2,
        mu in partition(),
    ) {
        prop_assume!(mu.weight() <= 3);
        let v = FockVector::basis(FockState::new(m, mu));
        prop_assert_eq!(apply_word(&word, &v), apply_word_direct(&word, &v));
    }
}
