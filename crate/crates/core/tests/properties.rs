use std::collections::HashSet;

use involfact::counting::{count_factorizations, inner_factor, log_count};
use involfact::factorize::enumerate_factorizations;
use involfact::oracle::all_permutations;
use involfact::{Permutation, SeededRng};
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn permutation(max_n: usize) -> impl Strategy<Value = Permutation> {
    (0..=max_n)
        .prop_flat_map(|n| Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
        .prop_map(|images| Permutation::from_images(images).unwrap())
}

fn same_degree_triple(max_n: usize) -> impl Strategy<Value = (Permutation, Permutation, Permutation)> {
    (1..=max_n).prop_flat_map(|n| {
        let p = || Just((0..n).collect::<Vec<usize>>()).prop_shuffle();
        (p(), p(), p()).prop_map(|(a, b, c)| {
            (
                Permutation::from_images(a).unwrap(),
                Permutation::from_images(b).unwrap(),
                Permutation::from_images(c).unwrap(),
            )
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn compose_is_associative((p, q, r) in same_degree_triple(12)) {
        let left = p.compose(&q).unwrap().compose(&r).unwrap();
        let right = p.compose(&q.compose(&r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn inverse_cancels(p in permutation(10)) {
        prop_assert!(p.compose(&p.inverse()).unwrap().is_identity());
        prop_assert!(p.inverse().compose(&p).unwrap().is_identity());
        prop_assert_eq!(p.inverse().inverse(), p);
    }

    #[test]
    fn decomposition_round_trips(p in permutation(15)) {
        let dec = p.cycle_decomposition();
        let total: usize = dec.cycles().iter().map(Vec::len).sum();
        prop_assert_eq!(total, p.degree());
        let weighted: usize = p.cycle_type().iter().map(|(k, c)| k * c).sum();
        prop_assert_eq!(weighted, p.degree());
        for cycle in dec.cycles() {
            prop_assert_eq!(cycle[0], *cycle.iter().min().unwrap());
            for (i, &x) in cycle.iter().enumerate() {
                prop_assert_eq!(p.apply(x), cycle[(i + 1) % cycle.len()]);
            }
        }
        let mins: Vec<usize> = dec.cycles().iter().map(|c| c[0]).collect();
        prop_assert!(mins.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(Permutation::from_cycles(p.degree(), dec.cycles()).unwrap(), p.clone());
        let text = p.to_cycle_string(true);
        prop_assert_eq!(Permutation::parse_cycles(&text, Some(p.degree()), true).unwrap(), p);
    }

    #[test]
    fn formula_depends_only_on_cycle_type(p in permutation(30), seed in any::<u64>()) {
        // conjugating by a random permutation preserves the count
        let mut rng = SeededRng::new(seed);
        let g = involfact::sample_permutation(p.degree(), &mut rng);
        let conj = g.compose(&p).unwrap().compose(&g.inverse()).unwrap();
        prop_assert_eq!(count_factorizations(&conj.cycle_type()), count_factorizations(&p.cycle_type()));
    }

    #[test]
    fn log_count_is_accurate(k in 1usize..40, c in 0usize..60) {
        let t = involfact::CycleType::from_counts([(k, c), (1, 2)]).unwrap();
        let exact = count_factorizations(&t);
        let via_digits = {
            let s = exact.to_string();
            let lead = s.len().min(17);
            let mantissa: f64 = s[..lead].parse().unwrap();
            mantissa.ln() + (s.len() - lead) as f64 * std::f64::consts::LN_10
        };
        let got = log_count(&t);
        prop_assert!((got - via_digits).abs() <= 1e-9 * (1.0 + via_digits.abs()));
        prop_assert!(inner_factor(k, c) >= num_traits::pow(num_bigint::BigUint::from(k), c));
    }
}

#[test]
fn involution_predicate_matches_cycle_lengths_on_s5() {
    for p in all_permutations(5) {
        let short = p.cycle_decomposition().cycles().iter().all(|c| c.len() <= 2);
        assert_eq!(p.is_involution(), short, "{p:?}");
    }
}

#[test]
fn enumeration_agrees_with_formula_on_random_inputs() {
    let mut rng = SeededRng::new(0xfac7);
    for _ in 0..200 {
        let n = rng.below(11);
        let sigma = involfact::sample_permutation(n, &mut rng);
        let expected = count_factorizations(&sigma.cycle_type()).to_usize().unwrap();
        assert_eq!(enumerate_factorizations(&sigma).count(), expected, "{sigma:?}");
    }
}

#[test]
fn yielded_pairs_are_distinct_and_respect_cycle_structure() {
    let mut rng = SeededRng::new(17);
    for n in 0..=8 {
        for _ in 0..20 {
            let sigma = involfact::sample_permutation(n, &mut rng);
            let cycles = sigma.cycle_decomposition();
            let point_sets: HashSet<Vec<usize>> = cycles
                .cycles()
                .iter()
                .map(|c| {
                    let mut s = c.clone();
                    s.sort_unstable();
                    s
                })
                .collect();
            let mut seen = HashSet::new();
            for pair in enumerate_factorizations(&sigma) {
                assert_eq!(pair.product(), sigma);
                for cycle in cycles.cycles() {
                    let image = |t: &Permutation| {
                        let mut v: Vec<usize> = cycle.iter().map(|&x| t.apply(x)).collect();
                        v.sort_unstable();
                        v
                    };
                    let (i1, i2) = (image(pair.tau1()), image(pair.tau2()));
                    assert_eq!(i1, i2);
                    assert!(point_sets.contains(&i1));
                    assert_eq!(i1.len(), cycle.len());
                }
                assert!(seen.insert((pair.tau1().images().to_vec(), pair.tau2().images().to_vec())));
            }
            assert_eq!(
                seen.len(),
                count_factorizations(&sigma.cycle_type()).to_usize().unwrap()
            );
        }
    }
}

#[test]
fn enumeration_order_is_deterministic() {
    let sigma = Permutation::parse_cycles("(0,1)(2,3)(4,5)(6,7,8)(9,10,11)", None, false).unwrap();
    let a: Vec<_> = enumerate_factorizations(&sigma).collect();
    let b: Vec<_> = enumerate_factorizations(&sigma).collect();
    assert_eq!(a, b);
    // first pair: nothing exchanged, every phase at t = 1
    let first = &a[0];
    assert_eq!(first.tau2().apply(0), 1);
    assert_eq!(first.tau2().apply(6), 7);
}
