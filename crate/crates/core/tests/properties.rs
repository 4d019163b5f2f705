use std::sync::OnceLock;

use num_rational::Rational64;
use proptest::prelude::*;

use hecke_core::apartment::{evaluate_root, key_inequality_holds, threshold, ApartmentPoint};
use hecke_core::iwahori_hecke::{HeckeElement, IwahoriHecke};
use hecke_core::laurent::LaurentPoly;
use hecke_core::padic_groups::ValuationGroupScheme;
use hecke_core::root_datum::{Coweight, RootDatum, WeylGroup};
use hecke_core::torus_center::{Pair, PairAction};

const NAMES: [&str; 6] = ["a1", "a2", "b2", "g2", "gl2", "gl3"];

fn data() -> &'static Vec<(RootDatum, WeylGroup)> {
    static DATA: OnceLock<Vec<(RootDatum, WeylGroup)>> = OnceLock::new();
    DATA.get_or_init(|| {
        NAMES
            .iter()
            .map(|n| {
                let d = RootDatum::named(n).unwrap();
                let w = d.weyl_group().unwrap();
                (d, w)
            })
            .collect()
    })
}

fn coweight(rank: usize, seed: &[i64]) -> Coweight {
    Coweight(seed.iter().cycle().take(rank).copied().collect())
}

fn point(rank: usize, nums: &[i64], den: i64) -> ApartmentPoint {
    ApartmentPoint { offset: nums.iter().cycle().take(rank).map(|&n| Rational64::new(n, den)).collect() }
}

fn entries(range: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(range, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn reflection_is_an_involution(d in 0..NAMES.len(), a in 0usize..64, seed in entries(-5..=5)) {
        let (datum, _) = &data()[d];
        let a = a % datum.num_roots();
        let lambda = coweight(datum.rank, &seed);
        let once = datum.reflect(a, &lambda);
        prop_assert_eq!(datum.reflect(a, &once), lambda.clone());
        prop_assert_eq!(datum.pair(a, &once), -datum.pair(a, &lambda));
    }

    #[test]
    fn weyl_action_preserves_pairing(d in 0..NAMES.len(), w in 0usize..64, a in 0usize..64, seed in entries(-4..=4)) {
        let (datum, weyl) = &data()[d];
        let w = &weyl.elements[w % weyl.len()];
        let a = a % datum.num_roots();
        let lambda = coweight(datum.rank, &seed);
        prop_assert_eq!(datum.pair(datum.act_on_root(w, a), &w.act(&lambda)), datum.pair(a, &lambda));
    }

    #[test]
    fn orbit_stabilizer(d in 0..NAMES.len(), seed in entries(-3..=3)) {
        let (datum, weyl) = &data()[d];
        let lambda = coweight(datum.rank, &seed);
        let stab = weyl.elements.iter().filter(|w| w.act(&lambda) == lambda).count();
        prop_assert_eq!(datum.weyl_orbit(&lambda).len() * stab, weyl.len());
    }

    #[test]
    fn coset_decomposition(d in 0..NAMES.len(), w in 0usize..64, mask in 0u32..8) {
        let (datum, weyl) = &data()[d];
        let w = &weyl.elements[w % weyl.len()];
        let theta: Vec<usize> = (0..datum.semisimple_rank()).filter(|i| mask >> i & 1 == 1).collect();
        let (w1, w2) = datum.coset_decompose(w, &theta);
        prop_assert_eq!(w1.compose(&w2).action, w.action.clone());
        let in_parabolic = datum.parabolic_subgroup(&theta).iter().any(|u| u.action == w1.action);
        prop_assert!(in_parabolic);
        let w2_inv = datum.inverse(&w2);
        for &i in &theta {
            prop_assert!(datum.roots[datum.act_on_root(&w2_inv, datum.simple[i])].is_positive());
        }
    }

    #[test]
    fn threshold_monotone_and_translation_covariant(
        d in 0..NAMES.len(), a in 0usize..64, nums in entries(-12..=12), den in 1i64..=6,
        r in 1i64..=8, dr in 0i64..=8, seed in entries(-3..=3),
    ) {
        let (datum, _) = &data()[d];
        let a = a % datum.num_roots();
        let x = point(datum.rank, &nums, den);
        let (r1, r2) = (Rational64::new(r, 2), Rational64::new(r + dr, 2));
        prop_assert!(threshold(datum, a, &x, r1) <= threshold(datum, a, &x, r2));
        let lambda = coweight(datum.rank, &seed);
        prop_assert_eq!(
            threshold(datum, a, &x.translate(&lambda), r1),
            threshold(datum, a, &x, r1) - datum.pair(a, &lambda)
        );
    }

    #[test]
    fn thresholds_are_weyl_equivariant(
        d in 0..NAMES.len(), w in 0usize..64, a in 0usize..64, nums in entries(-8..=8), den in 1i64..=4, r in 1i64..=8,
    ) {
        let (datum, weyl) = &data()[d];
        let w = &weyl.elements[w % weyl.len()];
        let a = a % datum.num_roots();
        let x = point(datum.rank, &nums, den);
        let r = Rational64::new(r, 2);
        prop_assert_eq!(threshold(datum, datum.act_on_root(w, a), &x.act(w), r), threshold(datum, a, &x, r));
    }

    // Under 0 ≤ δ < 1, δ = (w₂⁻¹a − a)(x), the threshold at w₂x is the one
    // at x or one less, and it is one less exactly when an integer lies in
    // [r − a(x) − δ, r − a(x)).
    #[test]
    fn key_inequality_bounds_threshold_drop(
        d in 0..NAMES.len(), w in 0usize..64, mask in 0u32..8, nums in entries(-12..=12), den in 1i64..=6, r in 1i64..=4,
    ) {
        let (datum, weyl) = &data()[d];
        let w = &weyl.elements[w % weyl.len()];
        let theta: Vec<usize> = (0..datum.semisimple_rank()).filter(|i| mask >> i & 1 == 1).collect();
        let (_, w2) = datum.coset_decompose(w, &theta);
        let x = point(datum.rank, &nums, den);
        let r = Rational64::new(r, 2);
        let w2_inv = datum.inverse(&w2);
        for a in datum.positive_roots() {
            let delta = evaluate_root(datum, datum.act_on_root(&w2_inv, a), &x) - evaluate_root(datum, a, &x);
            let holds = key_inequality_holds(datum, &x, &w2, a);
            prop_assert_eq!(holds, delta >= Rational64::from_integer(0) && delta < Rational64::from_integer(1));
            if holds {
                let drop = threshold(datum, a, &x, r) - threshold(datum, a, &x.act(&w2), r);
                let y = r - evaluate_root(datum, a, &x);
                let crosses = (y - delta).ceil() < y.ceil();
                prop_assert!((0..=1).contains(&drop));
                prop_assert_eq!(drop == 1, crosses);
            }
        }
    }

    #[test]
    fn volume_is_conjugation_invariant(n in 2usize..=3, raw in prop::collection::vec(0i64..=3, 9), perm in 0usize..6) {
        // Close the bounds under the triangle inequalities first.
        let mut b: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| raw[i * 3 + j]).collect()).collect();
        for _ in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        if i != j && j != k && i != k {
                            b[i][k] = b[i][k].min(b[i][j] + b[j][k]);
                        }
                    }
                    if i != j {
                        b[i][i] = b[i][i].min(b[i][j] + b[j][i]);
                    }
                }
            }
        }
        let k = ValuationGroupScheme::new(b).unwrap();
        let perms: Vec<Vec<usize>> = if n == 2 {
            vec![vec![0, 1], vec![1, 0]]
        } else {
            vec![vec![0, 1, 2], vec![0, 2, 1], vec![1, 0, 2], vec![1, 2, 0], vec![2, 0, 1], vec![2, 1, 0]]
        };
        let sigma = &perms[perm % perms.len()];
        let iw = ValuationGroupScheme::iwahori(n);
        prop_assert_eq!(k.conjugate_by_permutation(sigma).log_volume(&iw), k.log_volume(&iw));
    }

    #[test]
    fn pair_action_is_a_left_action(
        d in 0..NAMES.len(), q in prop::sample::select(vec![2u64, 3, 4, 5]), u in 0usize..64, w in 0usize..64,
        seed in entries(-3..=3), chi in prop::collection::vec(0u64..4, 3),
    ) {
        let (datum, _) = &data()[d];
        let action = PairAction::new(datum, q).unwrap();
        let weyl = &action.weyl;
        let (u, w) = (u % weyl.len(), w % weyl.len());
        let p = Pair {
            lambda: coweight(datum.rank, &seed).0,
            chi: chi.iter().cycle().take(datum.rank).map(|c| c % (q - 1)).collect(),
        };
        prop_assert_eq!(action.act(weyl.mul(u, w), &p), action.act(u, &action.act(w, &p)));
        prop_assert_eq!(action.act(0, &p), p);
    }
}

fn algebras() -> &'static Vec<IwahoriHecke<LaurentPoly>> {
    static ALG: OnceLock<Vec<IwahoriHecke<LaurentPoly>>> = OnceLock::new();
    ALG.get_or_init(|| {
        ["a1", "gl2", "a2"].iter().map(|n| IwahoriHecke::generic(&RootDatum::named(n).unwrap()).unwrap()).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hecke_products_associate(
        d in 0usize..3, lams in prop::collection::vec(entries(-2..=2), 3), ws in prop::collection::vec(0usize..6, 3),
    ) {
        let h = &algebras()[d];
        let [x, y, z]: [HeckeElement<LaurentPoly>; 3] = std::array::from_fn(|i| {
            HeckeElement::basis(coweight(h.datum.rank, &lams[i]), ws[i] % h.weyl.len())
        });
        prop_assert_eq!(h.mul(&h.mul(&x, &y), &z), h.mul(&x, &h.mul(&y, &z)));
        prop_assert_eq!(h.mul(&x, &h.one()), x);
    }

    #[test]
    fn orbit_sums_are_central(d in 0usize..3, seed in entries(-2..=2)) {
        let h = &algebras()[d];
        let z = h.central_element(&coweight(h.datum.rank, &seed));
        prop_assert!(h.is_central(&z.element));
    }
}
