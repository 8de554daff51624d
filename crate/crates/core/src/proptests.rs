//! Randomised invariants. These live in the library's test harness so they
//! run even when the acceptance target reports a red criterion.

use proptest::prelude::*;

use crate::combinat::choose2;
use crate::multigraph::{are_clones, clone_saturate, in_g_family, in_h_family, max_s_set_sum, raise_min_weights};
use crate::search::{brute_force_oracle, count_family, ex_pi_search, ex_sigma_search, Mode};
use crate::{Multigraph, Params, SearchConfig, VertexSet};

fn graph(n_max: usize, w_max: u32) -> impl Strategy<Value = Multigraph> {
    (2..=n_max).prop_flat_map(move |n| {
        prop::collection::vec(0..=w_max, choose2(n)).prop_map(move |w| Multigraph::from_weights(n, w).unwrap())
    })
}

fn graph_and_split(n_max: usize) -> impl Strategy<Value = (Multigraph, VertexSet, VertexSet)> {
    graph(n_max, 4).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), prop::collection::vec(0..3u8, n)).prop_map(|(g, side)| {
            let pick = |t: u8| side.iter().enumerate().filter(|&(_, &s)| s == t).map(|(v, _)| v).collect();
            (g, pick(0), pick(1))
        })
    })
}

fn shuffled(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sums_and_products_split_over_disjoint_sets((g, x, y) in graph_and_split(9)) {
        let xy = x.union(y);
        prop_assert_eq!(
            g.edge_sum(xy).unwrap(),
            g.edge_sum(x).unwrap() + g.edge_sum(y).unwrap() + g.cross_sum(x, y).unwrap()
        );
        prop_assert_eq!(
            g.edge_product(xy).unwrap(),
            g.edge_product(x).unwrap() * g.edge_product(y).unwrap() * g.cross_product(x, y).unwrap()
        );
    }

    #[test]
    fn levels_partition_the_pairs(g in graph(9, 5)) {
        let mut total = 0;
        let mut mass = 0u64;
        for m in 0..=5 {
            let e = g.level_subgraph(m).edge_count();
            total += e;
            mass += u64::from(m) * e as u64;
        }
        prop_assert_eq!(total, choose2(g.n()));
        prop_assert_eq!(mass, g.total());
    }

    #[test]
    fn clone_relation_is_symmetric(g in graph(7, 2), u in 0..7usize, v in 0..7usize) {
        let (u, v) = (u % g.n(), v % g.n());
        prop_assume!(u != v);
        prop_assert_eq!(are_clones(&g, u, v).unwrap(), are_clones(&g, v, u).unwrap());
    }

    #[test]
    fn relabelling_keeps_totals((g, perm) in graph(8, 4).prop_flat_map(|g| { let n = g.n(); (Just(g), shuffled(n)) })) {
        let h = g.permuted(&perm).unwrap();
        prop_assert_eq!(h.product(), g.product());
        prop_assert_eq!(h.total(), g.total());
        for s in 2..=g.n() {
            prop_assert_eq!(max_s_set_sum(&h, s).unwrap().0, max_s_set_sum(&g, s).unwrap().0);
        }
    }

    #[test]
    fn transformations_keep_family_and_raise_product(
        (a, d) in prop_oneof![Just((2u32, 1u32)), Just((3, 1)), Just((3, 2))],
        w in prop::collection::vec(0..=4u32, choose2(5)),
    ) {
        let params = Params::new(a, 2, d).unwrap();
        let s = params.s_base();
        let g = Multigraph::from_weights(5, w.into_iter().map(|x| x.min(a + 1)).collect()).unwrap();
        prop_assume!(in_g_family(&g, params, s).unwrap());
        let raised = raise_min_weights(&g, params, s).unwrap();
        prop_assert!(raised.product() >= g.product());
        prop_assert!(in_g_family(&raised, params, s).unwrap());
        let out = clone_saturate(&raised, params, s).unwrap();
        prop_assert!(out.product() >= raised.product());
        prop_assert!(in_h_family(&out, params, s).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn search_witnesses_are_sound_and_optimal(n in 3..=4usize, s_off in 0..=2usize, q in 0..=12u64) {
        let s = 2 + s_off.min(n - 2);
        let cap = q as u32;
        let cfg = SearchConfig::default();
        for (mode, out) in [
            (Mode::Sum, ex_sigma_search(n, s, q, &cfg).unwrap()),
            (Mode::Product, ex_pi_search(n, s, q, &cfg).unwrap()),
        ] {
            prop_assert!(out.optimal);
            prop_assert!(out.check_witness().unwrap());
            let oracle = brute_force_oracle(n, s, q, mode, cap, 1 << 26).unwrap();
            prop_assert_eq!(&out.value, &oracle.value);
        }
        let count = count_family(n, s, q, 1 << 26).unwrap();
        let oracle = brute_force_oracle(n, s, q, Mode::Count, cap, 1 << 26).unwrap();
        prop_assert_eq!(count.value, oracle.value);
    }
}
