mod common;

use common::*;
use rand::Rng;
use ropack::instance::{GapInstance, GapOption, KnapsackInstance, KnapsackItem};
use ropack::oracles::simplex::maximize;
use ropack::oracles::{
    gap_lp1, gap_opt_fractional, gap_opt_fractional_dense, gap_opt_integral,
    knapsack_opt_fractional, knapsack_opt_integral, matching_opt, SolverCaps,
};
use ropack::rational::{int, ratio};
use ropack::split::{classify_gap, classify_knapsack};

fn knap(cap: i64, sizes: &[i64], profits: &[i64]) -> KnapsackInstance {
    let items = sizes
        .iter()
        .zip(profits)
        .enumerate()
        .map(|(i, (&s, &p))| KnapsackItem::new(i as u32, int(s), int(p)))
        .collect();
    KnapsackInstance::new(int(cap), items).unwrap()
}

#[test]
fn split_optima_bound_the_whole() {
    let caps = SolverCaps::default();
    let inst = knap(9, &[3, 4, 5], &[1, 2, 3]);
    let split = classify_knapsack(&inst, &ratio(1, 3)).unwrap();
    let opt = knapsack_opt_integral(&inst, &caps).unwrap().value;
    let opt_l = knapsack_opt_integral(&split.large, &caps).unwrap().value;
    let opt_s = knapsack_opt_integral(&split.small, &caps).unwrap().value;
    assert_eq!(opt, int(5));
    assert_eq!(opt, subset_enumeration(&inst));
    assert_eq!(opt_l, int(5));
    assert_eq!(opt_s, int(1));
    assert!(opt <= opt_l + opt_s);
}

#[test]
fn gap_split_optima_bound_the_whole() {
    let caps = SolverCaps::default();
    let inst = GapInstance::new(
        vec![int(10), int(8)],
        vec![
            vec![GapOption::new(int(7), int(6)), GapOption::new(int(3), int(2))],
            vec![GapOption::new(int(4), int(3)), GapOption::new(int(6), int(5))],
            vec![GapOption::new(int(5), int(4)), GapOption::new(int(2), int(3))],
        ],
    )
    .unwrap();
    let split = classify_gap(&inst, &ratio(1, 2)).unwrap();
    let opt = gap_opt_integral(&inst, &caps).unwrap().value;
    assert_eq!(opt, assignment_enumeration(&inst));
    let opt_l = gap_opt_integral(&split.large, &caps).unwrap().value;
    let opt_s = gap_opt_integral(&split.small, &caps).unwrap().value;
    assert!(opt <= opt_l + opt_s);
}

#[test]
fn branch_and_bound_matches_subset_enumeration() {
    let mut rng = rng(11);
    for _ in 0..100 {
        let n = rng.random_range(1..=12);
        let inst = random_knapsack(&mut rng, n);
        let opt = knapsack_opt_integral(&inst, &SolverCaps::default()).unwrap();
        assert_eq!(opt.value, subset_enumeration(&inst));
        let chosen_size: ropack::Rational = inst
            .items()
            .iter()
            .filter(|i| opt.chosen.contains(&i.id))
            .map(|i| &i.size)
            .sum();
        assert!(&chosen_size <= inst.capacity());
        assert!(knapsack_opt_fractional(&inst).value >= opt.value);
    }
}

#[test]
fn simplex_matches_vertex_enumeration() {
    let mut rng = rng(12);
    for _ in 0..100 {
        let vars = rng.random_range(1..=4);
        let rows = rng.random_range(1..=6 - vars);
        let lp = random_lp(&mut rng, vars, rows);
        let sol = maximize(&lp).unwrap();
        assert!(lp.is_feasible(&sol.x));
        assert_eq!(lp.evaluate(&sol.x), sol.value);
        assert_eq!(sol.value, vertex_enumeration(&lp));
    }
}

#[test]
fn small_gap_relaxation_matches_vertex_enumeration() {
    let mut rng = rng(13);
    for _ in 0..30 {
        let inst = random_gap(&mut rng, 3, 2);
        let lp = gap_lp1(&inst);
        let frac = gap_opt_fractional(&inst);
        assert_eq!(frac.value, vertex_enumeration(&lp));
        assert_eq!(frac.value, gap_opt_fractional_dense(&inst).value);
    }
}

#[test]
fn structured_gap_relaxation_matches_dense_simplex() {
    let mut rng = rng(14);
    for _ in 0..60 {
        let n = rng.random_range(1..=9);
        let m = rng.random_range(1..=4);
        let inst = random_gap(&mut rng, n, m);
        let frac = gap_opt_fractional(&inst);
        let dense = maximize(&gap_lp1(&inst)).unwrap();
        assert_eq!(frac.value, dense.value);
        if n <= 6 {
            assert!(frac.value >= assignment_enumeration(&inst));
        }
    }
}

#[test]
fn gap_enumeration_matches_independent_scan() {
    let mut rng = rng(15);
    for _ in 0..60 {
        let n = rng.random_range(1..=6);
        let m = rng.random_range(1..=3);
        let inst = random_gap(&mut rng, n, m);
        let opt = gap_opt_integral(&inst, &SolverCaps::default()).unwrap();
        assert_eq!(opt.value, assignment_enumeration(&inst));
    }
}

#[test]
fn hungarian_matches_injection_enumeration() {
    let mut rng = rng(16);
    for _ in 0..100 {
        let rows = rng.random_range(1..=5);
        let cols = rng.random_range(1..=4);
        let w = random_weights(&mut rng, rows, cols);
        let matching = matching_opt(&w).unwrap();
        assert_eq!(matching.weight, injection_enumeration(&w));
        let mut used_rows = std::collections::BTreeSet::new();
        let mut used_cols = std::collections::BTreeSet::new();
        for &(r, c) in &matching.edges {
            assert!(used_rows.insert(r) && used_cols.insert(c));
        }
    }
}

#[test]
fn fixed_matching_table() {
    let w = vec![
        vec![int(5), int(8), int(1)],
        vec![int(7), int(6), int(2)],
        vec![int(3), int(4), int(9)],
    ];
    assert_eq!(matching_opt(&w).unwrap().weight, int(24));
}
