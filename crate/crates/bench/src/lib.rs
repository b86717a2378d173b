//! Shared fixtures for the benchmarks.

use ropack::online::SeqParams;
use ropack::rational::{parse_rational, ratio};
use ropack::simulator::{generate, FamilyKind, InstanceFamily};
use ropack::{GapInstance, Instance, KnapsackInstance};

pub const SEED: u64 = 2024;

pub fn knapsack(kind: FamilyKind, n: usize) -> KnapsackInstance {
    match generate(&InstanceFamily::new(kind, n), SEED).expect("valid family") {
        Instance::Knapsack(k) => k,
        Instance::Gap(_) => panic!("{kind} is a GAP family"),
    }
}

pub fn gap(kind: FamilyKind, n: usize, m: usize) -> GapInstance {
    match generate(&InstanceFamily::new(kind, n).with_m(m), SEED).expect("valid family") {
        Instance::Gap(g) => g,
        Instance::Knapsack(_) => panic!("{kind} is a knapsack family"),
    }
}

/// Reference parameters: `(0.42291, 0.64570)` with `δ = 1/3` for knapsack,
/// `(0.5261, 0.6906)` with `δ = 1/2` for GAP.
pub fn params(n: usize, gap: bool) -> SeqParams {
    let (c, d, delta) = if gap {
        ("0.5261", "0.6906", ratio(1, 2))
    } else {
        ("0.42291", "0.64570", ratio(1, 3))
    };
    SeqParams::new(
        parse_rational(c).expect("literal"),
        parse_rational(d).expect("literal"),
        delta,
        n,
    )
    .expect("valid parameters")
}
