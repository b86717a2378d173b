use ropack::analysis::{p_first_exact, p_ordered_pair_exact, p_pair_exact};
use ropack::simulator::enumerate_exact;

#[test]
fn closed_forms_match_enumeration_for_small_n() {
    for n in 2..=7 {
        for cn in 1..n {
            for dn in cn + 1..=n {
                let stats = enumerate_exact(n, cn, dn).unwrap();
                for i in 1..=n {
                    assert_eq!(
                        p_first_exact(n, cn, dn, i).unwrap(),
                        stats.p_first(i),
                        "first n={n} cn={cn} dn={dn} i={i}"
                    );
                }
                for i in 1..=n {
                    for j in 1..=n {
                        if i == j {
                            continue;
                        }
                        assert_eq!(
                            p_ordered_pair_exact(n, cn, dn, i, j).unwrap(),
                            stats.p_pair(i, j),
                            "pair n={n} cn={cn} dn={dn} ({i},{j})"
                        );
                    }
                }
                for j in 2..=n {
                    assert_eq!(p_pair_exact(n, cn, dn, j).unwrap(), stats.p_pair(1, j));
                }
            }
        }
    }
}

#[test]
fn first_acceptance_sums_to_at_most_one() {
    let stats = enumerate_exact(7, 2, 6).unwrap();
    let total: u64 = stats.first_counts.iter().sum();
    assert!(total <= stats.total);
}
