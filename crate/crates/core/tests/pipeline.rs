mod common;

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use valsym::consistency::{enumerate_solutions, DEFAULT_BUDGET};
use valsym::instances::{parse_dimacs, pigeonhole_model, reduce_3sat, reduction_layout};
use valsym::search::{solve, Goal, Mode, Strategy, VarOrder};
use valsym::symmetry::{build_puget, build_puget_with, canonical_form};
use valsym::{Problem, PugetVariant, Value, ValueClassPartition};

use common::{bell, random_partition, symmetric_problem};

/// Restricted growth strings of length `len` whose max stays below
/// `limit`, continuing from `used` values already introduced.
fn rgs_count(len: usize, used: usize, limit: usize) -> u64 {
    if len == 0 {
        return 1;
    }
    let mut total = used as u64 * rgs_count(len - 1, used, limit);
    if used < limit {
        total += rgs_count(len - 1, used + 1, limit);
    }
    total
}

#[test]
fn ge_tree_branches_on_pigeonhole_follow_bell_numbers() {
    for n in 2..=8 {
        let p = pigeonhole_model(n);
        for order in [VarOrder::Lex, VarOrder::MinDomain] {
            let r = solve(&p, p.domains(), Strategy::new(Mode::GeTree, order), Goal::Count).unwrap();
            assert_eq!(r.stats.solutions, 0);
            assert_eq!(r.stats.branches, bell(n - 1), "n={n} {order:?}");
        }
    }
    assert_eq!(rgs_count(5, 0, 6), bell(5));
}

#[test]
fn ge_tree_counts_match_restricted_growth_strings_when_unconstrained() {
    for n in 1..=6 {
        for m in 1..=4 {
            let p =
                Problem::unconstrained(n, m).with_partition(Some(ValueClassPartition::all_interchangeable(m))).unwrap();
            let r = solve(&p, p.domains(), Strategy::new(Mode::GeTree, VarOrder::Lex), Goal::Count).unwrap();
            assert_eq!(r.stats.solutions, rgs_count(n, 0, m), "n={n} m={m}");
        }
    }
}

#[test]
fn puget_variants_project_to_the_same_solutions() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..40 {
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(2..=3);
        let part = random_partition(&mut rng, m);
        let prob = symmetric_problem(&mut rng, n, m, &part);
        let project = |variant| -> BTreeSet<Vec<Value>> {
            let enc = build_puget_with(&prob, &part, variant);
            enumerate_solutions(&enc.problem, enc.problem.domains(), DEFAULT_BUDGET)
                .unwrap()
                .iter()
                .map(|s| enc.project(s))
                .collect()
        };
        let dummy = project(PugetVariant::DummyValue);
        assert_eq!(dummy, project(PugetVariant::Surjection));
        let canon: BTreeSet<Vec<Value>> = enumerate_solutions(&prob, prob.domains(), DEFAULT_BUDGET)
            .unwrap()
            .iter()
            .map(|s| canonical_form(s, &part))
            .collect();
        assert_eq!(dummy, canon);
    }
}

#[test]
fn dimacs_file_to_reduced_problem() {
    let text = "c tiny\np cnf 2 2\n1 -2 0\n2 0\n";
    let f = parse_dimacs(text).unwrap();
    let (p, part) = reduce_3sat(&f).unwrap();
    let layout = reduction_layout(&f);
    assert_eq!(p.num_vars(), 5);
    assert_eq!(p.max_value(), 10);
    assert_eq!(part.classes().len(), 4);
    assert_eq!(p.domains().values(layout.switch_var()).collect::<Vec<_>>(), vec![9, 10]);
    let sols = enumerate_solutions(&p, p.domains(), DEFAULT_BUDGET).unwrap();
    assert!(sols.iter().all(|s| s[layout.switch_var()] == 10));
}

#[test]
fn partition_round_trips_through_json() {
    let p = ValueClassPartition::new(vec![vec![1, 3], vec![2, 4, 5]]).unwrap();
    let text = serde_json::to_string(&p).unwrap();
    assert_eq!(text, "[[1,3],[2,4,5]]");
    assert_eq!(serde_json::from_str::<ValueClassPartition>(&text).unwrap(), p);
    assert!(serde_json::from_str::<ValueClassPartition>("[[1,2],[2,3]]").is_err());
}

#[test]
fn encoding_is_deterministic() {
    let p = pigeonhole_model(3);
    let a = build_puget(&p, p.partition().unwrap());
    let b = build_puget(&p, p.partition().unwrap());
    assert_eq!(a, b);
}
