//! Strategies and law checks shared by the property and acceptance suites.
#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use lammult::stack::{PopResult, SegStack, Segment};
use lammult::syntax::gen_term;
use lammult::Term;

pub fn term(max_size: usize, closed: bool) -> impl Strategy<Value = Term> {
    (any::<u64>(), 1..=max_size).prop_map(move |(seed, n)| gen_term(seed, n, closed))
}

pub fn any_term() -> impl Strategy<Value = Term> {
    (any::<u64>(), 1usize..=30, any::<bool>()).prop_map(|(seed, n, c)| gen_term(seed, n, c))
}

pub fn segment() -> impl Strategy<Value = Vec<Term>> {
    prop::collection::vec(term(6, false), 1..=4)
}

pub fn seg_stack() -> impl Strategy<Value = SegStack> {
    prop::collection::vec(segment(), 0..=6).prop_map(|segs| {
        segs.into_iter()
            .map(|s| Segment::new(s).expect("non-empty"))
            .collect()
    })
}

pub fn no_empty_segments(s: &SegStack) -> bool {
    s.segments().all(|g| !g.is_empty())
}

pub fn law_homomorphism(n: usize, s: &SegStack) -> Result<(), TestCaseError> {
    match (s.pop(n), s.flatten().pop(n)) {
        (
            PopResult::Found { taken, rest },
            PopResult::Found {
                taken: t2,
                rest: r2,
            },
        ) => {
            prop_assert_eq!(taken, t2);
            prop_assert_eq!(rest.flatten(), r2);
        }
        (PopResult::Insufficient, PopResult::Insufficient) => {}
        (a, b) => prop_assert!(false, "segmented {:?} vs flat {:?}", a, b),
    }
    Ok(())
}

pub fn law_no_empty_segments(n: usize, xs: &[Term], s: &SegStack) -> Result<(), TestCaseError> {
    prop_assert!(no_empty_segments(s));
    let pushed = s.push(xs).expect("non-empty push");
    prop_assert!(no_empty_segments(&pushed));
    prop_assert!(s.push(&[]).is_err());
    for stack in [s, &pushed] {
        if let PopResult::Found { rest, .. } = stack.pop(n) {
            prop_assert!(no_empty_segments(&rest));
        }
    }
    Ok(())
}

pub fn law_exact_arity(xs: &[Term], s: &SegStack) -> Result<(), TestCaseError> {
    let pushed = s.push(xs).expect("non-empty push");
    prop_assert_eq!(
        pushed.pop(xs.len()),
        PopResult::Found {
            taken: xs.to_vec(),
            rest: s.clone()
        }
    );
    Ok(())
}

pub fn law_cps(n: usize, s: &SegStack) -> Result<(), TestCaseError> {
    prop_assert_eq!(s.pop_cps(n, |r| r), s.pop(n));
    prop_assert_eq!(s.pop_cps(n, |_| 17u8), 17u8);
    let found = s.pop_cps(n, |r| matches!(r, PopResult::Found { .. }));
    prop_assert_eq!(found, matches!(s.pop(n), PopResult::Found { .. }));
    Ok(())
}

/// Runs `law` on `cases` generated inputs from a fixed-seed runner.
pub fn check<S: Strategy>(
    cases: u32,
    strategy: S,
    law: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(
        config,
        proptest::test_runner::TestRng::deterministic_rng(
            proptest::test_runner::RngAlgorithm::ChaCha,
        ),
    );
    runner.run(&strategy, law).map_err(|e| e.to_string())
}
