mod common;

use common::*;
use proptest::prelude::*;

use lammult::derivation::{
    run_stage, stage0_eval, stage1_eval_seg, stage2_eval_cps, stage3_eval_lifted,
};
use lammult::harness::curry;
use lammult::machine::{
    ea_step, run, EaConfig, EvalApply, Machine, PushEnter, Rule, StepOutcome, Stg,
};
use lammult::stack::FlatStack;
use lammult::syntax::{subst, Ident};
use lammult::{parse, print, Term};

fn id(x: &str) -> Ident {
    Ident::new(x).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn print_parse_round_trip(t in any_term()) {
        let back = parse(&print(&t)).unwrap();
        prop_assert!(back.alpha_eq(&t));
        prop_assert_eq!(back, t);
    }

    #[test]
    fn substitution_is_safe(t in term(25, false), s in term(10, false), v in 0usize..6) {
        let v = id(["a", "b", "c", "x", "y", "z"][v]);
        let out = subst(&[(v.clone(), s.clone())], &t).unwrap();
        let mut allowed = t.free_vars();
        allowed.remove(&v);
        allowed.extend(s.free_vars());
        prop_assert!(out.free_vars().is_subset(&allowed), "{} -> {}", t, out);
    }

    #[test]
    fn substitution_is_simultaneous(t in term(15, false), s1 in term(8, false), s2 in term(8, true)) {
        let (x, y) = (id("p"), id("q"));
        // x occurs free at the head, y occurs free in s1
        let t = Term::app(Term::Var(x.clone()), vec![t]).unwrap();
        let s1 = Term::app(Term::Var(y.clone()), vec![s1]).unwrap();
        let both = subst(&[(x.clone(), s1.clone()), (y.clone(), s2.clone())], &t).unwrap();
        let seq = subst(&[(y.clone(), s2.clone())], &subst(&[(x, s1)], &t).unwrap()).unwrap();
        prop_assert!(both.occurs_free(&y));
        prop_assert!(!seq.occurs_free(&y));
        prop_assert!(!both.alpha_eq(&seq));
    }

    #[test]
    fn spine_normalize_is_idempotent_and_regrouping_invariant(t in any_term()) {
        let n = t.spine_normalize();
        prop_assert_eq!(n.spine_normalize(), n.clone());
        prop_assert_eq!(curry(&n), curry(&t));
    }

    #[test]
    fn seg_pop_is_a_flatten_homomorphism(n in 1usize..12, s in seg_stack()) {
        law_homomorphism(n, &s)?;
    }

    #[test]
    fn segments_stay_non_empty(n in 1usize..12, xs in segment(), s in seg_stack()) {
        law_no_empty_segments(n, &xs, &s)?;
    }

    #[test]
    fn exact_arity_pop_undoes_push(xs in segment(), s in seg_stack()) {
        law_exact_arity(&xs, &s)?;
    }

    #[test]
    fn pop_cps_agrees_with_pop(n in 1usize..12, s in seg_stack()) {
        law_cps(n, &s)?;
    }

    #[test]
    fn early_stages_agree_on_segmented_stacks(t in any_term(), s in seg_stack(), fuel in 1u64..200) {
        let r0 = stage0_eval(&t, s.flatten(), fuel);
        prop_assert_eq!(&stage1_eval_seg(&t, s.clone(), fuel), &r0);
        prop_assert_eq!(&stage2_eval_cps(&t, s.clone(), fuel), &r0);
        prop_assert_eq!(&stage3_eval_lifted(&t, s, fuel), &r0);
    }

    #[test]
    fn stage_zero_matches_push_enter_steps(t in any_term()) {
        let r = run_stage(0, &t, &FlatStack::new(), 300);
        let (out, _) = run::<PushEnter>(&t, 300);
        prop_assert_eq!(r.steps(), out.steps());
    }

    #[test]
    fn final_stage_matches_eval_apply_steps(t in any_term()) {
        let r = run_stage(5, &t, &FlatStack::new(), 300);
        let (out, _) = run::<EvalApply>(&t, 300);
        prop_assert_eq!(r.steps(), out.steps());
    }

    #[test]
    fn runs_are_deterministic_and_replayable(t in any_term()) {
        replay::<PushEnter>(&t)?;
        replay::<EvalApply>(&t)?;
        replay::<Stg>(&t)?;
    }

    #[test]
    fn eval_apply_conserves_frames(t in any_term()) {
        let (_, trace) = run::<EvalApply>(&t, 300);
        for (i, e) in trace.entries.iter().enumerate() {
            let before = trace.before(i);
            let (d0, d1) = (before.stack().depth(), e.config.stack().depth());
            match e.rule {
                Rule::EApp => prop_assert_eq!(d1, d0 + 1),
                Rule::ALt => prop_assert_eq!(d1 + 1, d0),
                Rule::AGt => {
                    prop_assert_eq!(d1, d0 + 1);
                    let top = e.config.stack().segments().next().unwrap();
                    prop_assert!(!top.is_empty());
                }
                _ => prop_assert_eq!(d1, d0),
            }
            prop_assert!(no_empty_segments(e.config.stack()));
        }
    }

    #[test]
    fn push_enter_never_outruns_eval_apply(t in term(40, true)) {
        let (pe, _) = run::<PushEnter>(&t, 500);
        let (ea, _) = run::<EvalApply>(&t, 2004);
        if pe.is_halted() {
            prop_assert!(ea.is_halted());
            prop_assert!(pe.steps() <= ea.steps());
        }
    }
}

fn replay<M: Machine>(t: &Term) -> Result<(), TestCaseError>
where
    M::Config: PartialEq + std::fmt::Debug,
{
    let (a, ta) = run::<M>(t, 200);
    let (b, tb) = run::<M>(t, 200);
    prop_assert_eq!(a.steps(), b.steps());
    prop_assert_eq!(ta.json_lines(), tb.json_lines());
    prop_assert_eq!(ta.len() as u64, a.steps());
    let mut c = M::initial(t);
    for e in &ta.entries {
        match M::step(&c) {
            StepOutcome::Stepped { next, rule } => {
                prop_assert_eq!(rule, e.rule);
                prop_assert_eq!(&next, &e.config);
                c = next;
            }
            StepOutcome::Halted { .. } => prop_assert!(false, "replay halted early"),
        }
    }
    prop_assert_eq!(a.halted(), a.halted().map(|_| &c));
    Ok(())
}

#[test]
fn eval_apply_value_halt_is_a_pap() {
    let t = parse("(\\x. x)").unwrap();
    let StepOutcome::Stepped { next, rule } = ea_step(&EaConfig::eval(t, Default::default()))
    else {
        panic!()
    };
    assert_eq!(rule, Rule::EFun);
    assert!(matches!(next, EaConfig::Pap(ref p) if p.acc.is_empty() && p.arity() == 1));
}
