//! Eval/apply machine over a stack of argument frames.
//!
//! ```text
//! E-APP  ⟨e₀⟨e₁…e_k⟩, s⟩                      ⇒ ⟨e₀, ⟨e₁…e_k⟩:s⟩
//! E-FUN  ⟨λ⟨x₁…xₙ⟩.e, s⟩                      ⇒ ⟨pap(ε, n, e, x₁…xₙ), s⟩
//! A-EQ   ⟨pap(e₁…eₙ, n, e, xs), s⟩            ⇒ ⟨e[xs:=e₁…eₙ], s⟩
//! A-GT   ⟨pap(e₁…e_k, n, e, xs), s⟩   k > n   ⇒ ⟨e[xs:=e₁…eₙ], ⟨eₙ₊₁…e_k⟩:s⟩
//! A-LT   ⟨pap(e₁…e_k, n, e, xs), ⟨f₁…f_m⟩:s⟩ k < n
//!                                             ⇒ ⟨pap(e₁…e_k f₁…f_m, n, e, xs), s⟩
//! ```
//!
//! A pap with too few arguments and an empty stack halts, keeping its
//! accumulated arguments so the halted configuration still denotes the
//! partial application.

use super::{run, EaConfig, HaltReason, Machine, Outcome, Pap, Rule, StepOutcome, Trace};
use crate::stack::{SegStack, Segment};
use crate::syntax::Term;

pub struct EvalApply;

impl Machine for EvalApply {
    type Config = EaConfig;
    const NAME: &'static str = "ea";
    const RULES: &'static [Rule] = &[Rule::EApp, Rule::EFun, Rule::AEq, Rule::AGt, Rule::ALt];

    fn initial(t: &Term) -> EaConfig {
        EaConfig::eval(t.clone(), SegStack::new())
    }

    fn step(c: &EaConfig) -> StepOutcome<EaConfig> {
        ea_step(c)
    }
}

pub fn ea_step(c: &EaConfig) -> StepOutcome<EaConfig> {
    let stepped = |next, rule| StepOutcome::Stepped { next, rule };
    match c {
        EaConfig::Eval { control, stack } => match control {
            Term::Var(_) => StepOutcome::Halted {
                config: c.clone(),
                reason: HaltReason::FreeVariable,
            },
            Term::App(app) => {
                let frame = Segment::new(app.args().to_vec()).expect("tuples are non-empty");
                stepped(
                    EaConfig::eval(app.head().clone(), stack.push_segment(frame)),
                    Rule::EApp,
                )
            }
            Term::Fun(f) => stepped(
                EaConfig::Pap(Pap::new(Vec::new(), f.clone(), stack.clone())),
                Rule::EFun,
            ),
        },
        EaConfig::Pap(p) => {
            let (k, n) = (p.acc.len(), p.arity());
            if k == n {
                stepped(
                    EaConfig::eval(p.fun().instantiate(&p.acc), p.stack.clone()),
                    Rule::AEq,
                )
            } else if k > n {
                let surplus = Segment::new(p.acc[n..].to_vec()).expect("k > n");
                stepped(
                    EaConfig::eval(
                        p.fun().instantiate(&p.acc[..n]),
                        p.stack.push_segment(surplus),
                    ),
                    Rule::AGt,
                )
            } else {
                match p.stack.split_first() {
                    Some((frame, rest)) => {
                        let mut acc = p.acc.clone();
                        acc.extend_from_slice(frame.items());
                        stepped(
                            EaConfig::Pap(Pap::new(acc, p.fun().clone(), rest)),
                            Rule::ALt,
                        )
                    }
                    None => StepOutcome::Halted {
                        config: c.clone(),
                        reason: HaltReason::TooFewArguments,
                    },
                }
            }
        }
    }
}

pub fn ea_run(t: &Term, fuel: u64) -> (Outcome<EaConfig>, Trace<EaConfig>) {
    run::<EvalApply>(t, fuel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, Fun};

    fn t(src: &str) -> Term {
        parse(src).unwrap()
    }

    fn frames(groups: &[&[&str]]) -> SegStack {
        groups
            .iter()
            .map(|g| Segment::new(g.iter().map(|s| t(s)).collect()).unwrap())
            .collect()
    }

    fn fun(src: &str) -> Fun {
        match t(src) {
            Term::Fun(f) => f,
            other => panic!("{other} is not an abstraction"),
        }
    }

    fn pap(acc: &[&str], f: &str, stack: SegStack) -> EaConfig {
        EaConfig::Pap(Pap::new(acc.iter().map(|s| t(s)).collect(), fun(f), stack))
    }

    fn stepped(c: &EaConfig) -> (EaConfig, Rule) {
        match ea_step(c) {
            StepOutcome::Stepped { next, rule } => (next, rule),
            StepOutcome::Halted { .. } => panic!("expected a step from {c:?}"),
        }
    }

    #[test]
    fn e_app_pushes_one_frame() {
        let (next, rule) = stepped(&EaConfig::eval(t("(f a)"), SegStack::new()));
        assert_eq!(rule, Rule::EApp);
        assert_eq!(next, EaConfig::eval(t("f"), frames(&[&["a"]])));
    }

    #[test]
    fn e_fun_fires_on_empty_stack() {
        let (next, rule) = stepped(&EaConfig::eval(t("(\\x. x)"), SegStack::new()));
        assert_eq!(rule, Rule::EFun);
        assert_eq!(next, pap(&[], "(\\x. x)", SegStack::new()));
    }

    #[test]
    fn a_eq() {
        let s = frames(&[&["q"]]);
        let (next, rule) = stepped(&pap(&["a", "b"], "(\\x1 x2. x1)", s.clone()));
        assert_eq!(rule, Rule::AEq);
        assert_eq!(next, EaConfig::eval(t("a"), s));
    }

    #[test]
    fn a_lt_then_a_gt() {
        let c = pap(&["a"], "(\\x y. (x y))", frames(&[&["b", "c"]]));
        let (next, rule) = stepped(&c);
        assert_eq!(rule, Rule::ALt);
        assert_eq!(
            next,
            pap(&["a", "b", "c"], "(\\x y. (x y))", SegStack::new())
        );
        let (next, rule) = stepped(&next);
        assert_eq!(rule, Rule::AGt);
        assert_eq!(next, EaConfig::eval(t("(a b)"), frames(&[&["c"]])));
    }

    #[test]
    fn halting_shapes() {
        let c = pap(&["a"], "(\\x y. x)", SegStack::new());
        match ea_step(&c) {
            StepOutcome::Halted { config, reason } => {
                assert_eq!(reason, HaltReason::TooFewArguments);
                assert_eq!(config, c);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            ea_step(&EaConfig::eval(t("x"), frames(&[&["a"]]))),
            StepOutcome::Halted {
                reason: HaltReason::FreeVariable,
                ..
            }
        ));
    }

    #[test]
    fn identity_takes_one_step() {
        let (out, trace) = ea_run(&t("(\\x. x)"), 10);
        assert_eq!(trace.rules(), vec![Rule::EFun]);
        match out {
            Outcome::Halted {
                config,
                steps,
                reason,
            } => {
                assert_eq!(steps, 1);
                assert_eq!(reason, HaltReason::TooFewArguments);
                assert_eq!(config, pap(&[], "(\\x. x)", SegStack::new()));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn arity_mismatch_term() {
        let (out, trace) = ea_run(&t("(((\\x1 x2 x3 x4. x1) a b) c d)"), 100);
        assert_eq!(
            trace.rules(),
            vec![
                Rule::EApp,
                Rule::EApp,
                Rule::EFun,
                Rule::ALt,
                Rule::ALt,
                Rule::AEq
            ]
        );
        match out {
            Outcome::Halted {
                config,
                steps,
                reason,
            } => {
                assert_eq!(steps, 6);
                assert_eq!(reason, HaltReason::FreeVariable);
                assert_eq!(config, EaConfig::eval(t("a"), SegStack::new()));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn omega_cycles() {
        let (out, trace) = ea_run(&t("((\\x. (x x)) (\\x. (x x)))"), 100);
        assert!(matches!(out, Outcome::FuelExhausted { steps: 100 }));
        let cycle = [Rule::EApp, Rule::EFun, Rule::ALt, Rule::AEq];
        for (i, e) in trace.entries.iter().enumerate() {
            assert_eq!(e.rule, cycle[i % 4]);
        }
    }

    #[test]
    fn serializes_pap() {
        let c = pap(&["a"], "(\\x y. x)", frames(&[&["b"]]));
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            r#"{"kind":"pap","acc":["a"],"arity":2,"params":["x","y"],"body":"x","stack":[["b"]]}"#
        );
    }
}
