//! STG-like machine: the eval/apply machine with its application paths
//! fused into single rules.
//!
//! ```text
//! STG-TCALL  ⟨e₀⟨e₁…e_k⟩, s⟩  e₀ not an abstraction   ⇒ ⟨e₀, ⟨e₁…e_k⟩:s⟩
//! STG-EXACT  ⟨(λ⟨x₁…xₙ⟩.e)⟨e₁…eₙ⟩, s⟩                ⇒ ⟨e[xs:=e₁…eₙ], s⟩
//! STG-CALLK  ⟨(λ⟨x₁…xₙ⟩.e)⟨e₁…e_k⟩, s⟩  k > n         ⇒ ⟨e[xs:=e₁…eₙ], ⟨eₙ₊₁…e_k⟩:s⟩
//! STG-PAP2   ⟨(λ⟨x₁…xₙ⟩.e)⟨e₁…e_k⟩, s⟩  k < n         ⇒ ⟨pap(e₁…e_k, n, e, xs), s⟩
//! STG-RETFUN ⟨λ⟨x₁…xₙ⟩.e, ⟨e₁…e_k⟩:s⟩                ⇒ ⟨(λ⟨x₁…xₙ⟩.e)⟨e₁…e_k⟩, s⟩
//! STG-PCALL  ⟨pap(acc, n, e, xs), ⟨f₁…f_m⟩:s⟩        ⇒ ⟨(λ⟨xs⟩.e)⟨acc f₁…f_m⟩, s⟩
//! ```
//!
//! RETFUN and PCALL rebuild an application and leave the dispatch to the
//! next step. Nothing matches a variable, or an abstraction or pap over an
//! empty stack; those are the halting configurations.

use super::{
    run, EaConfig, HaltReason, Machine, Outcome, Pap, Rule, StepOutcome, StgConfig, Trace,
};
use crate::stack::{SegStack, Segment};
use crate::syntax::Term;

pub struct Stg;

impl Machine for Stg {
    type Config = StgConfig;
    const NAME: &'static str = "stg";
    const RULES: &'static [Rule] = &[
        Rule::StgTcall,
        Rule::StgExact,
        Rule::StgCallk,
        Rule::StgPap2,
        Rule::StgRetfun,
        Rule::StgPcall,
    ];

    fn initial(t: &Term) -> StgConfig {
        EaConfig::eval(t.clone(), SegStack::new())
    }

    fn step(c: &StgConfig) -> StepOutcome<StgConfig> {
        stg_step(c)
    }
}

pub fn stg_step(c: &StgConfig) -> StepOutcome<StgConfig> {
    let stepped = |next, rule| StepOutcome::Stepped { next, rule };
    let halted = |reason| StepOutcome::Halted {
        config: c.clone(),
        reason,
    };
    match c {
        EaConfig::Eval { control, stack } => match control {
            Term::Var(_) => halted(HaltReason::FreeVariable),
            Term::App(app) => match app.head() {
                Term::Fun(f) => {
                    let (k, n) = (app.args().len(), f.arity());
                    if k == n {
                        stepped(
                            EaConfig::eval(f.instantiate(app.args()), stack.clone()),
                            Rule::StgExact,
                        )
                    } else if k > n {
                        let surplus = Segment::new(app.args()[n..].to_vec()).expect("k > n");
                        stepped(
                            EaConfig::eval(
                                f.instantiate(&app.args()[..n]),
                                stack.push_segment(surplus),
                            ),
                            Rule::StgCallk,
                        )
                    } else {
                        stepped(
                            EaConfig::Pap(Pap::new(app.args().to_vec(), f.clone(), stack.clone())),
                            Rule::StgPap2,
                        )
                    }
                }
                head => {
                    let frame = Segment::new(app.args().to_vec()).expect("tuples are non-empty");
                    stepped(
                        EaConfig::eval(head.clone(), stack.push_segment(frame)),
                        Rule::StgTcall,
                    )
                }
            },
            Term::Fun(f) => match stack.split_first() {
                Some((frame, rest)) => {
                    let call = Term::app(Term::Fun(f.clone()), frame.items().to_vec())
                        .expect("frames are non-empty");
                    stepped(EaConfig::eval(call, rest), Rule::StgRetfun)
                }
                None => halted(HaltReason::TooFewArguments),
            },
        },
        EaConfig::Pap(p) => match p.stack.split_first() {
            Some((frame, rest)) => {
                let mut args = p.acc.clone();
                args.extend_from_slice(frame.items());
                let call =
                    Term::app(Term::Fun(p.fun().clone()), args).expect("frames are non-empty");
                stepped(EaConfig::eval(call, rest), Rule::StgPcall)
            }
            None => halted(HaltReason::TooFewArguments),
        },
    }
}

pub fn stg_run(t: &Term, fuel: u64) -> (Outcome<StgConfig>, Trace<StgConfig>) {
    run::<Stg>(t, fuel)
}
