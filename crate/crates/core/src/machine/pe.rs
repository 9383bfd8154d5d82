//! Push/enter machine: `⟨e, s⟩` over a flat stack of terms.
//!
//! ```text
//! K-APP  ⟨e₀⟨e₁…eₙ⟩, s⟩              ⇒ ⟨e₀, e₁:…:eₙ:s⟩
//! K-FUN  ⟨λ⟨x₁…xₙ⟩.e, e₁:…:eₙ:s⟩     ⇒ ⟨e[x₁:=e₁,…,xₙ:=eₙ], s⟩
//! ```
//!
//! The machine halts on a variable, or on an abstraction with fewer stack
//! entries than parameters.

use serde::Serialize;

use super::{run, Configuration, HaltReason, Machine, Outcome, Rule, StepOutcome, Trace};
use crate::stack::{FlatStack, PopResult};
use crate::syntax::Term;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeConfig {
    pub control: Term,
    pub stack: FlatStack,
}

impl Configuration for PeConfig {
    fn denote(&self) -> Term {
        Term::apply_all(self.control.clone(), self.stack.to_vec())
    }
}

pub struct PushEnter;

impl Machine for PushEnter {
    type Config = PeConfig;
    const NAME: &'static str = "pe";
    const RULES: &'static [Rule] = &[Rule::KApp, Rule::KFun];

    fn initial(t: &Term) -> PeConfig {
        PeConfig {
            control: t.clone(),
            stack: FlatStack::new(),
        }
    }

    fn step(c: &PeConfig) -> StepOutcome<PeConfig> {
        pe_step(c)
    }
}

pub fn pe_step(c: &PeConfig) -> StepOutcome<PeConfig> {
    match &c.control {
        Term::Var(_) => StepOutcome::Halted {
            config: c.clone(),
            reason: HaltReason::FreeVariable,
        },
        Term::App(app) => StepOutcome::Stepped {
            next: PeConfig {
                control: app.head().clone(),
                stack: c.stack.push(app.args()),
            },
            rule: Rule::KApp,
        },
        Term::Fun(f) => match c.stack.pop(f.arity()) {
            PopResult::Found { taken, rest } => StepOutcome::Stepped {
                next: PeConfig {
                    control: f.instantiate(&taken),
                    stack: rest,
                },
                rule: Rule::KFun,
            },
            PopResult::Insufficient => StepOutcome::Halted {
                config: c.clone(),
                reason: HaltReason::TooFewArguments,
            },
        },
    }
}

pub fn pe_run(t: &Term, fuel: u64) -> (Outcome<PeConfig>, Trace<PeConfig>) {
    run::<PushEnter>(t, fuel)
}
