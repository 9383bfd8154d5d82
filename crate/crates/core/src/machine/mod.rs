//! Small-step abstract machines and a fuel-bounded driver shared by all of
//! them.
//!
//! * [`pe`]: the push/enter (Krivine-style) machine over a flat stack.
//! * [`ea`]: the eval/apply machine over a segmented stack, with `pap`
//!   configurations.
//! * [`stg`]: the STG-like machine, whose rules fuse fixed paths of the
//!   eval/apply machine.

pub mod ea;
pub mod pe;
pub mod stg;

use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::stack::SegStack;
use crate::syntax::{Fun, Ident, Term};

pub use ea::{ea_run, ea_step, EvalApply};
pub use pe::{pe_run, pe_step, PeConfig, PushEnter};
pub use stg::{stg_run, stg_step, Stg};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    KApp,
    KFun,
    EApp,
    EFun,
    AEq,
    AGt,
    ALt,
    StgTcall,
    StgExact,
    StgCallk,
    StgPap2,
    StgRetfun,
    StgPcall,
}

impl Rule {
    pub const ALL: [Rule; 13] = [
        Rule::KApp,
        Rule::KFun,
        Rule::EApp,
        Rule::EFun,
        Rule::AEq,
        Rule::AGt,
        Rule::ALt,
        Rule::StgTcall,
        Rule::StgExact,
        Rule::StgCallk,
        Rule::StgPap2,
        Rule::StgRetfun,
        Rule::StgPcall,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Rule::KApp => "K-APP",
            Rule::KFun => "K-FUN",
            Rule::EApp => "E-APP",
            Rule::EFun => "E-FUN",
            Rule::AEq => "A-EQ",
            Rule::AGt => "A-GT",
            Rule::ALt => "A-LT",
            Rule::StgTcall => "STG-TCALL",
            Rule::StgExact => "STG-EXACT",
            Rule::StgCallk => "STG-CALLK",
            Rule::StgPap2 => "STG-PAP2",
            Rule::StgRetfun => "STG-RETFUN",
            Rule::StgPcall => "STG-PCALL",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Rule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rule::ALL
            .into_iter()
            .find(|r| r.label() == s)
            .ok_or_else(|| format!("unknown rule {s:?}"))
    }
}

impl Serialize for Rule {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum HaltReason {
    /// The control is a variable with no binding.
    FreeVariable,
    /// An abstraction (or partial application) without enough arguments
    /// left to fire; this is a value.
    TooFewArguments,
}

#[derive(Debug, Clone)]
pub enum StepOutcome<C> {
    Stepped { next: C, rule: Rule },
    Halted { config: C, reason: HaltReason },
}

/// A machine configuration that denotes a term.
pub trait Configuration: Clone + Serialize {
    /// The term obtained by re-applying the stack to the control, without any
    /// normalisation.
    fn denote(&self) -> Term;
}

pub trait Machine {
    type Config: Configuration;
    const NAME: &'static str;
    const RULES: &'static [Rule];

    fn initial(t: &Term) -> Self::Config;
    fn step(c: &Self::Config) -> StepOutcome<Self::Config>;
}

#[derive(Debug, Clone)]
pub enum Outcome<C> {
    Halted {
        config: C,
        reason: HaltReason,
        steps: u64,
    },
    FuelExhausted {
        steps: u64,
    },
}

impl<C> Outcome<C> {
    pub fn steps(&self) -> u64 {
        match self {
            Outcome::Halted { steps, .. } | Outcome::FuelExhausted { steps } => *steps,
        }
    }

    pub fn halted(&self) -> Option<&C> {
        match self {
            Outcome::Halted { config, .. } => Some(config),
            Outcome::FuelExhausted { .. } => None,
        }
    }

    pub fn is_halted(&self) -> bool {
        matches!(self, Outcome::Halted { .. })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceEntry<C> {
    pub rule: Rule,
    /// Configuration after the transition.
    pub config: C,
}

#[derive(Debug, Clone)]
pub struct Trace<C> {
    pub initial: C,
    pub entries: Vec<TraceEntry<C>>,
}

impl<C> Trace<C> {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn rules(&self) -> Vec<Rule> {
        self.entries.iter().map(|e| e.rule).collect()
    }

    /// Configuration before step `i` (0-based).
    pub fn before(&self, i: usize) -> &C {
        if i == 0 {
            &self.initial
        } else {
            &self.entries[i - 1].config
        }
    }
}

impl<C: Serialize> Trace<C> {
    /// One JSON object per transition: `{"step":i,"rule":name,"config":...}`,
    /// with `i` counting from 1.
    pub fn json_lines(&self) -> Vec<String> {
        #[derive(Serialize)]
        struct Line<'a, C> {
            step: usize,
            rule: Rule,
            config: &'a C,
        }
        self.entries
            .iter()
            .enumerate()
            .map(|(i, e)| {
                serde_json::to_string(&Line {
                    step: i + 1,
                    rule: e.rule,
                    config: &e.config,
                })
                .expect("configurations serialize")
            })
            .collect()
    }
}

/// Steps `M` from `initial` until it halts or `fuel` transitions have been
/// taken without halting.
pub fn run_from<M: Machine>(
    initial: M::Config,
    fuel: u64,
) -> (Outcome<M::Config>, Trace<M::Config>) {
    assert!(fuel >= 1, "fuel must be positive");
    let mut trace = Trace {
        initial: initial.clone(),
        entries: Vec::new(),
    };
    let mut current = initial;
    let mut steps = 0;
    loop {
        match M::step(&current) {
            StepOutcome::Halted { config, reason } => {
                return (
                    Outcome::Halted {
                        config,
                        reason,
                        steps,
                    },
                    trace,
                );
            }
            StepOutcome::Stepped { .. } if steps == fuel => {
                return (Outcome::FuelExhausted { steps }, trace);
            }
            StepOutcome::Stepped { next, rule } => {
                debug_assert!(M::RULES.contains(&rule));
                steps += 1;
                trace.entries.push(TraceEntry {
                    rule,
                    config: next.clone(),
                });
                current = next;
            }
        }
    }
}

pub fn run<M: Machine>(t: &Term, fuel: u64) -> (Outcome<M::Config>, Trace<M::Config>) {
    run_from::<M>(M::initial(t), fuel)
}

/// Configuration of the eval/apply and STG-like machines.
#[derive(Debug, Clone, PartialEq)]
pub enum EaConfig {
    Eval { control: Term, stack: SegStack },
    Pap(Pap),
}

pub type StgConfig = EaConfig;

/// A partially applied abstraction: arguments accumulated so far, the
/// abstraction's arity, parameters and body, and the main stack.
#[derive(Debug, Clone, PartialEq)]
pub struct Pap {
    pub acc: Vec<Term>,
    arity: usize,
    fun: Fun,
    pub stack: SegStack,
}

impl Pap {
    pub fn new(acc: Vec<Term>, fun: Fun, stack: SegStack) -> Self {
        Pap {
            acc,
            arity: fun.arity(),
            fun,
            stack,
        }
    }

    pub fn arity(&self) -> usize {
        debug_assert_eq!(self.arity, self.fun.params().len());
        self.arity
    }

    pub fn params(&self) -> &[Ident] {
        self.fun.params()
    }

    pub fn body(&self) -> &Term {
        self.fun.body()
    }

    pub fn fun(&self) -> &Fun {
        &self.fun
    }
}

impl EaConfig {
    pub fn eval(control: Term, stack: SegStack) -> Self {
        EaConfig::Eval { control, stack }
    }

    pub fn stack(&self) -> &SegStack {
        match self {
            EaConfig::Eval { stack, .. } => stack,
            EaConfig::Pap(p) => &p.stack,
        }
    }
}

fn fold_frames(mut t: Term, stack: &SegStack) -> Term {
    for seg in stack.segments() {
        t = Term::apply_all(t, seg.items().to_vec());
    }
    t
}

impl Configuration for EaConfig {
    fn denote(&self) -> Term {
        match self {
            EaConfig::Eval { control, stack } => fold_frames(control.clone(), stack),
            EaConfig::Pap(p) => {
                let base = Term::apply_all(Term::Fun(p.fun.clone()), p.acc.clone());
                fold_frames(base, &p.stack)
            }
        }
    }
}

impl Serialize for EaConfig {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            EaConfig::Eval { control, stack } => {
                let mut st = s.serialize_struct("Eval", 3)?;
                st.serialize_field("kind", "eval")?;
                st.serialize_field("control", control)?;
                st.serialize_field("stack", stack)?;
                st.end()
            }
            EaConfig::Pap(p) => {
                let mut st = s.serialize_struct("Pap", 6)?;
                st.serialize_field("kind", "pap")?;
                st.serialize_field("acc", &p.acc)?;
                st.serialize_field("arity", &p.arity)?;
                let params: Vec<&str> = p.params().iter().map(Ident::as_str).collect();
                st.serialize_field("params", &params)?;
                st.serialize_field("body", p.body())?;
                st.serialize_field("stack", &p.stack)?;
                st.end()
            }
        }
    }
}
