use thiserror::Error;

use crate::machine::{Configuration, Machine, Outcome, Rule, StepOutcome};
use crate::syntax::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnloadError {
    #[error("configuration has not halted: {0} still applies")]
    NotHalted(Rule),
}

/// The term a halted configuration of `M` denotes, spine-normalised.
///
/// The residual stack is re-applied to the control (push/enter), or frame by
/// frame with the top frame innermost (eval/apply and STG). A pap becomes its
/// abstraction applied to the accumulated arguments.
pub fn unload<M: Machine>(c: &M::Config) -> Result<Term, UnloadError> {
    match M::step(c) {
        StepOutcome::Stepped { rule, .. } => Err(UnloadError::NotHalted(rule)),
        StepOutcome::Halted { .. } => Ok(c.denote().spine_normalize()),
    }
}

pub fn unload_outcome<M: Machine>(o: &Outcome<M::Config>) -> Option<Term> {
    o.halted()
        .map(|c| unload::<M>(c).expect("halted outcomes hold halted configurations"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{EaConfig, EvalApply, Pap, PeConfig, PushEnter, Stg};
    use crate::stack::{SegStack, Segment};
    use crate::syntax::parse;

    fn t(src: &str) -> Term {
        parse(src).unwrap()
    }

    #[test]
    fn push_enter() {
        let c = PeConfig {
            control: t("f"),
            stack: [t("a"), t("b")].into_iter().collect(),
        };
        assert_eq!(unload::<PushEnter>(&c).unwrap(), t("(f a b)"));
        let c = PeConfig {
            control: t("(\\x. x)"),
            stack: Default::default(),
        };
        assert_eq!(unload::<PushEnter>(&c).unwrap(), t("(\\x. x)"));
    }

    #[test]
    fn pap_with_accumulated_arguments() {
        let Term::Fun(f) = t("(\\x y. x)") else {
            unreachable!()
        };
        let c = EaConfig::Pap(Pap::new(vec![t("a")], f.clone(), SegStack::new()));
        assert_eq!(unload::<EvalApply>(&c).unwrap(), t("((\\x y. x) a)"));
        let c = EaConfig::Pap(Pap::new(vec![], f, SegStack::new()));
        assert_eq!(unload::<EvalApply>(&c).unwrap(), t("(\\x y. x)"));
    }

    #[test]
    fn frames_fold_then_flatten() {
        let stack: SegStack = [vec![t("a")], vec![t("b")]]
            .into_iter()
            .map(|g| Segment::new(g).unwrap())
            .collect();
        let c = EaConfig::eval(t("f"), stack);
        assert_eq!(c.denote(), t("((f a) b)"));
        assert_eq!(unload::<EvalApply>(&c).unwrap(), t("(f a b)"));
        assert_eq!(unload::<Stg>(&c).unwrap(), t("(f a b)"));
    }

    #[test]
    fn rejects_running_configurations() {
        let c = EaConfig::eval(t("(\\x. x)"), SegStack::new());
        assert_eq!(
            unload::<EvalApply>(&c),
            Err(UnloadError::NotHalted(Rule::EFun))
        );
        // the same configuration is a value for the STG-like machine
        assert_eq!(unload::<Stg>(&c).unwrap(), t("(\\x. x)"));
        let c = PeConfig {
            control: t("(f a)"),
            stack: Default::default(),
        };
        assert_eq!(
            unload::<PushEnter>(&c),
            Err(UnloadError::NotHalted(Rule::KApp))
        );
    }
}
