use serde::Serialize;

use super::oracle::{curry, whnf, OracleOutcome};
use super::unload::unload_outcome;
use crate::derivation::{check_stage_chain, ChainReport, ChainVerdict};
use crate::machine::{run, EvalApply, HaltReason, Machine, Outcome, PushEnter, Stg};
use crate::syntax::Term;

/// Fuel under which every other machine, and stages 4–5, must halt once the
/// push/enter machine halts within `fuel`.
pub fn extended_fuel(fuel: u64) -> u64 {
    fuel.saturating_mul(4).saturating_add(4)
}

#[derive(Debug, Clone, Serialize)]
pub struct MachineRun {
    pub machine: &'static str,
    pub fuel: u64,
    pub halted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<HaltReason>,
    pub steps: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unloaded: Option<Term>,
}

impl MachineRun {
    fn new<M: Machine>(t: &Term, fuel: u64) -> Self {
        let (outcome, _) = run::<M>(t, fuel);
        let reason = match &outcome {
            Outcome::Halted { reason, .. } => Some(*reason),
            Outcome::FuelExhausted { .. } => None,
        };
        MachineRun {
            machine: M::NAME,
            fuel,
            halted: outcome.is_halted(),
            reason,
            steps: outcome.steps(),
            unloaded: unload_outcome::<M>(&outcome),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MismatchKind {
    /// Two machines halted with unloads that are not spine-alpha-equal.
    Unload,
    /// Reducing an unload with the reference reducer disagrees with reducing
    /// the original term.
    Oracle,
    /// One machine halted and another did not, even with extended fuel.
    Termination,
    /// The derivation stages disagree beyond the documented residual-drop.
    StageChain,
}

#[derive(Debug, Clone, Serialize)]
pub struct Mismatch {
    pub kind: MismatchKind,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Agree,
    Mismatch,
    AllFuelExhausted,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleCheck {
    pub fuel: u64,
    /// WHNF of the curried input, when the reducer finished.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub whnf: Option<String>,
    /// Number of unloads whose curried WHNF was compared.
    pub compared: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepRelation {
    pub pe_le_ea: bool,
    pub stg_le_ea: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiffReport {
    pub term: Term,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub fuel: u64,
    pub runs: Vec<MachineRun>,
    pub oracle: OracleCheck,
    pub stages: ChainReport,
    /// Present only when all three machines halted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<StepRelation>,
    pub verdict: Verdict,
    pub mismatches: Vec<Mismatch>,
}

impl DiffReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }

    pub fn has(&self, kind: MismatchKind) -> bool {
        self.mismatches.iter().any(|m| m.kind == kind)
    }
}

fn run_all(t: &Term, fuel: u64) -> Vec<MachineRun> {
    vec![
        MachineRun::new::<PushEnter>(t, fuel),
        MachineRun::new::<EvalApply>(t, fuel),
        MachineRun::new::<Stg>(t, fuel),
    ]
}

/// Runs the three machines and the derivation stages on `t` and cross-checks
/// them.
///
/// Every machine first gets `fuel`. If some halt and others do not, the
/// stragglers are re-run with [`extended_fuel`]; still not halting is a
/// [`MismatchKind::Termination`]. Halted unloads must be pairwise
/// alpha-equal, and each must reduce under the reference reducer to the same
/// WHNF as `t` whenever both reductions finish within `extended_fuel(fuel)`
/// beta steps.
pub fn differential(t: &Term, fuel: u64) -> DiffReport {
    let mut runs = run_all(t, fuel);
    let mut mismatches = Vec::new();

    let any_halted = runs.iter().any(|r| r.halted);
    if any_halted {
        for r in runs.iter_mut().filter(|r| !r.halted) {
            *r = match r.machine {
                PushEnter::NAME => MachineRun::new::<PushEnter>(t, extended_fuel(fuel)),
                EvalApply::NAME => MachineRun::new::<EvalApply>(t, extended_fuel(fuel)),
                _ => MachineRun::new::<Stg>(t, extended_fuel(fuel)),
            };
            if !r.halted {
                mismatches.push(Mismatch {
                    kind: MismatchKind::Termination,
                    detail: format!(
                        "{} did not halt within {} steps while another machine halted",
                        r.machine, r.fuel
                    ),
                });
            }
        }
    }

    let halted: Vec<&MachineRun> = runs.iter().filter(|r| r.halted).collect();
    for pair in halted.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let (x, y) = (a.unloaded.as_ref().unwrap(), b.unloaded.as_ref().unwrap());
        if !x.alpha_eq(y) {
            mismatches.push(Mismatch {
                kind: MismatchKind::Unload,
                detail: format!("{} unloads {x} but {} unloads {y}", a.machine, b.machine),
            });
        }
    }

    let oracle_fuel = extended_fuel(fuel);
    let reference = whnf(&curry(t), oracle_fuel);
    let mut compared = 0;
    if let OracleOutcome::Whnf { term: expected, .. } = &reference {
        for r in &halted {
            let unloaded = r.unloaded.as_ref().unwrap();
            if let OracleOutcome::Whnf { term: got, .. } = whnf(&curry(unloaded), oracle_fuel) {
                compared += 1;
                if !got.alpha_eq(expected) {
                    mismatches.push(Mismatch {
                        kind: MismatchKind::Oracle,
                        detail: format!(
                            "{} unload {unloaded} reduces to {got}, the input reduces to {expected}",
                            r.machine
                        ),
                    });
                }
            }
        }
    }

    let stages = check_stage_chain(t, fuel);
    if stages.verdict == ChainVerdict::Diverged {
        let d = stages
            .divergence
            .as_ref()
            .expect("diverged chains name a divergence");
        mismatches.push(Mismatch {
            kind: MismatchKind::StageChain,
            detail: format!("{} vs {}: {}", d.left, d.right, d.detail),
        });
    }

    let steps = if runs.iter().all(|r| r.halted) {
        Some(StepRelation {
            pe_le_ea: runs[0].steps <= runs[1].steps,
            stg_le_ea: runs[2].steps <= runs[1].steps,
        })
    } else {
        None
    };

    let verdict = if !mismatches.is_empty() {
        Verdict::Mismatch
    } else if !any_halted {
        Verdict::AllFuelExhausted
    } else {
        Verdict::Agree
    };

    DiffReport {
        term: t.clone(),
        seed: None,
        fuel,
        runs,
        oracle: OracleCheck {
            fuel: oracle_fuel,
            whnf: reference.whnf().map(|w| w.to_string()),
            compared,
        },
        stages,
        steps,
        verdict,
        mismatches,
    }
}
