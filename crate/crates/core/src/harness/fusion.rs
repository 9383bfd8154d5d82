//! Checks that the STG-like machine is the eval/apply machine with fixed rule
//! paths fused.
//!
//! An eval/apply trace is cut greedily into groups, longest match first. Each
//! group names the STG rules that must fire for it, and the configuration at
//! the end of every non-empty group must equal the STG configuration reached
//! at that point.

use serde::Serialize;

use super::differential::extended_fuel;
use crate::machine::{ea_run, stg_run, EaConfig, Rule};
use crate::syntax::Term;

use Rule::*;

/// Fusion groups, longest first. `E-APP` alone is only a group when the next
/// rule is not `E-FUN`; the longest-match order takes care of that.
const GROUPS: &[(&[Rule], &[Rule])] = &[
    (&[EApp, EFun, ALt, AEq], &[StgExact]),
    (&[EApp, EFun, ALt, AGt], &[StgCallk]),
    (&[EApp, EFun, ALt], &[StgPap2]),
    (&[EFun, ALt, AEq], &[StgRetfun, StgExact]),
    (&[EFun, ALt, AGt], &[StgRetfun, StgCallk]),
    (&[EFun, ALt], &[StgRetfun, StgPap2]),
    (&[ALt, AEq], &[StgPcall, StgExact]),
    (&[ALt, AGt], &[StgPcall, StgCallk]),
    (&[ALt], &[StgPcall, StgPap2]),
    (&[EApp], &[StgTcall]),
];

/// One cut of an eval/apply trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Group {
    /// Index of the first eval/apply step in the group.
    pub start: usize,
    pub ea: Vec<Rule>,
    pub stg: Vec<Rule>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnfusableTrace {
    pub at: usize,
    pub rules: Vec<Rule>,
}

/// Cuts a halted eval/apply rule sequence into fusion groups. A trailing
/// `E-FUN` (a value reaching an empty stack) maps to no STG step.
pub fn compress(ea: &[Rule]) -> Result<Vec<Group>, UnfusableTrace> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < ea.len() {
        let rest = &ea[i..];
        if rest == [EFun] {
            out.push(Group {
                start: i,
                ea: vec![EFun],
                stg: vec![],
            });
            break;
        }
        let Some((pat, stg)) = GROUPS.iter().find(|(pat, _)| rest.starts_with(pat)) else {
            return Err(UnfusableTrace {
                at: i,
                rules: rest.iter().take(4).copied().collect(),
            });
        };
        out.push(Group {
            start: i,
            ea: pat.to_vec(),
            stg: stg.to_vec(),
        });
        i += pat.len();
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct FusionReport {
    pub term: Term,
    pub ea_steps: u64,
    pub stg_steps: u64,
    /// Whether eval/apply halted within the fuel; only halting runs are
    /// checked.
    pub checked: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl FusionReport {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

/// Runs both machines on `t` and checks the STG trace against the fused
/// eval/apply trace, rule for rule and configuration for configuration.
pub fn check_fusion(t: &Term, fuel: u64) -> FusionReport {
    let (ea_out, ea_trace) = ea_run(t, fuel);
    let mut report = FusionReport {
        term: t.clone(),
        ea_steps: ea_out.steps(),
        stg_steps: 0,
        checked: ea_out.is_halted(),
        failure: None,
    };
    if !report.checked {
        return report;
    }
    let (stg_out, stg_trace) = stg_run(t, extended_fuel(fuel));
    report.stg_steps = stg_out.steps();
    report.failure = fusion_failure(&ea_trace.rules(), &stg_trace.rules(), |ea_i, stg_i| {
        config_at(&ea_trace.initial, &ea_trace.entries, ea_i)
            == config_at(&stg_trace.initial, &stg_trace.entries, stg_i)
    })
    .or_else(|| (!stg_out.is_halted()).then(|| "STG did not halt".to_owned()));
    report
}

fn config_at<'a>(
    initial: &'a EaConfig,
    entries: &'a [crate::machine::TraceEntry<EaConfig>],
    steps: usize,
) -> &'a EaConfig {
    if steps == 0 {
        initial
    } else {
        &entries[steps - 1].config
    }
}

/// `same(i, j)`: the eval/apply configuration after `i` steps equals the STG
/// configuration after `j` steps.
fn fusion_failure(
    ea: &[Rule],
    stg: &[Rule],
    same: impl Fn(usize, usize) -> bool,
) -> Option<String> {
    let groups = match compress(ea) {
        Ok(g) => g,
        Err(e) => {
            return Some(format!(
                "no fusion group at E/A step {}: {:?}",
                e.at, e.rules
            ))
        }
    };
    let mut j = 0;
    for g in &groups {
        let end = j + g.stg.len();
        if stg.get(j..end) != Some(&g.stg[..]) {
            return Some(format!(
                "E/A steps {}.. {:?} should fire {:?} at STG step {j}, got {:?}",
                g.start,
                g.ea,
                g.stg,
                &stg[j.min(stg.len())..end.min(stg.len())]
            ));
        }
        j = end;
        if !g.stg.is_empty() && !same(g.start + g.ea.len(), j) {
            return Some(format!(
                "configurations differ after E/A step {} / STG step {j}",
                g.start + g.ea.len()
            ));
        }
    }
    (j != stg.len()).then(|| format!("STG took {} steps, fusion predicts {j}", stg.len()))
}
