use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::differential::{differential, DiffReport, Mismatch, MismatchKind, Verdict};
use crate::derivation::ChainVerdict;
use crate::syntax::{gen_term, Ident, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FuzzError {
    #[error("term count must be positive")]
    ZeroCount,
    #[error("fuel must be positive")]
    ZeroFuel,
    #[error("maximum term size must be positive")]
    ZeroSize,
}

#[derive(Debug, Clone, Serialize)]
pub struct FuzzConfig {
    pub count: usize,
    pub max_size: usize,
    pub fuel: u64,
    pub seed: u64,
    /// Generate closed terms only.
    pub closed: bool,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            count: 1000,
            max_size: 50,
            fuel: 1000,
            seed: 0,
            closed: true,
        }
    }
}

/// Seed of the `i`-th term of a run seeded with `seed` (splitmix64).
pub fn term_seed(seed: u64, i: usize) -> u64 {
    let mut z = seed.wrapping_add((i as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub index: usize,
    pub seed: u64,
    pub term: Term,
    pub shrunk: Term,
    pub mismatches: Vec<Mismatch>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct FuzzSummary {
    pub total: usize,
    pub agree: usize,
    pub all_fuel_exhausted: usize,
    pub mismatched: usize,
    pub mismatches_by_kind: BTreeMap<MismatchKind, usize>,
    /// Terms whose derivation stages 3 and 4 agree only up to the dropped
    /// residual of a partial application.
    pub residual_dropped: usize,
    /// Terms where all machines halted and the STG-like machine took more
    /// steps than eval/apply.
    pub stg_gt_ea: usize,
    /// Terms whose unloads were checked against the reference reducer.
    pub oracle_checked: usize,
    pub witnesses: Vec<Witness>,
}

impl FuzzSummary {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("summaries serialize")
    }

    pub fn count(&self, kind: MismatchKind) -> usize {
        self.mismatches_by_kind.get(&kind).copied().unwrap_or(0)
    }
}

const MAX_WITNESSES: usize = 10;

/// Generates `count` terms from `seed` and runs [`differential`] on each.
/// The result depends only on the configuration, not on thread scheduling.
pub fn fuzz(cfg: &FuzzConfig) -> Result<FuzzSummary, FuzzError> {
    if cfg.count == 0 {
        return Err(FuzzError::ZeroCount);
    }
    if cfg.fuel == 0 {
        return Err(FuzzError::ZeroFuel);
    }
    if cfg.max_size == 0 {
        return Err(FuzzError::ZeroSize);
    }
    let reports: Vec<(u64, DiffReport)> = (0..cfg.count)
        .into_par_iter()
        .map(|i| {
            let seed = term_seed(cfg.seed, i);
            let mut r = differential(&gen_term(seed, cfg.max_size, cfg.closed), cfg.fuel);
            r.seed = Some(seed);
            (seed, r)
        })
        .collect();

    let mut s = FuzzSummary {
        total: cfg.count,
        ..Default::default()
    };
    for (i, (seed, r)) in reports.into_iter().enumerate() {
        match r.verdict {
            Verdict::Agree => s.agree += 1,
            Verdict::AllFuelExhausted => s.all_fuel_exhausted += 1,
            Verdict::Mismatch => s.mismatched += 1,
        }
        if r.stages.verdict == ChainVerdict::AgreeResidualDropped {
            s.residual_dropped += 1;
        }
        if r.steps.as_ref().is_some_and(|st| !st.stg_le_ea) {
            s.stg_gt_ea += 1;
        }
        if r.oracle.compared > 0 {
            s.oracle_checked += 1;
        }
        for m in &r.mismatches {
            *s.mismatches_by_kind.entry(m.kind).or_default() += 1;
        }
        if !r.mismatches.is_empty() && s.witnesses.len() < MAX_WITNESSES {
            s.witnesses.push(Witness {
                index: i,
                seed,
                shrunk: shrink(&r.term, cfg.fuel, r.mismatches[0].kind),
                term: r.term,
                mismatches: r.mismatches,
            });
        }
    }
    Ok(s)
}

/// Greedily shrinks `t` while [`differential`] still reports `kind`.
pub fn shrink(t: &Term, fuel: u64, kind: MismatchKind) -> Term {
    let mut best = t.clone();
    'outer: loop {
        let mut cands = candidates(&best);
        cands.sort_by_key(Term::size);
        for c in cands {
            if c.size() < best.size() && differential(&c, fuel).has(kind) {
                best = c;
                continue 'outer;
            }
        }
        return best;
    }
}

fn placeholder(t: &Term) -> Term {
    let fvs = t.free_vars();
    let a = Ident::new("a").expect("valid");
    if fvs.contains(&a) {
        Term::Var(a.freshen(|v| fvs.contains(v)))
    } else {
        Term::Var(a)
    }
}

/// Terms one structural step smaller than `t`.
fn candidates(t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    match t {
        Term::Var(_) => {}
        Term::App(a) => {
            out.push(placeholder(t));
            out.push(a.head().clone());
            out.extend(a.args().iter().cloned());
            let args = a.args();
            if args.len() > 1 {
                for i in 0..args.len() {
                    let mut rest = args.to_vec();
                    rest.remove(i);
                    out.push(Term::app(a.head().clone(), rest).expect("non-empty"));
                }
            }
            for h in candidates(a.head()) {
                out.push(Term::app(h, args.to_vec()).expect("non-empty"));
            }
            for i in 0..args.len() {
                for c in candidates(&args[i]) {
                    let mut new = args.to_vec();
                    new[i] = c;
                    out.push(Term::app(a.head().clone(), new).expect("non-empty"));
                }
            }
        }
        Term::Fun(f) => {
            out.push(placeholder(t));
            out.push(f.body().clone());
            let ps = f.params();
            if ps.len() > 1 {
                for i in 0..ps.len() {
                    let mut rest = ps.to_vec();
                    rest.remove(i);
                    out.push(Term::fun(rest, f.body().clone()).expect("distinct"));
                }
            }
            for b in candidates(f.body()) {
                out.push(Term::fun(ps.to_vec(), b).expect("distinct"));
            }
        }
    }
    out
}
