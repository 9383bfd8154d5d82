//! Runnable versions of each program in the push/enter to eval/apply
//! derivation, from the big-step evaluator over a flat stack down to the two
//! mutually tail-recursive functions that decode to the eval/apply machine.
//!
//! | stage | program |
//! |-------|---------|
//! | 0 | `eval` over the flat list stack |
//! | 1 | the same `eval` over the segmented stack |
//! | 2 | `evalCPS`: pop in continuation-passing style, continuation local |
//! | 3 | `evalCPS2`: the continuation lambda-lifted into `aux2` |
//! | 4 | `evalIn` / `pop'In`: pop inlined into the evaluator |
//! | 5 | `evalIn2` / `pop'In2`: the redundant arity argument removed |
//!
//! Every driver is fuel-bounded and counts transitions: the evaluator's
//! self-calls for stages 0–3, and additionally each round of the pop loop
//! for stages 4–5, whose iteration count therefore matches the eval/apply
//! machine step for step. Tail calls are expressed as loops (stages 0, 1, 4,
//! 5) or as a trampoline over the value the continuation returns (stages 2
//! and 3).
//!
//! Stages 4 and 5 keep the inlined program's behaviour of returning an empty
//! stack when an abstraction runs out of arguments, where stages 0–3 return
//! the untouched stack.

use serde::Serialize;

use crate::stack::{FlatStack, PopResult, SegStack, Segment};
use crate::syntax::{subst_distinct, Fun, Ident, Term};

#[derive(Debug, Clone, PartialEq)]
pub enum StageResult {
    Halted {
        answer: Term,
        residual: FlatStack,
        steps: u64,
    },
    FuelExhausted {
        steps: u64,
    },
}

impl StageResult {
    pub fn steps(&self) -> u64 {
        match self {
            StageResult::Halted { steps, .. } | StageResult::FuelExhausted { steps } => *steps,
        }
    }

    fn halted(answer: Term, residual: FlatStack, steps: u64) -> Self {
        StageResult::Halted {
            answer,
            residual,
            steps,
        }
    }
}

struct Fuel {
    limit: u64,
    used: u64,
}

impl Fuel {
    fn new(limit: u64) -> Self {
        assert!(limit >= 1, "fuel must be positive");
        Fuel { limit, used: 0 }
    }

    /// Accounts for one transition; `false` once the budget is spent.
    fn tick(&mut self) -> bool {
        if self.used == self.limit {
            return false;
        }
        self.used += 1;
        true
    }

    fn exhausted(&self) -> StageResult {
        StageResult::FuelExhausted { steps: self.used }
    }
}

fn zip_params(params: &[Ident], args: &[Term]) -> Vec<(Ident, Term)> {
    params.iter().cloned().zip(args.iter().cloned()).collect()
}

fn frame(args: &[Term]) -> Segment {
    Segment::new(args.to_vec()).expect("application tuples are non-empty")
}

/// `eval` with `push = (++)` and `pop` on a flat list.
pub fn stage0_eval(t: &Term, s: FlatStack, fuel: u64) -> StageResult {
    let mut fuel = Fuel::new(fuel);
    let (mut t, mut s) = (t.clone(), s);
    loop {
        match &t {
            Term::App(app) => {
                if !fuel.tick() {
                    return fuel.exhausted();
                }
                s = s.push(app.args());
                t = app.head().clone();
            }
            Term::Fun(f) => match s.pop(f.arity()) {
                PopResult::Found { taken, rest } => {
                    if !fuel.tick() {
                        return fuel.exhausted();
                    }
                    t = subst_distinct(&zip_params(f.params(), &taken), f.body());
                    s = rest;
                }
                PopResult::Insufficient => return StageResult::halted(t, s, fuel.used),
            },
            Term::Var(_) => return StageResult::halted(t, s, fuel.used),
        }
    }
}

/// `eval` over the segmented stack.
pub fn stage1_eval_seg(t: &Term, s: SegStack, fuel: u64) -> StageResult {
    let mut fuel = Fuel::new(fuel);
    let (mut t, mut s) = (t.clone(), s);
    loop {
        match &t {
            Term::App(app) => {
                if !fuel.tick() {
                    return fuel.exhausted();
                }
                s = s.push_segment(frame(app.args()));
                t = app.head().clone();
            }
            Term::Fun(f) => match s.pop(f.arity()) {
                PopResult::Found { taken, rest } => {
                    if !fuel.tick() {
                        return fuel.exhausted();
                    }
                    t = subst_distinct(&zip_params(f.params(), &taken), f.body());
                    s = rest;
                }
                PopResult::Insufficient => {
                    return StageResult::halted(t.clone(), s.flatten(), fuel.used)
                }
            },
            Term::Var(_) => return StageResult::halted(t, s.flatten(), fuel.used),
        }
    }
}

/// What a call of the CPS evaluator amounts to: either the final pair, or a
/// tail call to the evaluator with a new term and stack.
enum Bounce {
    Eval(Term, SegStack),
    Done(Term, SegStack),
}

fn trampoline(
    t: &Term,
    s: SegStack,
    fuel: u64,
    mut eval: impl FnMut(Term, SegStack) -> Bounce,
) -> StageResult {
    let mut fuel = Fuel::new(fuel);
    let mut next = eval(t.clone(), s);
    loop {
        match next {
            Bounce::Done(answer, residual) => {
                return StageResult::halted(answer, residual.flatten(), fuel.used)
            }
            Bounce::Eval(t, s) => {
                if !fuel.tick() {
                    return fuel.exhausted();
                }
                next = eval(t, s);
            }
        }
    }
}

/// `evalCPS`: the pop is performed by `popCPS` and its result consumed by a
/// local continuation closing over the abstraction and the original stack.
pub fn stage2_eval_cps(t: &Term, s: SegStack, fuel: u64) -> StageResult {
    trampoline(t, s, fuel, |t, s| match &t {
        Term::App(app) => Bounce::Eval(app.head().clone(), s.push_segment(frame(app.args()))),
        Term::Fun(f) => {
            let aux = |r: PopResult<SegStack>| match r {
                PopResult::Found { taken, rest } => Bounce::Eval(
                    subst_distinct(&zip_params(f.params(), &taken), f.body()),
                    rest,
                ),
                PopResult::Insufficient => Bounce::Done(t.clone(), s.clone()),
            };
            s.pop_cps(f.arity(), aux)
        }
        Term::Var(_) => Bounce::Done(t, s),
    })
}

/// The lambda-lifted continuation of `evalCPS2`.
fn aux2(xs: &[Ident], body: &Term, s: &SegStack, r: PopResult<SegStack>) -> Bounce {
    match r {
        PopResult::Found { taken, rest } => {
            Bounce::Eval(subst_distinct(&zip_params(xs, &taken), body), rest)
        }
        PopResult::Insufficient => {
            let f =
                Fun::new(xs.to_vec(), body.clone()).expect("parameters come from an abstraction");
            Bounce::Done(Term::Fun(f), s.clone())
        }
    }
}

/// `evalCPS2`.
pub fn stage3_eval_lifted(t: &Term, s: SegStack, fuel: u64) -> StageResult {
    trampoline(t, s, fuel, |t, s| match &t {
        Term::App(app) => Bounce::Eval(app.head().clone(), s.push_segment(frame(app.args()))),
        Term::Fun(f) => {
            let (xs, body) = (f.params(), f.body());
            s.pop_cps(xs.len(), |r| aux2(xs, body, &s, r))
        }
        Term::Var(_) => Bounce::Done(t, s),
    })
}

/// `evalIn` / `pop'In`: the pop loop calls back into the evaluator directly.
pub fn stage4_eval_inlined(t: &Term, s: SegStack, fuel: u64) -> StageResult {
    enum State {
        EvalIn(Term, SegStack),
        PopIn {
            acc: Vec<Term>,
            n: usize,
            body: Term,
            xs: Vec<Ident>,
            ys: SegStack,
        },
    }

    let mut fuel = Fuel::new(fuel);
    let mut state = State::EvalIn(t.clone(), s);
    loop {
        state = match state {
            State::EvalIn(t, s) => match &t {
                Term::App(app) => {
                    State::EvalIn(app.head().clone(), s.push_segment(frame(app.args())))
                }
                Term::Fun(f) => State::PopIn {
                    acc: Vec::new(),
                    n: f.arity(),
                    body: f.body().clone(),
                    xs: f.params().to_vec(),
                    ys: s,
                },
                Term::Var(_) => return StageResult::halted(t, s.flatten(), fuel.used),
            },
            State::PopIn {
                mut acc,
                n,
                body,
                xs,
                ys,
            } => {
                let m = acc.len();
                if m == n {
                    State::EvalIn(subst_distinct(&zip_params(&xs, &acc), &body), ys)
                } else if m > n {
                    let surplus = acc.split_off(n);
                    State::EvalIn(
                        subst_distinct(&zip_params(&xs, &acc), &body),
                        ys.push_segment(frame(&surplus)),
                    )
                } else if let Some((head, tail)) = ys.split_first() {
                    acc.extend_from_slice(head.items());
                    State::PopIn {
                        acc,
                        n,
                        body,
                        xs,
                        ys: tail,
                    }
                } else {
                    let f = Fun::new(xs, body).expect("parameters come from an abstraction");
                    return StageResult::halted(Term::Fun(f), FlatStack::new(), fuel.used);
                }
            }
        };
        if !fuel.tick() {
            return fuel.exhausted();
        }
    }
}

/// `evalIn2` / `pop'In2`: the arity is read off the parameter list.
pub fn stage5_eval_final(t: &Term, s: SegStack, fuel: u64) -> StageResult {
    enum State {
        EvalIn2(Term, SegStack),
        PopIn2 {
            acc: Vec<Term>,
            fun: Fun,
            ys: SegStack,
        },
    }

    let mut fuel = Fuel::new(fuel);
    let mut state = State::EvalIn2(t.clone(), s);
    loop {
        state = match state {
            State::EvalIn2(t, s) => match &t {
                Term::App(app) => {
                    State::EvalIn2(app.head().clone(), s.push_segment(frame(app.args())))
                }
                Term::Fun(f) => State::PopIn2 {
                    acc: Vec::new(),
                    fun: f.clone(),
                    ys: s,
                },
                Term::Var(_) => return StageResult::halted(t, s.flatten(), fuel.used),
            },
            State::PopIn2 { mut acc, fun, ys } => {
                let (m, n) = (acc.len(), fun.params().len());
                if m == n {
                    State::EvalIn2(fun.instantiate(&acc), ys)
                } else if m > n {
                    let surplus = acc.split_off(n);
                    State::EvalIn2(fun.instantiate(&acc), ys.push_segment(frame(&surplus)))
                } else if let Some((head, tail)) = ys.split_first() {
                    acc.extend_from_slice(head.items());
                    State::PopIn2 { acc, fun, ys: tail }
                } else {
                    return StageResult::halted(Term::Fun(fun), FlatStack::new(), fuel.used);
                }
            }
        };
        if !fuel.tick() {
            return fuel.exhausted();
        }
    }
}

pub const STAGE_NAMES: [&str; 6] = [
    "stage0_eval",
    "stage1_eval_seg",
    "stage2_eval_cps",
    "stage3_eval_lifted",
    "stage4_eval_inlined",
    "stage5_eval_final",
];

/// Runs stage `i` from a flat initial stack (one segment per element for the
/// segmented stages, so all stages see the same flattened stack).
pub fn run_stage(i: usize, t: &Term, s: &FlatStack, fuel: u64) -> StageResult {
    let seg = || -> SegStack {
        s.iter()
            .map(|x| Segment::new(vec![x.clone()]).expect("singleton"))
            .collect()
    };
    match i {
        0 => stage0_eval(t, s.clone(), fuel),
        1 => stage1_eval_seg(t, seg(), fuel),
        2 => stage2_eval_cps(t, seg(), fuel),
        3 => stage3_eval_lifted(t, seg(), fuel),
        4 => stage4_eval_inlined(t, seg(), fuel),
        5 => stage5_eval_final(t, seg(), fuel),
        _ => panic!("no stage {i}"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainVerdict {
    /// Every stage produced the same answer and residual stack.
    Agree,
    /// Stages 4–5 returned the same answer as stage 3 but an empty residual,
    /// on a run that halted for lack of arguments.
    AgreeResidualDropped,
    Diverged,
}

#[derive(Debug, Clone, Serialize)]
pub struct Divergence {
    pub left: &'static str,
    pub right: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct StageEntry {
    pub stage: &'static str,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub answer: Option<Term>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<FlatStack>,
    pub steps: u64,
}

impl StageEntry {
    fn new(stage: &'static str, r: &StageResult) -> Self {
        match r {
            StageResult::Halted {
                answer,
                residual,
                steps,
            } => StageEntry {
                stage,
                status: "halted",
                answer: Some(answer.clone()),
                residual: Some(residual.clone()),
                steps: *steps,
            },
            StageResult::FuelExhausted { steps } => StageEntry {
                stage,
                status: "fuel_exhausted",
                answer: None,
                residual: None,
                steps: *steps,
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainReport {
    pub term: Term,
    pub fuel: u64,
    pub stages: Vec<StageEntry>,
    pub verdict: ChainVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divergence: Option<Divergence>,
}

impl ChainReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

fn stacks_alpha_eq(a: &FlatStack, b: &FlatStack) -> bool {
    a.len() == b.len() && a.iter().zip(b.iter()).all(|(x, y)| x.alpha_eq(y))
}

fn same_result(a: &StageResult, b: &StageResult, compare_steps: bool) -> Result<(), String> {
    match (a, b) {
        (
            StageResult::Halted {
                answer: x,
                residual: r,
                steps: n,
            },
            StageResult::Halted {
                answer: y,
                residual: q,
                steps: m,
            },
        ) => {
            if !x.alpha_eq(y) {
                Err(format!("answers differ: {x} vs {y}"))
            } else if !stacks_alpha_eq(r, q) {
                Err(format!("residual stacks differ: {r:?} vs {q:?}"))
            } else if compare_steps && n != m {
                Err(format!("step counts differ: {n} vs {m}"))
            } else {
                Ok(())
            }
        }
        (StageResult::FuelExhausted { .. }, StageResult::FuelExhausted { .. }) => Ok(()),
        (StageResult::Halted { .. }, StageResult::FuelExhausted { .. }) => {
            Err("left halted, right ran out of fuel".to_owned())
        }
        (StageResult::FuelExhausted { .. }, StageResult::Halted { .. }) => {
            Err("left ran out of fuel, right halted".to_owned())
        }
    }
}

/// Runs all six stages from the empty stack and reports the first
/// disagreement.
///
/// Stages 0–3 must agree exactly, step counts included; so must stages 4
/// and 5. Stage 4 is compared with stage 3 on answer and residual: it may
/// return an empty residual where stage 3 halted on an abstraction with too
/// few arguments. Stage 4 takes more transitions than stage 3 for the same
/// run, so when only stage 3 halts within `fuel`, stages 4–5 are re-run with
/// `4·fuel + 4`.
pub fn check_stage_chain(t: &Term, fuel: u64) -> ChainReport {
    let empty = FlatStack::new();
    let mut results: Vec<StageResult> = (0..6).map(|i| run_stage(i, t, &empty, fuel)).collect();
    let stage3_halted = matches!(results[3], StageResult::Halted { .. });
    if stage3_halted && matches!(results[4], StageResult::FuelExhausted { .. }) {
        let extended = fuel.saturating_mul(4).saturating_add(4);
        results[4] = run_stage(4, t, &empty, extended);
        results[5] = run_stage(5, t, &empty, extended);
    }

    let mut verdict = ChainVerdict::Agree;
    let mut divergence = None;
    let mut diverge = |l: usize, r: usize, detail: String| {
        divergence.get_or_insert(Divergence {
            left: STAGE_NAMES[l],
            right: STAGE_NAMES[r],
            detail,
        });
    };

    for i in 1..=3 {
        if let Err(d) = same_result(&results[0], &results[i], true) {
            diverge(0, i, d);
        }
    }
    if let Err(d) = same_result(&results[4], &results[5], true) {
        diverge(4, 5, d);
    }
    match (&results[3], &results[4]) {
        (
            StageResult::Halted {
                answer: a3,
                residual: r3,
                ..
            },
            StageResult::Halted {
                answer: a4,
                residual: r4,
                ..
            },
        ) if a3.alpha_eq(a4) && !stacks_alpha_eq(r3, r4) => {
            if matches!(a3, Term::Fun(_)) && r4.is_empty() {
                verdict = ChainVerdict::AgreeResidualDropped;
            } else {
                diverge(3, 4, format!("residual stacks differ: {r3:?} vs {r4:?}"));
            }
        }
        (r3, r4) => {
            if let Err(d) = same_result(r3, r4, false) {
                diverge(3, 4, d);
            }
        }
    }

    if divergence.is_some() {
        verdict = ChainVerdict::Diverged;
    }
    ChainReport {
        term: t.clone(),
        fuel,
        stages: STAGE_NAMES
            .iter()
            .zip(&results)
            .map(|(name, r)| StageEntry::new(name, r))
            .collect(),
        verdict,
        divergence,
    }
}
