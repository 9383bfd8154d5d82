//! Reference semantics: ordinary single-argument lambda calculus with
//! textbook normal-order reduction to weak-head normal form.
//!
//! Multi-argument terms are curried first: `e₀⟨e₁…eₙ⟩` becomes
//! `(…(e₀ e₁)…) eₙ` and `λ⟨x₁…xₙ⟩.e` becomes `λx₁.…λxₙ.e`. This module shares
//! no code with the machines beyond the input syntax; in particular it has
//! its own substitution.

use std::collections::HashSet;
use std::fmt;
use std::rc::Rc;

use crate::syntax::{Ident, Term};

#[derive(Clone, PartialEq, Eq)]
pub enum Lambda {
    Var(Ident),
    Lam(Ident, Rc<Lambda>),
    App(Rc<Lambda>, Rc<Lambda>),
}

pub fn curry(t: &Term) -> Lambda {
    match t {
        Term::Var(x) => Lambda::Var(x.clone()),
        Term::App(a) => a.args().iter().fold(curry(a.head()), |f, arg| {
            Lambda::App(Rc::new(f), Rc::new(curry(arg)))
        }),
        Term::Fun(f) => f.params().iter().rev().fold(curry(f.body()), |body, x| {
            Lambda::Lam(x.clone(), Rc::new(body))
        }),
    }
}

impl Lambda {
    fn free_in(&self, x: &Ident) -> bool {
        match self {
            Lambda::Var(y) => x == y,
            Lambda::Lam(y, b) => x != y && b.free_in(x),
            Lambda::App(f, a) => f.free_in(x) || a.free_in(x),
        }
    }

    fn names(&self, out: &mut HashSet<Ident>) {
        match self {
            Lambda::Var(y) => {
                out.insert(y.clone());
            }
            Lambda::Lam(y, b) => {
                out.insert(y.clone());
                b.names(out);
            }
            Lambda::App(f, a) => {
                f.names(out);
                a.names(out);
            }
        }
    }

    /// `self[x := s]`, renaming binders by priming them (`y'`, `y''`, ...).
    pub fn subst(&self, x: &Ident, s: &Lambda) -> Lambda {
        match self {
            Lambda::Var(y) if y == x => s.clone(),
            Lambda::Var(_) => self.clone(),
            Lambda::App(f, a) => Lambda::App(Rc::new(f.subst(x, s)), Rc::new(a.subst(x, s))),
            Lambda::Lam(y, _) if y == x => self.clone(),
            Lambda::Lam(_, b) if !b.free_in(x) => self.clone(),
            Lambda::Lam(y, b) if !s.free_in(y) => Lambda::Lam(y.clone(), Rc::new(b.subst(x, s))),
            Lambda::Lam(y, b) => {
                let mut used = HashSet::new();
                b.names(&mut used);
                s.names(&mut used);
                used.insert(x.clone());
                let mut name = y.as_str().to_owned();
                let fresh = loop {
                    name.push('\'');
                    let candidate = Ident::new(&name).expect("primes are identifier characters");
                    if !used.contains(&candidate) {
                        break candidate;
                    }
                };
                let renamed = b.subst(y, &Lambda::Var(fresh.clone()));
                Lambda::Lam(fresh, Rc::new(renamed.subst(x, s)))
            }
        }
    }

    pub fn alpha_eq(&self, other: &Lambda) -> bool {
        fn go<'a>(a: &'a Lambda, b: &'a Lambda, env: &mut Vec<(&'a Ident, &'a Ident)>) -> bool {
            match (a, b) {
                (Lambda::Var(x), Lambda::Var(y)) => {
                    // innermost binder wins
                    for (p, q) in env.iter().rev() {
                        if *p == x || *q == y {
                            return *p == x && *q == y;
                        }
                    }
                    x == y
                }
                (Lambda::Lam(x, p), Lambda::Lam(y, q)) => {
                    env.push((x, y));
                    let eq = go(p, q, env);
                    env.pop();
                    eq
                }
                (Lambda::App(f, a), Lambda::App(g, b)) => go(f, g, env) && go(a, b, env),
                _ => false,
            }
        }
        go(self, other, &mut Vec::new())
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lambda::Var(x) => write!(f, "{x}"),
            Lambda::Lam(x, b) => write!(f, "(\\{x}. {b})"),
            Lambda::App(g, a) => write!(f, "({g} {a})"),
        }
    }
}

impl fmt::Debug for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleOutcome {
    Whnf { term: Lambda, steps: u64 },
    FuelExhausted { steps: u64 },
}

impl OracleOutcome {
    pub fn whnf(&self) -> Option<&Lambda> {
        match self {
            OracleOutcome::Whnf { term, .. } => Some(term),
            OracleOutcome::FuelExhausted { .. } => None,
        }
    }
}

/// Leftmost-outermost beta reduction until the head is not a redex. Each
/// beta step costs one unit of fuel.
pub fn whnf(t: &Lambda, fuel: u64) -> OracleOutcome {
    let mut head = t.clone();
    // pending arguments, innermost application last
    let mut args: Vec<Rc<Lambda>> = Vec::new();
    let mut steps = 0;
    loop {
        match head {
            Lambda::App(f, a) => {
                args.push(a);
                head = (*f).clone();
            }
            Lambda::Lam(x, body) if !args.is_empty() => {
                if steps == fuel {
                    return OracleOutcome::FuelExhausted { steps };
                }
                steps += 1;
                let arg = args.pop().expect("non-empty");
                head = body.subst(&x, &arg);
            }
            _ => {
                let term = args
                    .into_iter()
                    .rev()
                    .fold(head, |f, a| Lambda::App(Rc::new(f), a));
                return OracleOutcome::Whnf { term, steps };
            }
        }
    }
}

pub fn oracle_whnf(t: &Term, fuel: u64) -> OracleOutcome {
    whnf(&curry(t), fuel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn t(src: &str) -> Term {
        parse(src).unwrap()
    }

    fn id(x: &str) -> Ident {
        Ident::new(x).unwrap()
    }

    fn lam(x: &str, b: Lambda) -> Lambda {
        Lambda::Lam(id(x), Rc::new(b))
    }

    fn var(x: &str) -> Lambda {
        Lambda::Var(id(x))
    }

    fn app(f: Lambda, a: Lambda) -> Lambda {
        Lambda::App(Rc::new(f), Rc::new(a))
    }

    #[test]
    fn currying() {
        assert_eq!(curry(&t("(\\x y. x)")), lam("x", lam("y", var("x"))));
        assert_eq!(
            curry(&t("((f a b) c)")),
            app(app(app(var("f"), var("a")), var("b")), var("c"))
        );
        // spine regrouping is invisible after currying
        assert_eq!(curry(&t("((f a) b)")), curry(&t("(f a b)")));
    }

    #[test]
    fn two_beta_steps() {
        let out = oracle_whnf(&t("((\\x y. x) a b)"), 10);
        assert_eq!(
            out,
            OracleOutcome::Whnf {
                term: var("a"),
                steps: 2
            }
        );
    }

    #[test]
    fn reduces_partial_applications() {
        let out = oracle_whnf(&t("((\\x y. x) a)"), 10);
        let w = out.whnf().unwrap();
        assert!(w.alpha_eq(&lam("y", var("a"))), "{w}");
    }

    #[test]
    fn stops_at_free_head() {
        let out = oracle_whnf(&t("(f ((\\x. x) a))"), 10);
        assert_eq!(out.whnf().unwrap(), &curry(&t("(f ((\\x. x) a))")));
    }

    #[test]
    fn capture_is_avoided() {
        // (λx.λy.x) y  ⇒  λy'.y
        let out = whnf(&app(lam("x", lam("y", var("x"))), var("y")), 10);
        let w = out.whnf().unwrap();
        assert!(w.alpha_eq(&lam("z", var("y"))), "{w}");
        assert!(!w.alpha_eq(&lam("z", var("z"))));
    }

    #[test]
    fn omega_runs_out_of_fuel() {
        let out = oracle_whnf(&t("((\\x. (x x)) (\\x. (x x)))"), 50);
        assert_eq!(out, OracleOutcome::FuelExhausted { steps: 50 });
    }

    #[test]
    fn alpha_equivalence_respects_shadowing() {
        let a = lam("x", lam("x", var("x")));
        assert!(a.alpha_eq(&lam("p", lam("q", var("q")))));
        assert!(!a.alpha_eq(&lam("p", lam("q", var("p")))));
        assert!(!lam("x", var("y")).alpha_eq(&lam("y", var("y"))));
    }
}
