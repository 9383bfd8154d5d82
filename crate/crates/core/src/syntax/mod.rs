//! Terms of the multi-argument lambda calculus.
//!
//! A term is a variable, an application of a head to a non-empty tuple of
//! arguments, or an abstraction binding a non-empty tuple of distinct
//! parameters. Terms are immutable and cheap to clone: sub-terms live behind
//! [`Arc`]s, so substitution and the machines share structure freely.

mod generate;
mod parse;
mod subst;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use generate::gen_term;
pub use parse::{parse, ParseError, ParseErrorKind};
pub use subst::{subst, SubstError};

pub(crate) use subst::subst_distinct;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("invalid identifier {0:?}")]
    InvalidIdent(String),
    #[error("application needs at least one argument")]
    EmptyArgs,
    #[error("abstraction needs at least one parameter")]
    EmptyParams,
    #[error("parameter `{0}` is bound twice by the same abstraction")]
    DuplicateParam(Ident),
}

/// A variable name matching `[A-Za-z_][A-Za-z0-9_']*`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ident(Arc<str>);

impl Ident {
    pub fn new(name: &str) -> Result<Self, TermError> {
        if is_ident(name) {
            Ok(Ident(Arc::from(name)))
        } else {
            Err(TermError::InvalidIdent(name.to_owned()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The first name of the form `<stem>N` (N = 1, 2, ...) not rejected by
    /// `taken`, where `<stem>` is this name with any numeric suffix removed.
    pub fn freshen(&self, mut taken: impl FnMut(&Ident) -> bool) -> Ident {
        let stem = self.0.trim_end_matches(|c: char| c.is_ascii_digit());
        let stem = if stem.is_empty() { "v" } else { stem };
        (1u64..)
            .map(|i| Ident(Arc::from(format!("{stem}{i}"))))
            .find(|candidate| !taken(candidate))
            .expect("unbounded supply of suffixes")
    }
}

pub(crate) fn is_ident(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Ident),
    App(App),
    Fun(Fun),
}

/// `head⟨args⟩`, with at least one argument.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct App {
    head: Arc<Term>,
    args: Arc<[Term]>,
}

/// `λ⟨params⟩.body`, with at least one parameter and no repeats.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Fun {
    params: Arc<[Ident]>,
    body: Arc<Term>,
}

impl App {
    pub fn head(&self) -> &Term {
        &self.head
    }

    pub fn args(&self) -> &[Term] {
        &self.args
    }
}

impl Fun {
    pub fn new(params: Vec<Ident>, body: Term) -> Result<Self, TermError> {
        if params.is_empty() {
            return Err(TermError::EmptyParams);
        }
        for (i, p) in params.iter().enumerate() {
            if params[..i].contains(p) {
                return Err(TermError::DuplicateParam(p.clone()));
            }
        }
        Ok(Fun {
            params: params.into(),
            body: Arc::new(body),
        })
    }

    pub fn params(&self) -> &[Ident] {
        &self.params
    }

    pub fn body(&self) -> &Term {
        &self.body
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }

    /// Substitutes `args` for the parameters, which must supply exactly
    /// `arity()` terms.
    pub fn instantiate(&self, args: &[Term]) -> Term {
        debug_assert_eq!(args.len(), self.arity());
        let bindings: Vec<(Ident, Term)> = self
            .params
            .iter()
            .cloned()
            .zip(args.iter().cloned())
            .collect();
        subst_distinct(&bindings, &self.body)
    }
}

impl Term {
    pub fn var(name: &str) -> Result<Term, TermError> {
        Ident::new(name).map(Term::Var)
    }

    pub fn app(head: Term, args: Vec<Term>) -> Result<Term, TermError> {
        if args.is_empty() {
            return Err(TermError::EmptyArgs);
        }
        Ok(Term::App(App {
            head: Arc::new(head),
            args: args.into(),
        }))
    }

    pub fn fun(params: Vec<Ident>, body: Term) -> Result<Term, TermError> {
        Fun::new(params, body).map(Term::Fun)
    }

    /// Like [`Term::app`], but returns `head` itself for an empty tuple.
    pub(crate) fn apply_all(head: Term, args: Vec<Term>) -> Term {
        if args.is_empty() {
            head
        } else {
            Term::App(App {
                head: Arc::new(head),
                args: args.into(),
            })
        }
    }

    /// Number of syntax nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(a) => 1 + a.head.size() + a.args.iter().map(Term::size).sum::<usize>(),
            Term::Fun(f) => 1 + f.body.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Ident> {
        let mut out = BTreeSet::new();
        collect_free(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn occurs_free(&self, x: &Ident) -> bool {
        match self {
            Term::Var(y) => y == x,
            Term::App(a) => a.head.occurs_free(x) || a.args.iter().any(|t| t.occurs_free(x)),
            Term::Fun(f) => !f.params.contains(x) && f.body.occurs_free(x),
        }
    }

    /// Collapses `App(App(h, xs), ys)` into `App(h, xs ++ ys)` everywhere.
    pub fn spine_normalize(&self) -> Term {
        match self {
            Term::Var(_) => self.clone(),
            Term::Fun(f) => Term::Fun(Fun {
                params: Arc::clone(&f.params),
                body: Arc::new(f.body.spine_normalize()),
            }),
            Term::App(_) => {
                let mut groups = Vec::new();
                let mut head = self;
                while let Term::App(a) = head {
                    groups.push(a.args());
                    head = a.head();
                }
                let args: Vec<Term> = groups
                    .iter()
                    .rev()
                    .flat_map(|g| g.iter())
                    .map(Term::spine_normalize)
                    .collect();
                Term::apply_all(head.spine_normalize(), args)
            }
        }
    }

    /// Equality up to consistent renaming of bound variables. Free variables
    /// are compared by name; binder arity and tuple shape must match exactly.
    pub fn alpha_eq(&self, other: &Term) -> bool {
        alpha(self, other, &mut HashMap::new(), &mut HashMap::new(), 0)
    }
}

fn collect_free(t: &Term, bound: &mut Vec<Ident>, out: &mut BTreeSet<Ident>) {
    match t {
        Term::Var(x) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        Term::App(a) => {
            collect_free(&a.head, bound, out);
            for arg in a.args.iter() {
                collect_free(arg, bound, out);
            }
        }
        Term::Fun(f) => {
            let depth = bound.len();
            bound.extend(f.params.iter().cloned());
            collect_free(&f.body, bound, out);
            bound.truncate(depth);
        }
    }
}

// Bound variables map to the binder depth at which they were introduced;
// shadowed entries are restored on the way out.
fn alpha(
    a: &Term,
    b: &Term,
    left: &mut HashMap<Ident, usize>,
    right: &mut HashMap<Ident, usize>,
    depth: usize,
) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => match (left.get(x), right.get(y)) {
            (Some(i), Some(j)) => i == j,
            (None, None) => x == y,
            _ => false,
        },
        (Term::App(p), Term::App(q)) => {
            p.args.len() == q.args.len()
                && alpha(&p.head, &q.head, left, right, depth)
                && p.args
                    .iter()
                    .zip(q.args.iter())
                    .all(|(s, t)| alpha(s, t, left, right, depth))
        }
        (Term::Fun(f), Term::Fun(g)) => {
            if f.params.len() != g.params.len() {
                return false;
            }
            let saved_left: Vec<_> = f
                .params
                .iter()
                .enumerate()
                .map(|(i, x)| (x.clone(), left.insert(x.clone(), depth + i)))
                .collect();
            let saved_right: Vec<_> = g
                .params
                .iter()
                .enumerate()
                .map(|(i, y)| (y.clone(), right.insert(y.clone(), depth + i)))
                .collect();
            let eq = alpha(&f.body, &g.body, left, right, depth + f.params.len());
            restore(left, saved_left);
            restore(right, saved_right);
            eq
        }
        _ => false,
    }
}

fn restore(map: &mut HashMap<Ident, usize>, saved: Vec<(Ident, Option<usize>)>) {
    for (x, prev) in saved.into_iter().rev() {
        match prev {
            Some(level) => map.insert(x, level),
            None => map.remove(&x),
        };
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "{x}"),
            Term::App(a) => {
                write!(f, "({}", a.head)?;
                for arg in a.args.iter() {
                    write!(f, " {arg}")?;
                }
                f.write_str(")")
            }
            Term::Fun(fun) => {
                f.write_str("(\\")?;
                for (i, p) in fun.params.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ". {})", fun.body)
            }
        }
    }
}

impl fmt::Debug for App {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&Term::App(self.clone()), f)
    }
}

impl fmt::Debug for Fun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&Term::Fun(self.clone()), f)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Renders a term in the concrete syntax accepted by [`parse`].
pub fn print(t: &Term) -> String {
    t.to_string()
}

impl serde::Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(src: &str) -> Term {
        parse(src).unwrap()
    }

    fn set(names: &[&str]) -> BTreeSet<Ident> {
        names.iter().map(|n| Ident::new(n).unwrap()).collect()
    }

    #[test]
    fn identifiers() {
        assert!(Ident::new("x'").is_ok());
        assert!(Ident::new("_a1").is_ok());
        assert!(Ident::new("1x").is_err());
        assert!(Ident::new("").is_err());
        let y = Ident::new("y").unwrap();
        let taken = set(&["y1", "y2"]);
        assert_eq!(y.freshen(|c| taken.contains(c)).as_str(), "y3");
        let x7 = Ident::new("x7").unwrap();
        assert_eq!(x7.freshen(|_| false).as_str(), "x1");
    }

    #[test]
    fn constructors_enforce_invariants() {
        let x = Ident::new("x").unwrap();
        assert_eq!(Term::app(t("f"), vec![]), Err(TermError::EmptyArgs));
        assert_eq!(Term::fun(vec![], t("x")), Err(TermError::EmptyParams));
        assert_eq!(
            Term::fun(vec![x.clone(), x.clone()], t("x")),
            Err(TermError::DuplicateParam(x))
        );
    }

    #[test]
    fn printing() {
        assert_eq!(print(&t("x")), "x");
        let id = Term::fun(vec![Ident::new("x").unwrap()], t("x")).unwrap();
        assert_eq!(print(&id), "(\\x. x)");
        let fab = Term::app(t("f"), vec![t("a"), t("b")]).unwrap();
        assert_eq!(print(&fab), "(f a b)");
        assert_eq!(print(&t("((f a) b)")), "((f a) b)");
    }

    #[test]
    fn free_variables() {
        assert_eq!(t("x").free_vars(), set(&["x"]));
        assert_eq!(t("(\\x. x)").free_vars(), set(&[]));
        assert_eq!(t("(\\x. (x y))").free_vars(), set(&["y"]));
        assert_eq!(t("((\\x. x) (x z))").free_vars(), set(&["x", "z"]));
        assert!(t("(\\x y. (y x))").is_closed());
    }

    #[test]
    fn alpha_equivalence() {
        assert!(t("(\\x. x)").alpha_eq(&t("(\\y. y)")));
        assert!(!t("(\\x y. x)").alpha_eq(&t("(\\x. (\\y. x))")));
        assert!(!t("x").alpha_eq(&t("y")));
        assert!(t("(\\x y. (x y))").alpha_eq(&t("(\\a b. (a b))")));
        assert!(!t("(\\x y. (x y))").alpha_eq(&t("(\\a b. (b a))")));
        // shadowing: inner x refers to the inner binder
        assert!(t("(\\x. (\\x. x))").alpha_eq(&t("(\\a. (\\b. b))")));
        assert!(!t("(\\x. (\\x. x))").alpha_eq(&t("(\\a. (\\b. a))")));
        // a bound name never matches a free one
        assert!(!t("(\\x. y)").alpha_eq(&t("(\\y. y)")));
        assert!(!t("(f a b)").alpha_eq(&t("((f a) b)")));
    }

    #[test]
    fn spine_normalization() {
        assert_eq!(t("((f a) b)").spine_normalize(), t("(f a b)"));
        assert_eq!(t("x").spine_normalize(), t("x"));
        assert_eq!(t("(f ((g a) b))").spine_normalize(), t("(f (g a b))"));
        assert_eq!(
            t("(((\\x. ((x a) b)) c d) e)").spine_normalize(),
            t("((\\x. (x a b)) c d e)")
        );
    }

    #[test]
    fn sizes() {
        assert_eq!(t("x").size(), 1);
        assert_eq!(t("(f a b)").size(), 4);
        assert_eq!(t("(\\x. x)").size(), 2);
    }
}
