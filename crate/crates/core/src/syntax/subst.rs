use std::cell::{OnceCell, RefCell};
use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use super::{App, Fun, Ident, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("variable `{0}` is bound twice in one substitution")]
    DuplicateBinding(Ident),
}

/// Simultaneous capture-avoiding substitution of each `(x, s)` in `bindings`.
///
/// A binder of `t` is renamed to a fresh `<name>N` whenever it would capture
/// a free variable of a replacement that is substituted underneath it.
pub fn subst(bindings: &[(Ident, Term)], t: &Term) -> Result<Term, SubstError> {
    for (i, (x, _)) in bindings.iter().enumerate() {
        if bindings[..i].iter().any(|(y, _)| y == x) {
            return Err(SubstError::DuplicateBinding(x.clone()));
        }
    }
    Ok(subst_distinct(bindings, t))
}

/// [`subst`] for callers that already guarantee distinct variables.
pub(crate) fn subst_distinct(bindings: &[(Ident, Term)], t: &Term) -> Term {
    let cx = Substitution {
        initial: bindings,
        replacement_fv: OnceCell::new(),
        introduced: RefCell::new(BTreeSet::new()),
    };
    cx.apply(bindings, t)
}

struct Substitution<'a> {
    initial: &'a [(Ident, Term)],
    // Free variables of every original replacement term; computed on the
    // first binder that is crossed.
    replacement_fv: OnceCell<BTreeSet<Ident>>,
    // Names produced by renaming so far. Together with `replacement_fv` this
    // over-approximates the free variables of any live replacement.
    introduced: RefCell<BTreeSet<Ident>>,
}

impl Substitution<'_> {
    fn replacement_fv(&self) -> &BTreeSet<Ident> {
        self.replacement_fv.get_or_init(|| {
            self.initial
                .iter()
                .flat_map(|(_, s)| s.free_vars())
                .collect()
        })
    }

    fn may_capture(&self, p: &Ident) -> bool {
        self.replacement_fv().contains(p) || self.introduced.borrow().contains(p)
    }

    fn apply(&self, bindings: &[(Ident, Term)], t: &Term) -> Term {
        if bindings.is_empty() {
            return t.clone();
        }
        match t {
            Term::Var(x) => bindings
                .iter()
                .find(|(y, _)| y == x)
                .map_or_else(|| t.clone(), |(_, s)| s.clone()),
            Term::App(a) => Term::App(App {
                head: Arc::new(self.apply(bindings, &a.head)),
                args: a.args.iter().map(|arg| self.apply(bindings, arg)).collect(),
            }),
            Term::Fun(f) => self.under_binder(bindings, f, t),
        }
    }

    fn under_binder(&self, bindings: &[(Ident, Term)], f: &Fun, t: &Term) -> Term {
        let mut live: Vec<(Ident, Term)> = bindings
            .iter()
            .filter(|(x, _)| !f.params.contains(x))
            .cloned()
            .collect();
        if live.is_empty() {
            return t.clone();
        }
        if !f.params.iter().any(|p| self.may_capture(p)) {
            return Term::Fun(Fun {
                params: Arc::clone(&f.params),
                body: Arc::new(self.apply(&live, &f.body)),
            });
        }

        live.retain(|(x, _)| f.body.occurs_free(x));
        if live.is_empty() {
            return t.clone();
        }
        let body_fv = f.body.free_vars();
        let mut params: Vec<Ident> = f.params.to_vec();
        let mut renames = Vec::new();
        for i in 0..params.len() {
            let p = params[i].clone();
            if !live.iter().any(|(_, s)| s.occurs_free(&p)) {
                continue;
            }
            let fresh = p.freshen(|c| {
                params.contains(c)
                    || body_fv.contains(c)
                    || self.may_capture(c)
                    || live.iter().any(|(x, _)| x == c)
            });
            self.introduced.borrow_mut().insert(fresh.clone());
            renames.push((p, Term::Var(fresh.clone())));
            params[i] = fresh;
        }
        live.extend(renames);
        Term::Fun(Fun {
            params: params.into(),
            body: Arc::new(self.apply(&live, &f.body)),
        })
    }
}
