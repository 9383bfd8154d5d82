use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Ident, Term};

const MAX_WIDTH: usize = 4;
const BINDER_NAMES: &[&str] = &["x", "y", "z", "u", "v", "w"];
const FREE_NAMES: &[&str] = &["a", "b", "c", "d", "f", "g"];

/// Deterministic pseudo-random term of at most `max_size` nodes.
///
/// Binder and application tuples have width 1..=4. Binder names come from a
/// small pool so shadowing and capture situations are common. When `closed`
/// is set every variable is bound; the smallest closed term has two nodes, so
/// a `max_size` of 1 is raised to 2 in that case.
pub fn gen_term(seed: u64, max_size: usize, closed: bool) -> Term {
    assert!(max_size >= 1, "max_size must be at least 1");
    let mut g = Generator {
        rng: ChaCha8Rng::seed_from_u64(seed),
        closed,
        scope: Vec::new(),
    };
    let budget = if closed { max_size.max(2) } else { max_size };
    let target = g.rng.gen_range(g.min_size()..=budget);
    g.term(target)
}

struct Generator {
    rng: ChaCha8Rng,
    closed: bool,
    scope: Vec<Ident>,
}

impl Generator {
    fn min_size(&self) -> usize {
        if self.closed && self.scope.is_empty() {
            2
        } else {
            1
        }
    }

    fn var(&mut self) -> Term {
        let use_bound = !self.scope.is_empty() && (self.closed || self.rng.gen_bool(0.7));
        let name = if use_bound {
            self.scope.choose(&mut self.rng).unwrap().clone()
        } else {
            Ident::new(FREE_NAMES.choose(&mut self.rng).unwrap()).unwrap()
        };
        Term::Var(name)
    }

    /// A term of exactly `size` nodes; `size >= self.min_size()`.
    fn term(&mut self, size: usize) -> Term {
        debug_assert!(size >= self.min_size());
        if size == 1 {
            return self.var();
        }
        let min = self.min_size();
        // an application of width w needs 1 + (1 + w) * min nodes
        let app_fits = size > 2 * min;
        if app_fits && self.rng.gen_bool(0.55) {
            self.app(size)
        } else {
            self.fun(size)
        }
    }

    fn fun(&mut self, size: usize) -> Term {
        let width = self.rng.gen_range(1..=MAX_WIDTH);
        let mut pool: Vec<&str> = BINDER_NAMES.to_vec();
        pool.shuffle(&mut self.rng);
        let params: Vec<Ident> = pool[..width]
            .iter()
            .map(|n| Ident::new(n).unwrap())
            .collect();
        let depth = self.scope.len();
        self.scope.extend(params.iter().cloned());
        let body = self.term(size - 1);
        self.scope.truncate(depth);
        Term::fun(params, body).expect("distinct names drawn from the pool")
    }

    fn app(&mut self, size: usize) -> Term {
        let min = self.min_size();
        let max_width = ((size - 1) / min - 1).clamp(1, MAX_WIDTH);
        let width = self.rng.gen_range(1..=max_width);
        let parts = width + 1;
        // distribute the remaining nodes over head and arguments
        let mut sizes = vec![min; parts];
        for _ in 0..(size - 1 - parts * min) {
            let i = self.rng.gen_range(0..parts);
            sizes[i] += 1;
        }
        // heads that are abstractions make redexes; bias toward them
        if sizes[0] >= 2 && self.rng.gen_bool(0.5) {
            let head = self.fun(sizes[0]);
            let args = sizes[1..].iter().map(|&s| self.term(s)).collect();
            return Term::app(head, args).unwrap();
        }
        let head = self.term(sizes[0]);
        let args = sizes[1..].iter().map(|&s| self.term(s)).collect();
        Term::app(head, args).unwrap()
    }
}
