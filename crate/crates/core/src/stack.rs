//! The two stack representations: a flat cons-list of terms, and a
//! segmented list whose elements are whole argument tuples ("lazy
//! concatenation"). Both are persistent; pushes and pops return new stacks
//! that share their tails with the input.

use std::sync::Arc;

use thiserror::Error;

use crate::syntax::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StackError {
    #[error("cannot push an empty segment")]
    EmptySegment,
}

struct Node<T> {
    head: T,
    tail: List<T>,
}

/// Persistent singly linked list.
struct List<T> {
    first: Option<Arc<Node<T>>>,
    len: usize,
}

impl<T> Clone for List<T> {
    fn clone(&self) -> Self {
        List {
            first: self.first.clone(),
            len: self.len,
        }
    }
}

impl<T> List<T> {
    const fn new() -> Self {
        List {
            first: None,
            len: 0,
        }
    }

    fn cons(head: T, tail: List<T>) -> Self {
        let len = tail.len + 1;
        List {
            first: Some(Arc::new(Node { head, tail })),
            len,
        }
    }

    fn uncons(&self) -> Option<(&T, &List<T>)> {
        self.first.as_deref().map(|n| (&n.head, &n.tail))
    }

    fn iter(&self) -> impl Iterator<Item = &T> {
        let mut cur = self;
        std::iter::from_fn(move || {
            let (h, t) = cur.uncons()?;
            cur = t;
            Some(h)
        })
    }

    fn ptr_eq(&self, other: &List<T>) -> bool {
        match (&self.first, &other.first) {
            (Some(a), Some(b)) => Arc::ptr_eq(a, b),
            (None, None) => true,
            _ => false,
        }
    }
}

// Unlink uniquely owned nodes iteratively so long stacks do not overflow on drop.
impl<T> Drop for List<T> {
    fn drop(&mut self) {
        let mut next = self.first.take();
        while let Some(node) = next {
            match Arc::try_unwrap(node) {
                Ok(mut node) => next = node.tail.first.take(),
                Err(_) => break,
            }
        }
    }
}

impl<T: PartialEq> PartialEq for List<T> {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && (self.ptr_eq(other) || self.iter().eq(other.iter()))
    }
}

/// Flat stack of terms; the first element is the top.
#[derive(Clone, PartialEq)]
pub struct FlatStack(List<Term>);

impl Default for FlatStack {
    fn default() -> Self {
        Self::new()
    }
}

impl FlatStack {
    pub const fn new() -> Self {
        FlatStack(List::new())
    }

    pub fn len(&self) -> usize {
        self.0.len
    }

    pub fn is_empty(&self) -> bool {
        self.0.len == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = &Term> {
        self.0.iter()
    }

    pub fn to_vec(&self) -> Vec<Term> {
        self.iter().cloned().collect()
    }

    /// `xs ++ self`, so `xs[0]` ends up on top.
    pub fn push(&self, xs: &[Term]) -> FlatStack {
        let list = xs
            .iter()
            .rev()
            .fold(self.0.clone(), |acc, x| List::cons(x.clone(), acc));
        FlatStack(list)
    }

    pub fn pop(&self, n: usize) -> PopResult<FlatStack> {
        assert!(n >= 1, "pop count must be positive");
        if self.len() < n {
            return PopResult::Insufficient;
        }
        let mut taken = Vec::with_capacity(n);
        let mut rest = &self.0;
        for _ in 0..n {
            let (h, t) = rest.uncons().expect("length checked");
            taken.push(h.clone());
            rest = t;
        }
        PopResult::Found {
            taken,
            rest: FlatStack(rest.clone()),
        }
    }
}

impl FromIterator<Term> for FlatStack {
    fn from_iter<I: IntoIterator<Item = Term>>(iter: I) -> Self {
        let items: Vec<Term> = iter.into_iter().collect();
        FlatStack::new().push(&items)
    }
}

impl std::fmt::Debug for FlatStack {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

/// A non-empty argument tuple stored as one stack element.
#[derive(Clone, PartialEq, Eq)]
pub struct Segment(Arc<[Term]>);

impl Segment {
    pub fn new(items: Vec<Term>) -> Result<Self, StackError> {
        if items.is_empty() {
            Err(StackError::EmptySegment)
        } else {
            Ok(Segment(items.into()))
        }
    }

    pub fn items(&self) -> &[Term] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl std::fmt::Debug for Segment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// Stack of non-empty segments; the first segment is the top frame.
#[derive(Clone, PartialEq)]
pub struct SegStack {
    segments: List<Segment>,
    terms: usize,
}

impl Default for SegStack {
    fn default() -> Self {
        Self::new()
    }
}

impl SegStack {
    pub const fn new() -> Self {
        SegStack {
            segments: List::new(),
            terms: 0,
        }
    }

    /// Number of segments.
    pub fn depth(&self) -> usize {
        self.segments.len
    }

    /// Total number of terms over all segments.
    pub fn term_count(&self) -> usize {
        self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.segments.len == 0
    }

    pub fn segments(&self) -> impl Iterator<Item = &Segment> {
        self.segments.iter()
    }

    /// Top segment and the stack below it.
    pub fn split_first(&self) -> Option<(&Segment, SegStack)> {
        self.segments.uncons().map(|(seg, tail)| {
            (
                seg,
                SegStack {
                    segments: tail.clone(),
                    terms: self.terms - seg.len(),
                },
            )
        })
    }

    pub fn push_segment(&self, seg: Segment) -> SegStack {
        let terms = self.terms + seg.len();
        SegStack {
            segments: List::cons(seg, self.segments.clone()),
            terms,
        }
    }

    /// Prepends `xs` as a new top segment.
    pub fn push(&self, xs: &[Term]) -> Result<SegStack, StackError> {
        Ok(self.push_segment(Segment::new(xs.to_vec())?))
    }

    pub fn pop(&self, n: usize) -> PopResult<SegStack> {
        self.pop_acc(Vec::new(), n)
    }

    /// The accumulating pop loop. Each round either finishes (accumulator
    /// length equals `n`, or exceeds it and the surplus goes back as a new top
    /// segment), absorbs exactly one more segment, or gives up.
    pub fn pop_acc(&self, mut acc: Vec<Term>, n: usize) -> PopResult<SegStack> {
        assert!(n >= 1, "pop count must be positive");
        let mut rest = self.clone();
        loop {
            let m = acc.len();
            if m == n {
                return PopResult::Found { taken: acc, rest };
            }
            if m > n {
                let surplus = acc.split_off(n);
                let rest = rest.push_segment(Segment(surplus.into()));
                return PopResult::Found { taken: acc, rest };
            }
            match rest.split_first() {
                Some((seg, below)) => {
                    acc.extend_from_slice(seg.items());
                    rest = below;
                }
                None => return PopResult::Insufficient,
            }
        }
    }

    /// Continuation-passing pop: equals `k(self.pop(n))`, with `k` handed
    /// unchanged through every round of the accumulation.
    pub fn pop_cps<R>(&self, n: usize, k: impl FnOnce(PopResult<SegStack>) -> R) -> R {
        assert!(n >= 1, "pop count must be positive");
        pop_acc_cps(Vec::new(), n, self.clone(), k)
    }

    pub fn flatten(&self) -> FlatStack {
        let items: Vec<Term> = self
            .segments()
            .flat_map(|s| s.items().iter().cloned())
            .collect();
        FlatStack::new().push(&items)
    }
}

fn pop_acc_cps<R>(
    mut acc: Vec<Term>,
    n: usize,
    stack: SegStack,
    k: impl FnOnce(PopResult<SegStack>) -> R,
) -> R {
    let m = acc.len();
    if m == n {
        k(PopResult::Found {
            taken: acc,
            rest: stack,
        })
    } else if m > n {
        let surplus = acc.split_off(n);
        let rest = stack.push_segment(Segment(surplus.into()));
        k(PopResult::Found { taken: acc, rest })
    } else if let Some((seg, below)) = stack.split_first() {
        acc.extend_from_slice(seg.items());
        pop_acc_cps(acc, n, below, k)
    } else {
        k(PopResult::Insufficient)
    }
}

impl std::fmt::Debug for SegStack {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.segments()).finish()
    }
}

impl FromIterator<Segment> for SegStack {
    fn from_iter<I: IntoIterator<Item = Segment>>(iter: I) -> Self {
        let segs: Vec<Segment> = iter.into_iter().collect();
        segs.into_iter()
            .rev()
            .fold(SegStack::new(), |s, seg| s.push_segment(seg))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PopResult<S> {
    Found { taken: Vec<Term>, rest: S },
    Insufficient,
}

impl<S> PopResult<S> {
    pub fn map_rest<T>(self, f: impl FnOnce(S) -> T) -> PopResult<T> {
        match self {
            PopResult::Found { taken, rest } => PopResult::Found {
                taken,
                rest: f(rest),
            },
            PopResult::Insufficient => PopResult::Insufficient,
        }
    }
}

impl serde::Serialize for FlatStack {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl serde::Serialize for Segment {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter())
    }
}

impl serde::Serialize for SegStack {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.segments())
    }
}
