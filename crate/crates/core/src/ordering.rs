//! Priority orderings: strict partial orders over agent indices.
//!
//! `i ≺ j` means agent `i` has higher priority than agent `j`. The ordering
//! keeps the explicitly added pairs together with a transitive-closure bit
//! matrix so that `precedes` is a constant-time lookup.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use crate::error::CycleError;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PriorityOrdering {
    agents: usize,
    words: usize,
    /// Row `i` holds every `j` with `i ≺ j`.
    reach: Vec<u64>,
    pairs: Vec<(usize, usize)>,
}

impl PriorityOrdering {
    pub fn empty(agents: usize) -> Self {
        let words = agents.div_ceil(WORD).max(1);
        PriorityOrdering {
            agents,
            words,
            reach: vec![0; agents * words],
            pairs: Vec::new(),
        }
    }

    /// The total order in which `order[0]` has the highest priority.
    pub fn total(agents: usize, order: &[usize]) -> Result<Self, CycleError> {
        let mut ordering = PriorityOrdering::empty(agents);
        for w in order.windows(2) {
            ordering.insert(w[0], w[1])?;
        }
        Ok(ordering)
    }

    pub fn from_pairs(
        agents: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, CycleError> {
        let mut ordering = PriorityOrdering::empty(agents);
        for (lo, hi) in pairs {
            ordering.insert(lo, hi)?;
        }
        Ok(ordering)
    }

    pub fn agents(&self) -> usize {
        self.agents
    }

    /// Explicitly added pairs, in insertion order.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    #[inline]
    fn row(&self, i: usize) -> &[u64] {
        &self.reach[i * self.words..(i + 1) * self.words]
    }

    /// Whether `i ≺ j` under transitive closure.
    #[inline]
    pub fn precedes(&self, i: usize, j: usize) -> bool {
        self.reach[i * self.words + j / WORD] >> (j % WORD) & 1 == 1
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.precedes(i, j) || self.precedes(j, i)
    }

    /// Returns a copy extended with `lo ≺ hi` and its consequences.
    pub fn add(&self, lo: usize, hi: usize) -> Result<Self, CycleError> {
        let mut next = self.clone();
        next.insert(lo, hi)?;
        Ok(next)
    }

    /// In-place form of [`PriorityOrdering::add`].
    pub fn insert(&mut self, lo: usize, hi: usize) -> Result<(), CycleError> {
        assert!(lo < self.agents && hi < self.agents, "agent index out of range");
        if lo == hi || self.precedes(hi, lo) {
            return Err(CycleError { lo, hi });
        }
        if !self.pairs.contains(&(lo, hi)) {
            self.pairs.push((lo, hi));
        }
        if self.precedes(lo, hi) {
            return Ok(());
        }
        let mut gained = self.row(hi).to_vec();
        gained[hi / WORD] |= 1 << (hi % WORD);
        for a in 0..self.agents {
            if a == lo || self.precedes(a, lo) {
                let row = &mut self.reach[a * self.words..(a + 1) * self.words];
                for (r, g) in row.iter_mut().zip(&gained) {
                    *r |= g;
                }
            }
        }
        Ok(())
    }

    /// Agents `k` with `k ≺ j`, ascending.
    pub fn higher(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.agents).filter(move |&k| self.precedes(k, j))
    }

    /// Agents `k` with `j ≺ k`, ascending.
    pub fn lower(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.agents).filter(move |&k| self.precedes(j, k))
    }

    /// Whether this ordering keeps every pair of `other`.
    pub fn extends(&self, other: &PriorityOrdering) -> bool {
        assert_eq!(self.agents, other.agents);
        self.reach.iter().zip(&other.reach).all(|(a, b)| b & !a == 0)
    }

    /// Topological order of `{i}` and all agents below it. Incomparable agents
    /// come out in ascending index order.
    pub fn topo_below(&self, i: usize) -> Vec<usize> {
        let members: Vec<usize> = std::iter::once(i).chain(self.lower(i)).collect();
        let mut indegree: Vec<usize> = members
            .iter()
            .map(|&x| members.iter().filter(|&&y| self.precedes(y, x)).count())
            .collect();
        let mut ready: BinaryHeap<Reverse<(usize, usize)>> = members
            .iter()
            .enumerate()
            .filter(|(k, _)| indegree[*k] == 0)
            .map(|(k, &x)| Reverse((x, k)))
            .collect();
        let mut out = Vec::with_capacity(members.len());
        while let Some(Reverse((x, _))) = ready.pop() {
            out.push(x);
            for (k, &y) in members.iter().enumerate() {
                if self.precedes(x, y) {
                    indegree[k] -= 1;
                    if indegree[k] == 0 {
                        ready.push(Reverse((y, k)));
                    }
                }
            }
        }
        out
    }

    /// Whether every pair of distinct agents is comparable.
    pub fn is_total(&self) -> bool {
        (0..self.agents).all(|i| ((i + 1)..self.agents).all(|j| self.comparable(i, j)))
    }
}

impl fmt::Debug for PriorityOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PriorityOrdering {
    /// Prints the added pairs 1-based, e.g. `{1<2, 3<2}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (lo, hi)) in self.pairs.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}<{}", lo + 1, hi + 1)?;
        }
        f.write_str("}")
    }
}
