//! Priority-based search: depth-first search over priority orderings, and the
//! prioritized-planning baselines that run it from a total ordering.

use std::cmp::Reverse;
use std::time::Instant;

use rand::seq::SliceRandom;

use crate::collision::{first_collision_partial, paths_collide};
use crate::instance::{flowtime, Instance, Path, Plan};
use crate::lowlevel::{distances_to, prioritized_search, TieBreakContext};
use crate::ordering::PriorityOrdering;
use crate::par::{par_map, Execution};
use crate::rng::{derive_seed, seeded_rng};
use crate::stats::{Interrupted, Limits, SearchMeter, SolveOutcome, SolveResult, SolverStats};

/// A priority-tree node. Paths are absent only while the root is built.
#[derive(Debug, Clone)]
pub struct PtNode {
    paths: Vec<Option<Path>>,
    ordering: PriorityOrdering,
    cost: u64,
    pairs_added: usize,
}

impl PtNode {
    pub fn new(agents: usize, ordering: PriorityOrdering) -> Self {
        assert_eq!(ordering.agents(), agents);
        PtNode {
            paths: vec![None; agents],
            ordering,
            cost: 0,
            pairs_added: 0,
        }
    }

    pub fn path(&self, agent: usize) -> Option<&Path> {
        self.paths[agent].as_ref()
    }

    pub fn ordering(&self) -> &PriorityOrdering {
        &self.ordering
    }

    pub fn cost(&self) -> u64 {
        self.cost
    }

    /// Ordering pairs added on the way from the root to this node.
    pub fn pairs_added(&self) -> usize {
        self.pairs_added
    }

    /// The plan, once every agent has a path.
    pub fn plan(&self) -> Option<Plan> {
        self.paths.iter().cloned().collect::<Option<Vec<_>>>().map(Plan::new)
    }

    fn refresh_cost(&mut self) {
        self.cost = self.paths.iter().flatten().map(|p| p.arrival() as u64).sum();
    }
}

/// How a baseline fixes its total ordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderingStrategy {
    /// `order[0]` has the highest priority.
    Fixed(Vec<usize>),
    /// Longer individually optimal paths get higher priority.
    LongestFirst,
    ShortestFirst,
    RandomSeeded(u64),
}

pub fn build_total_ordering(instance: &Instance, strategy: &OrderingStrategy) -> PriorityOrdering {
    let m = instance.num_agents();
    let lengths = || -> Vec<u32> {
        instance
            .agents()
            .iter()
            .map(|a| instance.graph().bfs_distances(a.start, None)[a.target.index()])
            .collect()
    };
    let order: Vec<usize> = match strategy {
        OrderingStrategy::Fixed(order) => {
            let mut sorted = order.clone();
            sorted.sort_unstable();
            assert!(sorted.iter().copied().eq(0..m), "fixed order must be a permutation");
            order.clone()
        }
        OrderingStrategy::LongestFirst => {
            let len = lengths();
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by_key(|&i| (Reverse(len[i]), i));
            order
        }
        OrderingStrategy::ShortestFirst => {
            let len = lengths();
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by_key(|&i| (len[i], i));
            order
        }
        OrderingStrategy::RandomSeeded(seed) => {
            let mut order: Vec<usize> = (0..m).collect();
            order.shuffle(&mut seeded_rng(*seed));
            order
        }
    };
    PriorityOrdering::total(m, &order).expect("a permutation is acyclic")
}

/// Plans nodes of the priority tree for one instance.
pub struct PbsSolver<'a> {
    instance: &'a Instance,
    heuristics: Vec<Vec<u32>>,
}

impl<'a> PbsSolver<'a> {
    pub fn new(instance: &'a Instance) -> Self {
        let heuristics = instance
            .agents()
            .iter()
            .map(|a| distances_to(instance.graph(), a.target))
            .collect();
        PbsSolver {
            instance,
            heuristics,
        }
    }

    /// Replans agent `i`, then walks the agents below it in topological order
    /// and replans each one that now collides with a higher agent. Returns
    /// `false` if some agent has no path.
    pub fn update_plan(
        &self,
        node: &mut PtNode,
        i: usize,
        meter: &mut SearchMeter,
    ) -> Result<bool, Interrupted> {
        let semantics = self.instance.semantics();
        for j in node.ordering.topo_below(i) {
            let higher: Vec<Path> = node
                .ordering
                .higher(j)
                .filter_map(|k| node.paths[k].clone())
                .collect();
            let stale = match &node.paths[j] {
                Some(p) => j == i || higher.iter().any(|q| paths_collide(p, q, semantics)),
                None => j == i,
            };
            if !stale {
                continue;
            }
            let mut tie = TieBreakContext::none();
            for (k, p) in node.paths.iter().enumerate() {
                let Some(p) = p else { continue };
                if k == j {
                    continue;
                }
                if node.ordering.precedes(j, k) {
                    tie.lower_paths.push(p.clone());
                } else if !node.ordering.precedes(k, j) {
                    tie.incomparable_paths.push(p.clone());
                }
            }
            let found = prioritized_search(
                self.instance.graph(),
                self.instance.agent(j),
                &higher,
                &self.heuristics[j],
                semantics,
                &tie,
                meter,
            )?;
            match found {
                Some(path) => node.paths[j] = Some(path),
                None => return Ok(false),
            }
        }
        node.refresh_cost();
        Ok(true)
    }

    /// The root node: `update_plan` for every agent in ascending index order.
    pub fn root(
        &self,
        initial: &PriorityOrdering,
        meter: &mut SearchMeter,
    ) -> Result<Option<PtNode>, Interrupted> {
        let mut node = PtNode::new(self.instance.num_agents(), initial.clone());
        for i in 0..self.instance.num_agents() {
            if !self.update_plan(&mut node, i, meter)? {
                return Ok(None);
            }
        }
        Ok(Some(node))
    }

    pub fn solve(&self, initial: &PriorityOrdering, limits: &Limits) -> SolveOutcome {
        let started = Instant::now();
        let deadline = limits.timeout.map(|d| started + d);
        let mut meter = SearchMeter::new(deadline, limits.budget);
        let mut stats = SolverStats::new();
        let (result, found) = self.search(initial, limits, &mut meter, &mut stats);
        stats.result = result;
        stats.runtime = started.elapsed();
        stats.low_level_expansions = meter.expansions();
        let (plan, ordering) = match found {
            Some(node) => (node.plan(), Some(node.ordering)),
            None => (None, None),
        };
        SolveOutcome {
            stats,
            plan,
            ordering,
        }
    }

    fn search(
        &self,
        initial: &PriorityOrdering,
        limits: &Limits,
        meter: &mut SearchMeter,
        stats: &mut SolverStats,
    ) -> (SolveResult, Option<PtNode>) {
        let m = self.instance.num_agents();
        let max_pairs = m * m.saturating_sub(1) / 2;
        let root = match self.root(initial, meter) {
            Ok(Some(root)) => root,
            Ok(None) => return (SolveResult::NoSolution, None),
            Err(Interrupted) => return (SolveResult::Timeout, None),
        };
        let mut stack = vec![root];
        while let Some(node) = stack.pop() {
            if meter.check_deadline().is_err() {
                return (SolveResult::Timeout, None);
            }
            if limits
                .high_level_limit
                .is_some_and(|cap| stats.high_level_expansions >= cap)
            {
                return (SolveResult::Timeout, None);
            }
            stats.high_level_expansions += 1;
            stats.max_branch_pairs = stats.max_branch_pairs.max(node.pairs_added);
            assert!(node.pairs_added <= max_pairs, "branch added more pairs than agent pairs exist");

            let Some(collision) = first_collision_partial(&node.paths, self.instance.semantics()) else {
                return (SolveResult::Solved, Some(node));
            };
            let (i, j) = (collision.first, collision.second);
            if node.ordering.comparable(i, j) {
                stats.repeated_pairs += 1;
                continue;
            }
            let mut children = Vec::with_capacity(2);
            for (hi, lo) in [(i, j), (j, i)] {
                let mut child = node.clone();
                child
                    .ordering
                    .insert(hi, lo)
                    .expect("colliding agents are incomparable");
                child.pairs_added += 1;
                match self.update_plan(&mut child, lo, meter) {
                    Ok(true) => children.push(child),
                    Ok(false) => {}
                    Err(Interrupted) => return (SolveResult::Timeout, None),
                }
            }
            // Stable sort: on equal cost the child that replans `i` is pushed
            // last and explored first.
            children.sort_by_key(|c| Reverse(c.cost));
            stack.extend(children);
        }
        (SolveResult::NoSolution, None)
    }
}

/// Runs PBS from the initial ordering `initial` (empty for plain PBS, total
/// for prioritized planning).
pub fn solve_pbs(instance: &Instance, initial: &PriorityOrdering, limits: &Limits) -> SolveOutcome {
    PbsSolver::new(instance).solve(initial, limits)
}

/// Prioritized planning with a total ordering chosen by `strategy`.
pub fn solve_prioritized(instance: &Instance, strategy: &OrderingStrategy, limits: &Limits) -> SolveOutcome {
    solve_pbs(instance, &build_total_ordering(instance, strategy), limits)
}

/// Prioritized planning from `runs` random total orderings, keeping the
/// cheapest solution. Each run has the full `limits`.
pub fn solve_rnd(
    instance: &Instance,
    runs: usize,
    limits: &Limits,
    seed: u64,
    execution: Execution,
) -> SolveOutcome {
    let started = Instant::now();
    let seeds: Vec<u64> = (0..runs as u64).map(|k| derive_seed(seed, k)).collect();
    let outcomes = par_map(&seeds, execution, |&s| {
        solve_prioritized(instance, &OrderingStrategy::RandomSeeded(s), limits)
    });
    let mut stats = SolverStats::new();
    for o in &outcomes {
        stats.high_level_expansions += o.stats.high_level_expansions;
        stats.low_level_expansions += o.stats.low_level_expansions;
        stats.max_branch_pairs = stats.max_branch_pairs.max(o.stats.max_branch_pairs);
        stats.repeated_pairs += o.stats.repeated_pairs;
    }
    let any_timeout = outcomes.iter().any(|o| o.result() == SolveResult::Timeout);
    let best = outcomes
        .into_iter()
        .filter(|o| o.is_solved())
        .min_by_key(|o| flowtime(o.plan.as_ref().expect("solved runs carry a plan")));
    stats.runtime = started.elapsed();
    match best {
        Some(o) => {
            stats.result = SolveResult::Solved;
            SolveOutcome {
                stats,
                plan: o.plan,
                ordering: o.ordering,
            }
        }
        None => {
            stats.result = if any_timeout {
                SolveResult::Timeout
            } else {
                SolveResult::NoSolution
            };
            SolveOutcome {
                stats,
                plan: None,
                ordering: None,
            }
        }
    }
}

#[cfg(test)]
mod tests;
