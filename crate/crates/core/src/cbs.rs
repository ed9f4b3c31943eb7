//! Conflict-based search over a constraint tree, optionally recording a
//! priority ordering that prunes children (CBS with priorities).

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::Arc;
use std::time::Instant;

use crate::collision::{detect_collisions, Collision, CollisionKind};
use crate::constraint::{Constraint, ConstraintTable};
use crate::instance::{flowtime, Instance, Path, Plan};
use crate::lowlevel::{constrained_search, distances_to, TieBreakContext};
use crate::ordering::PriorityOrdering;
use crate::stats::{Interrupted, Limits, SearchMeter, SolveOutcome, SolveResult, SolverStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CbsMode {
    Plain,
    WithPriorities,
}

/// Which agent of a collision a child constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

#[derive(Debug)]
struct Link {
    constraint: Constraint,
    parent: Option<Arc<Link>>,
}

fn chain(head: &Option<Arc<Link>>) -> impl Iterator<Item = Constraint> + '_ {
    std::iter::successors(head.as_deref(), |l| l.parent.as_deref()).map(|l| l.constraint)
}

/// A constraint-tree node. Constraints are shared with the ancestors.
#[derive(Debug, Clone)]
pub struct CtNode {
    constraints: Option<Arc<Link>>,
    plan: Plan,
    cost: u64,
    collisions: Vec<Collision>,
    ordering: PriorityOrdering,
    pairs_added: usize,
    generation_id: u64,
}

impl CtNode {
    fn new(
        instance: &Instance,
        constraints: Option<Arc<Link>>,
        plan: Plan,
        ordering: PriorityOrdering,
        pairs_added: usize,
    ) -> Self {
        let collisions = detect_collisions(instance, &plan);
        CtNode {
            constraints,
            cost: flowtime(&plan),
            plan,
            collisions,
            ordering,
            pairs_added,
            generation_id: 0,
        }
    }

    pub fn constraints(&self) -> Vec<Constraint> {
        let mut out: Vec<Constraint> = chain(&self.constraints).collect();
        out.reverse();
        out
    }

    pub fn plan(&self) -> &Plan {
        &self.plan
    }

    pub fn cost(&self) -> u64 {
        self.cost
    }

    pub fn collisions(&self) -> &[Collision] {
        &self.collisions
    }

    pub fn ordering(&self) -> &PriorityOrdering {
        &self.ordering
    }

    /// Ordering pairs added on the path from the root to this node.
    pub fn pairs_added(&self) -> usize {
        self.pairs_added
    }

    pub fn generation_id(&self) -> u64 {
        self.generation_id
    }
}

/// The collision a node is split on: earliest time, then lowest agent pair,
/// vertex before edge.
pub fn choose_collision(node: &CtNode) -> Option<Collision> {
    node.collisions.first().copied()
}

/// Builds and expands constraint-tree nodes for one instance.
pub struct CbsSolver<'a> {
    instance: &'a Instance,
    mode: CbsMode,
    heuristics: Vec<Vec<u32>>,
}

impl<'a> CbsSolver<'a> {
    pub fn new(instance: &'a Instance, mode: CbsMode) -> Self {
        let heuristics = instance
            .agents()
            .iter()
            .map(|a| distances_to(instance.graph(), a.target))
            .collect();
        CbsSolver {
            instance,
            mode,
            heuristics,
        }
    }

    fn plan_agent(
        &self,
        agent: usize,
        table: &ConstraintTable,
        others: &Plan,
        meter: &mut SearchMeter,
    ) -> Result<Option<Path>, Interrupted> {
        let tie = TieBreakContext::incomparable(
            others
                .paths
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != agent)
                .map(|(_, p)| p.clone())
                .collect(),
        );
        constrained_search(
            self.instance.graph(),
            self.instance.agent(agent),
            table,
            &self.heuristics[agent],
            self.instance.semantics(),
            &tie,
            meter,
        )
    }

    /// The root: agents planned one after another without constraints, each
    /// preferring paths that avoid the ones already planned.
    pub fn root(&self, meter: &mut SearchMeter) -> Result<Option<CtNode>, Interrupted> {
        let empty = ConstraintTable::default();
        let mut plan = Plan::new(Vec::with_capacity(self.instance.num_agents()));
        for i in 0..self.instance.num_agents() {
            let Some(path) = self.plan_agent(i, &empty, &plan, meter)? else {
                return Ok(None);
            };
            plan.paths.push(path);
        }
        Ok(Some(CtNode::new(
            self.instance,
            None,
            plan,
            PriorityOrdering::empty(self.instance.num_agents()),
            0,
        )))
    }

    /// The child of `node` that resolves `collision` by constraining the agent
    /// on `side`. `Ok(None)` when the child is pruned by the ordering or the
    /// constrained agent has no path.
    pub fn expand_ct_node(
        &self,
        node: &CtNode,
        collision: &Collision,
        side: Side,
        meter: &mut SearchMeter,
    ) -> Result<Option<CtNode>, Interrupted> {
        let (i, j) = match side {
            Side::First => (collision.first, collision.second),
            Side::Second => (collision.second, collision.first),
        };
        let mut ordering = node.ordering.clone();
        let mut pairs_added = node.pairs_added;
        if self.mode == CbsMode::WithPriorities {
            if ordering.precedes(i, j) {
                return Ok(None);
            }
            if !ordering.precedes(j, i) {
                ordering
                    .insert(j, i)
                    .expect("i does not precede j, so j < i keeps the order acyclic");
                pairs_added += 1;
            }
        }
        let t = collision.time;
        let constraint = match (collision.kind, side) {
            (CollisionKind::Vertex(v), _) => Constraint::vertex(i, v, t),
            (CollisionKind::Edge { from, to }, Side::First) => Constraint::edge(i, from, to, t),
            (CollisionKind::Edge { from, to }, Side::Second) => Constraint::edge(i, to, from, t),
        };
        let constraints = Some(Arc::new(Link {
            constraint,
            parent: node.constraints.clone(),
        }));
        let own: Vec<Constraint> = chain(&constraints).filter(|c| c.agent == i).collect();
        let mut plan = node.plan.clone();
        let Some(path) = self.plan_agent(i, &ConstraintTable::new(&own), &plan, meter)? else {
            return Ok(None);
        };
        plan.paths[i] = path;
        Ok(Some(CtNode::new(self.instance, constraints, plan, ordering, pairs_added)))
    }

    pub fn solve(&self, limits: &Limits) -> SolveOutcome {
        let started = Instant::now();
        let deadline = limits.timeout.map(|d| started + d);
        let mut meter = SearchMeter::new(deadline, limits.budget);
        let mut stats = SolverStats::new();
        let (result, found) = self.search(limits, &mut meter, &mut stats);
        stats.result = result;
        stats.runtime = started.elapsed();
        stats.low_level_expansions = meter.expansions();
        let (plan, ordering) = match found {
            Some(node) => (Some(node.plan), Some(node.ordering)),
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
        limits: &Limits,
        meter: &mut SearchMeter,
        stats: &mut SolverStats,
    ) -> (SolveResult, Option<CtNode>) {
        let root = match self.root(meter) {
            Ok(Some(root)) => root,
            Ok(None) => return (SolveResult::NoSolution, None),
            Err(Interrupted) => return (SolveResult::Timeout, None),
        };
        let mut next_id = 0u64;
        let mut nodes: Vec<Option<CtNode>> = Vec::new();
        let mut open = BinaryHeap::new();
        let mut push = |mut node: CtNode, nodes: &mut Vec<Option<CtNode>>, open: &mut BinaryHeap<_>| {
            node.generation_id = next_id;
            next_id += 1;
            open.push(Reverse((node.cost, node.collisions.len(), node.generation_id, nodes.len())));
            nodes.push(Some(node));
        };
        push(root, &mut nodes, &mut open);

        while let Some(Reverse((_, _, _, slot))) = open.pop() {
            if meter.check_deadline().is_err() {
                return (SolveResult::Timeout, None);
            }
            if limits
                .high_level_limit
                .is_some_and(|cap| stats.high_level_expansions >= cap)
            {
                return (SolveResult::Timeout, None);
            }
            let node = nodes[slot].take().expect("each node is popped once");
            stats.high_level_expansions += 1;
            stats.max_branch_pairs = stats.max_branch_pairs.max(node.pairs_added);
            let Some(collision) = choose_collision(&node) else {
                return (SolveResult::Solved, Some(node));
            };
            for side in [Side::First, Side::Second] {
                match self.expand_ct_node(&node, &collision, side, meter) {
                    Ok(Some(child)) => push(child, &mut nodes, &mut open),
                    Ok(None) => {}
                    Err(Interrupted) => return (SolveResult::Timeout, None),
                }
            }
        }
        (SolveResult::NoSolution, None)
    }
}

/// Runs CBS (or CBS with priorities) on `instance`.
pub fn solve_cbs(instance: &Instance, mode: CbsMode, limits: &Limits) -> SolveOutcome {
    CbsSolver::new(instance, mode).solve(limits)
}
