//! Brute-force ground truth for small instances. Nothing here is used by the
//! solvers themselves.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use itertools::Itertools;
use rustc_hash::FxHashMap;

use crate::error::MapfError;
use crate::graph::{Graph, VertexId, UNREACHABLE};
use crate::instance::{flowtime, Instance, Path, Plan, Semantics};
use crate::lowlevel::{prioritized_shortest_path, TieBreakContext};
use crate::ordering::PriorityOrdering;
use crate::par::{par_map, Execution};
use crate::pbs::solve_pbs;
use crate::stats::{Limits, SearchMeter, SolveResult};

/// Default flowtime cap of [`joint_optimal`]: four times the sum of the
/// individual distances plus four per agent.
pub fn default_cost_cap(instance: &Instance) -> u64 {
    let sum: u64 = instance
        .agents()
        .iter()
        .map(|a| instance.graph().bfs_distances(a.start, None)[a.target.index()] as u64)
        .sum();
    4 * sum + 4 * instance.num_agents() as u64
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct JointState {
    positions: Vec<VertexId>,
    done: u32,
}

/// A flowtime-optimal plan found by search over joint states, or `None` when
/// no plan of flowtime at most `cost_cap` exists.
///
/// A state holds every agent's vertex and whether it has finished. Each step
/// every unfinished agent waits, moves, or (on its target) finishes; the step
/// costs one per agent that did not finish. Finished agents park on their
/// target or, under disappear semantics, leave the graph; under disappear
/// semantics reaching the target finishes the agent. The search is A* with
/// the sum of remaining distances, which never overestimates.
pub fn joint_optimal(instance: &Instance, cost_cap: Option<u64>) -> Option<Plan> {
    let m = instance.num_agents();
    assert!(m <= 32, "joint search supports at most 32 agents");
    let graph = instance.graph();
    let semantics = instance.semantics();
    let cap = cost_cap.unwrap_or_else(|| default_cost_cap(instance));
    let dist: Vec<Vec<u32>> = instance
        .agents()
        .iter()
        .map(|a| graph.bfs_distances(a.target, None))
        .collect();
    let all_done = if m == 32 { u32::MAX } else { (1u32 << m) - 1 };
    let h = |s: &JointState| -> u64 {
        (0..m)
            .filter(|&i| s.done >> i & 1 == 0)
            .map(|i| dist[i][s.positions[i].index()] as u64)
            .sum()
    };

    let mut start = JointState {
        positions: instance.agents().iter().map(|a| a.start).collect(),
        done: 0,
    };
    if semantics == Semantics::DisappearAtTarget {
        for a in instance.agents() {
            if a.start == a.target {
                start.done |= 1 << a.index;
            }
        }
    }

    let mut states: Vec<JointState> = vec![start.clone()];
    let mut parent: Vec<usize> = vec![usize::MAX];
    let mut best: FxHashMap<JointState, (u64, usize)> = FxHashMap::default();
    best.insert(start.clone(), (0, 0));
    let mut open = BinaryHeap::new();
    open.push(Reverse((h(&start), 0u64, 0usize)));

    while let Some(Reverse((f, g, idx))) = open.pop() {
        if f > cap {
            return None;
        }
        let state = states[idx].clone();
        if best.get(&state).is_some_and(|&(bg, bi)| bg < g || bi != idx) {
            continue;
        }
        if state.done == all_done {
            return Some(reconstruct(instance, &states, &parent, idx));
        }
        for (next, cost) in successors(instance, graph, &state) {
            let ng = g + cost;
            if best.get(&next).is_some_and(|&(bg, _)| bg <= ng) {
                continue;
            }
            let nf = ng + h(&next);
            states.push(next.clone());
            parent.push(idx);
            let ni = states.len() - 1;
            best.insert(next, (ng, ni));
            open.push(Reverse((nf, ng, ni)));
        }
    }
    None
}

/// Joint successors with their step costs.
fn successors(instance: &Instance, graph: &Graph, state: &JointState) -> Vec<(JointState, u64)> {
    const FINISH: Option<VertexId> = None;
    let m = instance.num_agents();
    let semantics = instance.semantics();
    let active: Vec<usize> = (0..m).filter(|&i| state.done >> i & 1 == 0).collect();
    let choices: Vec<Vec<Option<VertexId>>> = active
        .iter()
        .map(|&i| {
            let v = state.positions[i];
            let at_target = v == instance.agent(i).target;
            let mut c = Vec::new();
            if at_target {
                c.push(FINISH);
            }
            c.push(Some(v));
            c.extend(graph.neighbors(v).iter().map(|&u| Some(u)));
            c
        })
        .collect();

    let mut out = Vec::new();
    if active.is_empty() {
        return out;
    }
    for combo in choices.iter().map(|c| c.iter().copied()).multi_cartesian_product() {
        let mut next = state.clone();
        let mut cost = 0u64;
        for (&i, choice) in active.iter().zip(&combo) {
            match choice {
                None => next.done |= 1 << i,
                Some(u) => {
                    next.positions[i] = *u;
                    cost += 1;
                }
            }
        }
        // Occupancy after the step, excluding agents that have left.
        let present = |k: usize| next.done >> k & 1 == 0 || semantics == Semantics::StayAtTarget;
        let mut ok = true;
        'pairs: for a in 0..m {
            for b in (a + 1)..m {
                if !present(a) || !present(b) {
                    continue;
                }
                if next.positions[a] == next.positions[b] {
                    ok = false;
                    break 'pairs;
                }
                let moved = |k: usize| state.positions[k] != next.positions[k];
                if moved(a)
                    && moved(b)
                    && state.positions[a] == next.positions[b]
                    && state.positions[b] == next.positions[a]
                {
                    ok = false;
                    break 'pairs;
                }
            }
        }
        if !ok {
            continue;
        }
        if semantics == Semantics::DisappearAtTarget {
            for &i in &active {
                if next.positions[i] == instance.agent(i).target {
                    next.done |= 1 << i;
                }
            }
        }
        out.push((next, cost));
    }
    out
}

fn reconstruct(instance: &Instance, states: &[JointState], parent: &[usize], mut idx: usize) -> Plan {
    let mut chain = Vec::new();
    while idx != usize::MAX {
        chain.push(idx);
        idx = parent[idx];
    }
    chain.reverse();
    let paths = (0..instance.num_agents())
        .map(|i| {
            let mut vs = Vec::new();
            for &s in &chain {
                let st = &states[s];
                vs.push(st.positions[i]);
                if st.done >> i & 1 == 1 {
                    break;
                }
            }
            Path::new(vs)
        })
        .collect();
    Plan::new(paths)
}

/// Outcome of prioritized planning with one total ordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderingOutcome {
    /// Agents from highest to lowest priority.
    pub order: Vec<usize>,
    pub result: SolveResult,
    pub flowtime: Option<u64>,
}

/// Runs prioritized planning for every total ordering of the agents.
pub fn enumerate_total_orderings(
    instance: &Instance,
    max_m: usize,
    limits: &Limits,
    execution: Execution,
) -> Result<Vec<OrderingOutcome>, MapfError> {
    let m = instance.num_agents();
    if m > max_m {
        return Err(MapfError::RefusedTooLarge { agents: m, limit: max_m });
    }
    let orders: Vec<Vec<usize>> = (0..m).permutations(m).collect();
    Ok(par_map(&orders, execution, |order| {
        let ordering = PriorityOrdering::total(m, order).expect("permutation");
        let outcome = solve_pbs(instance, &ordering, limits);
        OrderingOutcome {
            order: order.clone(),
            result: outcome.result(),
            flowtime: outcome.plan.as_ref().map(flowtime),
        }
    }))
}

/// Whether every agent can reach its target without entering any other
/// agent's start or target.
pub fn wellformed_check(instance: &Instance) -> bool {
    let graph = instance.graph();
    instance.agents().iter().all(|a| {
        let mut blocked = vec![false; graph.vertex_count()];
        for other in instance.agents().iter().filter(|o| o.index != a.index) {
            blocked[other.start.index()] = true;
            blocked[other.target.index()] = true;
        }
        graph.bfs_distances(a.start, Some(&blocked))[a.target.index()] != UNREACHABLE
    })
}

/// Agents whose arrival in `plan` could improve if only the agents above
/// them in `ordering` were present.
pub fn inconsistent_agents(instance: &Instance, plan: &Plan, ordering: &PriorityOrdering) -> Vec<usize> {
    (0..instance.num_agents())
        .filter(|&i| {
            let higher: Vec<Path> = ordering.higher(i).map(|k| plan.path(k).clone()).collect();
            let best = prioritized_shortest_path(
                instance.graph(),
                instance.agent(i),
                &higher,
                instance.semantics(),
                &TieBreakContext::none(),
                &mut SearchMeter::unlimited(),
            )
            .expect("unlimited search is never interrupted");
            best.map(|p| p.arrival()) != Some(plan.path(i).arrival())
        })
        .collect()
}

/// Whether no agent's arrival improves when every agent not above it is
/// removed.
pub fn is_consistent(instance: &Instance, plan: &Plan, ordering: &PriorityOrdering) -> bool {
    inconsistent_agents(instance, plan, ordering).is_empty()
}
