//! Single-agent planners.
//!
//! * [`constrained_shortest_path`]: space-time A* under a finite set of vertex
//!   and edge constraints (the CBS low level).
//! * [`prioritized_shortest_path`]: space-time A* that treats the paths of
//!   higher-priority agents as moving obstacles up to their last arrival and
//!   then continues without the time dimension on the graph that remains
//!   (the PBS low level).
//!
//! Both prefer, among minimum-arrival paths, the ones with the fewest
//! collisions with the paths in a [`TieBreakContext`].

mod spacetime;
pub(crate) mod table;

use crate::collision::paths_collide;
use crate::constraint::{Constraint, ConstraintTable};
use crate::graph::{Graph, VertexId, UNREACHABLE};
use crate::instance::{Agent, Path, Semantics};
use crate::stats::{Interrupted, SearchMeter};

use spacetime::{Obstacles, SpaceTimeSearch, StaticTail};
use table::PathTable;

/// Soft paths used only to break ties between equally short paths.
#[derive(Debug, Clone, Default)]
pub struct TieBreakContext {
    /// Paths of agents incomparable with the planning agent.
    pub incomparable_paths: Vec<Path>,
    /// Paths of agents strictly below the planning agent.
    pub lower_paths: Vec<Path>,
}

impl TieBreakContext {
    pub fn none() -> Self {
        TieBreakContext::default()
    }

    pub fn incomparable(paths: Vec<Path>) -> Self {
        TieBreakContext {
            incomparable_paths: paths,
            lower_paths: Vec::new(),
        }
    }

    fn tables(&self, semantics: Semantics) -> [PathTable; 2] {
        [
            PathTable::new(&self.incomparable_paths, semantics),
            PathTable::new(&self.lower_paths, semantics),
        ]
    }
}

/// Distances to `target` over the whole graph.
pub fn distances_to(graph: &Graph, target: VertexId) -> Vec<u32> {
    graph.bfs_distances(target, None)
}

/// A shortest path with no waits. Among shortest paths, each step goes to the
/// lowest-numbered neighbor that is one step closer.
pub fn individually_optimal_path(graph: &Graph, agent: &Agent) -> Path {
    let dist = distances_to(graph, agent.target);
    descend(graph, agent.start, &dist).expect("graph is connected")
}

fn descend(graph: &Graph, from: VertexId, dist: &[u32]) -> Option<Path> {
    if dist[from.index()] == UNREACHABLE {
        return None;
    }
    let mut v = from;
    let mut vertices = vec![v];
    while dist[v.index()] > 0 {
        v = *graph
            .neighbors(v)
            .iter()
            .find(|u| dist[u.index()] != UNREACHABLE && dist[u.index()] + 1 == dist[v.index()])
            .expect("distance field is consistent");
        vertices.push(v);
    }
    Some(Path::new(vertices))
}

struct ConstraintObstacles<'a> {
    table: &'a ConstraintTable,
    disappear: bool,
    target_last: Option<u32>,
}

impl Obstacles for ConstraintObstacles<'_> {
    #[inline]
    fn blocks(&self, from: VertexId, to: VertexId, t: u32) -> bool {
        self.table.forbids(from, to, t)
    }

    fn can_finish(&self, _target: VertexId, t: u32) -> bool {
        self.disappear || self.target_last.is_none_or(|last| t > last)
    }
}

/// Minimum-arrival path for `agent` that violates none of `constraints`.
///
/// The search horizon is the latest constraint time plus the vertex count,
/// capped by the meter's budget horizon. `Ok(None)` means no path exists
/// within the horizon.
pub fn constrained_shortest_path(
    graph: &Graph,
    agent: &Agent,
    constraints: &[Constraint],
    semantics: Semantics,
    tie: &TieBreakContext,
    meter: &mut SearchMeter,
) -> Result<Option<Path>, Interrupted> {
    let heuristic = distances_to(graph, agent.target);
    let table = ConstraintTable::new(constraints.iter().filter(|c| c.agent == agent.index));
    constrained_search(graph, agent, &table, &heuristic, semantics, tie, meter)
}

pub(crate) fn constrained_search(
    graph: &Graph,
    agent: &Agent,
    table: &ConstraintTable,
    heuristic: &[u32],
    semantics: Semantics,
    tie: &TieBreakContext,
    meter: &mut SearchMeter,
) -> Result<Option<Path>, Interrupted> {
    let disappear = semantics == Semantics::DisappearAtTarget;
    let obstacles = ConstraintObstacles {
        table,
        disappear,
        target_last: table.last_vertex_constraint(agent.target),
    };
    let horizon = table
        .latest()
        .unwrap_or(0)
        .saturating_add(graph.vertex_count() as u32)
        .min(meter.budget().time_horizon);
    let soft = tie.tables(semantics);
    SpaceTimeSearch {
        graph,
        start: agent.start,
        target: agent.target,
        heuristic,
        obstacles: &obstacles,
        soft: [&soft[0], &soft[1]],
        horizon,
        static_tail: None,
        terminal_target: disappear,
    }
    .run(meter)
}

struct PathObstacles<'a> {
    table: &'a PathTable,
    disappear: bool,
}

impl Obstacles for PathObstacles<'_> {
    #[inline]
    fn blocks(&self, from: VertexId, to: VertexId, t: u32) -> bool {
        self.table.step_collisions(from, to, t) > 0
    }

    fn can_finish(&self, target: VertexId, t: u32) -> bool {
        self.disappear || !self.table.occupied_from(target, t + 1)
    }
}

/// Minimum-arrival path for `agent` that collides with none of
/// `higher_paths`.
///
/// Up to the last arrival among `higher_paths` the search runs in space-time.
/// From then on the obstacles are static (under stay semantics the parked
/// higher agents block their targets for good), so the remaining suffix is a
/// shortest path without waits in the graph minus those targets.
pub fn prioritized_shortest_path(
    graph: &Graph,
    agent: &Agent,
    higher_paths: &[Path],
    semantics: Semantics,
    tie: &TieBreakContext,
    meter: &mut SearchMeter,
) -> Result<Option<Path>, Interrupted> {
    let heuristic = distances_to(graph, agent.target);
    prioritized_search(graph, agent, higher_paths, &heuristic, semantics, tie, meter)
}

pub(crate) fn prioritized_search(
    graph: &Graph,
    agent: &Agent,
    higher_paths: &[Path],
    heuristic: &[u32],
    semantics: Semantics,
    tie: &TieBreakContext,
    meter: &mut SearchMeter,
) -> Result<Option<Path>, Interrupted> {
    let hard = PathTable::new(higher_paths, semantics);
    let reduced;
    let tail_distances: &[u32] = match semantics {
        Semantics::DisappearAtTarget => heuristic,
        Semantics::StayAtTarget => {
            let mut blocked = vec![false; graph.vertex_count()];
            for v in hard.parked_vertices() {
                blocked[v.index()] = true;
            }
            if blocked[agent.target.index()] {
                return Ok(None);
            }
            reduced = graph.bfs_distances(agent.target, Some(&blocked));
            &reduced
        }
    };
    let disappear = semantics == Semantics::DisappearAtTarget;
    let obstacles = PathObstacles {
        table: &hard,
        disappear,
    };
    let soft = tie.tables(semantics);
    SpaceTimeSearch {
        graph,
        start: agent.start,
        target: agent.target,
        heuristic,
        obstacles: &obstacles,
        soft: [&soft[0], &soft[1]],
        horizon: u32::MAX - 1,
        static_tail: Some(StaticTail {
            time: hard.max_arrival(),
            distances: tail_distances,
        }),
        terminal_target: disappear,
    }
    .run(meter)
}

/// Number of distinct paths in `others` that collide with `path`.
pub fn count_path_collisions(path: &Path, others: &[Path], semantics: Semantics) -> usize {
    others
        .iter()
        .filter(|q| paths_collide(path, q, semantics))
        .count()
}
