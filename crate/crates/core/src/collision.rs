//! Vertex and edge collisions between paths, and solution validation.

use std::cmp::Ordering;
use std::fmt;

use rustc_hash::FxHashMap;

use crate::graph::VertexId;
use crate::instance::{Instance, Path, Plan, Semantics};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CollisionKind {
    /// Both agents occupy the vertex.
    Vertex(VertexId),
    /// The lower-indexed agent moves `from -> to` while the other moves
    /// `to -> from`.
    Edge { from: VertexId, to: VertexId },
}

impl CollisionKind {
    fn rank(&self) -> u8 {
        match self {
            CollisionKind::Vertex(_) => 0,
            CollisionKind::Edge { .. } => 1,
        }
    }
}

/// A collision between agents `first < second` at `time`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Collision {
    pub first: usize,
    pub second: usize,
    pub time: u32,
    pub kind: CollisionKind,
}

impl Collision {
    fn key(&self) -> (u32, usize, usize, u8) {
        (self.time, self.first, self.second, self.kind.rank())
    }

    pub fn other(&self, agent: usize) -> usize {
        if agent == self.first {
            self.second
        } else {
            self.first
        }
    }
}

impl Ord for Collision {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key()).then_with(|| {
            let flat = |c: &Collision| match c.kind {
                CollisionKind::Vertex(v) => (v, v),
                CollisionKind::Edge { from, to } => (from, to),
            };
            flat(self).cmp(&flat(other))
        })
    }
}

impl PartialOrd for Collision {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Collision {
    /// Agents print 1-based, matching the instance files.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            CollisionKind::Vertex(v) => write!(
                f,
                "vertex<{},{},{},{}>",
                self.first + 1,
                self.second + 1,
                v.0,
                self.time
            ),
            CollisionKind::Edge { from, to } => write!(
                f,
                "edge<{},{},{},{},{}>",
                self.first + 1,
                self.second + 1,
                from.0,
                to.0,
                self.time
            ),
        }
    }
}

fn horizon(paths: &[&Path]) -> u32 {
    paths.iter().map(|p| p.arrival()).max().unwrap_or(0)
}

/// Scans `paths` (indexed by agent) time step by time step and reports
/// collisions. With `stop_early` the scan ends after the first time step that
/// has any collision.
fn scan(paths: &[&Path], semantics: Semantics, stop_early: bool) -> Vec<Collision> {
    let mut out = Vec::new();
    let end = horizon(paths);
    let mut occupancy: Vec<(VertexId, usize)> = Vec::with_capacity(paths.len());
    let mut moves: FxHashMap<(VertexId, VertexId), Vec<usize>> = FxHashMap::default();
    for t in 0..=end {
        occupancy.clear();
        occupancy.extend(
            paths
                .iter()
                .enumerate()
                .filter_map(|(a, p)| p.position(t, semantics).map(|v| (v, a))),
        );
        occupancy.sort_unstable();
        for group in occupancy.chunk_by(|x, y| x.0 == y.0) {
            for (k, &(v, a)) in group.iter().enumerate() {
                for &(_, b) in &group[k + 1..] {
                    out.push(Collision {
                        first: a.min(b),
                        second: a.max(b),
                        time: t,
                        kind: CollisionKind::Vertex(v),
                    });
                }
            }
        }

        if t > 0 {
            moves.clear();
            for (a, p) in paths.iter().enumerate() {
                if t > p.arrival() {
                    continue;
                }
                let (u, v) = (p.vertices()[t as usize - 1], p.vertices()[t as usize]);
                if u != v {
                    moves.entry((u, v)).or_default().push(a);
                }
            }
            for (&(u, v), movers) in &moves {
                if u > v {
                    continue;
                }
                let Some(reverse) = moves.get(&(v, u)) else {
                    continue;
                };
                for &a in movers {
                    for &b in reverse {
                        let (first, second, from, to) = if a < b { (a, b, u, v) } else { (b, a, v, u) };
                        out.push(Collision {
                            first,
                            second,
                            time: t,
                            kind: CollisionKind::Edge { from, to },
                        });
                    }
                }
            }
        }
        if stop_early && !out.is_empty() {
            break;
        }
    }
    out.sort_unstable();
    out
}

/// All vertex and edge collisions of a plan, sorted by
/// `(time, first, second, vertex-before-edge)`.
pub fn detect_collisions(instance: &Instance, plan: &Plan) -> Vec<Collision> {
    let paths: Vec<&Path> = plan.paths.iter().collect();
    scan(&paths, instance.semantics(), false)
}

/// The smallest element of [`detect_collisions`], if any.
pub fn first_collision(instance: &Instance, plan: &Plan) -> Option<Collision> {
    let paths: Vec<&Path> = plan.paths.iter().collect();
    scan(&paths, instance.semantics(), true).into_iter().next()
}

/// Collisions of a plan whose paths may be partially absent (used while a
/// plan is being assembled).
pub(crate) fn first_collision_partial(paths: &[Option<Path>], semantics: Semantics) -> Option<Collision> {
    let present: Vec<(usize, &Path)> = paths
        .iter()
        .enumerate()
        .filter_map(|(a, p)| p.as_ref().map(|p| (a, p)))
        .collect();
    let refs: Vec<&Path> = present.iter().map(|(_, p)| *p).collect();
    scan(&refs, semantics, true).into_iter().next().map(|mut c| {
        let (a, b) = (present[c.first].0, present[c.second].0);
        c.first = a;
        c.second = b;
        c
    })
}

/// Whether two paths collide at any time.
pub fn paths_collide(p: &Path, q: &Path, semantics: Semantics) -> bool {
    let end = p.arrival().max(q.arrival());
    for t in 0..=end {
        let (a, b) = (p.position(t, semantics), q.position(t, semantics));
        if a.is_some() && a == b {
            return true;
        }
        if t > 0 && t <= p.arrival() && t <= q.arrival() {
            let (pu, pv) = (p.vertices()[t as usize - 1], p.vertices()[t as usize]);
            let (qu, qv) = (q.vertices()[t as usize - 1], q.vertices()[t as usize]);
            if pu != pv && pu == qv && pv == qu {
                return true;
            }
        }
    }
    false
}

/// A reason a plan is not a solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// The plan has a different number of paths than the instance has agents.
    PathCount { expected: usize, found: usize },
    UnknownVertex { agent: usize, time: u32 },
    WrongStart { agent: usize },
    WrongTarget { agent: usize },
    /// Consecutive vertices are neither equal nor adjacent.
    NotAdjacent { agent: usize, time: u32 },
    /// Under disappear semantics the agent would have left at this earlier visit.
    EarlyTargetVisit { agent: usize, time: u32 },
    Collision(Collision),
}

/// Checks path invariants and collision-freedom, reporting every violation.
pub fn validate_solution(instance: &Instance, plan: &Plan) -> Result<(), Vec<Violation>> {
    let mut violations = Vec::new();
    if plan.len() != instance.num_agents() {
        violations.push(Violation::PathCount {
            expected: instance.num_agents(),
            found: plan.len(),
        });
        return Err(violations);
    }
    let graph = instance.graph();
    let mut structurally_sound = true;
    for (agent, path) in instance.agents().iter().zip(&plan.paths) {
        let i = agent.index;
        let vs = path.vertices();
        if let Some(t) = vs.iter().position(|v| !graph.contains(*v)) {
            violations.push(Violation::UnknownVertex { agent: i, time: t as u32 });
            structurally_sound = false;
            continue;
        }
        if path.start() != agent.start {
            violations.push(Violation::WrongStart { agent: i });
        }
        if path.end() != agent.target {
            violations.push(Violation::WrongTarget { agent: i });
        }
        for (t, w) in vs.windows(2).enumerate() {
            if w[0] != w[1] && !graph.is_adjacent(w[0], w[1]) {
                violations.push(Violation::NotAdjacent {
                    agent: i,
                    time: t as u32 + 1,
                });
            }
        }
        if instance.semantics() == Semantics::DisappearAtTarget {
            if let Some(t) = vs[..vs.len() - 1].iter().position(|&v| v == agent.target) {
                violations.push(Violation::EarlyTargetVisit {
                    agent: i,
                    time: t as u32,
                });
            }
        }
    }
    if structurally_sound {
        violations.extend(detect_collisions(instance, plan).into_iter().map(Violation::Collision));
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}
