//! Space-time A* shared by the constraint-based and priority-based planners.
//!
//! States are `(vertex, time)` with unit-cost moves and waits, so `g` equals
//! the time and a state's `f` is fixed. Among equal-`f` entries the open list
//! prefers smaller tie-break costs (collision events with two classes of
//! soft paths, compared lexicographically), then smaller `h`, then FIFO.
//! Because equal-`f` predecessors always pop before their successors, the
//! first pop of a state carries its minimum tie-break cost.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rustc_hash::FxHashMap;

use crate::graph::{Graph, VertexId, UNREACHABLE};
use crate::instance::Path;
use crate::lowlevel::table::PathTable;
use crate::stats::{Interrupted, SearchMeter};

/// Hard obstacles of a search.
pub(crate) trait Obstacles {
    /// Whether moving (or waiting) `from -> to` arriving at `t` is forbidden.
    fn blocks(&self, from: VertexId, to: VertexId, t: u32) -> bool;
    /// Whether the agent may stop on its target from time `t` onward.
    fn can_finish(&self, target: VertexId, t: u32) -> bool;
}

/// After `time` the obstacle field no longer changes; `distances` are exact
/// shortest-path distances to the target in the graph that remains.
pub(crate) struct StaticTail<'a> {
    pub time: u32,
    pub distances: &'a [u32],
}

pub(crate) struct SpaceTimeSearch<'a, O: Obstacles> {
    pub graph: &'a Graph,
    pub start: VertexId,
    pub target: VertexId,
    /// Admissible distance-to-target estimates.
    pub heuristic: &'a [u32],
    pub obstacles: &'a O,
    /// Soft paths, most important class first.
    pub soft: [&'a PathTable; 2],
    /// States beyond this time are never generated.
    pub horizon: u32,
    pub static_tail: Option<StaticTail<'a>>,
    /// The target is terminal: reaching it ends the path.
    pub terminal_target: bool,
}

#[derive(Clone, Copy)]
struct Record {
    vertex: VertexId,
    time: u32,
    parent: u32,
}

type Key = Reverse<(u32, u32, u32, u32, u64, u32)>;

impl<O: Obstacles> SpaceTimeSearch<'_, O> {
    fn h(&self, v: VertexId, t: u32) -> u32 {
        match &self.static_tail {
            Some(tail) if t >= tail.time => tail.distances[v.index()],
            _ => self.heuristic[v.index()],
        }
    }

    fn in_tail(&self, t: u32) -> bool {
        self.static_tail.as_ref().is_some_and(|tail| t >= tail.time)
    }

    pub(crate) fn run(&self, meter: &mut SearchMeter) -> Result<Option<Path>, Interrupted> {
        meter.begin_call();
        let h0 = self.h(self.start, 0);
        if h0 == UNREACHABLE {
            return Ok(None);
        }
        let mut records: Vec<Record> = Vec::new();
        let mut open: BinaryHeap<Key> = BinaryHeap::new();
        // Best tie cost seen per state, and whether it is closed.
        let mut seen: FxHashMap<(VertexId, u32), ((u32, u32), bool)> = FxHashMap::default();
        let mut seq = 0u64;

        records.push(Record {
            vertex: self.start,
            time: 0,
            parent: u32::MAX,
        });
        seen.insert((self.start, 0), ((0, 0), false));
        open.push(Reverse((h0, 0, 0, h0, seq, 0)));

        while let Some(Reverse((_, c0, c1, _, _, idx))) = open.pop() {
            let Record { vertex: v, time: t, .. } = records[idx as usize];
            let entry = seen.get_mut(&(v, t)).expect("pushed states are tracked");
            if entry.1 || entry.0 != (c0, c1) {
                continue;
            }
            entry.1 = true;
            meter.tick()?;

            if v == self.target && (self.terminal_target || self.obstacles.can_finish(v, t)) {
                return Ok(Some(self.reconstruct(&records, idx)));
            }
            if v == self.target && self.terminal_target {
                continue;
            }
            if t >= self.horizon {
                continue;
            }

            let nt = t + 1;
            let tail_now = self.in_tail(t);
            let candidates = std::iter::once(v).chain(self.graph.neighbors(v).iter().copied());
            for u in candidates {
                if tail_now {
                    let d = &self.static_tail.as_ref().unwrap().distances;
                    if u == v || d[u.index()] == UNREACHABLE || d[u.index()] + 1 != d[v.index()] {
                        continue;
                    }
                }
                let hu = self.h(u, nt);
                if hu == UNREACHABLE || self.obstacles.blocks(v, u, nt) {
                    continue;
                }
                let nc = (
                    c0 + self.soft[0].step_collisions(v, u, nt),
                    c1 + self.soft[1].step_collisions(v, u, nt),
                );
                match seen.get_mut(&(u, nt)) {
                    Some((best, closed)) => {
                        if *closed || *best <= nc {
                            continue;
                        }
                        *best = nc;
                    }
                    None => {
                        seen.insert((u, nt), (nc, false));
                    }
                }
                records.push(Record {
                    vertex: u,
                    time: nt,
                    parent: idx,
                });
                seq += 1;
                open.push(Reverse((nt + hu, nc.0, nc.1, hu, seq, records.len() as u32 - 1)));
            }
        }
        Ok(None)
    }

    fn reconstruct(&self, records: &[Record], mut idx: u32) -> Path {
        let mut vertices = Vec::with_capacity(records[idx as usize].time as usize + 1);
        while idx != u32::MAX {
            let r = records[idx as usize];
            vertices.push(r.vertex);
            idx = r.parent;
        }
        vertices.reverse();
        Path::new(vertices)
    }
}
