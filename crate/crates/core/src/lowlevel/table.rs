//! Space-time occupancy of a set of fixed paths.

use rustc_hash::FxHashMap;

use crate::graph::VertexId;
use crate::instance::{Path, Semantics};

#[derive(Debug, Default)]
pub(crate) struct PathTable {
    /// Occupancy while the paths are moving (excluding parked time).
    occupancy: FxHashMap<(VertexId, u32), u32>,
    /// Stay semantics: vertex -> arrival times of paths parked there.
    parked: FxHashMap<VertexId, Vec<u32>>,
    /// Non-wait moves `(from, to, arrival time)`.
    moves: FxHashMap<(VertexId, VertexId, u32), u32>,
    /// Latest moving-occupancy time per vertex.
    last_seen: FxHashMap<VertexId, u32>,
    max_arrival: u32,
    len: usize,
}

impl PathTable {
    pub(crate) fn new<'a>(paths: impl IntoIterator<Item = &'a Path>, semantics: Semantics) -> Self {
        let mut table = PathTable::default();
        for path in paths {
            table.len += 1;
            let vs = path.vertices();
            let arrival = path.arrival();
            table.max_arrival = table.max_arrival.max(arrival);
            let moving_until = match semantics {
                Semantics::StayAtTarget => {
                    table.parked.entry(path.end()).or_default().push(arrival);
                    vs.len() - 1
                }
                Semantics::DisappearAtTarget => vs.len(),
            };
            for (t, &v) in vs[..moving_until].iter().enumerate() {
                *table.occupancy.entry((v, t as u32)).or_default() += 1;
                let last = table.last_seen.entry(v).or_default();
                *last = (*last).max(t as u32);
            }
            for (t, w) in vs.windows(2).enumerate() {
                if w[0] != w[1] {
                    *table.moves.entry((w[0], w[1], t as u32 + 1)).or_default() += 1;
                }
            }
        }
        table
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub(crate) fn max_arrival(&self) -> u32 {
        self.max_arrival
    }

    /// Vertices where some path parks forever (stay semantics only).
    pub(crate) fn parked_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.parked.keys().copied()
    }

    #[inline]
    pub(crate) fn vertex_count(&self, v: VertexId, t: u32) -> u32 {
        let moving = self.occupancy.get(&(v, t)).copied().unwrap_or(0);
        let parked = self
            .parked
            .get(&v)
            .map_or(0, |ts| ts.iter().filter(|&&a| a <= t).count() as u32);
        moving + parked
    }

    /// Paths moving `to -> from` at `t`, i.e. swapping with a move `from -> to`.
    #[inline]
    pub(crate) fn swap_count(&self, from: VertexId, to: VertexId, t: u32) -> u32 {
        if from == to {
            return 0;
        }
        self.moves.get(&(to, from, t)).copied().unwrap_or(0)
    }

    /// Collision events caused by moving `from -> to` arriving at `t`.
    #[inline]
    pub(crate) fn step_collisions(&self, from: VertexId, to: VertexId, t: u32) -> u32 {
        if self.is_empty() {
            return 0;
        }
        self.vertex_count(to, t) + self.swap_count(from, to, t)
    }

    /// Whether any path occupies `v` at some time `>= t`.
    pub(crate) fn occupied_from(&self, v: VertexId, t: u32) -> bool {
        self.parked.contains_key(&v) || self.last_seen.get(&v).is_some_and(|&last| last >= t)
    }
}
