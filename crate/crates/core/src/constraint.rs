use rustc_hash::FxHashSet;

use crate::graph::VertexId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstraintKind {
    /// The agent may not occupy `vertex` at `time`.
    Vertex { vertex: VertexId, time: u32 },
    /// The agent may not move `from -> to` arriving at `time`.
    Edge { from: VertexId, to: VertexId, time: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    pub agent: usize,
    pub kind: ConstraintKind,
}

impl Constraint {
    pub fn vertex(agent: usize, vertex: VertexId, time: u32) -> Self {
        Constraint {
            agent,
            kind: ConstraintKind::Vertex { vertex, time },
        }
    }

    pub fn edge(agent: usize, from: VertexId, to: VertexId, time: u32) -> Self {
        Constraint {
            agent,
            kind: ConstraintKind::Edge { from, to, time },
        }
    }

    pub fn time(&self) -> u32 {
        match self.kind {
            ConstraintKind::Vertex { time, .. } | ConstraintKind::Edge { time, .. } => time,
        }
    }
}

/// Constraints of one agent in lookup form.
#[derive(Debug, Default, Clone)]
pub(crate) struct ConstraintTable {
    vertex: FxHashSet<(VertexId, u32)>,
    edge: FxHashSet<(VertexId, VertexId, u32)>,
    latest: Option<u32>,
}

impl ConstraintTable {
    pub(crate) fn new<'a>(constraints: impl IntoIterator<Item = &'a Constraint>) -> Self {
        let mut table = ConstraintTable::default();
        for c in constraints {
            match c.kind {
                ConstraintKind::Vertex { vertex, time } => {
                    table.vertex.insert((vertex, time));
                }
                ConstraintKind::Edge { from, to, time } => {
                    table.edge.insert((from, to, time));
                }
            }
            table.latest = Some(table.latest.map_or(c.time(), |l| l.max(c.time())));
        }
        table
    }

    pub(crate) fn latest(&self) -> Option<u32> {
        self.latest
    }

    #[inline]
    pub(crate) fn forbids(&self, from: VertexId, to: VertexId, time: u32) -> bool {
        self.vertex.contains(&(to, time)) || (from != to && self.edge.contains(&(from, to, time)))
    }

    /// Latest time a vertex constraint forbids `vertex`, if any.
    pub(crate) fn last_vertex_constraint(&self, vertex: VertexId) -> Option<u32> {
        self.vertex
            .iter()
            .filter(|(v, _)| *v == vertex)
            .map(|(_, t)| *t)
            .max()
    }
}
