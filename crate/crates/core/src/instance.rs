//! Agents, instances, paths and plans.

use std::fmt;
use std::sync::Arc;

use crate::error::MapfError;
use crate::graph::{Graph, VertexId};

/// What happens to an agent once it reaches its target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Semantics {
    /// The agent parks on its target forever and keeps blocking it.
    #[default]
    StayAtTarget,
    /// The agent leaves the environment on its first target visit.
    DisappearAtTarget,
}

impl Semantics {
    pub fn as_str(self) -> &'static str {
        match self {
            Semantics::StayAtTarget => "stay",
            Semantics::DisappearAtTarget => "disappear",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "stay" => Some(Semantics::StayAtTarget),
            "disappear" => Some(Semantics::DisappearAtTarget),
            _ => None,
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Agent {
    pub index: usize,
    pub start: VertexId,
    pub target: VertexId,
}

/// A MAPF instance: a graph, agents with unique starts and unique targets, and
/// the target semantics.
#[derive(Debug, Clone)]
pub struct Instance {
    graph: Arc<Graph>,
    agents: Vec<Agent>,
    semantics: Semantics,
}

impl Instance {
    pub fn new(
        graph: Arc<Graph>,
        endpoints: impl IntoIterator<Item = (VertexId, VertexId)>,
        semantics: Semantics,
    ) -> Result<Self, MapfError> {
        let mut agents = Vec::new();
        let mut start_used = vec![false; graph.vertex_count()];
        let mut target_used = vec![false; graph.vertex_count()];
        for (index, (start, target)) in endpoints.into_iter().enumerate() {
            for v in [start, target] {
                if !graph.contains(v) {
                    return Err(MapfError::UnknownVertex(v.to_string()));
                }
            }
            if std::mem::replace(&mut start_used[start.index()], true) {
                return Err(MapfError::DuplicateEndpoint {
                    kind: "start",
                    label: graph.label(start).to_string(),
                });
            }
            if std::mem::replace(&mut target_used[target.index()], true) {
                return Err(MapfError::DuplicateEndpoint {
                    kind: "target",
                    label: graph.label(target).to_string(),
                });
            }
            agents.push(Agent {
                index,
                start,
                target,
            });
        }
        Ok(Instance {
            graph,
            agents,
            semantics,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn shared_graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn agent(&self, i: usize) -> &Agent {
        &self.agents[i]
    }

    pub fn num_agents(&self) -> usize {
        self.agents.len()
    }

    pub fn semantics(&self) -> Semantics {
        self.semantics
    }

    /// Same graph and agents under different target semantics.
    pub fn with_semantics(&self, semantics: Semantics) -> Instance {
        Instance {
            semantics,
            ..self.clone()
        }
    }

    /// The first `m` agents only.
    pub fn truncated(&self, m: usize) -> Instance {
        Instance {
            agents: self.agents[..m.min(self.agents.len())].to_vec(),
            ..self.clone()
        }
    }
}

/// A timed vertex sequence `π(0..=T)`. Cloning is cheap.
///
/// The stored sequence never ends with a repeated vertex: the final element is
/// where the agent stops, and `arrival()` is its index.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Path {
    vertices: Arc<[VertexId]>,
}

impl Path {
    /// Builds a path, dropping trailing waits on the final vertex.
    ///
    /// Panics on an empty sequence.
    pub fn new(mut vertices: Vec<VertexId>) -> Self {
        assert!(!vertices.is_empty(), "a path has at least one vertex");
        while vertices.len() > 1 && vertices[vertices.len() - 1] == vertices[vertices.len() - 2] {
            vertices.pop();
        }
        Path {
            vertices: vertices.into(),
        }
    }

    pub fn singleton(v: VertexId) -> Self {
        Path {
            vertices: Arc::from(vec![v]),
        }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// Arrival time `T`.
    #[inline]
    pub fn arrival(&self) -> u32 {
        (self.vertices.len() - 1) as u32
    }

    #[inline]
    pub fn start(&self) -> VertexId {
        self.vertices[0]
    }

    #[inline]
    pub fn end(&self) -> VertexId {
        self.vertices[self.vertices.len() - 1]
    }

    /// Vertex occupied at time `t`, or `None` once the agent has left the
    /// environment under [`Semantics::DisappearAtTarget`].
    #[inline]
    pub fn position(&self, t: u32, semantics: Semantics) -> Option<VertexId> {
        let t = t as usize;
        if t < self.vertices.len() {
            Some(self.vertices[t])
        } else {
            match semantics {
                Semantics::StayAtTarget => Some(self.end()),
                Semantics::DisappearAtTarget => None,
            }
        }
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.vertices.iter().map(|v| v.0))
            .finish()
    }
}

/// One path per agent, indexed by agent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    pub paths: Vec<Path>,
}

impl Plan {
    pub fn new(paths: Vec<Path>) -> Self {
        Plan { paths }
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn path(&self, agent: usize) -> &Path {
        &self.paths[agent]
    }
}

/// Sum of arrival times.
pub fn flowtime(plan: &Plan) -> u64 {
    plan.paths.iter().map(|p| p.arrival() as u64).sum()
}

/// Largest arrival time; zero for an empty plan.
pub fn makespan(plan: &Plan) -> u32 {
    plan.paths.iter().map(Path::arrival).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(vs: &[u32]) -> Path {
        Path::new(vs.iter().map(|&v| VertexId(v)).collect())
    }

    #[test]
    fn trailing_waits_are_trimmed() {
        let p = path(&[0, 1, 1, 1]);
        assert_eq!(p.arrival(), 1);
        let p = path(&[0, 0, 1]);
        assert_eq!(p.arrival(), 2);
        assert_eq!(path(&[3, 3]).arrival(), 0);
    }

    #[test]
    fn flowtime_and_makespan() {
        assert_eq!(flowtime(&Plan::new(vec![path(&[4])])), 0);
        assert_eq!(makespan(&Plan::new(vec![path(&[4])])), 0);
        let plan = Plan::new(vec![path(&[0, 1, 2, 3, 4]), path(&[9, 8, 7, 6])]);
        assert_eq!(flowtime(&plan), 7);
        assert_eq!(makespan(&plan), 4);
        let plan = Plan::new(vec![path(&[0, 1, 2]), path(&[5, 6, 7]), path(&[10, 11, 12, 13, 14, 15, 16, 17])]);
        assert_eq!(makespan(&plan), 7);
    }

    #[test]
    fn positions_by_semantics() {
        let p = path(&[0, 1, 2]);
        assert_eq!(p.position(5, Semantics::StayAtTarget), Some(VertexId(2)));
        assert_eq!(p.position(2, Semantics::DisappearAtTarget), Some(VertexId(2)));
        assert_eq!(p.position(3, Semantics::DisappearAtTarget), None);
    }
}
