//! Undirected environment graphs and four-neighbor grid maps.

use std::collections::VecDeque;
use std::fmt;

use rustc_hash::FxHashMap;

use crate::error::MapfError;

/// Index of a vertex in a [`Graph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// Distance value used for unreachable vertices.
pub const UNREACHABLE: u32 = u32::MAX;

/// A connected, undirected, simple graph.
///
/// Each vertex carries a textual label used by the fixture and solution
/// formats. Grid-derived graphs additionally remember the cell of every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    adjacency: Vec<Vec<VertexId>>,
    edges: Vec<(VertexId, VertexId)>,
    cells: Option<Vec<(u32, u32)>>,
    by_label: FxHashMap<String, VertexId>,
}

impl Graph {
    /// Builds a graph from labels and an edge list.
    ///
    /// Edges are stored once with `u < v`; duplicates in either orientation
    /// collapse. Self-loops and disconnected inputs are rejected.
    pub fn from_edges(
        labels: Vec<String>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, MapfError> {
        let n = labels.len();
        if n == 0 {
            return Err(MapfError::EmptyGraph);
        }
        let mut by_label = FxHashMap::default();
        for (k, l) in labels.iter().enumerate() {
            if by_label.insert(l.clone(), VertexId(k as u32)).is_some() {
                return Err(MapfError::DuplicateLabel(l.clone()));
            }
        }
        let mut canonical = Vec::new();
        for (u, v) in edges {
            if u.index() >= n || v.index() >= n {
                return Err(MapfError::UnknownVertex(format!("{}", u.max(v))));
            }
            if u == v {
                return Err(MapfError::SelfLoop(labels[u.index()].clone()));
            }
            canonical.push(if u < v { (u, v) } else { (v, u) });
        }
        canonical.sort_unstable();
        canonical.dedup();

        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &canonical {
            adjacency[u.index()].push(v);
            adjacency[v.index()].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let graph = Graph {
            labels,
            adjacency,
            edges: canonical,
            cells: None,
            by_label,
        };
        if !graph.is_connected() {
            return Err(MapfError::DisconnectedMap);
        }
        Ok(graph)
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edge list, each edge once with the smaller id first.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.adjacency.len() as u32).map(VertexId)
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v.index()]
    }

    pub fn is_adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.adjacency[u.index()].binary_search(&v).is_ok()
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v.index()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<VertexId> {
        self.by_label.get(label).copied()
    }

    /// Grid cell `(x, y)` of a vertex, for grid-derived graphs.
    pub fn cell(&self, v: VertexId) -> Option<(u32, u32)> {
        self.cells.as_ref().map(|c| c[v.index()])
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.index() < self.adjacency.len()
    }

    fn is_connected(&self) -> bool {
        self.bfs_distances(VertexId(0), None)
            .iter()
            .all(|&d| d != UNREACHABLE)
    }

    /// Breadth-first distances from `source`. Vertices flagged in `blocked`
    /// are never entered (the source itself is always expanded).
    pub fn bfs_distances(&self, source: VertexId, blocked: Option<&[bool]>) -> Vec<u32> {
        let mut dist = vec![UNREACHABLE; self.vertex_count()];
        dist[source.index()] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v.index()];
            for &u in self.neighbors(v) {
                if dist[u.index()] != UNREACHABLE {
                    continue;
                }
                if blocked.is_some_and(|b| b[u.index()]) {
                    continue;
                }
                dist[u.index()] = d + 1;
                queue.push_back(u);
            }
        }
        dist
    }
}

/// A rectangular four-neighbor grid. Coordinates are `(x, y)` with `x` the
/// column and `y` the row, origin top-left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridMap {
    width: u32,
    height: u32,
    blocked: Vec<bool>,
}

impl GridMap {
    pub fn new(width: u32, height: u32) -> Self {
        GridMap {
            width,
            height,
            blocked: vec![false; (width * height) as usize],
        }
    }

    pub fn with_blocked(
        width: u32,
        height: u32,
        cells: impl IntoIterator<Item = (u32, u32)>,
    ) -> Self {
        let mut map = GridMap::new(width, height);
        for (x, y) in cells {
            map.set_blocked(x, y, true);
        }
        map
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn in_bounds(&self, x: u32, y: u32) -> bool {
        x < self.width && y < self.height
    }

    pub fn is_blocked(&self, x: u32, y: u32) -> bool {
        self.blocked[(y * self.width + x) as usize]
    }

    pub fn set_blocked(&mut self, x: u32, y: u32, blocked: bool) {
        let idx = (y * self.width + x) as usize;
        self.blocked[idx] = blocked;
    }

    pub fn free_cells(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.height).flat_map(move |y| {
            (0..self.width)
                .filter(move |&x| !self.is_blocked(x, y))
                .map(move |x| (x, y))
        })
    }

    pub fn free_count(&self) -> usize {
        self.blocked.iter().filter(|b| !**b).count()
    }

    /// Vertex id of a free cell in the graph built by [`build_graph_from_grid`].
    /// Vertices are numbered row-major over free cells.
    pub fn vertex_of(&self, x: u32, y: u32) -> Option<VertexId> {
        if !self.in_bounds(x, y) || self.is_blocked(x, y) {
            return None;
        }
        let idx = (y * self.width + x) as usize;
        let rank = self.blocked[..idx].iter().filter(|b| !**b).count();
        Some(VertexId(rank as u32))
    }
}

/// Builds the four-neighbor graph of a grid's free cells.
pub fn build_graph_from_grid(grid: &GridMap) -> Result<Graph, MapfError> {
    let (w, h) = (grid.width, grid.height);
    let mut ids = vec![u32::MAX; (w * h) as usize];
    let mut labels = Vec::new();
    let mut cells = Vec::new();
    for (x, y) in grid.free_cells() {
        ids[(y * w + x) as usize] = labels.len() as u32;
        labels.push(format!("({x},{y})"));
        cells.push((x, y));
    }
    if labels.is_empty() {
        return Err(MapfError::DisconnectedMap);
    }
    let mut edges = Vec::new();
    for &(x, y) in &cells {
        let here = VertexId(ids[(y * w + x) as usize]);
        if x + 1 < w && !grid.is_blocked(x + 1, y) {
            edges.push((here, VertexId(ids[(y * w + x + 1) as usize])));
        }
        if y + 1 < h && !grid.is_blocked(x, y + 1) {
            edges.push((here, VertexId(ids[((y + 1) * w + x) as usize])));
        }
    }
    let mut graph = Graph::from_edges(labels, edges)?;
    graph.cells = Some(cells);
    Ok(graph)
}
