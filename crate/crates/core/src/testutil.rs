//! Small random instances for unit tests.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{build_graph_from_grid, Graph, GridMap, VertexId};
use crate::instance::{Instance, Semantics};

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A connected grid of the given size with up to `obstacles` blocked cells.
pub(crate) fn random_grid(rng: &mut ChaCha8Rng, width: u32, height: u32, obstacles: usize) -> Arc<Graph> {
    loop {
        let mut cells: Vec<(u32, u32)> = (0..height)
            .flat_map(|y| (0..width).map(move |x| (x, y)))
            .collect();
        cells.shuffle(rng);
        let grid = GridMap::with_blocked(width, height, cells.into_iter().take(obstacles));
        if let Ok(g) = build_graph_from_grid(&grid) {
            return Arc::new(g);
        }
    }
}

pub(crate) fn random_instance(
    rng: &mut ChaCha8Rng,
    graph: Arc<Graph>,
    agents: usize,
    semantics: Semantics,
) -> Instance {
    let mut vs: Vec<VertexId> = graph.vertices().collect();
    vs.shuffle(rng);
    let starts = vs[..agents].to_vec();
    vs.shuffle(rng);
    let targets = vs[..agents].to_vec();
    Instance::new(graph, starts.into_iter().zip(targets), semantics).unwrap()
}

pub(crate) fn random_semantics(rng: &mut ChaCha8Rng) -> Semantics {
    if rng.gen_bool(0.5) {
        Semantics::StayAtTarget
    } else {
        Semantics::DisappearAtTarget
    }
}

/// Graph from a list of `(label, label)` edges.
pub(crate) fn labeled_graph(labels: &[&str], edges: &[(&str, &str)]) -> Arc<Graph> {
    let id = |l: &str| VertexId(labels.iter().position(|x| *x == l).unwrap() as u32);
    Arc::new(
        Graph::from_edges(
            labels.iter().map(|s| s.to_string()).collect(),
            edges.iter().map(|&(a, b)| (id(a), id(b))),
        )
        .unwrap(),
    )
}

/// Path graph `c0 - c1 - ... - c{n-1}`.
pub(crate) fn corridor(n: usize) -> Arc<Graph> {
    let labels: Vec<String> = (0..n).map(|k| format!("c{k}")).collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let edges: Vec<(&str, &str)> = refs.windows(2).map(|w| (w[0], w[1])).collect();
    labeled_graph(&refs, &edges)
}

/// The two-agent corridor-with-pocket instance: a five-cell corridor
/// (1,2)..(5,2) with a dead-end cell (3,1) above the middle. Agent 1 crosses
/// the corridor; agent 2 starts in the middle and must reach (2,2).
pub(crate) fn pocket_instance() -> Instance {
    let labels = ["(1,2)", "(2,2)", "(3,2)", "(4,2)", "(5,2)", "(3,1)"];
    let edges = [
        ("(1,2)", "(2,2)"),
        ("(2,2)", "(3,2)"),
        ("(3,2)", "(4,2)"),
        ("(4,2)", "(5,2)"),
        ("(3,2)", "(3,1)"),
    ];
    let g = labeled_graph(&labels, &edges);
    let v = |l: &str| g.vertex_by_label(l).unwrap();
    let endpoints = [(v("(1,2)"), v("(5,2)")), (v("(3,2)"), v("(2,2)"))];
    Instance::new(g, endpoints, Semantics::StayAtTarget).unwrap()
}
