use std::sync::Arc;

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use crate::error::MapfError;
use crate::graph::{build_graph_from_grid, Graph, GridMap, VertexId};
use crate::instance::{Instance, Semantics};
use crate::oracle::wellformed_check;
use crate::rng::seeded_rng;

const MAP_ATTEMPTS: usize = 100;
const ENDPOINT_ATTEMPTS: usize = 200;

/// A generated instance together with the grid it lives on.
#[derive(Debug, Clone)]
pub struct Generated {
    pub map: GridMap,
    pub instance: Instance,
}

fn random_map(
    rng: &mut ChaCha8Rng,
    width: u32,
    height: u32,
    obstacle_pct: f64,
) -> Result<(GridMap, Arc<Graph>), MapfError> {
    let cells = (width * height) as usize;
    let blocked = (cells as f64 * obstacle_pct / 100.0).floor() as usize;
    let mut all: Vec<(u32, u32)> = (0..height).flat_map(|y| (0..width).map(move |x| (x, y))).collect();
    for _ in 0..MAP_ATTEMPTS {
        all.shuffle(rng);
        let map = GridMap::with_blocked(width, height, all[..blocked].iter().copied());
        if let Ok(graph) = build_graph_from_grid(&map) {
            return Ok((map, Arc::new(graph)));
        }
    }
    Err(MapfError::InfeasibleParameters(format!(
        "no connected {width}x{height} map with {obstacle_pct}% obstacles after {MAP_ATTEMPTS} tries"
    )))
}

/// Disjoint random starts and targets: the first `m` of a shuffled sample of
/// `2m` free vertices are starts, the rest targets.
fn random_endpoints(rng: &mut ChaCha8Rng, graph: &Graph, m: usize) -> Vec<(VertexId, VertexId)> {
    let vertices: Vec<VertexId> = graph.vertices().collect();
    let picked: Vec<VertexId> = vertices.choose_multiple(rng, 2 * m).copied().collect();
    (0..m).map(|i| (picked[i], picked[m + i])).collect()
}

fn check_params(width: u32, height: u32, obstacle_pct: f64, m: usize) -> Result<(), MapfError> {
    if width == 0 || height == 0 || !(0.0..100.0).contains(&obstacle_pct) {
        return Err(MapfError::InfeasibleParameters(format!(
            "{width}x{height} with {obstacle_pct}% obstacles"
        )));
    }
    let cells = (width * height) as usize;
    let free = cells - (cells as f64 * obstacle_pct / 100.0).floor() as usize;
    if 2 * m > free {
        return Err(MapfError::InfeasibleParameters(format!(
            "{m} agents need {} endpoints, only {free} free cells",
            2 * m
        )));
    }
    Ok(())
}

/// A random grid instance determined by `seed`: `⌊cells · obstacle_pct / 100⌋`
/// blocked cells (resampled until the free cells are connected) and `m`
/// agents with distinct endpoints. Stay semantics.
pub fn generate_random_instance(
    width: u32,
    height: u32,
    obstacle_pct: f64,
    m: usize,
    seed: u64,
) -> Result<Generated, MapfError> {
    check_params(width, height, obstacle_pct, m)?;
    let mut rng = seeded_rng(seed);
    let (map, graph) = random_map(&mut rng, width, height, obstacle_pct)?;
    let endpoints = random_endpoints(&mut rng, &graph, m);
    let instance = Instance::new(graph, endpoints, Semantics::StayAtTarget)?;
    Ok(Generated { map, instance })
}

/// Like [`generate_random_instance`], but endpoints are resampled until every
/// agent can reach its target while avoiding all other endpoints.
pub fn generate_wellformed_instance(
    width: u32,
    height: u32,
    obstacle_pct: f64,
    m: usize,
    seed: u64,
) -> Result<Generated, MapfError> {
    check_params(width, height, obstacle_pct, m)?;
    let mut rng = seeded_rng(seed);
    for _ in 0..MAP_ATTEMPTS {
        let (map, graph) = random_map(&mut rng, width, height, obstacle_pct)?;
        for _ in 0..ENDPOINT_ATTEMPTS {
            let endpoints = random_endpoints(&mut rng, &graph, m);
            let instance = Instance::new(graph.clone(), endpoints, Semantics::StayAtTarget)?;
            if wellformed_check(&instance) {
                return Ok(Generated { map, instance });
            }
        }
    }
    Err(MapfError::InfeasibleParameters(format!(
        "no well-formed placement of {m} agents found"
    )))
}
