use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::MapfError;
use crate::graph::{build_graph_from_grid, GridMap};
use crate::instance::{Instance, Semantics};

/// Parses a movingai `.map` file. `.` and `G` are passable, every other
/// character is blocked.
pub fn parse_map(text: &str) -> Result<GridMap, MapfError> {
    let mut lines = text.lines();
    let mut height = None;
    let mut width = None;
    loop {
        let line = lines
            .next()
            .ok_or_else(|| MapfError::MalformedHeader("missing `map` line".into()))?
            .trim();
        let mut parts = line.split_whitespace();
        match (parts.next(), parts.next()) {
            (Some("type"), _) => {}
            (Some("height"), Some(n)) => height = Some(parse_dim(n)?),
            (Some("width"), Some(n)) => width = Some(parse_dim(n)?),
            (Some("map"), None) => break,
            _ => return Err(MapfError::MalformedHeader(format!("unexpected line `{line}`"))),
        }
    }
    let height = height.ok_or_else(|| MapfError::MalformedHeader("missing height".into()))?;
    let width = width.ok_or_else(|| MapfError::MalformedHeader("missing width".into()))?;
    let rows: Vec<&str> = lines.map(|l| l.trim_end_matches('\r')).filter(|l| !l.is_empty()).collect();
    if rows.len() != height as usize {
        return Err(MapfError::DimensionMismatch(format!(
            "expected {height} rows, found {}",
            rows.len()
        )));
    }
    let mut grid = GridMap::new(width, height);
    for (y, row) in rows.iter().enumerate() {
        if row.chars().count() != width as usize {
            return Err(MapfError::DimensionMismatch(format!(
                "row {y} has {} cells, expected {width}",
                row.chars().count()
            )));
        }
        for (x, c) in row.chars().enumerate() {
            if !matches!(c, '.' | 'G') {
                grid.set_blocked(x as u32, y as u32, true);
            }
        }
    }
    Ok(grid)
}

fn parse_dim(s: &str) -> Result<u32, MapfError> {
    s.parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| MapfError::MalformedHeader(format!("bad dimension `{s}`")))
}

pub fn write_map(grid: &GridMap) -> String {
    let mut out = format!("type octile\nheight {}\nwidth {}\nmap\n", grid.height(), grid.width());
    for y in 0..grid.height() {
        for x in 0..grid.width() {
            out.push(if grid.is_blocked(x, y) { '@' } else { '.' });
        }
        out.push('\n');
    }
    out
}

/// One line of a version-1 scenario file.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioEntry {
    pub bucket: u32,
    pub map_name: String,
    pub width: u32,
    pub height: u32,
    pub start: (u32, u32),
    pub goal: (u32, u32),
    pub optimal_length: f64,
}

pub fn parse_scen_entries(text: &str) -> Result<Vec<ScenarioEntry>, MapfError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, l)) if l.split_whitespace().eq(["version", "1"]) || l.trim() == "version 1.0" => {}
        _ => {
            return Err(MapfError::BadEntry {
                line: 1,
                reason: "expected `version 1`".into(),
            })
        }
    }
    let mut entries = Vec::new();
    for (k, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |reason: &str| MapfError::BadEntry {
            line: k + 1,
            reason: reason.to_string(),
        };
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        let fields: Vec<&str> = if fields.len() == 9 {
            fields
        } else {
            line.split_whitespace().collect()
        };
        if fields.len() != 9 {
            return Err(bad("expected 9 fields"));
        }
        let num = |i: usize| fields[i].parse::<u32>().map_err(|_| bad("expected an integer"));
        entries.push(ScenarioEntry {
            bucket: num(0)?,
            map_name: fields[1].to_string(),
            width: num(2)?,
            height: num(3)?,
            start: (num(4)?, num(5)?),
            goal: (num(6)?, num(7)?),
            optimal_length: fields[8].parse().map_err(|_| bad("expected a number"))?,
        });
    }
    Ok(entries)
}

pub fn write_scen(entries: &[ScenarioEntry]) -> String {
    let mut out = String::from("version 1\n");
    for e in entries {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            e.bucket, e.map_name, e.width, e.height, e.start.0, e.start.1, e.goal.0, e.goal.1, e.optimal_length
        )
        .unwrap();
    }
    out
}

/// The first `m` scenario entries as an instance on `map` (stay semantics).
pub fn parse_scen(text: &str, map: &GridMap, m: usize) -> Result<Instance, MapfError> {
    let entries = parse_scen_entries(text)?;
    if m > entries.len() {
        return Err(MapfError::BadEntry {
            line: entries.len() + 1,
            reason: format!("{m} agents requested, file has {}", entries.len()),
        });
    }
    let graph = Arc::new(build_graph_from_grid(map)?);
    let mut endpoints = Vec::with_capacity(m);
    for (k, e) in entries[..m].iter().enumerate() {
        let locate = |(x, y): (u32, u32)| {
            graph.vertex_by_label(&format!("({x},{y})")).ok_or_else(|| MapfError::BadEntry {
                line: k + 2,
                reason: format!("cell ({x},{y}) is out of bounds or blocked"),
            })
        };
        endpoints.push((locate(e.start)?, locate(e.goal)?));
    }
    Instance::new(graph, endpoints, Semantics::StayAtTarget)
}

/// Scenario entries describing `instance`, whose graph must come from a grid.
pub fn scen_entries_for(instance: &Instance, map_name: &str, map: &GridMap) -> Vec<ScenarioEntry> {
    let g = instance.graph();
    instance
        .agents()
        .iter()
        .map(|a| ScenarioEntry {
            bucket: 0,
            map_name: map_name.to_string(),
            width: map.width(),
            height: map.height(),
            start: g.cell(a.start).expect("grid instance"),
            goal: g.cell(a.target).expect("grid instance"),
            optimal_length: g.bfs_distances(a.start, None)[a.target.index()] as f64,
        })
        .collect()
}
