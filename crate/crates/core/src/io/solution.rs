use std::fmt::Write as _;

use crate::error::MapfError;
use crate::instance::{Instance, Path, Plan};

/// One line per agent, `agent <i>: v0 v1 ... vT`, with 1-based agent numbers
/// and vertex labels.
pub fn write_solution(instance: &Instance, plan: &Plan) -> String {
    let g = instance.graph();
    let mut out = String::new();
    for (i, path) in plan.paths.iter().enumerate() {
        write!(out, "agent {}:", i + 1).unwrap();
        for &v in path.vertices() {
            write!(out, " {}", g.label(v)).unwrap();
        }
        out.push('\n');
    }
    out
}

/// Reads the solution format back. Agents may appear in any order but each
/// exactly once; the plan is not validated against the instance.
pub fn parse_solution(text: &str, instance: &Instance) -> Result<Plan, MapfError> {
    let m = instance.num_agents();
    let mut paths: Vec<Option<Path>> = vec![None; m];
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |reason: String| MapfError::MalformedSolution { line: k + 1, reason };
        let (head, body) = line
            .split_once(':')
            .ok_or_else(|| bad("expected `agent <i>: ...`".into()))?;
        let i: usize = head
            .trim()
            .strip_prefix("agent")
            .and_then(|n| n.trim().parse().ok())
            .filter(|&i| (1..=m).contains(&i))
            .ok_or_else(|| bad(format!("bad agent number in `{head}`")))?;
        if paths[i - 1].is_some() {
            return Err(bad(format!("agent {i} listed twice")));
        }
        let vertices = body
            .split_whitespace()
            .map(|l| {
                instance
                    .graph()
                    .vertex_by_label(l)
                    .ok_or_else(|| bad(format!("unknown vertex `{l}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if vertices.is_empty() {
            return Err(bad(format!("agent {i} has an empty path")));
        }
        paths[i - 1] = Some(Path::new(vertices));
    }
    let paths = paths
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            p.ok_or_else(|| MapfError::MalformedSolution {
                line: text.lines().count() + 1,
                reason: format!("agent {} missing", i + 1),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Plan::new(paths))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::joint_optimal;
    use crate::testutil::pocket_instance;

    #[test]
    fn round_trip_of_optimal_plan() {
        let inst = pocket_instance();
        let plan = joint_optimal(&inst, None).unwrap();
        let text = write_solution(&inst, &plan);
        assert!(text.starts_with("agent 1: (1,2) (2,2)"));
        assert_eq!(parse_solution(&text, &inst).unwrap(), plan);
    }

    #[test]
    fn errors() {
        let inst = pocket_instance();
        assert!(matches!(
            parse_solution("agent 1: (1,2)\n", &inst),
            Err(MapfError::MalformedSolution { .. })
        ));
        assert!(matches!(
            parse_solution("agent 1: (1,2)\nagent 2: (9,9)\n", &inst),
            Err(MapfError::MalformedSolution { line: 2, .. })
        ));
        assert!(matches!(
            parse_solution("agent 3: (1,2)\n", &inst),
            Err(MapfError::MalformedSolution { line: 1, .. })
        ));
    }
}
