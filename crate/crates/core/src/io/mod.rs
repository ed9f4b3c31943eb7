//! Reading and writing instances and plans, and seeded instance generators.
//!
//! * movingai `.map` and version-1 `.scen` files;
//! * line-oriented graph fixtures for hand-made, non-grid instances;
//! * the plain-text solution format written by the `mapf` tool.

mod fixture;
mod generate;
mod movingai;
mod solution;

pub use fixture::{parse_graph_fixture, write_graph_fixture};
pub use generate::{generate_random_instance, generate_wellformed_instance, Generated};
pub use movingai::{parse_map, parse_scen, parse_scen_entries, scen_entries_for, write_map, write_scen, ScenarioEntry};
pub use solution::{parse_solution, write_solution};
