use super::*;
use crate::collision::{detect_collisions, validate_solution};
use crate::graph::VertexId;
use crate::instance::Semantics;
use crate::lowlevel::{individually_optimal_path, prioritized_shortest_path, TieBreakContext};
use crate::oracle::{enumerate_total_orderings, inconsistent_agents, is_consistent, wellformed_check};
use crate::testutil::{corridor, pocket_instance, random_grid, random_instance, random_semantics, rng};
use proptest::prelude::*;

#[test]
fn pocket_instance_builds_its_ordering() {
    let inst = pocket_instance();
    let out = solve_pbs(&inst, &PriorityOrdering::empty(2), &Limits::default());
    assert!(out.is_solved());
    let ordering = out.ordering.unwrap();
    assert!(ordering.precedes(0, 1));
    let plan = out.plan.unwrap();
    assert!(validate_solution(&inst, &plan).is_ok());
    assert!(is_consistent(&inst, &plan, &ordering));
}

#[test]
fn pocket_instance_fails_from_wrong_ordering() {
    let inst = pocket_instance();
    let wrong = PriorityOrdering::from_pairs(2, [(1, 0)]).unwrap();
    let out = solve_pbs(&inst, &wrong, &Limits::default());
    assert_eq!(out.result(), SolveResult::NoSolution);
    assert!(out.plan.is_none());
    let fix = solve_prioritized(&inst, &OrderingStrategy::Fixed(vec![1, 0]), &Limits::default());
    assert_eq!(fix.result(), SolveResult::NoSolution);
    let fix = solve_prioritized(&inst, &OrderingStrategy::Fixed(vec![0, 1]), &Limits::default());
    assert!(fix.is_solved());
}

#[test]
fn update_plan_replans_only_what_it_must() {
    let inst = pocket_instance();
    let solver = PbsSolver::new(&inst);
    let mut meter = SearchMeter::unlimited();

    let mut node = PtNode::new(2, PriorityOrdering::empty(2));
    assert!(solver.update_plan(&mut node, 0, &mut meter).unwrap());
    assert_eq!(node.path(0), Some(&individually_optimal_path(inst.graph(), inst.agent(0))));
    assert!(node.path(1).is_none());
    assert!(solver.update_plan(&mut node, 1, &mut meter).unwrap());
    let a1 = node.path(0).unwrap().clone();
    let a2 = node.path(1).unwrap().clone();
    assert_eq!(a2.arrival(), 1);

    // Adding 1 < 2 and updating agent 1: agent 2 collides and is replanned,
    // agent 1 keeps its path.
    node.ordering.insert(0, 1).unwrap();
    assert!(solver.update_plan(&mut node, 0, &mut meter).unwrap());
    assert_eq!(node.path(0), Some(&a1));
    assert_ne!(node.path(1), Some(&a2));
    assert_eq!(node.path(1).unwrap().arrival(), 4);
    assert_eq!(node.cost(), 8);

    // Agent 2 is now clear of agent 1; another update leaves it alone.
    let settled = node.path(1).unwrap().clone();
    let before = meter.expansions();
    assert!(solver.update_plan(&mut node, 0, &mut meter).unwrap());
    assert_eq!(node.path(1), Some(&settled));
    assert!(meter.expansions() > before);
}

#[test]
fn total_orderings_by_strategy() {
    // Agent 1 needs 1 step, agent 2 needs 3.
    let inst = Instance::new(
        corridor(6),
        [(VertexId(0), VertexId(1)), (VertexId(2), VertexId(5))],
        Semantics::StayAtTarget,
    )
    .unwrap();
    let lh = build_total_ordering(&inst, &OrderingStrategy::LongestFirst);
    assert!(lh.precedes(1, 0));
    let sh = build_total_ordering(&inst, &OrderingStrategy::ShortestFirst);
    assert!(sh.precedes(0, 1));
    let fixed = build_total_ordering(&inst, &OrderingStrategy::Fixed(vec![1, 0]));
    assert!(fixed.precedes(1, 0) && fixed.is_total());

    let equal = Instance::new(
        corridor(6),
        [(VertexId(0), VertexId(1)), (VertexId(2), VertexId(3)), (VertexId(5), VertexId(4))],
        Semantics::StayAtTarget,
    )
    .unwrap();
    for s in [OrderingStrategy::LongestFirst, OrderingStrategy::ShortestFirst] {
        let o = build_total_ordering(&equal, &s);
        assert!(o.precedes(0, 1) && o.precedes(1, 2));
    }
    let r1 = build_total_ordering(&equal, &OrderingStrategy::RandomSeeded(9));
    let r2 = build_total_ordering(&equal, &OrderingStrategy::RandomSeeded(9));
    assert_eq!(r1, r2);
    assert!(r1.is_total());
}

#[test]
fn rnd_on_pocket_instance() {
    let inst = pocket_instance();
    let out = solve_rnd(&inst, 10, &Limits::default(), 5, Execution::Sequential);
    assert!(out.is_solved());
    assert_eq!(flowtime(out.plan.as_ref().unwrap()), 8);
    assert!(out.ordering.unwrap().precedes(0, 1));
    let par = solve_rnd(&inst, 10, &Limits::default(), 5, Execution::Parallel);
    assert_eq!(par.plan, solve_rnd(&inst, 10, &Limits::default(), 5, Execution::Sequential).plan);
}

#[test]
fn rnd_reports_no_solution_when_no_ordering_works() {
    // Agent 1 parks in the middle of agent 2's only route and agent 2 parks
    // on agent 1's start side: every ordering blocks someone.
    let inst = Instance::new(
        corridor(3),
        [(VertexId(0), VertexId(1)), (VertexId(1), VertexId(0))],
        Semantics::StayAtTarget,
    )
    .unwrap();
    let table = enumerate_total_orderings(&inst, 5, &Limits::default(), Execution::Sequential).unwrap();
    assert!(table.iter().all(|o| o.result == SolveResult::NoSolution));
    let out = solve_rnd(&inst, 10, &Limits::default(), 1, Execution::Sequential);
    assert_eq!(out.result(), SolveResult::NoSolution);
}

#[test]
fn collision_free_lower_paths_are_kept_even_if_improvable() {
    // Agents 2 and 6 keep paths planned around earlier versions of higher
    // paths; replanned against the final ones they would arrive at 6 and 8.
    let mut r = rng(17145044235316573184);
    let g = random_grid(&mut r, 6, 6, 4);
    let semantics = random_semantics(&mut r);
    let inst = random_instance(&mut r, g, 8, semantics);
    let out = solve_pbs(&inst, &PriorityOrdering::empty(8), &Limits::default());
    let plan = out.plan.unwrap();
    let ordering = out.ordering.unwrap();
    assert!(validate_solution(&inst, &plan).is_ok());
    assert_eq!(inconsistent_agents(&inst, &plan, &ordering), vec![1, 5]);
    assert_eq!((plan.path(1).arrival(), plan.path(5).arrival()), (8, 9));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(80))]

    #[test]
    fn pbs_outputs_are_valid_and_consistent(seed in any::<u64>(), agents in 2usize..=8, obstacles in 0usize..10) {
        let mut r = rng(seed);
        let g = random_grid(&mut r, 6, 6, obstacles);
        let semantics = random_semantics(&mut r);
        let inst = random_instance(&mut r, g, agents, semantics);
        let out = solve_pbs(&inst, &PriorityOrdering::empty(agents), &Limits::default());
        prop_assert_eq!(out.stats.repeated_pairs, 0);
        prop_assert!(out.stats.max_branch_pairs <= agents * (agents - 1) / 2);
        if let (Some(plan), Some(ordering)) = (&out.plan, &out.ordering) {
            prop_assert!(validate_solution(&inst, plan).is_ok());
            // A kept path may be slower than the best response to the final
            // higher paths, never faster.
            for i in 0..agents {
                let higher: Vec<Path> = ordering.higher(i).map(|k| plan.path(k).clone()).collect();
                let best = prioritized_shortest_path(
                    inst.graph(),
                    inst.agent(i),
                    &higher,
                    semantics,
                    &TieBreakContext::none(),
                    &mut SearchMeter::unlimited(),
                )
                .unwrap()
                .expect("the planned path itself avoids the higher paths");
                prop_assert!(best.arrival() <= plan.path(i).arrival());
            }
        }
    }

    #[test]
    fn total_orderings_never_split(seed in any::<u64>(), agents in 2usize..=6) {
        let mut r = rng(seed);
        let g = random_grid(&mut r, 5, 5, 2);
        let semantics = random_semantics(&mut r);
        let inst = random_instance(&mut r, g, agents, semantics);
        let out = solve_prioritized(&inst, &OrderingStrategy::RandomSeeded(seed), &Limits::default());
        prop_assert_eq!(out.stats.high_level_expansions, u64::from(out.result() != SolveResult::NoSolution));
        if let Some(plan) = &out.plan {
            prop_assert!(detect_collisions(&inst, plan).is_empty());
        }
    }

    #[test]
    fn wellformed_instances_solve_under_any_total_order(seed in any::<u64>(), agents in 2usize..=5) {
        let mut r = rng(seed);
        let g = random_grid(&mut r, 6, 6, 4);
        let semantics = random_semantics(&mut r);
        let inst = random_instance(&mut r, g, agents, semantics);
        prop_assume!(wellformed_check(&inst));
        let out = solve_prioritized(&inst, &OrderingStrategy::RandomSeeded(seed ^ 1), &Limits::default());
        prop_assert!(out.is_solved());
    }
}

