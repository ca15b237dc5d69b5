mod common;

use halfflow::apps::verify_cut;
use halfflow::instance::InstanceError;
use halfflow::oracle::{dual_enum, OracleError};
use halfflow::{solve_max_multiflow, MultiflowInstance};

fn load(name: &str) -> Result<MultiflowInstance, InstanceError> {
    MultiflowInstance::parse(&std::fs::read_to_string(common::fixture_path(name)).unwrap())
}

#[test]
fn claw_routes_one_unit_through_the_hub() {
    let inst = common::k13();
    let sol = solve_max_multiflow(&inst).unwrap();
    assert_eq!(sol.value2(), dual_enum(&inst).unwrap().0);
    assert_eq!(sol.cut.nodes, vec![0]);
    assert_eq!(sol.cut.capacity, 1);
    assert!(sol.multiflow.paths.iter().all(|p| p.nodes.len() == 3 && p.nodes[1] == 0));
}

#[test]
fn triangle_uses_every_middle_node() {
    let inst = common::triangle();
    let sol = solve_max_multiflow(&inst).unwrap();
    assert_eq!(sol.value2(), dual_enum(&inst).unwrap().0);
    assert_eq!(sol.cut.capacity, 3);
    assert!(verify_cut(&inst, &sol.cut.nodes));
}

#[test]
fn disconnected_terminals_carry_no_flow() {
    let inst = load("disconnected.json").unwrap();
    let sol = solve_max_multiflow(&inst).unwrap();
    assert_eq!(sol.value2(), 0);
    assert!(sol.multiflow.paths.is_empty());
    assert_eq!(sol.cut.capacity, 0);
}

#[test]
fn adjacent_terminals_are_rejected() {
    assert!(matches!(load("terminal_edge.json"), Err(InstanceError::Unbounded(..))));
}

#[test]
fn long_path_is_too_large_for_the_oracle() {
    let inst = load("oversize.json").unwrap();
    assert_eq!(dual_enum(&inst).unwrap_err(), OracleError::TooLarge);
    let sol = solve_max_multiflow(&inst).unwrap();
    let min_cap = inst.nonterminals().map(|v| inst.capacity(v)).min().unwrap();
    assert_eq!(sol.value2(), 2 * min_cap);
}

#[test]
fn recovered_duals_match_the_oracle_weight() {
    for inst in [common::k13(), common::triangle(), load("disconnected.json").unwrap()] {
        let sol = solve_max_multiflow(&inst).unwrap();
        let zero = inst.with_uniform_cost(0);
        sol.potential.check(&zero, &sol.star).unwrap();
        assert_eq!(sol.potential.weight(&zero), dual_enum(&inst).unwrap().0);
        assert!(sol.potential.points.iter().all(|x| x.r4 % 2 == 0));
    }
}
