//! The checked-in fixture files must parse and agree with the programmatic
//! builders used throughout the unit tests.

use polyeq::algebra::{FiniteAlgebra, OpTemplate, DEFAULT_TABLE_BUDGET};
use polyeq::fixtures;
use polyeq::hardness::{build_ap, GraphInstance};

fn load(name: &str) -> FiniteAlgebra {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let src = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    FiniteAlgebra::parse(&src, DEFAULT_TABLE_BUDGET).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn load_graph(name: &str) -> GraphInstance {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let src = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    GraphInstance::parse(&src).unwrap_or_else(|e| panic!("{path}: {e}"))
}

#[test]
fn z4_matches_builder() {
    assert_eq!(load("z4.alg"), fixtures::cyclic_group(4));
}

#[test]
fn z9_f2_matches_builder() {
    assert_eq!(load("z9_f2.alg"), fixtures::z9_f2());
}

#[test]
fn d8_matches_builder() {
    assert_eq!(load("d8.alg"), fixtures::dihedral_8());
}

#[test]
fn a3_matches_builder() {
    let a3 = load("a3.alg");
    assert_eq!(a3, build_ap(3).unwrap().algebra);
    assert_eq!(a3.template, Some(OpTemplate::ApFamily { p: 3 }));
    // the template supplies f@n without stored tables
    assert!(a3.op("f@2").is_none());
    assert!(a3.resolve("f@6").is_some());
}

#[test]
fn graphs_match_builders() {
    assert_eq!(load_graph("k3.graph"), GraphInstance::complete(3));
    assert_eq!(load_graph("k4.graph"), GraphInstance::complete(4));
    assert_eq!(load_graph("c5.graph"), GraphInstance::cycle(5));
}

#[test]
fn render_round_trips() {
    for name in ["z4.alg", "z9_f2.alg", "a3.alg", "d8.alg"] {
        let alg = load(name);
        let again = FiniteAlgebra::parse(&alg.render(), DEFAULT_TABLE_BUDGET).unwrap();
        assert_eq!(alg, again, "round trip failed for {name}");
    }
}
