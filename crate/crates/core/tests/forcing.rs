mod common;

use common::*;
use forcelab::forcing::{
    active_times, forcing_cover, possible_forces, propagate, propagation_time_of_forces, reversal, terminus,
    validate_chronology, ForcingCover,
};
use forcelab::io::parse_edge_list;
use forcelab::{Block, ChronologyError, Force, Graph, RelaxedChronology, Rule, VertexSet};

fn set(v: &[usize]) -> VertexSet {
    v.iter().copied().collect()
}

fn graph(name: &str) -> Graph {
    parse_edge_list(&read_data(name)).unwrap()
}

fn ex33() -> RelaxedChronology {
    RelaxedChronology::from_json(&read_data("ex33_chronology.json")).unwrap()
}

#[test]
fn ladder_propagation_valid_on_both_graphs() {
    for name in ["fig2_G.edges", "fig2_H.edges"] {
        let g = graph(name);
        let p = propagate(Rule::Standard, &g, &set(&[0, 4])).unwrap();
        let seq = validate_chronology(&g, &p.chronology).unwrap();
        assert_eq!(seq.get(p.chronology.ct()), &g.vertices());
        assert_eq!(Some(p.time), naive_time(&adj(&g), Rule::Standard, &[0, 4]), "{name}");
    }
}

#[test]
fn grid_chronology_valid_on_both_graphs() {
    let f = ex33();
    assert_eq!(f.ct(), 8);
    for name in ["fig3_G.edges", "fig3_H.edges"] {
        let g = graph(name);
        let seq = validate_chronology(&g, &f).unwrap();
        assert_eq!(seq.0.len(), 9);
        assert_eq!(seq.get(0), &set(&[0, 4, 8]));
        assert_eq!(seq.get(2), &set(&[0, 1, 4, 8]));
        assert_eq!(seq.get(8), &g.vertices());
    }
}

#[test]
fn swapped_steps_are_illegal() {
    let f = ex33();
    let mut s = f.steps().to_vec();
    s.swap(0, 3);
    let bad = RelaxedChronology::new(Rule::Standard, f.base().clone(), s);
    let err = validate_chronology(&graph("fig3_H.edges"), &bad).unwrap_err();
    assert!(matches!(err, ChronologyError::IllegalForce { step: 1, .. }), "{err:?}");
}

#[test]
fn validation_order_of_violations() {
    let g = Graph::path(4);
    let f = RelaxedChronology::new(Rule::Standard, set(&[0]), vec![vec![Force::new(0, 1)], vec![Force::new(0, 1)]]);
    assert!(matches!(validate_chronology(&g, &f), Err(ChronologyError::IllegalForce { step: 2, .. })));

    let g = Graph::star(2);
    let f = RelaxedChronology::new(Rule::Psd, set(&[0]), vec![vec![Force::new(0, 1)], vec![Force::new(0, 2)]]);
    assert!(validate_chronology(&g, &f).is_ok());

    let f = RelaxedChronology::new(Rule::RigidLinkage, set(&[1]), vec![vec![Force::new(1, 0), Force::new(1, 2)]]);
    assert_eq!(validate_chronology(&Graph::path(3), &f), Err(ChronologyError::BatchedRlStep { step: 1 }));

    let f = RelaxedChronology::new(Rule::Standard, set(&[0]), vec![vec![Force::new(0, 1)]]);
    match validate_chronology(&Graph::path(3), &f) {
        Err(ChronologyError::Incomplete { white }) => assert_eq!(white, set(&[2])),
        other => panic!("{other:?}"),
    }
}

#[test]
fn active_times_of_grid_chronology() {
    let f = ex33();
    let table: serde_json::Value = serde_json::from_str(&read_data("ex33_active_times.json")).unwrap();
    let expected: Vec<Block> = serde_json::from_value(table["A"].clone()).unwrap();
    let g = graph("fig3_H.edges");
    let act = active_times(&g, &f).unwrap();
    assert_eq!(act, expected);
    assert_eq!(act[5], Block::new(3, 4));
    assert_eq!(act[8], Block::new(0, 3));
    let naive: Vec<Block> = naive_active(g.n(), &f).into_iter().map(|(lo, hi)| Block::new(lo, hi)).collect();
    assert_eq!(act, naive);
}

#[test]
fn terminus_and_reversal_of_grid_chronology() {
    let g = graph("fig3_H.edges");
    let f = ex33();
    assert_eq!(terminus(&g, &f).unwrap(), set(&[3, 7, 11]));
    let r = reversal(&g, &f).unwrap();
    assert_eq!(r.base(), &set(&[3, 7, 11]));
    assert_eq!(r.ct(), f.ct());
    validate_chronology(&g, &r).unwrap();
    assert_eq!(reversal(&g, &r).unwrap(), f);
    assert_eq!(
        forcing_cover(&g, &f).unwrap(),
        ForcingCover::Chains(vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7], vec![8, 9, 10, 11]])
    );
}

#[test]
fn force_set_time_on_both_grids() {
    let f = ex33();
    let forces = f.force_set();
    let pairs: Vec<(usize, usize)> = forces.iter().map(|x| (x.src, x.dst)).collect();
    for (name, expected) in [("fig3_G.edges", 3), ("fig3_H.edges", 6)] {
        let g = graph(name);
        let t = propagation_time_of_forces(&g, f.base(), &forces, Rule::Standard).unwrap();
        assert_eq!(Some(t), naive_pt_of_forces(&adj(&g), Rule::Standard, f.base(), &pairs));
        assert_eq!(t, expected, "{name}");
    }
}

#[test]
fn star_psd_forks() {
    for k in 1..6 {
        let g = Graph::star(k);
        let legal = possible_forces(Rule::Psd, &g, &set(&[0]), &VertexSet::new()).unwrap();
        assert_eq!(legal.len(), k);
        let legal = possible_forces(Rule::Standard, &g, &set(&[0]), &VertexSet::new()).unwrap();
        assert_eq!(legal.len(), usize::from(k == 1));
        assert_eq!(propagate(Rule::Psd, &g, &set(&[0])).unwrap().time, 1);
    }
}

#[test]
fn propagation_matches_naive_oracle() {
    for rule in [Rule::Standard, Rule::Psd, Rule::PowerDomination] {
        for inst in random_instances(150, 9, 11, Rule::Standard) {
            let a = adj(&inst.g);
            let base: Vec<usize> = inst.f.base().iter().collect();
            let ours = propagate(rule, &inst.g, inst.f.base()).ok().map(|p| p.time);
            assert_eq!(ours, naive_time(&a, rule, &base), "{rule:?} on {:?}", inst.g);
        }
    }
}

#[test]
fn propagated_chronologies_validate() {
    for rule in [Rule::Standard, Rule::Psd] {
        for inst in random_instances(150, 10, 5, rule) {
            let p = propagate(rule, &inst.g, inst.f.base()).unwrap();
            validate_chronology(&inst.g, &p.chronology).unwrap();
            validate_chronology(&inst.g, &inst.f).unwrap();
            assert!(p.time <= inst.f.ct());
        }
    }
}

#[test]
fn reversal_is_an_involution_on_random_chronologies() {
    for inst in random_instances(200, 10, 21, Rule::Standard) {
        let r = reversal(&inst.g, &inst.f).unwrap();
        validate_chronology(&inst.g, &r).unwrap();
        assert_eq!(r.base(), &terminus(&inst.g, &inst.f).unwrap());
        assert_eq!(reversal(&inst.g, &r).unwrap(), inst.f);
    }
}

#[test]
fn active_times_match_naive_on_random_chronologies() {
    for inst in random_instances(300, 10, 8, Rule::Standard) {
        let act = active_times(&inst.g, &inst.f).unwrap();
        let naive: Vec<Block> =
            naive_active(inst.g.n(), &inst.f).into_iter().map(|(lo, hi)| Block::new(lo, hi)).collect();
        assert_eq!(act, naive);
    }
}

#[test]
fn chronology_json_roundtrip() {
    let f = ex33();
    assert_eq!(RelaxedChronology::from_json(&f.to_json()).unwrap(), f);
    assert!(RelaxedChronology::from_json("{\"rule\":\"bogus\"}").is_err());
}
