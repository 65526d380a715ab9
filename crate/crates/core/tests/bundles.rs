mod common;

use common::*;
use forcelab::bundles::{
    certify_rigid_linkage, find_linkages, induced_path_bundle, psd_reversal, relocate_psd_set, restrict,
    validate_path_bundle, Verdict,
};
use forcelab::enumerate::graphs_up_to;
use forcelab::forcing::{propagate, validate_chronology};
use forcelab::solvers::{forcing_number, SolverConfig};
use forcelab::{Force, Graph, RelaxedChronology, Rule, VertexSet};

fn set(v: &[usize]) -> VertexSet {
    v.iter().copied().collect()
}

fn psd_from(g: &Graph, b: &[usize]) -> RelaxedChronology {
    propagate(Rule::Psd, g, &set(b)).unwrap().chronology
}

/// Center 0 with legs 0-1-2 and 0-3-4.
fn spider() -> Graph {
    Graph::from_edges(5, &[(0, 1), (1, 2), (0, 3), (3, 4)]).unwrap()
}

#[test]
fn restriction_examples() {
    let g = Graph::star(3);
    let f = psd_from(&g, &[0]);
    let r = restrict(&g, &f, &g.vertices()).unwrap();
    assert_eq!(r.chronology, f);
    assert_eq!(&r.initial_vertices, f.base());

    let r = restrict(&g, &f, &set(&[2])).unwrap();
    assert_eq!(r.initial_vertices, set(&[2]));
    assert!(r.serialized().is_empty());

    let r = restrict(&g, &f, &set(&[0, 1])).unwrap();
    assert_eq!(r.initial_vertices, set(&[0]));
    assert_eq!(r.serialized(), vec![Force::new(0, 1)]);
    let (h, map, local) = r.localize(&g).unwrap();
    assert_eq!(map, vec![0, 1]);
    validate_chronology(&h, &local).unwrap();
}

#[test]
fn restriction_keeps_step_indices() {
    for inst in random_instances(200, 9, 2, Rule::Psd) {
        let h: VertexSet = (0..inst.g.n()).filter(|v| v % 2 == 0 || v % 3 == 0).collect();
        let r = restrict(&inst.g, &inst.f, &h).unwrap();
        for (k, force) in r.chronology.timed_forces() {
            assert!(inst.f.steps()[k - 1].contains(&force));
        }
        let (sub, _, local) = r.localize(&inst.g).unwrap();
        validate_chronology(&sub, &local).unwrap();
        assert!(local.ct() <= inst.f.ct());
    }
}

#[test]
fn path_bundle_validation() {
    let g = spider();
    let f = psd_from(&g, &[0]);
    assert!(validate_path_bundle(&g, &f, &[vec![0]]).is_ok());
    let b = validate_path_bundle(&g, &f, &[vec![0, 1, 2]]).unwrap();
    assert_eq!(b.terminus(), set(&[2]));
    assert!(validate_path_bundle(&g, &f, &[vec![0, 2]]).is_err());
    assert!(validate_path_bundle(&g, &f, &[vec![0, 1, 2], vec![3]]).is_err());
}

#[test]
fn induced_bundle_examples() {
    let g = Graph::star(3);
    let f = psd_from(&g, &[0]);
    assert_eq!(induced_path_bundle(&g, &f, 0).unwrap().paths, vec![vec![0]]);
    for x in 1..=3 {
        let b = induced_path_bundle(&g, &f, x).unwrap();
        assert_eq!(b.paths, vec![vec![0, x]]);
    }
    let g = spider();
    let f = psd_from(&g, &[0]);
    assert_eq!(induced_path_bundle(&g, &f, 4).unwrap().paths, vec![vec![0, 3, 4]]);
}

#[test]
fn induced_bundles_on_random_psd_chronologies() {
    for inst in random_instances(500, 9, 29, Rule::Psd) {
        let x = inst.g.n() / 2;
        let b = induced_path_bundle(&inst.g, &inst.f, x).unwrap();
        assert!(b.vertices().contains(x));
        assert!(inst.f.base().is_subset(b.vertices()));
        validate_path_bundle(&inst.g, &inst.f, &b.paths).unwrap();
    }
}

#[test]
fn path_reversal() {
    for n in 2..8 {
        let g = Graph::path(n);
        let f = psd_from(&g, &[0]);
        let r = psd_reversal(&g, &f, n - 1).unwrap();
        assert_eq!(r.base, set(&[n - 1]));
        let expected: Vec<Vec<Force>> = (1..n).rev().map(|v| vec![Force::new(v, v - 1)]).collect();
        assert_eq!(r.chronology.steps(), expected.as_slice());

        let cert = certify_rigid_linkage(&g, &f, n - 1).unwrap();
        assert_eq!(cert.verdict, Verdict::Valid);
        let links = find_linkages(&g, &cert.alpha, &cert.beta, 10).unwrap();
        assert_eq!(links.linkages, vec![vec![(0..n).collect::<Vec<_>>()]]);
    }
}

#[test]
fn star_relocation() {
    let g = Graph::star(3);
    let f = psd_from(&g, &[0]);
    let r = relocate_psd_set(&g, &f, 2).unwrap();
    assert_eq!(r.base, set(&[2]));
    let r = relocate_psd_set(&g, &f, 0).unwrap();
    assert_eq!(r.base, set(&[0]));
    let cert = certify_rigid_linkage(&g, &f, 0).unwrap();
    assert_eq!((cert.verdict, &cert.alpha, &cert.beta), (Verdict::Valid, &set(&[0]), &set(&[0])));
}

#[test]
fn cycle_has_two_linkages() {
    let g = Graph::cycle(4);
    let l = find_linkages(&g, &set(&[0]), &set(&[2]), 10).unwrap();
    assert_eq!(l.linkages.len(), 2);
    assert!(!l.truncated);
    let l = find_linkages(&g, &set(&[0]), &set(&[2]), 1).unwrap();
    assert!(l.truncated);
    assert!(find_linkages(&g, &set(&[0]), &set(&[1, 2]), 10).is_err());
}

#[test]
fn linkage_search_matches_edge_oracle() {
    for inst in random_instances(300, 6, 13, Rule::Standard) {
        let alpha = inst.f.base().clone();
        let beta = forcelab::forcing::terminus(&inst.g, &inst.f).unwrap();
        let ours = find_linkages(&inst.g, &alpha, &beta, usize::MAX).unwrap();
        assert_eq!(ours.linkages.len(), linkage_count_by_edges(&inst.g, &alpha, &beta));
    }
}

#[test]
fn exhaustive_small_graph_sweep() {
    let cfg = SolverConfig::default();
    let mut cases = 0;
    for g in graphs_up_to(6, true).unwrap() {
        let report = forcing_number(&g, Rule::Psd, &cfg).unwrap();
        for b in &report.witnesses {
            let f = propagate(Rule::Psd, &g, b).unwrap().chronology;
            for x in 0..g.n() {
                let r = relocate_psd_set(&g, &f, x).unwrap();
                assert_eq!(r.base.len(), report.value);
                assert!(r.base.contains(x));
                validate_chronology(&g, &r.chronology).unwrap();

                let cert = certify_rigid_linkage(&g, &f, x).unwrap();
                assert_eq!(cert.verdict, Verdict::Valid, "{:?}", cert.violation);
                let links = find_linkages(&g, &cert.alpha, &cert.beta, 2).unwrap();
                assert_eq!(links.linkages.len(), 1);
                cases += 1;
            }
        }
    }
    assert!(cases > 1000);
}

#[test]
fn standard_propagation_replays_as_rigid_linkage() {
    for inst in random_instances(200, 9, 40, Rule::Standard) {
        let steps: Vec<Vec<Force>> = inst.f.timed_forces().map(|(_, f)| vec![f]).collect();
        let rl = RelaxedChronology::new(Rule::RigidLinkage, inst.f.base().clone(), steps);
        validate_chronology(&inst.g, &rl).unwrap();
    }
}
