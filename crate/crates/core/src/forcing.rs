//! Color-change rules and relaxed chronologies.
//!
//! A relaxed chronology is a base set of blue vertices plus an ordered list of
//! force-sets. Step `k` may use any subset of the forces that are legal once
//! the blue set after step `k - 1` is known, no vertex may be forced twice in
//! one step, and every vertex is blue after the last step. Empty steps are
//! allowed.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ChronologyError, Error, Result};
use crate::graph::{Graph, PathCover};
use crate::pip::Block;
use crate::set::VertexSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Standard,
    Psd,
    /// One closed-neighborhood step, then standard forcing.
    PowerDomination,
    RigidLinkage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct Force {
    pub src: usize,
    pub dst: usize,
}

impl Force {
    pub fn new(src: usize, dst: usize) -> Self {
        Self { src, dst }
    }

    pub fn reversed(self) -> Self {
        Self { src: self.dst, dst: self.src }
    }
}

impl From<(usize, usize)> for Force {
    fn from((src, dst): (usize, usize)) -> Self {
        Self { src, dst }
    }
}

impl From<Force> for (usize, usize) {
    fn from(f: Force) -> Self {
        (f.src, f.dst)
    }
}

impl fmt::Display for Force {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.src, self.dst)
    }
}

/// Base set plus ordered force-sets. Forces within a step are kept sorted by
/// `(src, dst)` so that serialization is deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "ChronologyRepr")]
pub struct RelaxedChronology {
    rule: Rule,
    base: VertexSet,
    steps: Vec<Vec<Force>>,
}

#[derive(Deserialize)]
struct ChronologyRepr {
    rule: Rule,
    base: VertexSet,
    steps: Vec<Vec<Force>>,
}

impl From<ChronologyRepr> for RelaxedChronology {
    fn from(r: ChronologyRepr) -> Self {
        Self::new(r.rule, r.base, r.steps)
    }
}

impl RelaxedChronology {
    pub fn new(rule: Rule, base: VertexSet, mut steps: Vec<Vec<Force>>) -> Self {
        for s in &mut steps {
            s.sort_unstable();
            s.dedup();
        }
        Self { rule, base, steps }
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    pub fn base(&self) -> &VertexSet {
        &self.base
    }

    /// Force-sets `F^(1..=K)`; index 0 holds step 1.
    pub fn steps(&self) -> &[Vec<Force>] {
        &self.steps
    }

    /// Completion time `K`.
    pub fn ct(&self) -> usize {
        self.steps.len()
    }

    /// `(step, force)` pairs in chronological order, steps numbered from 1.
    pub fn timed_forces(&self) -> impl Iterator<Item = (usize, Force)> + '_ {
        self.steps.iter().enumerate().flat_map(|(i, s)| s.iter().map(move |&f| (i + 1, f)))
    }

    /// The underlying force set, sorted.
    pub fn force_set(&self) -> Vec<Force> {
        let mut all: Vec<Force> = self.steps.iter().flatten().copied().collect();
        all.sort_unstable();
        all
    }

    pub fn with_rule(&self, rule: Rule) -> Self {
        Self { rule, ..self.clone() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("chronology serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Cumulative blue sets `E^[0..=K]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpansionSequence(pub Vec<VertexSet>);

impl ExpansionSequence {
    pub fn get(&self, k: usize) -> &VertexSet {
        &self.0[k]
    }

    /// The step at which each vertex becomes blue (0 for the base).
    pub fn rounds(&self, n: usize) -> Vec<usize> {
        let mut rd = vec![usize::MAX; n];
        for (k, e) in self.0.iter().enumerate() {
            for v in e {
                if rd[v] == usize::MAX {
                    rd[v] = k;
                }
            }
        }
        rd
    }
}

/// The legal forces `S_X(G, blue)`.
///
/// `inactive` is consulted only for [`Rule::RigidLinkage`].
pub fn possible_forces(rule: Rule, g: &Graph, blue: &VertexSet, inactive: &VertexSet) -> Result<Vec<Force>> {
    g.check_set(blue)?;
    let mut out = Vec::new();
    match rule {
        Rule::Standard => {
            for u in blue {
                let white = g.neighbor_set(u).difference(blue);
                if white.len() == 1 {
                    out.push(Force::new(u, white.first().expect("one member")));
                }
            }
        }
        Rule::Psd | Rule::RigidLinkage => {
            for comp in g.components_unchecked(blue) {
                let boundary = g.boundary(&comp);
                if rule == Rule::RigidLinkage && !boundary.is_disjoint(inactive) {
                    continue;
                }
                for u in &boundary {
                    if rule == Rule::RigidLinkage && inactive.contains(u) {
                        continue;
                    }
                    let inside = g.neighbor_set(u).intersection(&comp);
                    if inside.len() == 1 {
                        out.push(Force::new(u, inside.first().expect("one member")));
                    }
                }
            }
            out.sort_unstable();
        }
        Rule::PowerDomination => return Err(Error::InvalidRule(rule)),
    }
    Ok(out)
}

/// Replays `f` on `g`, checking the three chronology conditions, and returns
/// the expansion sequence.
pub fn validate_chronology(g: &Graph, f: &RelaxedChronology) -> Result<ExpansionSequence, ChronologyError> {
    if f.rule == Rule::PowerDomination {
        return Err(ChronologyError::UnsupportedRule(f.rule));
    }
    if let Some(v) = f.base.iter().find(|&v| v >= g.n()) {
        return Err(ChronologyError::BaseOutOfRange { vertex: v, n: g.n() });
    }
    let mut blue = f.base.clone();
    let mut inactive = VertexSet::new();
    let mut forcers = VertexSet::new();
    let mut seq = vec![blue.clone()];
    for (i, step) in f.steps.iter().enumerate() {
        let k = i + 1;
        if f.rule == Rule::RigidLinkage && step.len() > 1 {
            return Err(ChronologyError::BatchedRlStep { step: k });
        }
        let legal = possible_forces(f.rule, g, &blue, &inactive).expect("rule checked above");
        let mut targets = VertexSet::new();
        for &force in step {
            if legal.binary_search(&force).is_err() {
                return Err(ChronologyError::IllegalForce { step: k, force });
            }
            if !targets.insert(force.dst) {
                return Err(ChronologyError::DuplicateTarget { step: k, dst: force.dst });
            }
            if f.rule == Rule::Standard && !forcers.insert(force.src) {
                return Err(ChronologyError::RepeatedForcer { step: k, src: force.src });
            }
        }
        blue.union_with(&targets);
        if f.rule == Rule::RigidLinkage {
            for force in step {
                inactive.insert(force.src);
            }
        }
        seq.push(blue.clone());
    }
    let white = g.vertices().difference(&blue);
    if !white.is_empty() {
        return Err(ChronologyError::Incomplete { white });
    }
    Ok(ExpansionSequence(seq))
}

/// Result of maximal forcing from a fixed initial set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Propagation {
    pub chronology: RelaxedChronology,
    /// `pt`, `pt+` or `ppt` depending on the rule.
    pub time: usize,
}

/// Maximal forcing from `base`.
///
/// Each white vertex that can be forced at a step is forced by its smallest
/// eligible forcer. For power domination, step 1 colors `N[base]`; it is
/// recorded as forces from the smallest adjacent base vertex.
pub fn propagate(rule: Rule, g: &Graph, base: &VertexSet) -> Result<Propagation> {
    g.check_set(base)?;
    let full = g.vertices();
    let mut blue = base.clone();
    let mut steps = Vec::new();
    let step_rule = match rule {
        Rule::Standard | Rule::Psd => rule,
        Rule::PowerDomination => {
            if blue != full {
                let mut step = Vec::new();
                for v in g.closed_neighborhood(base)?.difference(base).iter() {
                    let src = g.neighbors(v).iter().copied().find(|&u| base.contains(u));
                    step.push(Force::new(src.expect("dominated vertex has a base neighbor"), v));
                }
                for f in &step {
                    blue.insert(f.dst);
                }
                steps.push(step);
            }
            Rule::Standard
        }
        Rule::RigidLinkage => return Err(Error::InvalidRule(rule)),
    };
    while blue != full {
        let step = maximal_step(step_rule, g, &blue);
        if step.is_empty() {
            return Err(Error::NotForcing { blue });
        }
        for f in &step {
            blue.insert(f.dst);
        }
        steps.push(step);
    }
    let time = steps.len();
    Ok(Propagation { chronology: RelaxedChronology::new(rule, base.clone(), steps), time })
}

fn maximal_step(rule: Rule, g: &Graph, blue: &VertexSet) -> Vec<Force> {
    let legal = possible_forces(rule, g, blue, &VertexSet::new()).expect("standard or psd");
    // `legal` is sorted by src, so the first forcer seen per target is the smallest.
    let mut chosen: BTreeMap<usize, usize> = BTreeMap::new();
    for f in legal {
        chosen.entry(f.dst).or_insert(f.src);
    }
    chosen.into_iter().map(|(dst, src)| Force::new(src, dst)).collect()
}

/// Per-vertex round (step it turns blue) and forcing step, for a chronology
/// already known to be valid.
fn rounds_and_force_steps(g: &Graph, f: &RelaxedChronology) -> (Vec<usize>, Vec<Option<usize>>) {
    let mut rd = vec![usize::MAX; g.n()];
    for v in f.base() {
        rd[v] = 0;
    }
    let mut fs = vec![None; g.n()];
    for (k, force) in f.timed_forces() {
        rd[force.dst] = k;
        fs[force.src].get_or_insert(k);
    }
    (rd, fs)
}

/// `act(v)` for every vertex of a valid standard chronology, as closed
/// intervals: from the step `v` turns blue up to the step before it forces,
/// or up to `K` if it never forces.
pub fn active_times(g: &Graph, f: &RelaxedChronology) -> Result<Vec<Block>> {
    if f.rule() != Rule::Standard {
        return Err(Error::InvalidRule(f.rule()));
    }
    validate_chronology(g, f)?;
    let (rd, fs) = rounds_and_force_steps(g, f);
    Ok((0..g.n()).map(|v| Block::new(rd[v], fs[v].map_or(f.ct(), |k| k - 1))).collect())
}

/// A PSD forcing tree rooted at a base vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForcingTree {
    pub root: usize,
    pub vertices: VertexSet,
    /// `(child, parent)` pairs, sorted by child.
    pub parent: Vec<(usize, usize)>,
}

impl ForcingTree {
    /// Unordered tree edges `(min, max)`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = self.parent.iter().map(|&(c, p)| (c.min(p), c.max(p))).collect();
        e.sort_unstable();
        e
    }
}

/// Chain set (standard and rigid-linkage rules) or forcing tree cover (PSD),
/// one member per base vertex in ascending base order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ForcingCover {
    Chains(Vec<Vec<usize>>),
    Trees(Vec<ForcingTree>),
}

pub fn forcing_cover(g: &Graph, f: &RelaxedChronology) -> Result<ForcingCover> {
    if f.rule() == Rule::PowerDomination {
        return Err(Error::InvalidRule(f.rule()));
    }
    validate_chronology(g, f)?;
    Ok(cover_unchecked(g, f))
}

pub(crate) fn cover_unchecked(g: &Graph, f: &RelaxedChronology) -> ForcingCover {
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for force in f.force_set() {
        children[force.src].push(force.dst);
    }
    match f.rule() {
        Rule::Psd => {
            let trees = f
                .base()
                .iter()
                .map(|root| {
                    let mut vertices = VertexSet::new();
                    let mut parent = Vec::new();
                    let mut stack = vec![root];
                    while let Some(u) = stack.pop() {
                        vertices.insert(u);
                        for &c in &children[u] {
                            parent.push((c, u));
                            stack.push(c);
                        }
                    }
                    parent.sort_unstable();
                    ForcingTree { root, vertices, parent }
                })
                .collect();
            ForcingCover::Trees(trees)
        }
        _ => {
            let chains = f
                .base()
                .iter()
                .map(|b| {
                    let mut chain = vec![b];
                    let mut u = b;
                    while let Some(&next) = children[u].first() {
                        chain.push(next);
                        u = next;
                    }
                    chain
                })
                .collect();
            let cover = ForcingCover::Chains(chains);
            if let ForcingCover::Chains(c) = &cover {
                debug_assert!(g.validate_path_cover(&PathCover { paths: c.clone() }).is_ok());
            }
            cover
        }
    }
}

/// Vertices that perform no force.
pub fn terminus(g: &Graph, f: &RelaxedChronology) -> Result<VertexSet> {
    validate_chronology(g, f)?;
    Ok(terminus_unchecked(g, f))
}

pub(crate) fn terminus_unchecked(g: &Graph, f: &RelaxedChronology) -> VertexSet {
    let mut t = g.vertices();
    for force in f.steps().iter().flatten() {
        t.remove(force.src);
    }
    t
}

/// Reverses every force and the order of the steps; the new base is the
/// terminus.
pub fn reversal(g: &Graph, f: &RelaxedChronology) -> Result<RelaxedChronology> {
    if f.rule() != Rule::Standard {
        return Err(Error::InvalidRule(f.rule()));
    }
    let base = terminus(g, f)?;
    let steps = f.steps().iter().rev().map(|s| s.iter().map(|x| x.reversed()).collect()).collect();
    Ok(RelaxedChronology::new(Rule::Standard, base, steps))
}

/// Propagation time of a bare force set: at each step every force of the set
/// that is currently legal fires.
pub fn propagation_time_of_forces(g: &Graph, base: &VertexSet, forces: &[Force], rule: Rule) -> Result<usize> {
    if !matches!(rule, Rule::Standard | Rule::Psd) {
        return Err(Error::InvalidRule(rule));
    }
    g.check_set(base)?;
    let full = g.vertices();
    let mut blue = base.clone();
    let mut remaining: Vec<Force> = forces.to_vec();
    remaining.sort_unstable();
    let mut t = 0;
    while blue != full {
        let legal = possible_forces(rule, g, &blue, &VertexSet::new())?;
        let (fire, rest): (Vec<Force>, Vec<Force>) =
            remaining.into_iter().partition(|f| legal.binary_search(f).is_ok());
        if fire.is_empty() {
            return Err(Error::NotForcing { blue });
        }
        for f in &fire {
            blue.insert(f.dst);
        }
        remaining = rest;
        t += 1;
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    fn steps(raw: &[&[(usize, usize)]]) -> Vec<Vec<Force>> {
        raw.iter().map(|s| s.iter().map(|&p| p.into()).collect()).collect()
    }

    /// Ladder graphs: v1..v4 are 0..3, w1..w4 are 4..7.
    fn ladder(extra: bool) -> Graph {
        let mut e = vec![(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (6, 7), (0, 4), (1, 5), (2, 6), (3, 7)];
        if extra {
            e.push((1, 6));
        }
        Graph::from_edges(8, &e).unwrap()
    }

    fn ladder_chronology() -> RelaxedChronology {
        RelaxedChronology::new(
            Rule::Standard,
            set(&[0, 4]),
            steps(&[&[(0, 1), (4, 5)], &[(5, 6)], &[(1, 2)], &[(2, 3), (6, 7)]]),
        )
    }

    #[test]
    fn standard_forces_on_ladder_with_chord() {
        let legal = possible_forces(Rule::Standard, &ladder(true), &set(&[0, 4]), &VertexSet::new()).unwrap();
        assert_eq!(legal, vec![Force::new(0, 1), Force::new(4, 5)]);
        let g = ladder(true);
        assert!(possible_forces(Rule::Standard, &g, &g.vertices(), &VertexSet::new()).unwrap().is_empty());
    }

    #[test]
    fn psd_forks_at_star_center() {
        let legal = possible_forces(Rule::Psd, &Graph::star(3), &set(&[0]), &VertexSet::new()).unwrap();
        assert_eq!(legal, vec![Force::new(0, 1), Force::new(0, 2), Force::new(0, 3)]);
        assert!(matches!(
            possible_forces(Rule::PowerDomination, &Graph::star(3), &set(&[0]), &VertexSet::new()),
            Err(Error::InvalidRule(Rule::PowerDomination))
        ));
    }

    #[test]
    fn rigid_linkage_blocks_components_next_to_inactive_vertices() {
        // Path 0-1-2 with 0 inactive: the white component {1, 2} touches 0.
        let g = Graph::path(3);
        let legal = possible_forces(Rule::RigidLinkage, &g, &set(&[0]), &set(&[0])).unwrap();
        assert!(legal.is_empty());
        let legal = possible_forces(Rule::RigidLinkage, &g, &set(&[0]), &VertexSet::new()).unwrap();
        assert_eq!(legal, vec![Force::new(0, 1)]);
    }

    #[test]
    fn ladder_chronology_valid_on_both_graphs() {
        let f = ladder_chronology();
        for g in [ladder(false), ladder(true)] {
            let seq = validate_chronology(&g, &f).unwrap();
            assert_eq!(seq.0.len(), 5);
            assert_eq!(seq.get(4), &g.vertices());
        }
    }

    #[test]
    fn validation_reports_first_violation() {
        let g = ladder(false);
        let mut s = ladder_chronology().steps().to_vec();
        s.swap(0, 3);
        let f = RelaxedChronology::new(Rule::Standard, set(&[0, 4]), s);
        assert_eq!(
            validate_chronology(&g, &f),
            Err(ChronologyError::IllegalForce { step: 1, force: Force::new(2, 3) })
        );
        let f = RelaxedChronology::new(Rule::Standard, set(&[0, 4]), steps(&[&[(0, 1), (4, 5)]]));
        assert!(matches!(validate_chronology(&g, &f), Err(ChronologyError::Incomplete { .. })));
        // Two forcers of the same target in one step.
        let g = Graph::path(3);
        let f = RelaxedChronology::new(Rule::Psd, set(&[0, 2]), steps(&[&[(0, 1), (2, 1)]]));
        assert_eq!(validate_chronology(&g, &f), Err(ChronologyError::DuplicateTarget { step: 1, dst: 1 }));
    }

    #[test]
    fn propagate_paths_and_ladder() {
        let p = propagate(Rule::Standard, &Graph::path(6), &set(&[0])).unwrap();
        assert_eq!(p.time, 5);
        let p = propagate(Rule::Standard, &ladder(false), &set(&[0, 4])).unwrap();
        assert_eq!(p.time, 3);
        assert!(matches!(propagate(Rule::Standard, &Graph::path(3), &set(&[1])), Err(Error::NotForcing { .. })));
        let p = propagate(Rule::Psd, &Graph::path(3), &set(&[1])).unwrap();
        assert_eq!(p.time, 1);
    }

    #[test]
    fn power_domination_timing() {
        let g = Graph::path(5);
        assert_eq!(propagate(Rule::PowerDomination, &g, &g.vertices()).unwrap().time, 0);
        // N[{2}] = {1,2,3}, then 1->0 and 3->4.
        assert_eq!(propagate(Rule::PowerDomination, &g, &set(&[2])).unwrap().time, 2);
        assert_eq!(propagate(Rule::PowerDomination, &Graph::star(4), &set(&[0])).unwrap().time, 1);
        assert!(propagate(Rule::PowerDomination, &g, &VertexSet::new()).is_err());
    }

    #[test]
    fn active_times_on_path() {
        let g = Graph::path(4);
        let f = propagate(Rule::Standard, &g, &set(&[0])).unwrap().chronology;
        let act = active_times(&g, &f).unwrap();
        assert_eq!(act, (0..4).map(|j| Block::new(j, j)).collect::<Vec<_>>());
    }

    #[test]
    fn covers_terminus_reversal() {
        let g = ladder(false);
        let f = ladder_chronology();
        assert_eq!(forcing_cover(&g, &f).unwrap(), ForcingCover::Chains(vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]]));
        assert_eq!(terminus(&g, &f).unwrap(), set(&[3, 7]));
        let r = reversal(&g, &f).unwrap();
        assert_eq!(r.base(), &set(&[3, 7]));
        assert_eq!(r.steps()[0], vec![Force::new(3, 2), Force::new(7, 6)]);
        validate_chronology(&g, &r).unwrap();
        assert_eq!(reversal(&g, &r).unwrap(), f);

        let p2 = Graph::path(2);
        let f = RelaxedChronology::new(Rule::Standard, set(&[0]), steps(&[&[(0, 1)]]));
        let r = reversal(&p2, &f).unwrap();
        assert_eq!(r, RelaxedChronology::new(Rule::Standard, set(&[1]), steps(&[&[(1, 0)]])));

        let g = Graph::cycle(4);
        let f = RelaxedChronology::new(Rule::Standard, g.vertices(), vec![]);
        assert_eq!(terminus(&g, &f).unwrap(), g.vertices());
        assert_eq!(forcing_cover(&g, &f).unwrap(), ForcingCover::Chains((0..4).map(|v| vec![v]).collect()));
    }

    #[test]
    fn psd_tree_cover_of_star() {
        let g = Graph::star(3);
        let f = propagate(Rule::Psd, &g, &set(&[0])).unwrap().chronology;
        let ForcingCover::Trees(trees) = forcing_cover(&g, &f).unwrap() else { panic!() };
        assert_eq!(trees.len(), 1);
        assert_eq!(trees[0].vertices, g.vertices());
        assert_eq!(trees[0].edges(), vec![(0, 1), (0, 2), (0, 3)]);
    }

    #[test]
    fn packed_force_time_equals_ct_for_propagating_family() {
        let g = ladder(false);
        let p = propagate(Rule::Standard, &g, &set(&[0, 4])).unwrap();
        let t = propagation_time_of_forces(&g, &set(&[0, 4]), &p.chronology.force_set(), Rule::Standard).unwrap();
        assert_eq!(t, p.chronology.ct());
        assert!(propagation_time_of_forces(&g, &set(&[0, 4]), &[], Rule::Standard).is_err());
    }

    #[test]
    fn json_is_sorted_within_steps() {
        let f = RelaxedChronology::new(Rule::Standard, set(&[4, 0]), steps(&[&[(4, 5), (0, 1)]]));
        assert_eq!(f.to_json(), r#"{"rule":"standard","base":[0,4],"steps":[[[0,1],[4,5]]]}"#);
        assert_eq!(RelaxedChronology::from_json(&f.to_json()).unwrap(), f);
    }
}
