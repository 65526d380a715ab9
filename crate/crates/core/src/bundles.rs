//! Restrictions of chronologies to induced subgraphs and path bundles inside
//! PSD forcing trees.
//!
//! The bundle induced by a vertex `x` follows, step by step, the forces that
//! enter the white component containing `x`. The restricted chronology on the
//! bundle is standard forcing, which gives a PSD analogue of reversal (the
//! bundle's terminus is again a PSD forcing set of the same size) and a rigid
//! linkage certified by a rigid-linkage forcing process.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forcing::{
    cover_unchecked, possible_forces, validate_chronology, Force, ForcingCover, ForcingTree, RelaxedChronology, Rule,
};
use crate::graph::Graph;
use crate::set::VertexSet;

/// `F|_H`: the forces of `F` with both endpoints in `H`, at their original
/// step indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Restriction {
    pub sub_vertices: VertexSet,
    /// Vertices of `H` that are in the base or whose forcer lies outside `H`.
    pub initial_vertices: VertexSet,
    /// Restricted chronology in host ids. It is valid on `G[H]`, not on `G`.
    pub chronology: RelaxedChronology,
}

impl Restriction {
    /// The induced subgraph, its id map (new to host) and the restricted
    /// chronology relabeled onto it.
    pub fn localize(&self, g: &Graph) -> Result<(Graph, Vec<usize>, RelaxedChronology)> {
        let (h, map) = g.induced_subgraph(&self.sub_vertices)?;
        let mut local = vec![usize::MAX; g.n()];
        for (i, &v) in map.iter().enumerate() {
            local[v] = i;
        }
        let base = self.initial_vertices.iter().map(|v| local[v]).collect();
        let steps = self
            .chronology
            .steps()
            .iter()
            .map(|s| s.iter().map(|f| Force::new(local[f.src], local[f.dst])).collect())
            .collect();
        let f = RelaxedChronology::new(self.chronology.rule(), base, steps);
        Ok((h, map, f))
    }

    /// Serialized forces, ordered by step and then by `(src, dst)`.
    pub fn serialized(&self) -> Vec<Force> {
        self.chronology.timed_forces().map(|(_, f)| f).collect()
    }
}

fn restrict_unchecked(f: &RelaxedChronology, h: &VertexSet) -> Restriction {
    let mut initial = f.base().intersection(h);
    let steps = f
        .steps()
        .iter()
        .map(|s| {
            s.iter()
                .filter(|x| {
                    if h.contains(x.dst) && !h.contains(x.src) {
                        initial.insert(x.dst);
                    }
                    h.contains(x.src) && h.contains(x.dst)
                })
                .copied()
                .collect()
        })
        .collect();
    Restriction {
        sub_vertices: h.clone(),
        chronology: RelaxedChronology::new(f.rule(), initial.clone(), steps),
        initial_vertices: initial,
    }
}

/// Restricts a valid chronology to `G[H]` and checks that the result is a
/// chronology of the same rule on `G[H]`.
pub fn restrict(g: &Graph, f: &RelaxedChronology, h: &VertexSet) -> Result<Restriction> {
    validate_chronology(g, f)?;
    g.check_set(h)?;
    let r = restrict_unchecked(f, h);
    if matches!(f.rule(), Rule::Standard | Rule::Psd) {
        let (sub, _, local) = r.localize(g)?;
        validate_chronology(&sub, &local)
            .map_err(|e| Error::Invariant(format!("restriction is not a chronology on G[H]: {e}")))?;
    }
    Ok(r)
}

/// Per-tree paths whose restriction is standard forcing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathBundle {
    /// One path per forcing tree, in tree order, each starting at its root.
    pub paths: Vec<Vec<usize>>,
    pub restriction: Restriction,
}

impl PathBundle {
    /// Last vertex of every path.
    pub fn terminus(&self) -> VertexSet {
        self.paths.iter().filter_map(|p| p.last().copied()).collect()
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.restriction.sub_vertices
    }

    pub fn to_record(&self, host_chronology_ref: &str, x: Option<usize>) -> BundleRecord {
        BundleRecord {
            host_chronology_ref: host_chronology_ref.to_string(),
            x,
            paths: self.paths.clone(),
            terminus: self.terminus(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BundleRecord {
    pub host_chronology_ref: String,
    pub x: Option<usize>,
    pub paths: Vec<Vec<usize>>,
    pub terminus: VertexSet,
}

fn psd_trees(g: &Graph, f: &RelaxedChronology) -> Result<Vec<ForcingTree>> {
    if f.rule() != Rule::Psd {
        return Err(Error::InvalidRule(f.rule()));
    }
    validate_chronology(g, f)?;
    match cover_unchecked(g, f) {
        ForcingCover::Trees(t) => Ok(t),
        ForcingCover::Chains(_) => unreachable!("psd chronologies have tree covers"),
    }
}

/// Checks that `paths` is a path bundle of the PSD chronology `f`.
pub fn validate_path_bundle(g: &Graph, f: &RelaxedChronology, paths: &[Vec<usize>]) -> Result<PathBundle> {
    let trees = psd_trees(g, f)?;
    if paths.len() != trees.len() {
        return Err(Error::Bundle(format!("{} paths for {} forcing trees", paths.len(), trees.len())));
    }
    let mut h = VertexSet::new();
    for (i, (p, t)) in paths.iter().zip(&trees).enumerate() {
        if p.is_empty() {
            return Err(Error::Bundle(format!("path {i} is empty")));
        }
        for &v in p {
            if !t.vertices.contains(v) {
                return Err(Error::Bundle(format!("vertex {v} of path {i} is outside forcing tree {i}")));
            }
            if !h.insert(v) {
                return Err(Error::Bundle(format!("vertex {v} appears twice")));
            }
        }
    }
    let restriction = restrict(g, f, &h)?;
    let (sub, map, local) = restriction.localize(g)?;
    let standard = local.with_rule(Rule::Standard);
    validate_chronology(&sub, &standard)
        .map_err(|e| Error::Bundle(format!("restriction is not standard forcing: {e}")))?;
    let ForcingCover::Chains(chains) = cover_unchecked(&sub, &standard) else { unreachable!() };
    let mut chains: Vec<Vec<usize>> = chains.into_iter().map(|c| c.into_iter().map(|v| map[v]).collect()).collect();
    let mut expected = paths.to_vec();
    chains.sort();
    expected.sort();
    if chains != expected {
        return Err(Error::Bundle(format!("chain set {chains:?} of the restriction differs from {expected:?}")));
    }
    Ok(PathBundle { paths: paths.to_vec(), restriction })
}

/// The path bundle of `f` induced by `x`.
pub fn induced_path_bundle(g: &Graph, f: &RelaxedChronology, x: usize) -> Result<PathBundle> {
    g.check_vertex(x)?;
    let trees = psd_trees(g, f)?;
    let seq = validate_chronology(g, f)?;
    let mut tree_of = vec![usize::MAX; g.n()];
    for (i, t) in trees.iter().enumerate() {
        for v in &t.vertices {
            tree_of[v] = i;
        }
    }
    let rd_x = seq.rounds(g.n())[x];
    let mut paths: Vec<Vec<usize>> = trees.iter().map(|t| vec![t.root]).collect();
    for k in 0..rd_x {
        let blue = seq.get(k);
        check_path_builder(g, &trees, blue, k)?;
        let comp = g.component_of(x, blue);
        let mut extended = vec![false; trees.len()];
        for force in &f.steps()[k] {
            if !comp.contains(force.dst) {
                continue;
            }
            let i = tree_of[force.src];
            let tip = *paths[i].last().expect("paths are nonempty");
            if force.src != tip {
                return Err(Error::Invariant(format!(
                    "step {}: {force} enters the component of {x} from tree {i} but not from its tip {tip}",
                    k + 1
                )));
            }
            if std::mem::replace(&mut extended[i], true) {
                return Err(Error::Invariant(format!(
                    "step {}: tree {i} forces twice into the component of {x}",
                    k + 1
                )));
            }
            paths[i].push(force.dst);
        }
    }
    let bundle = validate_path_bundle(g, f, &paths)
        .map_err(|e| Error::Invariant(format!("vertex-induced bundle rejected: {e}")))?;
    if !bundle.vertices().contains(x) {
        return Err(Error::Invariant(format!("bundle induced by {x} misses {x}")));
    }
    Ok(bundle)
}

/// Each white component sees at most one blue vertex of each forcing tree.
fn check_path_builder(g: &Graph, trees: &[ForcingTree], blue: &VertexSet, k: usize) -> Result<()> {
    for comp in g.components_unchecked(blue) {
        let touching = g.boundary(&comp);
        for (i, t) in trees.iter().enumerate() {
            if t.vertices.intersection_len(&touching) > 1 {
                return Err(Error::Invariant(format!(
                    "after step {k}: tree {i} has several blue vertices next to white component {comp:?}"
                )));
            }
        }
    }
    Ok(())
}

/// PSD reversal through the bundle induced by `x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PsdReversal {
    pub bundle: PathBundle,
    pub base: VertexSet,
    pub chronology: RelaxedChronology,
}

/// New PSD forcing set of the same size containing `x`: the terminus of the
/// bundle induced by `x`.
///
/// The new chronology performs the reversed bundle forces first, one per
/// step and latest first, then replays the remaining forces of `f`: each step
/// takes every remaining force that is legal at its start, in original order.
pub fn psd_reversal(g: &Graph, f: &RelaxedChronology, x: usize) -> Result<PsdReversal> {
    let bundle = induced_path_bundle(g, f, x)?;
    let base = bundle.terminus();
    let in_bundle = bundle.restriction.serialized();
    let mut steps: Vec<Vec<Force>> = in_bundle.iter().rev().map(|f| vec![f.reversed()]).collect();

    let mut blue = base.clone();
    for s in &steps {
        blue.insert(s[0].dst);
    }
    let mut remaining: Vec<Force> = f.timed_forces().map(|(_, x)| x).filter(|x| !in_bundle.contains(x)).collect();
    while !remaining.is_empty() {
        let legal = possible_forces(Rule::Psd, g, &blue, &VertexSet::new())?;
        let mut targets = VertexSet::new();
        let (now, later): (Vec<Force>, Vec<Force>) =
            remaining.into_iter().partition(|x| legal.binary_search(x).is_ok() && targets.insert(x.dst));
        if now.is_empty() {
            return Err(Error::Invariant(format!("reversal through {x}: no remaining force is legal from {blue:?}")));
        }
        for x in &now {
            blue.insert(x.dst);
        }
        steps.push(now);
        remaining = later;
    }

    let chronology = RelaxedChronology::new(Rule::Psd, base.clone(), steps);
    validate_chronology(g, &chronology)
        .map_err(|e| Error::Invariant(format!("reversed PSD chronology through {x} rejected: {e}")))?;
    if base.len() != f.base().len() || !base.contains(x) {
        return Err(Error::Invariant(format!(
            "reversal through {x} produced {base:?} from a base of size {}",
            f.base().len()
        )));
    }
    Ok(PsdReversal { bundle, base, chronology })
}

/// Tree cover as a comparable value: vertex set and undirected edges per tree.
fn tree_shapes(trees: &[ForcingTree]) -> Vec<(VertexSet, Vec<(usize, usize)>)> {
    let mut s: Vec<_> = trees.iter().map(|t| (t.vertices.clone(), t.edges())).collect();
    s.sort();
    s
}

/// [`psd_reversal`] through `v`, additionally checking that the new
/// chronology has the same forcing trees as `f`.
pub fn relocate_psd_set(g: &Graph, f: &RelaxedChronology, v: usize) -> Result<PsdReversal> {
    let before = psd_trees(g, f)?;
    let rev = psd_reversal(g, f, v)?;
    let after = psd_trees(g, &rev.chronology)?;
    if tree_shapes(&before) != tree_shapes(&after) {
        return Err(Error::Invariant(format!("relocating to {v} changed the forcing trees")));
    }
    Ok(rev)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Valid,
    Invalid,
}

/// A rigid-linkage forcing process along a vertex-induced bundle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RlCertificate {
    pub alpha: VertexSet,
    pub beta: VertexSet,
    pub steps: Vec<Force>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<String>,
    #[serde(skip)]
    pub paths: Vec<Vec<usize>>,
}

/// Replays the bundle forces induced by `x` on `g`, one per step, under the
/// rigid-linkage rule starting from the base of `f`.
pub fn certify_rigid_linkage(g: &Graph, f: &RelaxedChronology, x: usize) -> Result<RlCertificate> {
    let bundle = induced_path_bundle(g, f, x)?;
    let steps = bundle.restriction.serialized();
    let mut blue = f.base().clone();
    let mut inactive = VertexSet::new();
    let mut violation = None;
    for (i, &force) in steps.iter().enumerate() {
        let legal = possible_forces(Rule::RigidLinkage, g, &blue, &inactive)?;
        if legal.binary_search(&force).is_err() {
            violation = Some(format!("step {}: {force} is not a legal rigid-linkage force", i + 1));
            break;
        }
        blue.insert(force.dst);
        inactive.insert(force.src);
    }
    Ok(RlCertificate {
        alpha: f.base().clone(),
        beta: bundle.terminus(),
        steps,
        verdict: if violation.is_none() { Verdict::Valid } else { Verdict::Invalid },
        violation,
        paths: bundle.paths,
    })
}

/// Result of [`find_linkages`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Linkages {
    /// Each linkage lists one path per `alpha` vertex in ascending order,
    /// oriented from its `alpha` end. Sorted lexicographically.
    pub linkages: Vec<Vec<Vec<usize>>>,
    pub truncated: bool,
}

/// Enumerates `(alpha, beta)`-linkages by backtracking, stopping after
/// `limit` of them.
pub fn find_linkages(g: &Graph, alpha: &VertexSet, beta: &VertexSet, limit: usize) -> Result<Linkages> {
    g.check_set(alpha)?;
    g.check_set(beta)?;
    if alpha.len() != beta.len() {
        return Err(Error::InvalidArgument(format!("|alpha| = {} but |beta| = {}", alpha.len(), beta.len())));
    }
    let mut search = LinkageSearch {
        g,
        alpha: alpha.to_vec(),
        alpha_set: alpha,
        ends: alpha.union(beta),
        beta,
        used: VertexSet::new(),
        current: Vec::new(),
        found: Vec::new(),
        limit,
        truncated: false,
    };
    search.next_path(0);
    let mut linkages = search.found;
    linkages.sort();
    Ok(Linkages { linkages, truncated: search.truncated })
}

struct LinkageSearch<'a> {
    g: &'a Graph,
    alpha: Vec<usize>,
    alpha_set: &'a VertexSet,
    beta: &'a VertexSet,
    ends: VertexSet,
    used: VertexSet,
    current: Vec<Vec<usize>>,
    found: Vec<Vec<Vec<usize>>>,
    limit: usize,
    truncated: bool,
}

impl LinkageSearch<'_> {
    fn done(&self) -> bool {
        self.truncated
    }

    fn next_path(&mut self, i: usize) {
        if self.done() {
            return;
        }
        if i == self.alpha.len() {
            if self.found.len() == self.limit {
                self.truncated = true;
            } else {
                self.found.push(self.current.clone());
            }
            return;
        }
        let a = self.alpha[i];
        self.used.insert(a);
        self.current.push(vec![a]);
        if self.beta.contains(a) {
            self.next_path(i + 1);
        } else {
            self.extend(i, a);
        }
        self.current.pop();
        self.used.remove(a);
    }

    fn extend(&mut self, i: usize, tip: usize) {
        for &w in self.g.neighbors(tip) {
            if self.done() {
                return;
            }
            if self.used.contains(w) {
                continue;
            }
            let is_end = self.beta.contains(w) && !self.alpha_set.contains(w);
            if self.ends.contains(w) && !is_end {
                continue;
            }
            self.used.insert(w);
            self.current[i].push(w);
            if is_end {
                self.next_path(i + 1);
            } else {
                self.extend(i, w);
            }
            self.current[i].pop();
            self.used.remove(w);
        }
    }
}
