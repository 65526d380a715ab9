//! Parallel increasing path covers.
//!
//! A witness labels each path of a path cover with a block partition of
//! `{0..=K}`; adjacent vertices on different paths must get intersecting
//! blocks. Witnesses and standard relaxed chronologies carry the same
//! information: the chain set of a chronology is a PIP whose blocks are the
//! active times, and a witness schedules the force into `v_{i,j}` at the first
//! step of its block.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forcing::{
    active_times, cover_unchecked, propagation_time_of_forces, validate_chronology, Force, ForcingCover,
    RelaxedChronology, Rule,
};
use crate::graph::{CoverViolation, Graph, PathCover};
use crate::par;
use crate::set::VertexSet;

/// Closed integer interval `lo..=hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct Block {
    pub lo: usize,
    pub hi: usize,
}

impl Block {
    pub fn new(lo: usize, hi: usize) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, k: usize) -> bool {
        self.lo <= k && k <= self.hi
    }

    pub fn intersects(&self, other: &Block) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }
}

impl From<(usize, usize)> for Block {
    fn from((lo, hi): (usize, usize)) -> Self {
        Self { lo, hi }
    }
}

impl From<Block> for (usize, usize) {
    fn from(b: Block) -> Self {
        (b.lo, b.hi)
    }
}

/// Ordered blocks that should partition `{0..=k}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockPartition {
    #[serde(rename = "K")]
    pub k: usize,
    pub blocks: Vec<Block>,
}

impl BlockPartition {
    pub fn new(k: usize, blocks: Vec<Block>) -> Self {
        Self { k, blocks }
    }

    /// Singleton blocks `{0}, {1}, .., {k}`.
    pub fn unit(k: usize) -> Self {
        Self::new(k, (0..=k).map(|j| Block::new(j, j)).collect())
    }

    pub fn validate(&self) -> Result<(), PartitionViolation> {
        check_blocks(self.k, &self.blocks)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, Serialize)]
pub enum PartitionViolation {
    #[error("no blocks")]
    Empty,
    #[error("block {index} is empty")]
    EmptyBlock { index: usize },
    #[error("first block starts at {lo}, not 0")]
    BadStart { lo: usize },
    #[error("block {index} does not start right after block {}", index - 1)]
    Gap { index: usize },
    #[error("last block ends at {hi}, not at K = {k}")]
    BadEnd { hi: usize, k: usize },
}

fn check_blocks(k: usize, blocks: &[Block]) -> Result<(), PartitionViolation> {
    let (first, last) = match (blocks.first(), blocks.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(PartitionViolation::Empty),
    };
    if let Some(index) = blocks.iter().position(Block::is_empty) {
        return Err(PartitionViolation::EmptyBlock { index });
    }
    if first.lo != 0 {
        return Err(PartitionViolation::BadStart { lo: first.lo });
    }
    if let Some(w) = blocks.windows(2).position(|w| w[1].lo != w[0].hi + 1) {
        return Err(PartitionViolation::Gap { index: w + 1 });
    }
    if last.hi != k {
        return Err(PartitionViolation::BadEnd { hi: last.hi, k });
    }
    Ok(())
}

/// Labeled path cover plus one block partition per path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipWitness {
    #[serde(rename = "K")]
    pub k: usize,
    pub paths: Vec<Vec<usize>>,
    pub blocks: Vec<Vec<Block>>,
}

impl PipWitness {
    pub fn partitions(&self) -> Vec<BlockPartition> {
        self.blocks.iter().map(|b| BlockPartition::new(self.k, b.clone())).collect()
    }

    /// Block of every vertex, indexed by vertex id.
    pub fn block_of(&self, n: usize) -> Vec<Option<Block>> {
        let mut out = vec![None; n];
        for (path, blocks) in self.paths.iter().zip(&self.blocks) {
            for (&v, &b) in path.iter().zip(blocks) {
                if v < n {
                    out[v] = Some(b);
                }
            }
        }
        out
    }

    pub fn base(&self) -> VertexSet {
        self.paths.iter().filter_map(|p| p.first().copied()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("witness serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, Serialize)]
pub enum WitnessViolation {
    #[error("{paths} paths but {partitions} block partitions")]
    PartitionCount { paths: usize, partitions: usize },
    #[error("path {path} has {vertices} vertices but {blocks} blocks")]
    BlockCount { path: usize, vertices: usize, blocks: usize },
    #[error("path cover: {0}")]
    Cover(CoverViolation),
    #[error("partition {path}: {violation}")]
    Partition { path: usize, violation: PartitionViolation },
    #[error("edge {u}-{v} joins disjoint blocks {bu:?} and {bv:?}")]
    DisjointBlocks { u: usize, v: usize, bu: Block, bv: Block },
}

/// Checks the path cover, every block partition and the cross-edge condition,
/// reporting the first failure.
pub fn verify_witness(g: &Graph, w: &PipWitness) -> Result<(), WitnessViolation> {
    if w.paths.len() != w.blocks.len() {
        return Err(WitnessViolation::PartitionCount { paths: w.paths.len(), partitions: w.blocks.len() });
    }
    for (i, (p, b)) in w.paths.iter().zip(&w.blocks).enumerate() {
        if p.len() != b.len() {
            return Err(WitnessViolation::BlockCount { path: i, vertices: p.len(), blocks: b.len() });
        }
    }
    g.validate_path_cover(&PathCover { paths: w.paths.clone() }).map_err(WitnessViolation::Cover)?;
    for (i, b) in w.blocks.iter().enumerate() {
        check_blocks(w.k, b).map_err(|violation| WitnessViolation::Partition { path: i, violation })?;
    }
    let mut path_of = vec![0; g.n()];
    for (i, p) in w.paths.iter().enumerate() {
        for &v in p {
            path_of[v] = i;
        }
    }
    let block = w.block_of(g.n());
    for (u, v) in g.edges() {
        let (bu, bv) = (block[u].expect("covered"), block[v].expect("covered"));
        if path_of[u] != path_of[v] && !bu.intersects(&bv) {
            return Err(WitnessViolation::DisjointBlocks { u, v, bu, bv });
        }
    }
    Ok(())
}

fn chronology_from_witness_unchecked(w: &PipWitness) -> RelaxedChronology {
    let mut steps = vec![Vec::new(); w.k];
    for (p, b) in w.paths.iter().zip(&w.blocks) {
        for j in 1..p.len() {
            steps[b[j].lo - 1].push(Force::new(p[j - 1], p[j]));
        }
    }
    RelaxedChronology::new(Rule::Standard, w.base(), steps)
}

/// The standard chronology whose chain set is the witness's path cover and
/// whose active times are its blocks.
pub fn witness_to_chronology(g: &Graph, w: &PipWitness) -> Result<RelaxedChronology> {
    verify_witness(g, w)?;
    let f = chronology_from_witness_unchecked(w);
    validate_chronology(g, &f).map_err(|e| Error::Invariant(format!("witness-derived chronology rejected: {e}")))?;
    Ok(f)
}

/// Chain set of `f` labeled by active times, with `K = ct(f)`.
pub fn chronology_to_witness(g: &Graph, f: &RelaxedChronology) -> Result<PipWitness> {
    let act = active_times(g, f)?;
    let ForcingCover::Chains(paths) = cover_unchecked(g, f) else {
        unreachable!("standard chronologies have chain sets")
    };
    let blocks = paths.iter().map(|p| p.iter().map(|&v| act[v]).collect()).collect();
    let w = PipWitness { k: f.ct(), paths, blocks };
    verify_witness(g, &w)
        .map_err(|e| Error::Invariant(format!("chain set with active times is not a witness: {e}")))?;
    Ok(w)
}

/// The vertex set, path edges `E1` and optional cross edges `E2` induced by a
/// collection of block partitions. Vertices are numbered row-major over
/// `(path, position)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PipFamily {
    pub witness: PipWitness,
    pub n: usize,
    pub e1: Vec<(usize, usize)>,
    pub e2: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyMode {
    /// `G(∅)` and `G(E2)`.
    Extremes,
    /// All `2^|E2|` members, in order of the bitmask over `E2`.
    Enumerate,
    /// Uniform random subsets of `E2`.
    Sample { count: usize, seed: u64 },
}

/// Largest `|E2|` accepted by [`FamilyMode::Enumerate`].
pub const ENUMERATE_LIMIT: usize = 20;

impl PipFamily {
    pub fn new(partitions: &[BlockPartition]) -> Result<Self> {
        let k = partitions.first().map(|p| p.k).ok_or_else(|| Error::InvalidArgument("no block partitions".into()))?;
        if let Some(p) = partitions.iter().find(|p| p.k != k) {
            return Err(Error::InvalidArgument(format!("partitions disagree on K ({} vs {k})", p.k)));
        }
        for (i, p) in partitions.iter().enumerate() {
            p.validate().map_err(|violation| WitnessViolation::Partition { path: i, violation })?;
        }
        let mut paths = Vec::new();
        let mut next = 0;
        for p in partitions {
            paths.push((next..next + p.blocks.len()).collect::<Vec<_>>());
            next += p.blocks.len();
        }
        let blocks: Vec<Vec<Block>> = partitions.iter().map(|p| p.blocks.clone()).collect();
        let mut e1 = Vec::new();
        for p in &paths {
            e1.extend(p.windows(2).map(|w| (w[0], w[1])));
        }
        let mut e2 = Vec::new();
        for i1 in 0..paths.len() {
            for i2 in i1 + 1..paths.len() {
                for (j1, &u) in paths[i1].iter().enumerate() {
                    for (j2, &v) in paths[i2].iter().enumerate() {
                        if blocks[i1][j1].intersects(&blocks[i2][j2]) {
                            e2.push((u, v));
                        }
                    }
                }
            }
        }
        e2.sort_unstable();
        Ok(Self { witness: PipWitness { k, paths, blocks }, n: next, e1, e2 })
    }

    /// `G(E)` for the subset of `E2` selected by `pick`.
    pub fn member(&self, pick: impl Fn(usize) -> bool) -> Graph {
        let mut g = Graph::empty(self.n);
        for &(u, v) in &self.e1 {
            g.add_edge(u, v);
        }
        for (i, &(u, v)) in self.e2.iter().enumerate() {
            if pick(i) {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn members(&self, mode: FamilyMode, parallel: bool) -> Result<Vec<Graph>> {
        Ok(match mode {
            FamilyMode::Extremes => vec![self.member(|_| false), self.member(|_| true)],
            FamilyMode::Enumerate => {
                if self.e2.len() > ENUMERATE_LIMIT {
                    return Err(Error::InvalidArgument(format!(
                        "|E2| = {} exceeds the enumeration limit {ENUMERATE_LIMIT}",
                        self.e2.len()
                    )));
                }
                par::map_range(0..1u64 << self.e2.len(), parallel, |mask| self.member(|i| mask >> i & 1 == 1))
            }
            FamilyMode::Sample { count, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..count)
                    .map(|_| {
                        let pick: Vec<bool> = (0..self.e2.len()).map(|_| rng.gen()).collect();
                        self.member(|i| pick[i])
                    })
                    .collect()
            }
        })
    }

    /// Certificate for a member: the witness base forces it, within the
    /// propagation time of the witness chronology's force set.
    pub fn certify(&self, g: &Graph, witness_ref: &str) -> Result<FamilyRecord> {
        let f = witness_to_chronology(g, &self.witness)?;
        let pt = propagation_time_of_forces(g, f.base(), &f.force_set(), Rule::Standard)?;
        Ok(FamilyRecord {
            edges: g.edges().collect(),
            witness_ref: witness_ref.to_string(),
            certified_z_upper: self.witness.paths.len(),
            certified_pt_upper: pt,
        })
    }
}

/// One manifest line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyRecord {
    pub edges: Vec<(usize, usize)>,
    pub witness_ref: String,
    #[serde(rename = "certified_Z_upper")]
    pub certified_z_upper: usize,
    pub certified_pt_upper: usize,
}

/// Builds the family and certifies every emitted member.
pub fn generate_family(
    partitions: &[BlockPartition],
    mode: FamilyMode,
    witness_ref: &str,
    parallel: bool,
) -> Result<(PipFamily, Vec<FamilyRecord>)> {
    let family = PipFamily::new(partitions)?;
    let graphs = family.members(mode, parallel)?;
    let records = par::map_slice(&graphs, parallel, |g| family.certify(g, witness_ref));
    let records = records.into_iter().collect::<Result<Vec<_>>>()?;
    Ok((family, records))
}

/// `PIP(G)`, which equals the zero forcing number.
pub fn pip_number(g: &Graph) -> Result<usize> {
    crate::solvers::forcing_number(g, Rule::Standard, &crate::solvers::SolverConfig::default()).map(|r| r.value)
}

/// A minimum witness built from a minimum zero forcing set.
pub fn minimum_witness(g: &Graph) -> Result<PipWitness> {
    let report = crate::solvers::forcing_number(g, Rule::Standard, &crate::solvers::SolverConfig::default())?;
    let base = report.witnesses.first().cloned().unwrap_or_default();
    let p = crate::forcing::propagate(Rule::Standard, g, &base)?;
    chronology_to_witness(g, &p.chronology)
}
