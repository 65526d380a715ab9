//! Exhaustive computation of forcing numbers, propagation times and
//! throttling numbers.
//!
//! Candidate sets are `u64` masks, enumerated by size and then in increasing
//! numeric order, so the first optimal set found is the lexicographically
//! least one. The propagation kernels here work directly on masks and are
//! independent of the [`crate::forcing`] machinery; tests cross-check the two.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forcing::Rule;
use crate::graph::Graph;
use crate::par;
use crate::set::VertexSet;

/// Default largest vertex count accepted by the exhaustive solvers.
pub const DEFAULT_CAP: usize = 16;

/// Environment variable that overrides [`DEFAULT_CAP`].
pub const CAP_ENV: &str = "FORCELAB_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    Sequential,
    /// Evaluates candidates on the rayon pool. Falls back to sequential when
    /// the crate is built without the `parallel` feature.
    #[default]
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    pub cap: usize,
    pub strategy: Strategy,
}

impl Default for SolverConfig {
    /// Cap from `FORCELAB_CAP` when set to an integer, else [`DEFAULT_CAP`].
    fn default() -> Self {
        let cap = std::env::var(CAP_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_CAP);
        Self { cap: cap.min(64), strategy: Strategy::default() }
    }
}

impl SolverConfig {
    pub fn sequential() -> Self {
        Self { strategy: Strategy::Sequential, ..Self::default() }
    }

    fn parallel(&self) -> bool {
        self.strategy == Strategy::Parallel
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parameter {
    Z,
    ZPlus,
    #[serde(rename = "pd")]
    PowerDomination,
    Pt,
    PtPlus,
    Ppt,
    Thr,
    ThrPlus,
}

impl Parameter {
    pub fn name(self) -> &'static str {
        match self {
            Parameter::Z => "z",
            Parameter::ZPlus => "zplus",
            Parameter::PowerDomination => "pd",
            Parameter::Pt => "pt",
            Parameter::PtPlus => "ptplus",
            Parameter::Ppt => "ppt",
            Parameter::Thr => "thr",
            Parameter::ThrPlus => "thrplus",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParameterReport {
    pub parameter: Parameter,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    pub value: usize,
    /// Every optimal set, in enumeration order.
    pub witnesses: Vec<VertexSet>,
    pub exhausted: bool,
}

/// Mask-based propagation on a graph with at most 64 vertices.
#[derive(Debug, Clone)]
pub struct Kernel {
    adj: Vec<u64>,
    full: u64,
}

impl Kernel {
    pub fn new(g: &Graph) -> Result<Self> {
        let adj = g.masks().ok_or(Error::CapExceeded { n: g.n(), cap: 64 })?;
        let full = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
        Ok(Self { adj, full })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    fn standard_step(&self, blue: u64) -> u64 {
        let mut add = 0;
        for u in bits(blue) {
            let white = self.adj[u] & !blue;
            if white.count_ones() == 1 {
                add |= white;
            }
        }
        blue | add
    }

    fn psd_step(&self, blue: u64) -> u64 {
        let mut add = 0;
        let mut white = self.full & !blue;
        while white != 0 {
            let comp = self.component(white);
            white &= !comp;
            for u in bits(blue) {
                let inside = self.adj[u] & comp;
                if inside.count_ones() == 1 {
                    add |= inside;
                }
            }
        }
        blue | add
    }

    /// Component of the lowest vertex of `within` in the subgraph it induces.
    fn component(&self, within: u64) -> u64 {
        let mut comp = within & within.wrapping_neg();
        let mut frontier = comp;
        while frontier != 0 {
            let mut next = 0;
            for v in bits(frontier) {
                next |= self.adj[v];
            }
            frontier = next & within & !comp;
            comp |= frontier;
        }
        comp
    }

    fn closed_neighborhood(&self, set: u64) -> u64 {
        bits(set).fold(set, |acc, v| acc | self.adj[v])
    }

    /// Number of maximal steps until everything is blue, or `None` if the
    /// process stalls. Bits at or above `n` are ignored.
    pub fn time(&self, rule: Rule, blue: u64) -> Option<usize> {
        let blue = blue & self.full;
        let (mut blue, mut t, psd) = match rule {
            Rule::Standard => (blue, 0, false),
            Rule::Psd => (blue, 0, true),
            Rule::PowerDomination if blue == self.full => return Some(0),
            Rule::PowerDomination => (self.closed_neighborhood(blue), 1, false),
            Rule::RigidLinkage => return None,
        };
        while blue != self.full {
            let next = if psd { self.psd_step(blue) } else { self.standard_step(blue) };
            if next == blue {
                return None;
            }
            blue = next;
            t += 1;
        }
        Some(t)
    }

    /// Final blue set of maximal forcing.
    pub fn closure(&self, rule: Rule, blue: u64) -> u64 {
        let blue = blue & self.full;
        let (mut blue, psd) = match rule {
            Rule::Psd => (blue, true),
            Rule::PowerDomination => (self.closed_neighborhood(blue), false),
            _ => (blue, false),
        };
        loop {
            let next = if psd { self.psd_step(blue) } else { self.standard_step(blue) };
            if next == blue {
                return blue;
            }
            blue = next;
        }
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            b
        })
    })
}

/// All `k`-subsets of `{0..n}` as masks, in increasing numeric order.
pub fn subsets_of_size(n: usize, k: usize) -> Vec<u64> {
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    let mut s: u64 = u64::MAX >> (64 - k);
    loop {
        if n < 64 && s >> n != 0 {
            break;
        }
        out.push(s);
        // Gosper's hack.
        let c = s & s.wrapping_neg();
        let r = s.wrapping_add(c);
        if r == 0 {
            break;
        }
        s = (((r ^ s) >> 2) / c) | r;
    }
    out
}

fn check_cap(g: &Graph, cfg: &SolverConfig) -> Result<Kernel> {
    if g.n() > cfg.cap {
        return Err(Error::CapExceeded { n: g.n(), cap: cfg.cap });
    }
    Kernel::new(g)
}

fn forcing_parameter(rule: Rule) -> Result<Parameter> {
    match rule {
        Rule::Standard => Ok(Parameter::Z),
        Rule::Psd => Ok(Parameter::ZPlus),
        Rule::PowerDomination => Ok(Parameter::PowerDomination),
        Rule::RigidLinkage => Err(Error::InvalidRule(rule)),
    }
}

fn time_parameter(rule: Rule) -> Result<Parameter> {
    match rule {
        Rule::Standard => Ok(Parameter::Pt),
        Rule::Psd => Ok(Parameter::PtPlus),
        Rule::PowerDomination => Ok(Parameter::Ppt),
        Rule::RigidLinkage => Err(Error::InvalidRule(rule)),
    }
}

fn to_sets(masks: impl IntoIterator<Item = u64>) -> Vec<VertexSet> {
    masks.into_iter().map(VertexSet::from_mask).collect()
}

/// Minimum size of a forcing set (or power dominating set) and all sets of
/// that size.
pub fn forcing_number(g: &Graph, rule: Rule, cfg: &SolverConfig) -> Result<ParameterReport> {
    let parameter = forcing_parameter(rule)?;
    let kernel = check_cap(g, cfg)?;
    for k in 0..=g.n() {
        let candidates = subsets_of_size(g.n(), k);
        let ok = par::map_slice(&candidates, cfg.parallel(), |&b| kernel.time(rule, b).is_some());
        let found: Vec<u64> = candidates.iter().zip(ok).filter_map(|(&b, ok)| ok.then_some(b)).collect();
        if !found.is_empty() {
            return Ok(ParameterReport { parameter, m: None, value: k, witnesses: to_sets(found), exhausted: true });
        }
    }
    unreachable!("the full vertex set is always a forcing set")
}

/// `pt_X(G, m)`: least propagation time over forcing sets of size `m`, with
/// every `m`-efficient set as a witness.
pub fn propagation_time_m(g: &Graph, m: usize, rule: Rule, cfg: &SolverConfig) -> Result<ParameterReport> {
    let parameter = time_parameter(rule)?;
    let kernel = check_cap(g, cfg)?;
    if m > g.n() {
        return Err(Error::InvalidArgument(format!("m = {m} exceeds n = {}", g.n())));
    }
    let candidates = subsets_of_size(g.n(), m);
    let times = par::map_slice(&candidates, cfg.parallel(), |&b| kernel.time(rule, b));
    let best = times
        .iter()
        .flatten()
        .min()
        .copied()
        .ok_or_else(|| Error::Infeasible(format!("no {} forcing set of size {m}", parameter.name())))?;
    let witnesses = candidates.iter().zip(&times).filter_map(|(&b, t)| (*t == Some(best)).then_some(b));
    Ok(ParameterReport { parameter, m: Some(m), value: best, witnesses: to_sets(witnesses), exhausted: true })
}

/// Least `|B| + pt_X(G, B)` over forcing sets `B`.
pub fn throttling(g: &Graph, rule: Rule, cfg: &SolverConfig) -> Result<ParameterReport> {
    let parameter = match rule {
        Rule::Standard => Parameter::Thr,
        Rule::Psd => Parameter::ThrPlus,
        _ => return Err(Error::InvalidRule(rule)),
    };
    let kernel = check_cap(g, cfg)?;
    let mut best = usize::MAX;
    let mut witnesses = Vec::new();
    for k in 0..=g.n() {
        if k > best {
            break;
        }
        let candidates = subsets_of_size(g.n(), k);
        let times = par::map_slice(&candidates, cfg.parallel(), |&b| kernel.time(rule, b));
        for (&b, t) in candidates.iter().zip(times) {
            let Some(t) = t else { continue };
            match (k + t).cmp(&best) {
                std::cmp::Ordering::Less => {
                    best = k + t;
                    witnesses = vec![b];
                }
                std::cmp::Ordering::Equal => witnesses.push(b),
                std::cmp::Ordering::Greater => {}
            }
        }
    }
    Ok(ParameterReport { parameter, m: None, value: best, witnesses: to_sets(witnesses), exhausted: true })
}

/// Dispatches on a parameter tag. `m` is required for the propagation times.
pub fn solve(g: &Graph, parameter: Parameter, m: Option<usize>, cfg: &SolverConfig) -> Result<ParameterReport> {
    let need_m = || m.ok_or_else(|| Error::InvalidArgument(format!("{} requires m", parameter.name())));
    match parameter {
        Parameter::Z => forcing_number(g, Rule::Standard, cfg),
        Parameter::ZPlus => forcing_number(g, Rule::Psd, cfg),
        Parameter::PowerDomination => forcing_number(g, Rule::PowerDomination, cfg),
        Parameter::Pt => propagation_time_m(g, need_m()?, Rule::Standard, cfg),
        Parameter::PtPlus => propagation_time_m(g, need_m()?, Rule::Psd, cfg),
        Parameter::Ppt => propagation_time_m(g, need_m()?, Rule::PowerDomination, cfg),
        Parameter::Thr => throttling(g, Rule::Standard, cfg),
        Parameter::ThrPlus => throttling(g, Rule::Psd, cfg),
    }
}
