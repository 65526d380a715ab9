//! Time slices of a standard chronology.
//!
//! For a step `N`, the vertices whose active interval lies before `N`, contains
//! `N`, or lies after `N` partition the graph, and the middle set separates the
//! other two. Taking the middle slice of an efficient propagating family as a
//! new initial set roughly halves the propagation time for PSD forcing and
//! power domination.

use serde::Serialize;

use crate::bundles::restrict;
use crate::error::{Error, Result};
use crate::forcing::{active_times, propagate, reversal, RelaxedChronology, Rule};
use crate::graph::Graph;
use crate::pip::Block;
use crate::set::VertexSet;
use crate::solvers::{propagation_time_m, SolverConfig};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceReport {
    #[serde(rename = "N")]
    pub n: usize,
    /// Active only before `N`.
    pub minus: VertexSet,
    /// Active at `N`.
    pub at: VertexSet,
    /// Active only after `N`.
    pub plus: VertexSet,
}

fn standard_blocks(g: &Graph, f: &RelaxedChronology) -> Result<Vec<Block>> {
    active_times(g, f)
}

fn slice_from_blocks(blocks: &[Block], n: usize) -> SliceReport {
    let mut r = SliceReport { n, minus: VertexSet::new(), at: VertexSet::new(), plus: VertexSet::new() };
    for (v, b) in blocks.iter().enumerate() {
        if b.hi < n {
            r.minus.insert(v);
        } else if b.lo > n {
            r.plus.insert(v);
        } else {
            r.at.insert(v);
        }
    }
    r
}

fn check_step(f: &RelaxedChronology, n: usize) -> Result<()> {
    if n > f.ct() {
        return Err(Error::InvalidArgument(format!("step {n} is beyond the completion time {}", f.ct())));
    }
    Ok(())
}

pub fn slice(g: &Graph, f: &RelaxedChronology, n: usize) -> Result<SliceReport> {
    let blocks = standard_blocks(g, f)?;
    check_step(f, n)?;
    Ok(slice_from_blocks(&blocks, n))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntervalSlice {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub closed: VertexSet,
    pub left_open: VertexSet,
    pub right_open: VertexSet,
    pub open: VertexSet,
    /// Initial vertices of the restriction to the vertices active only after `M`.
    pub bd_m_plus: VertexSet,
    /// Initial vertices of the reversal restricted to the vertices active only
    /// before `N`.
    pub bd_n_minus: VertexSet,
}

pub fn interval_slice(g: &Graph, f: &RelaxedChronology, m: usize, n: usize) -> Result<IntervalSlice> {
    let blocks = standard_blocks(g, f)?;
    check_step(f, n)?;
    if m > n {
        return Err(Error::InvalidArgument(format!("M = {m} exceeds N = {n}")));
    }
    let at_m = slice_from_blocks(&blocks, m);
    let at_n = slice_from_blocks(&blocks, n);
    let closed: VertexSet = (0..g.n()).filter(|&v| blocks[v].hi >= m && blocks[v].lo <= n).collect();
    let left_open = closed.difference(&at_m.at);
    let right_open = closed.difference(&at_n.at);
    let open = left_open.difference(&at_n.at);
    let bd_m_plus = restrict(g, f, &at_m.plus)?.initial_vertices;
    let bd_n_minus = restrict(g, &reversal(g, f)?, &at_n.minus)?.initial_vertices;
    Ok(IntervalSlice { m, n, closed, left_open, right_open, open, bd_m_plus, bd_n_minus })
}

/// One forcing claim checked by replay on an induced subgraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForcingClaim {
    pub name: &'static str,
    pub initial: VertexSet,
    pub subgraph: VertexSet,
    pub bound: usize,
    pub time: usize,
}

/// Standard propagation time of `b` on `G[h]`, or `None` if it stalls.
pub fn induced_time(g: &Graph, h: &VertexSet, b: &VertexSet, rule: Rule) -> Result<Option<usize>> {
    let (sub, map) = g.induced_subgraph(h)?;
    let local: VertexSet = map.iter().enumerate().filter(|(_, &v)| b.contains(v)).map(|(i, _)| i).collect();
    match propagate(rule, &sub, &local) {
        Ok(p) => Ok(Some(p.time)),
        Err(Error::NotForcing { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Replays the forcing claims about the interval `[M, N]`: both end slices
/// force the closed interval within `N - M` steps, and the two boundary sets
/// force the parts before `N` and after `M`. A failed claim is reported as an
/// invariant violation.
pub fn check_interval_forcing(g: &Graph, f: &RelaxedChronology, m: usize, n: usize) -> Result<Vec<ForcingClaim>> {
    if m >= n {
        return Err(Error::InvalidArgument(format!("need M < N, got M = {m}, N = {n}")));
    }
    let iv = interval_slice(g, f, m, n)?;
    let blocks = standard_blocks(g, f)?;
    let k = f.ct();
    let before_n = slice_from_blocks(&blocks, n).minus;
    let after_m = slice_from_blocks(&blocks, m).plus;
    let v_m = slice_from_blocks(&blocks, m).at;
    let v_n = slice_from_blocks(&blocks, n).at;
    let claims = [
        ("slice_m_forces_interval", v_m, iv.closed.clone(), n - m),
        ("slice_n_forces_interval", v_n, iv.closed.clone(), n - m),
        ("bd_n_minus_forces_before_n", iv.bd_n_minus.clone(), before_n, n - 1),
        ("bd_m_plus_forces_after_m", iv.bd_m_plus.clone(), after_m, k - m - 1),
    ];
    let mut out = Vec::new();
    for (name, initial, subgraph, bound) in claims {
        match induced_time(g, &subgraph, &initial, Rule::Standard)? {
            Some(time) if time <= bound => out.push(ForcingClaim { name, initial, subgraph, bound, time }),
            time => {
                return Err(Error::Invariant(format!(
                    "{name} fails for M = {m}, N = {n}: time {time:?}, bound {bound}"
                )))
            }
        }
    }
    Ok(out)
}

/// Which slices to combine into a PSD forcing set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CutTimes {
    /// `⌈K/2⌉`.
    Auto,
    /// `⌊K/2⌋`.
    Floor,
    Explicit(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceSet {
    pub base: VertexSet,
    pub cuts: Vec<usize>,
    /// Completion time `K` of the standard family the slices come from.
    pub pt: usize,
    /// Guaranteed bound on the time achieved from `base`.
    pub bound: usize,
    /// Time actually achieved by maximal forcing from `base`.
    pub achieved: usize,
}

/// Time bound for PSD forcing from the union of the slices at the sorted
/// `cuts`: the outer ends take `c1` and `K - cr` steps and every gap between
/// consecutive cuts is closed from both sides.
pub fn multi_cut_bound(k: usize, cuts: &[usize]) -> usize {
    let (Some(&first), Some(&last)) = (cuts.first(), cuts.last()) else { return k };
    let gaps = cuts.windows(2).map(|w| (w[1] - w[0]).div_ceil(2));
    gaps.chain([first, k - last]).max().unwrap_or(0)
}

/// PSD forcing set made of slices of the standard chronology `f`.
pub fn psd_set_at(g: &Graph, f: &RelaxedChronology, cuts: &CutTimes) -> Result<SliceSet> {
    let blocks = standard_blocks(g, f)?;
    let k = f.ct();
    let mut cuts = match cuts {
        CutTimes::Auto => vec![k.div_ceil(2)],
        CutTimes::Floor => vec![k / 2],
        CutTimes::Explicit(c) => c.clone(),
    };
    cuts.sort_unstable();
    cuts.dedup();
    if cuts.is_empty() {
        return Err(Error::InvalidArgument("no cut times".into()));
    }
    if let Some(&c) = cuts.iter().find(|&&c| c > k) {
        return Err(Error::InvalidArgument(format!("cut time {c} is beyond the completion time {k}")));
    }
    let mut base = VertexSet::new();
    for &c in &cuts {
        base.union_with(&slice_from_blocks(&blocks, c).at);
    }
    let bound = multi_cut_bound(k, &cuts);
    let achieved = propagate(Rule::Psd, g, &base)
        .map_err(|e| Error::Invariant(format!("slices at {cuts:?} do not PSD-force: {e}")))?
        .time;
    if achieved > bound {
        return Err(Error::Invariant(format!("slices at {cuts:?} need {achieved} PSD steps, bound {bound}")));
    }
    Ok(SliceSet { base, cuts, pt: k, bound, achieved })
}

/// Canonical `m`-efficient standard propagating family.
fn efficient_family(g: &Graph, m: usize, cfg: &SolverConfig) -> Result<RelaxedChronology> {
    let report = propagation_time_m(g, m, Rule::Standard, cfg)?;
    let base = report.witnesses.into_iter().next().expect("feasible report has a witness");
    Ok(propagate(Rule::Standard, g, &base)?.chronology)
}

/// PSD forcing set of size at most `cuts * m` from the slices of the canonical
/// `m`-efficient standard family.
pub fn psd_set_from_slices(g: &Graph, m: usize, cuts: &CutTimes, cfg: &SolverConfig) -> Result<SliceSet> {
    psd_set_at(g, &efficient_family(g, m, cfg)?, cuts)
}

/// Power dominating set `V^N` of the standard chronology `f`.
pub fn power_set_at(g: &Graph, f: &RelaxedChronology, n: usize) -> Result<SliceSet> {
    let blocks = standard_blocks(g, f)?;
    check_step(f, n)?;
    let k = f.ct();
    let base = slice_from_blocks(&blocks, n).at;
    let bound = if k == 0 { 0 } else { n.max(k - n) };
    if k > 0 {
        let iv = interval_slice(g, f, n, n)?;
        let dominated = g.closed_neighborhood(&base)?;
        if !iv.bd_m_plus.union(&iv.bd_n_minus).is_subset(&dominated) {
            return Err(Error::Invariant(format!("N[V^{n}] misses a boundary vertex")));
        }
    }
    let achieved = propagate(Rule::PowerDomination, g, &base)
        .map_err(|e| Error::Invariant(format!("slice {n} does not power dominate: {e}")))?
        .time;
    if achieved > bound {
        return Err(Error::Invariant(format!("slice {n} needs {achieved} power domination steps, bound {bound}")));
    }
    Ok(SliceSet { base, cuts: vec![n], pt: k, bound, achieved })
}

/// Power dominating set of size `m` from the middle slice of the canonical
/// `m`-efficient standard family.
pub fn power_set_from_slice(g: &Graph, m: usize, cfg: &SolverConfig) -> Result<SliceSet> {
    let f = efficient_family(g, m, cfg)?;
    let n = f.ct().div_ceil(2);
    power_set_at(g, &f, n)
}
