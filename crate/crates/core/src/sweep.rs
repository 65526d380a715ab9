//! Bound and invariant checks over streams of graphs, reported as CSV.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::bundles::{certify_rigid_linkage, find_linkages, relocate_psd_set, Verdict};
use crate::enumerate::graphs_up_to;
use crate::error::{Error, Result};
use crate::forcing::{propagate, Rule};
use crate::graph::Graph;
use crate::io::{parse_edge_list, parse_graph6_stream, write_graph6};
use crate::par;
use crate::pip::{minimum_witness, verify_witness};
use crate::slices::{power_set_at, psd_set_at, CutTimes};
use crate::solvers::{forcing_number, propagation_time_m, solve, throttling, Parameter, SolverConfig};

/// Where a sweep reads its graphs from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSource {
    /// Every graph with at most `n` vertices, up to isomorphism.
    AllUpTo(usize),
    /// Every connected graph with at most `n` vertices, up to isomorphism.
    ConnectedUpTo(usize),
    /// A graph6 stream (`.g6`) or a single edge list.
    File(String),
}

impl FromStr for GraphSource {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bound = |rest: &str| {
            rest.parse::<usize>().map_err(|_| Error::InvalidArgument(format!("bad vertex bound in `{s}`")))
        };
        if let Some(rest) = s.strip_prefix("all-n:") {
            Ok(GraphSource::AllUpTo(bound(rest)?))
        } else if let Some(rest) = s.strip_prefix("connected-n:") {
            Ok(GraphSource::ConnectedUpTo(bound(rest)?))
        } else {
            Ok(GraphSource::File(s.to_string()))
        }
    }
}

impl GraphSource {
    pub fn load(&self) -> Result<Vec<Graph>> {
        match self {
            GraphSource::AllUpTo(n) => graphs_up_to(*n, false),
            GraphSource::ConnectedUpTo(n) => graphs_up_to(*n, true),
            GraphSource::File(path) => {
                let text = std::fs::read_to_string(path)?;
                if path.ends_with(".g6") {
                    parse_graph6_stream(&text)
                } else {
                    Ok(vec![parse_edge_list(&text)?])
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// PSD forcing from the middle slice within `⌈pt(G,m)/2⌉` steps.
    PtplusBound,
    /// Power domination from the middle slice within `⌈pt(G,m)/2⌉` steps.
    PptBound,
    /// `thr+(G) <= min_m (m + ⌈pt(G,m)/2⌉)`.
    ThrplusBound,
    /// `Z+(G) <= Z(G)`.
    Zplus,
    /// `pt(G,m)` nonincreasing in `m`.
    PtMonotone,
    /// PSD reversal through every vertex for every minimum PSD forcing set.
    ReversePsd,
    /// Rigid-linkage certificates for every vertex-induced bundle, confirmed
    /// unique by linkage enumeration.
    RlCertify,
    /// A minimum zero forcing set yields a PIP witness with `Z(G)` paths.
    PipEqZ,
    /// Grid closed forms; runs on the grid family rather than the stream.
    GridTable,
}

impl Check {
    pub const ALL: [Check; 9] = [
        Check::PtplusBound,
        Check::PptBound,
        Check::ThrplusBound,
        Check::Zplus,
        Check::PtMonotone,
        Check::ReversePsd,
        Check::RlCertify,
        Check::PipEqZ,
        Check::GridTable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::PtplusBound => "ptplus_bound",
            Check::PptBound => "ppt_bound",
            Check::ThrplusBound => "thrplus_bound",
            Check::Zplus => "zplus",
            Check::PtMonotone => "pt_monotone",
            Check::ReversePsd => "reverse_psd",
            Check::RlCertify => "rl_certify",
            Check::PipEqZ => "pip_eq_z",
            Check::GridTable => "grid_table",
        }
    }
}

impl FromStr for Check {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown check `{s}`")))
    }
}

/// Parses a comma-separated check list; `all` selects every check.
pub fn parse_checks(list: &str) -> Result<Vec<Check>> {
    if list.trim() == "all" {
        return Ok(Check::ALL.to_vec());
    }
    let mut checks = list.split(',').map(|s| s.trim().parse()).collect::<Result<Vec<Check>>>()?;
    checks.sort();
    checks.dedup();
    Ok(checks)
}

/// One `(graph, m)` row of the bounds CSV.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundRow {
    pub graph_id: String,
    pub n: usize,
    pub m: usize,
    #[serde(rename = "Z")]
    pub z: usize,
    pub pt: usize,
    pub bound: usize,
    pub pt_plus_achieved: Option<usize>,
    pub ppt_achieved: Option<usize>,
    pub pass: bool,
}

/// A per-graph check outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub graph_id: String,
    pub check: Check,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckSummary {
    pub check: Check,
    pub evaluated: usize,
    pub failures: usize,
    /// Graph ids of the first few failures.
    pub examples: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub rows: Vec<BoundRow>,
    pub outcomes: Vec<CheckOutcome>,
    pub grid: Vec<GridRow>,
}

impl SweepReport {
    pub fn summary(&self, checks: &[Check]) -> Vec<CheckSummary> {
        checks
            .iter()
            .map(|&check| {
                let relevant: Vec<&CheckOutcome> = self.outcomes.iter().filter(|o| o.check == check).collect();
                let failed: Vec<&CheckOutcome> = relevant.iter().copied().filter(|o| !o.pass).collect();
                CheckSummary {
                    check,
                    evaluated: relevant.len(),
                    failures: failed.len(),
                    examples: failed.iter().take(5).map(|o| o.graph_id.clone()).collect(),
                }
            })
            .collect()
    }

    pub fn failures(&self) -> usize {
        self.outcomes.iter().filter(|o| !o.pass).count()
    }

    pub fn bounds_csv(&self) -> String {
        let mut out = String::from("graph_id,n,m,Z,pt,bound,pt_plus_achieved,ppt_achieved,pass\n");
        let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                csv_field(&r.graph_id),
                r.n,
                r.m,
                r.z,
                r.pt,
                r.bound,
                opt(r.pt_plus_achieved),
                opt(r.ppt_achieved),
                if r.pass { "pass" } else { "fail" }
            );
        }
        out
    }
}

/// Quotes a CSV field when needed. graph6 strings may contain commas and
/// quotes.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn outcome(graph_id: &str, check: Check, r: Result<()>) -> CheckOutcome {
    CheckOutcome { graph_id: graph_id.to_string(), check, pass: r.is_ok(), detail: r.err().map(|e| e.to_string()) }
}

fn fail(msg: String) -> Result<()> {
    Err(Error::Invariant(msg))
}

/// Runs the selected checks on one graph.
pub fn check_graph(g: &Graph, checks: &[Check], cfg: &SolverConfig) -> Result<(Vec<BoundRow>, Vec<CheckOutcome>)> {
    let id = write_graph6(g);
    let has = |c: Check| checks.contains(&c);
    let z = forcing_number(g, Rule::Standard, cfg)?.value;
    let mut pts = Vec::new();
    for m in z..=g.n() {
        pts.push((m, propagation_time_m(g, m, Rule::Standard, cfg)?));
    }
    let mut rows = Vec::new();
    let mut outcomes = Vec::new();

    if has(Check::PtplusBound) || has(Check::PptBound) {
        let (mut ok_plus, mut ok_power) = (Ok(()), Ok(()));
        for (m, report) in &pts {
            let base = report.witnesses[0].clone();
            let f = propagate(Rule::Standard, g, &base)?.chronology;
            let pt = report.value;
            let bound = pt.div_ceil(2);
            let mut pass = true;
            let mut pt_plus_achieved = None;
            let mut ppt_achieved = None;
            if has(Check::PtplusBound) {
                match psd_set_at(g, &f, &CutTimes::Auto) {
                    Ok(s) if s.achieved <= bound => pt_plus_achieved = Some(s.achieved),
                    Ok(s) => {
                        pt_plus_achieved = Some(s.achieved);
                        pass = false;
                        ok_plus = fail(format!("m = {m}: pt+ {} > {bound}", s.achieved));
                    }
                    Err(e) => {
                        pass = false;
                        ok_plus = Err(e);
                    }
                }
            }
            if has(Check::PptBound) {
                match power_set_at(g, &f, f.ct().div_ceil(2)) {
                    Ok(s) if s.achieved <= bound => ppt_achieved = Some(s.achieved),
                    Ok(s) => {
                        ppt_achieved = Some(s.achieved);
                        pass = false;
                        ok_power = fail(format!("m = {m}: ppt {} > {bound}", s.achieved));
                    }
                    Err(e) => {
                        pass = false;
                        ok_power = Err(e);
                    }
                }
            }
            rows.push(BoundRow {
                graph_id: id.clone(),
                n: g.n(),
                m: *m,
                z,
                pt,
                bound,
                pt_plus_achieved,
                ppt_achieved,
                pass,
            });
        }
        if has(Check::PtplusBound) {
            outcomes.push(outcome(&id, Check::PtplusBound, ok_plus));
        }
        if has(Check::PptBound) {
            outcomes.push(outcome(&id, Check::PptBound, ok_power));
        }
    }

    if has(Check::ThrplusBound) {
        let thr = throttling(g, Rule::Psd, cfg)?.value;
        let best = pts.iter().map(|(m, r)| m + r.value.div_ceil(2)).min().expect("m = n is feasible");
        let r = if thr <= best { Ok(()) } else { fail(format!("thr+ = {thr} > {best}")) };
        outcomes.push(outcome(&id, Check::ThrplusBound, r));
    }
    if has(Check::Zplus) {
        let zp = forcing_number(g, Rule::Psd, cfg)?.value;
        let r = if zp <= z { Ok(()) } else { fail(format!("Z+ = {zp} > Z = {z}")) };
        outcomes.push(outcome(&id, Check::Zplus, r));
    }
    if has(Check::PtMonotone) {
        let r = match pts.windows(2).find(|w| w[1].1.value > w[0].1.value) {
            None => Ok(()),
            Some(w) => fail(format!("pt(G,{}) = {} < pt(G,{}) = {}", w[0].0, w[0].1.value, w[1].0, w[1].1.value)),
        };
        outcomes.push(outcome(&id, Check::PtMonotone, r));
    }
    if has(Check::ReversePsd) || has(Check::RlCertify) {
        let zplus = forcing_number(g, Rule::Psd, cfg)?;
        let (mut rev, mut rl) = (Ok(()), Ok(()));
        'sets: for base in &zplus.witnesses {
            let f = propagate(Rule::Psd, g, base)?.chronology;
            for x in 0..g.n() {
                if has(Check::ReversePsd) && rev.is_ok() {
                    rev = relocate_psd_set(g, &f, x).and_then(|r| {
                        if r.base.len() == zplus.value && r.base.contains(x) {
                            Ok(())
                        } else {
                            fail(format!("reversal through {x} from {base:?} gave {:?}", r.base))
                        }
                    });
                }
                if has(Check::RlCertify) && rl.is_ok() {
                    rl = certify_rigid_linkage(g, &f, x).and_then(|c| {
                        if c.verdict != Verdict::Valid {
                            return fail(c.violation.unwrap_or_default());
                        }
                        let found = find_linkages(g, &c.alpha, &c.beta, 2)?;
                        let mut expected = c.paths.clone();
                        expected.sort();
                        if found.linkages.len() == 1 && !found.truncated && found.linkages[0] == expected {
                            Ok(())
                        } else {
                            fail(format!("bundle through {x} from {base:?} is not the unique linkage"))
                        }
                    });
                }
                if rev.is_err() && rl.is_err() {
                    break 'sets;
                }
            }
        }
        if has(Check::ReversePsd) {
            outcomes.push(outcome(&id, Check::ReversePsd, rev));
        }
        if has(Check::RlCertify) {
            outcomes.push(outcome(&id, Check::RlCertify, rl));
        }
    }
    if has(Check::PipEqZ) {
        let r = minimum_witness(g).and_then(|w| {
            verify_witness(g, &w)?;
            if w.paths.len() == z {
                Ok(())
            } else {
                fail(format!("witness has {} paths, Z = {z}", w.paths.len()))
            }
        });
        outcomes.push(outcome(&id, Check::PipEqZ, r));
    }

    for row in &mut rows {
        row.pass = row.pass && outcomes.iter().all(|o| o.pass);
    }
    Ok((rows, outcomes))
}

/// Runs `checks` over `graphs`, in input order. Graph-level errors (such as
/// exceeding the solver cap) are recorded as failures of every check.
pub fn graph_sweep(graphs: &[Graph], checks: &[Check], cfg: &SolverConfig, parallel: bool) -> SweepReport {
    let per_graph: Vec<Check> = checks.iter().copied().filter(|&c| c != Check::GridTable).collect();
    let results = par::map_slice(graphs, parallel, |g| match check_graph(g, &per_graph, cfg) {
        Ok(r) => r,
        Err(e) => {
            let id = write_graph6(g);
            let outs = per_graph
                .iter()
                .map(|&c| CheckOutcome { graph_id: id.clone(), check: c, pass: false, detail: Some(e.to_string()) })
                .collect();
            (Vec::new(), outs)
        }
    });
    let mut report = SweepReport::default();
    for (rows, outs) in results {
        report.rows.extend(rows);
        report.outcomes.extend(outs);
    }
    if checks.contains(&Check::GridTable) {
        let grid = grid_table(7, cfg);
        for row in &grid {
            report.outcomes.push(CheckOutcome {
                graph_id: format!("P{}xP{}", row.s, row.t),
                check: Check::GridTable,
                pass: row.pass,
                detail: None,
            });
        }
        report.grid = grid;
    }
    report
}

/// Exact parameters of `P_s □ P_t` next to their closed forms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridRow {
    pub s: usize,
    pub t: usize,
    #[serde(rename = "Z")]
    pub z: usize,
    #[serde(rename = "Z_plus")]
    pub z_plus: usize,
    pub pt: usize,
    pub pt_plus: usize,
    pub expected_z: usize,
    pub expected_pt: usize,
    pub expected_pt_plus: usize,
    pub pass: bool,
}

/// Grid rows for `2 <= s <= s_max`, `t` in `{1, 2, 3}`. `pt` and `pt_plus`
/// are taken at the respective minimum set sizes. The solver cap is raised to
/// the largest grid, since the minimum sets here have at most three vertices.
pub fn grid_table(s_max: usize, cfg: &SolverConfig) -> Vec<GridRow> {
    let cfg = &SolverConfig { cap: cfg.cap.max(3 * s_max).min(64), ..*cfg };
    let mut pairs = Vec::new();
    for s in 2..=s_max {
        for t in 1..=3 {
            pairs.push((s, t));
        }
    }
    par::map_slice(&pairs, false, |&(s, t)| {
        let g = Graph::grid(s, t);
        let z = forcing_number(&g, Rule::Standard, cfg).map(|r| r.value).unwrap_or(usize::MAX);
        let z_plus = forcing_number(&g, Rule::Psd, cfg).map(|r| r.value).unwrap_or(usize::MAX);
        let pt = propagation_time_m(&g, z, Rule::Standard, cfg).map(|r| r.value).unwrap_or(usize::MAX);
        let pt_plus = propagation_time_m(&g, z_plus, Rule::Psd, cfg).map(|r| r.value).unwrap_or(usize::MAX);
        let (expected_z, expected_pt) = (s.min(t), s.max(t) - 1);
        let expected_pt_plus = expected_pt.div_ceil(2);
        let pass = z == expected_z && z_plus == expected_z && pt == expected_pt && pt_plus == expected_pt_plus;
        GridRow { s, t, z, z_plus, pt, pt_plus, expected_z, expected_pt, expected_pt_plus, pass }
    })
}

pub fn grid_csv(rows: &[GridRow]) -> String {
    let mut out = String::from("s,t,Z,Z_plus,pt,pt_plus,expected_Z,expected_pt,expected_pt_plus,pass\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.s,
            r.t,
            r.z,
            r.z_plus,
            r.pt,
            r.pt_plus,
            r.expected_z,
            r.expected_pt,
            r.expected_pt_plus,
            if r.pass { "pass" } else { "fail" }
        );
    }
    out
}

/// One row of the parameter CSV.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParamRow {
    pub graph_id: String,
    pub n: usize,
    pub edges_hash: String,
    pub parameter: Parameter,
    pub value: Option<usize>,
    pub witness: String,
    pub runtime_ms: u128,
}

/// FNV-1a over the sorted edge list, as 16 hex digits.
pub fn edges_hash(g: &Graph) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |x: u64| {
        for b in x.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100_0000_01b3);
        }
    };
    eat(g.n() as u64);
    for (u, v) in g.edges() {
        eat(u as u64);
        eat(v as u64);
    }
    format!("{h:016x}")
}

/// Computes `params` for every graph. Propagation times use `m` equal to the
/// matching forcing number. `runtime_ms` is recorded only when `timing` is set,
/// so that default output is reproducible.
pub fn param_sweep(
    graphs: &[Graph],
    params: &[Parameter],
    cfg: &SolverConfig,
    parallel: bool,
    timing: bool,
) -> Vec<ParamRow> {
    let rows = par::map_slice(graphs, parallel, |g| {
        let id = write_graph6(g);
        let hash = edges_hash(g);
        params
            .iter()
            .map(|&p| {
                let start = Instant::now();
                let m = match p {
                    Parameter::Pt => forcing_number(g, Rule::Standard, cfg).ok().map(|r| r.value),
                    Parameter::PtPlus => forcing_number(g, Rule::Psd, cfg).ok().map(|r| r.value),
                    Parameter::Ppt => forcing_number(g, Rule::PowerDomination, cfg).ok().map(|r| r.value),
                    _ => None,
                };
                let r = solve(g, p, m, cfg).ok();
                let elapsed = start.elapsed().as_millis();
                ParamRow {
                    graph_id: id.clone(),
                    n: g.n(),
                    edges_hash: hash.clone(),
                    parameter: p,
                    value: r.as_ref().map(|r| r.value),
                    witness: r
                        .and_then(|r| r.witnesses.into_iter().next())
                        .map(|w| w.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
                        .unwrap_or_default(),
                    runtime_ms: if timing { elapsed } else { 0 },
                }
            })
            .collect::<Vec<_>>()
    });
    rows.into_iter().flatten().collect()
}

pub fn params_csv(rows: &[ParamRow]) -> String {
    let mut out = String::from("graph_id,n,edges_hash,parameter,value,witness,runtime_ms\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            csv_field(&r.graph_id),
            r.n,
            r.edges_hash,
            r.parameter.name(),
            r.value.map(|v| v.to_string()).unwrap_or_default(),
            r.witness,
            r.runtime_ms
        );
    }
    out
}
