//! Seeded random graphs and random relaxed chronologies.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::forcing::{possible_forces, Force, RelaxedChronology, Rule};
use crate::graph::Graph;
use crate::set::VertexSet;

/// Erdős–Rényi graph `G(n, p)`.
pub fn gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::empty(n);
    for v in 1..n {
        for u in 0..v {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Knobs for [`random_chronology`].
#[derive(Debug, Clone, Copy)]
pub struct ChronologyShape {
    /// Probability that a step is left empty.
    pub idle: f64,
    /// Probability that each forceable vertex is forced in a non-idle step.
    pub keep: f64,
}

impl Default for ChronologyShape {
    fn default() -> Self {
        Self { idle: 0.15, keep: 0.5 }
    }
}

/// A random relaxed chronology for `base`: each step forces a random nonempty
/// subset of the forceable vertices, each by a random legal forcer, with
/// occasional empty steps.
pub fn random_chronology<R: Rng>(
    g: &Graph,
    base: &VertexSet,
    rule: Rule,
    shape: ChronologyShape,
    rng: &mut R,
) -> Result<RelaxedChronology> {
    if !matches!(rule, Rule::Standard | Rule::Psd) {
        return Err(Error::InvalidRule(rule));
    }
    let full = g.vertices();
    let mut blue = base.clone();
    let mut steps = Vec::new();
    while blue != full {
        let legal = possible_forces(rule, g, &blue, &VertexSet::new())?;
        if legal.is_empty() {
            return Err(Error::NotForcing { blue });
        }
        if rng.gen_bool(shape.idle) {
            steps.push(Vec::new());
            continue;
        }
        let mut by_dst: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for f in legal {
            by_dst.entry(f.dst).or_default().push(f.src);
        }
        let mut step = Vec::new();
        for (&dst, srcs) in &by_dst {
            if rng.gen_bool(shape.keep) {
                step.push(Force::new(*srcs.choose(rng).expect("nonempty"), dst));
            }
        }
        if step.is_empty() {
            let (&dst, srcs) = by_dst.iter().nth(rng.gen_range(0..by_dst.len())).expect("nonempty");
            step.push(Force::new(*srcs.choose(rng).expect("nonempty"), dst));
        }
        for f in &step {
            blue.insert(f.dst);
        }
        steps.push(step);
    }
    Ok(RelaxedChronology::new(rule, base.clone(), steps))
}
