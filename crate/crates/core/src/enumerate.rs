//! Isomorphism classes of small graphs.
//!
//! Graphs on `n` vertices are grown from the classes on `n - 1` vertices by
//! adding a vertex with every possible neighborhood and keeping one
//! representative per canonical code. The canonical code is the smallest
//! adjacency bit string over all vertex orders compatible with an
//! isomorphism-invariant refinement of the degree partition, so it is exact
//! but only practical for small `n`.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest vertex count whose adjacency bit string fits in a `u64`.
pub const MAX_CANONICAL_N: usize = 11;

/// Ordered cells of vertices, refined from degrees until stable. Cell order
/// depends only on the isomorphism class.
fn refined_cells(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut color: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    loop {
        let mut sig: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = g.neighbors(v).iter().map(|&u| color[u]).collect();
                nb.sort_unstable();
                (color[v], nb)
            })
            .collect();
        let mut distinct = sig.clone();
        distinct.sort();
        distinct.dedup();
        let next: Vec<usize> = sig.drain(..).map(|s| distinct.binary_search(&s).expect("present")).collect();
        let classes = |c: &[usize]| c.iter().collect::<HashSet<_>>().len();
        let stable = classes(&next) == classes(&color);
        color = next;
        if stable {
            break;
        }
    }
    let k = color.iter().max().map_or(0, |m| m + 1);
    let mut cells = vec![Vec::new(); k];
    for v in 0..n {
        cells[color[v]].push(v);
    }
    cells.retain(|c| !c.is_empty());
    cells
}

fn code_for_order(g: &Graph, order: &[usize]) -> u64 {
    let mut code = 0u64;
    for j in 1..order.len() {
        for i in 0..j {
            code = (code << 1) | g.has_edge(order[i], order[j]) as u64;
        }
    }
    code
}

/// Canonical code and a vertex order attaining it.
pub fn canonical_form(g: &Graph) -> Result<(u64, Vec<usize>)> {
    if g.n() > MAX_CANONICAL_N {
        return Err(Error::CapExceeded { n: g.n(), cap: MAX_CANONICAL_N });
    }
    let cells = refined_cells(g);
    let mut best: Option<(u64, Vec<usize>)> = None;
    let mut order = Vec::with_capacity(g.n());
    let mut used = vec![false; g.n()];
    search(g, &cells, 0, &mut order, &mut used, &mut best);
    Ok(best.unwrap_or((0, Vec::new())))
}

fn search(
    g: &Graph,
    cells: &[Vec<usize>],
    cell: usize,
    order: &mut Vec<usize>,
    used: &mut [bool],
    best: &mut Option<(u64, Vec<usize>)>,
) {
    let Some(members) = cells.get(cell) else {
        let code = code_for_order(g, order);
        if best.as_ref().is_none_or(|(b, _)| code < *b) {
            *best = Some((code, order.clone()));
        }
        return;
    };
    let placed = members.iter().filter(|&&v| used[v]).count();
    if placed == members.len() {
        return search(g, cells, cell + 1, order, used, best);
    }
    for &v in members {
        if used[v] {
            continue;
        }
        used[v] = true;
        order.push(v);
        search(g, cells, cell, order, used, best);
        order.pop();
        used[v] = false;
    }
}

/// `g` relabeled so that vertex `i` is `order[i]`.
fn relabel(g: &Graph, order: &[usize]) -> Graph {
    let mut pos = vec![0; g.n()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let edges: Vec<_> = g.edges().map(|(u, v)| (pos[u], pos[v])).collect();
    Graph::from_edges(g.n(), &edges).expect("relabeling keeps the graph simple")
}

/// One canonical representative per isomorphism class on `n` vertices,
/// sorted by canonical code.
pub fn graphs_on(n: usize) -> Result<Vec<Graph>> {
    if n > MAX_CANONICAL_N {
        return Err(Error::CapExceeded { n, cap: MAX_CANONICAL_N });
    }
    let mut layer = vec![(0u64, Graph::empty(0))];
    for k in 1..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for (_, g) in &layer {
            let old: Vec<(usize, usize)> = g.edges().collect();
            for nbhd in 0u64..1 << (k - 1) {
                let mut edges = old.clone();
                edges.extend((0..k - 1).filter(|&u| nbhd >> u & 1 == 1).map(|u| (u, k - 1)));
                let h = Graph::from_edges(k, &edges).expect("new vertex edges are fresh");
                let (code, order) = canonical_form(&h)?;
                if seen.insert(code) {
                    next.push((code, relabel(&h, &order)));
                }
            }
        }
        next.sort_by_key(|(c, _)| *c);
        layer = next;
    }
    Ok(layer.into_iter().map(|(_, g)| g).collect())
}

/// All graphs with `1..=max_n` vertices, by vertex count.
pub fn graphs_up_to(max_n: usize, connected_only: bool) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.extend(graphs_on(n)?.into_iter().filter(|g| !connected_only || g.is_connected()));
    }
    Ok(out)
}
