//! Independent reference implementations used as test oracles. Nothing here
//! calls into the library's forcing, slicing or solver code.

#![allow(dead_code)]

use std::collections::VecDeque;
use std::path::PathBuf;

use forcelab::random::{gnp, random_chronology, ChronologyShape};
use forcelab::{Graph, RelaxedChronology, Rule, VertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

pub fn read_data(name: &str) -> String {
    std::fs::read_to_string(data(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Plain adjacency matrix copy of a graph.
pub fn adj(g: &Graph) -> Vec<Vec<bool>> {
    let mut a = vec![vec![false; g.n()]; g.n()];
    for (u, v) in g.edges() {
        a[u][v] = true;
        a[v][u] = true;
    }
    a
}

/// Component labels of the vertices with `alive[v]`, by BFS.
pub fn labels(a: &[Vec<bool>], alive: &[bool]) -> Vec<Option<usize>> {
    let n = a.len();
    let mut lab = vec![None; n];
    let mut next = 0;
    for s in 0..n {
        if !alive[s] || lab[s].is_some() {
            continue;
        }
        lab[s] = Some(next);
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for w in 0..n {
                if a[u][w] && alive[w] && lab[w].is_none() {
                    lab[w] = Some(next);
                    q.push_back(w);
                }
            }
        }
        next += 1;
    }
    lab
}

pub fn component_count(a: &[Vec<bool>], alive: &[bool]) -> usize {
    labels(a, alive).into_iter().flatten().max().map_or(0, |m| m + 1)
}

/// Maximal forcing from `blue`; returns the number of rounds, or `None` if
/// the process stalls. For power domination the closed neighborhood counts as
/// the first round.
pub fn naive_time(a: &[Vec<bool>], rule: Rule, start: &[usize]) -> Option<usize> {
    let n = a.len();
    let mut blue = vec![false; n];
    for &v in start {
        blue[v] = true;
    }
    let mut t = 0;
    if rule == Rule::PowerDomination {
        if blue.iter().all(|&b| b) {
            return Some(0);
        }
        for &v in start {
            for w in 0..n {
                if a[v][w] {
                    blue[w] = true;
                }
            }
        }
        t = 1;
    }
    loop {
        if blue.iter().all(|&b| b) {
            return Some(t);
        }
        let white: Vec<bool> = blue.iter().map(|b| !b).collect();
        let comp = labels(a, &white);
        let mut new = Vec::new();
        for u in (0..n).filter(|&u| blue[u]) {
            let whites: Vec<usize> = (0..n).filter(|&w| a[u][w] && !blue[w]).collect();
            match rule {
                Rule::Psd => {
                    for &w in &whites {
                        if whites.iter().filter(|&&z| comp[z] == comp[w]).count() == 1 {
                            new.push(w);
                        }
                    }
                }
                _ => {
                    if whites.len() == 1 {
                        new.push(whites[0]);
                    }
                }
            }
        }
        if new.is_empty() {
            return None;
        }
        for w in new {
            blue[w] = true;
        }
        t += 1;
    }
}

/// Subsets of `0..n` of size `k`, in lexicographic order of their sorted
/// element lists.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Minimum forcing set size under `rule`.
pub fn naive_forcing_number(a: &[Vec<bool>], rule: Rule) -> usize {
    let n = a.len();
    (0..=n).find(|&k| combinations(n, k).iter().any(|s| naive_time(a, rule, s).is_some())).expect("V(G) forces")
}

/// Minimum time over forcing sets of size `m`.
pub fn naive_pt_m(a: &[Vec<bool>], rule: Rule, m: usize) -> Option<usize> {
    combinations(a.len(), m).iter().filter_map(|s| naive_time(a, rule, s)).min()
}

/// Active intervals read directly off a standard chronology: from the step a
/// vertex turns blue up to the step before it forces, or to `K`.
pub fn naive_active(n: usize, f: &RelaxedChronology) -> Vec<(usize, usize)> {
    let k = f.ct();
    let mut lo = vec![usize::MAX; n];
    let mut hi = vec![k; n];
    for v in f.base().iter() {
        lo[v] = 0;
    }
    for (i, step) in f.steps().iter().enumerate() {
        for force in step {
            lo[force.dst] = i + 1;
            hi[force.src] = i;
        }
    }
    lo.into_iter().zip(hi).collect()
}

/// `pt` of a force set by direct replay: each round fires every listed force
/// whose source is blue and whose other neighbors (in the target's white
/// component, for PSD) are blue.
pub fn naive_pt_of_forces(a: &[Vec<bool>], rule: Rule, base: &VertexSet, forces: &[(usize, usize)]) -> Option<usize> {
    let n = a.len();
    let mut blue = vec![false; n];
    for v in base.iter() {
        blue[v] = true;
    }
    let mut t = 0;
    while !blue.iter().all(|&b| b) {
        let white: Vec<bool> = blue.iter().map(|b| !b).collect();
        let comp = labels(a, &white);
        let fire: Vec<usize> = forces
            .iter()
            .filter(|&&(u, w)| {
                blue[u] && !blue[w] && {
                    let whites = (0..n).filter(|&z| a[u][z] && !blue[z]);
                    match rule {
                        Rule::Psd => whites.filter(|&z| comp[z] == comp[w]).count() == 1,
                        _ => whites.count() == 1,
                    }
                }
            })
            .map(|&(_, w)| w)
            .collect();
        if fire.is_empty() {
            return None;
        }
        for w in fire {
            blue[w] = true;
        }
        t += 1;
    }
    Some(t)
}

/// Orders of `block` that form an induced path, one per orientation.
fn induced_path_orders(a: &[Vec<bool>], block: &[usize]) -> Vec<Vec<usize>> {
    if block.len() == 1 {
        return vec![block.to_vec()];
    }
    let deg = |v: usize| block.iter().filter(|&&w| a[v][w]).count();
    let edges: usize = block.iter().map(|&v| deg(v)).sum::<usize>() / 2;
    if edges != block.len() - 1 || block.iter().any(|&v| deg(v) > 2) {
        return Vec::new();
    }
    let ends: Vec<usize> = block.iter().copied().filter(|&v| deg(v) == 1).collect();
    if ends.len() != 2 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for &start in &ends {
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&next) = block.iter().find(|&&w| a[cur][w] && w != prev && !order.contains(&w)) {
            prev = cur;
            cur = next;
            order.push(cur);
        }
        if order.len() != block.len() {
            return Vec::new();
        }
        out.push(order);
    }
    out
}

/// Whether oriented paths admit a witness: the block bounds satisfy a system
/// of difference constraints, feasible exactly when Bellman–Ford finds no
/// negative cycle.
fn witness_exists(a: &[Vec<bool>], paths: &[Vec<usize>]) -> bool {
    let n = a.len();
    // Nodes: lo(v) = v, hi(v) = n + v, zero = 2n, K = 2n + 1.
    let (zero, kk) = (2 * n, 2 * n + 1);
    let mut cons: Vec<(usize, usize, i64)> = Vec::new(); // x - y <= c as edge y -> x
    let mut le = |x: usize, y: usize, c: i64| cons.push((y, x, c));
    let mut path_of = vec![0; n];
    for (i, p) in paths.iter().enumerate() {
        for &v in p {
            path_of[v] = i;
            le(v, n + v, 0);
        }
        le(p[0], zero, 0);
        le(zero, p[0], 0);
        for w in p.windows(2) {
            le(w[1], n + w[0], 1);
            le(n + w[0], w[1], -1);
        }
        let last = *p.last().unwrap();
        le(n + last, kk, 0);
        le(kk, n + last, 0);
    }
    for u in 0..n {
        for v in 0..n {
            if a[u][v] && path_of[u] != path_of[v] {
                le(u, n + v, 0);
            }
        }
    }
    let nodes = 2 * n + 2;
    let mut dist = vec![0i64; nodes];
    for _ in 0..nodes {
        let mut changed = false;
        for &(y, x, c) in &cons {
            if dist[y] + c < dist[x] {
                dist[x] = dist[y] + c;
                changed = true;
            }
        }
        if !changed {
            return true;
        }
    }
    false
}

fn set_partitions(items: &[usize], blocks: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(i: usize, items: &[usize], k: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == items.len() {
            if cur.len() == k {
                out.push(cur.clone());
            }
            return;
        }
        if cur.len() + (items.len() - i) < k {
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(items[i]);
            rec(i + 1, items, k, cur, out);
            cur[b].pop();
        }
        if cur.len() < k {
            cur.push(vec![items[i]]);
            rec(i + 1, items, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, items, blocks, &mut Vec::new(), &mut out);
    out
}

/// Whether the given paths, each taken in either direction, admit a witness.
pub fn cover_admits_witness(a: &[Vec<bool>], paths: &[Vec<usize>]) -> bool {
    (0..1usize << paths.len()).any(|flips| {
        let oriented: Vec<Vec<usize>> = paths
            .iter()
            .enumerate()
            .map(|(i, p)| if flips >> i & 1 == 1 { p.iter().rev().copied().collect() } else { p.clone() })
            .collect();
        witness_exists(a, &oriented)
    })
}

/// Smallest number of paths in a path cover that admits a witness, found by
/// trying every induced path cover and orientation.
pub fn min_pip_oracle(a: &[Vec<bool>]) -> usize {
    let n = a.len();
    let items: Vec<usize> = (0..n).collect();
    for k in 1..=n {
        for part in set_partitions(&items, k) {
            let options: Vec<Vec<Vec<usize>>> = part.iter().map(|b| induced_path_orders(a, b)).collect();
            if options.iter().any(|o| o.is_empty()) {
                continue;
            }
            let total: usize = options.iter().map(|o| o.len()).product();
            for mut code in 0..total {
                let mut paths = Vec::with_capacity(k);
                for o in &options {
                    paths.push(o[code % o.len()].clone());
                    code /= o.len();
                }
                if witness_exists(a, &paths) {
                    return k;
                }
            }
        }
    }
    n
}

/// Number of `(alpha, beta)`-linkages counted over edge subsets: every
/// component of the chosen edges is a path from an `alpha` vertex to a `beta`
/// vertex whose internal vertices avoid both sets, and every `alpha` and
/// `beta` vertex is covered (a vertex in both may stand alone).
pub fn linkage_count_by_edges(g: &Graph, alpha: &VertexSet, beta: &VertexSet) -> usize {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let n = g.n();
    let ends = alpha.union(beta);
    let mut count = 0;
    for mask in 0u64..1 << edges.len() {
        let chosen: Vec<(usize, usize)> = (0..edges.len()).filter(|&i| mask >> i & 1 == 1).map(|i| edges[i]).collect();
        let mut deg = vec![0; n];
        let mut a = vec![vec![false; n]; n];
        for &(u, v) in &chosen {
            deg[u] += 1;
            deg[v] += 1;
            a[u][v] = true;
            a[v][u] = true;
        }
        if deg.iter().any(|&d| d > 2) {
            continue;
        }
        let ok_vertices = (0..n).all(|v| match deg[v] {
            0 => !ends.contains(v) || (alpha.contains(v) && beta.contains(v)),
            1 => ends.contains(v) && !(alpha.contains(v) && beta.contains(v)),
            _ => !ends.contains(v),
        });
        if !ok_vertices {
            continue;
        }
        let used: Vec<bool> = (0..n).map(|v| deg[v] > 0).collect();
        let lab = labels(&a, &used);
        let comps = lab.iter().flatten().max().map_or(0, |m| m + 1);
        let mut good = true;
        for c in 0..comps {
            let members: Vec<usize> = (0..n).filter(|&v| lab[v] == Some(c)).collect();
            let e: usize = members.iter().map(|&v| deg[v]).sum::<usize>() / 2;
            let leaves: Vec<usize> = members.iter().copied().filter(|&v| deg[v] == 1).collect();
            let cyclic = e != members.len() - 1;
            let one_each = leaves.len() == 2
                && leaves.iter().filter(|&&v| alpha.contains(v)).count() == 1
                && leaves.iter().filter(|&&v| beta.contains(v)).count() == 1;
            if cyclic || !one_each {
                good = false;
                break;
            }
        }
        if good {
            count += 1;
        }
    }
    count
}

/// A random graph, a zero forcing set for it and a random relaxed chronology.
pub struct Instance {
    pub g: Graph,
    pub f: RelaxedChronology,
}

/// `count` seeded instances with `1 <= n <= max_n`.
pub fn random_instances(count: usize, max_n: usize, seed: u64, rule: Rule) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=max_n);
            let p = rng.gen_range(0.1..0.7);
            let g = gnp(n, p, &mut rng);
            let a = adj(&g);
            let mut order: Vec<usize> = (0..n).collect();
            rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut rng);
            let mut base = Vec::new();
            for &v in &order {
                if naive_time(&a, rule, &base).is_some() {
                    break;
                }
                base.push(v);
            }
            let base: VertexSet = base.into_iter().collect();
            let f = random_chronology(&g, &base, rule, ChronologyShape::default(), &mut rng).expect("forcing set");
            Instance { g, f }
        })
        .collect()
}
