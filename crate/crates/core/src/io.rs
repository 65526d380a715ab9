//! Text formats: edge lists, graph6 and DOT.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Parses the edge-list format: a header line `n m`, then `m` lines `u v`.
///
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
    let [n, m] = parse_pair(hl, header)?;
    let mut edges = Vec::with_capacity(m);
    for (line, l) in lines {
        let [u, v] = parse_pair(line, l)?;
        if u >= n || v >= n {
            return Err(Error::Parse { line, msg: format!("vertex out of range in `{l}`") });
        }
        if u == v {
            return Err(Error::Parse { line, msg: format!("self-loop `{l}`") });
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::Parse { line: 1, msg: format!("header declares {m} edges, found {}", edges.len()) });
    }
    let mut g = Graph::empty(n);
    for (i, &(u, v)) in edges.iter().enumerate() {
        if !g.add_edge(u, v) {
            return Err(Error::Parse { line: i + 2, msg: format!("duplicate edge {u} {v}") });
        }
    }
    Ok(g)
}

fn parse_pair(line: usize, l: &str) -> Result<[usize; 2]> {
    let mut it = l.split_whitespace().map(str::parse::<usize>);
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Ok([a, b]),
        _ => Err(Error::Parse { line, msg: format!("expected two integers, got `{l}`") }),
    }
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Decodes one graph6 line.
pub fn parse_graph6(s: &str) -> Result<Graph> {
    let bytes = s.trim_end().as_bytes();
    let bytes = bytes.strip_prefix(b">>graph6<<").unwrap_or(bytes);
    let bad = |msg: &str| Error::Parse { line: 1, msg: format!("graph6: {msg}") };
    if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(bad("byte outside 63..=126"));
    }
    let (n, body) = match bytes {
        [] => return Err(bad("empty input")),
        [126, 126, ..] => return Err(bad("graphs above 258047 vertices are not supported")),
        [126, a, b, c, rest @ ..] => {
            let n = ((*a as usize - 63) << 12) | ((*b as usize - 63) << 6) | (*c as usize - 63);
            (n, rest)
        }
        [126, ..] => return Err(bad("truncated size")),
        [a, rest @ ..] => (*a as usize - 63, rest),
    };
    let bits = n * n.saturating_sub(1) / 2;
    if body.len() != bits.div_ceil(6) {
        return Err(bad("body length does not match vertex count"));
    }
    let mut g = Graph::empty(n);
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            let byte = body[k / 6] - 63;
            if byte & (1 << (5 - k % 6)) != 0 {
                g.add_edge(u, v);
            }
            k += 1;
        }
    }
    Ok(g)
}

pub fn write_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::new();
    if n < 63 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        out.extend([(n >> 12) as u8 + 63, ((n >> 6) & 63) as u8 + 63, (n & 63) as u8 + 63]);
    }
    let mut acc = 0u8;
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            acc = (acc << 1) | g.has_edge(u, v) as u8;
            k += 1;
            if k % 6 == 0 {
                out.push(acc + 63);
                acc = 0;
            }
        }
    }
    if k % 6 != 0 {
        out.push((acc << (6 - k % 6)) + 63);
    }
    String::from_utf8(out).expect("graph6 is ASCII")
}

/// Reads a stream of graph6 lines, skipping blanks.
pub fn parse_graph6_stream(text: &str) -> Result<Vec<Graph>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            parse_graph6(l).map_err(|e| match e {
                Error::Parse { msg, .. } => Error::Parse { line: i + 1, msg },
                e => e,
            })
        })
        .collect()
}

/// Optional per-vertex annotations for [`to_dot`].
#[derive(Debug, Default, Clone)]
pub struct DotStyle {
    pub labels: Option<Vec<String>>,
    pub colors: Option<Vec<Option<String>>>,
}

pub fn to_dot(g: &Graph, style: &DotStyle) -> String {
    let mut out = String::from("graph G {\n");
    for v in 0..g.n() {
        let mut attrs = Vec::new();
        if let Some(label) = style.labels.as_ref().and_then(|l| l.get(v)) {
            attrs.push(format!("label=\"{}\"", label.replace('"', "\\\"")));
        }
        if let Some(Some(color)) = style.colors.as_ref().and_then(|c| c.get(v)) {
            attrs.push(format!("style=filled, fillcolor=\"{color}\""));
        }
        if attrs.is_empty() {
            let _ = writeln!(out, "  {v};");
        } else {
            let _ = writeln!(out, "  {v} [{}];", attrs.join(", "));
        }
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "  {u} -- {v};");
    }
    out.push_str("}\n");
    out
}
