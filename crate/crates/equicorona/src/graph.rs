//! Simple undirected graphs with edge-list and graph6 I/O, plus structural
//! classification of cubic graphs into the classes Q2 / Q3 / Q4.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::coloring::Coloring;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("empty input")]
    EmptyInput,
    #[error("malformed header line: {0:?}")]
    BadHeader(String),
    #[error("malformed edge line: {0:?}")]
    BadEdgeLine(String),
    #[error("vertex {0} out of range for n = {1}")]
    IndexOutOfRange(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("expected {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("invalid graph6: {0}")]
    BadGraph6(String),
    #[error("graph is not cubic")]
    NotCubic,
    #[error("graph is not connected")]
    NotConnected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    Graph6,
}

/// A finite simple undirected graph on vertices `0..n`.
///
/// No self-loops, no duplicate edges; adjacency lists are kept sorted and
/// symmetric with the edge set. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut seen = HashSet::new();
        let mut norm = Vec::new();
        let mut adj = vec![Vec::new(); n];
        for (a, b) in edges {
            if a >= n {
                return Err(GraphError::IndexOutOfRange(a, n));
            }
            if b >= n {
                return Err(GraphError::IndexOutOfRange(b, n));
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(GraphError::DuplicateEdge(e.0, e.1));
            }
            norm.push(e);
            adj[e.0].push(e.1);
            adj[e.1].push(e.0);
        }
        norm.sort_unstable();
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, edges: norm, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn is_cubic(&self) -> bool {
        (0..self.n).all(|v| self.degree(v) == 3)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in self.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.n
    }

    /// BFS 2-coloring. Returns the two sides (each sorted) or `None` if an
    /// odd cycle is found. The side containing vertex 0 comes first.
    pub fn bipartition(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let mut side = vec![usize::MAX; self.n];
        for start in 0..self.n {
            if side[start] != usize::MAX {
                continue;
            }
            side[start] = 0;
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &u in self.neighbors(v) {
                    if side[u] == usize::MAX {
                        side[u] = side[v] ^ 1;
                        queue.push_back(u);
                    } else if side[u] == side[v] {
                        return None;
                    }
                }
            }
        }
        let a: Vec<usize> = (0..self.n).filter(|&v| side[v] == 0).collect();
        let b: Vec<usize> = (0..self.n).filter(|&v| side[v] == 1).collect();
        Some((a, b))
    }

    /// Subgraph induced by `verts` (must be sorted and duplicate-free);
    /// vertex `verts[i]` becomes vertex `i`.
    pub fn induced(&self, verts: &[usize]) -> Graph {
        debug_assert!(verts.windows(2).all(|w| w[0] < w[1]));
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in verts.iter().enumerate() {
            pos[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| pos[u] != usize::MAX && pos[v] != usize::MAX)
            .map(|&(u, v)| (pos[u], pos[v]));
        Graph::from_edges(verts.len(), edges).expect("induced subgraph of a valid graph is valid")
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{} {}\n", u, v));
        }
        out
    }

    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut lines = text.lines().filter_map(|line| {
            let data = line.split('#').next().unwrap_or("").trim();
            if data.is_empty() {
                None
            } else {
                Some(data)
            }
        });
        let header = lines.next().ok_or(GraphError::EmptyInput)?;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| GraphError::BadHeader(header.to_string()))?;
        let m: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| GraphError::BadHeader(header.to_string()))?;
        if it.next().is_some() {
            return Err(GraphError::BadHeader(header.to_string()));
        }
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            let mut it = line.split_whitespace();
            let u: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| GraphError::BadEdgeLine(line.to_string()))?;
            let v: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| GraphError::BadEdgeLine(line.to_string()))?;
            if it.next().is_some() {
                return Err(GraphError::BadEdgeLine(line.to_string()));
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(GraphError::EdgeCount {
                expected: m,
                found: edges.len(),
            });
        }
        Graph::from_edges(n, edges)
    }

    /// Encodes in graph6 format: 6-bit packed upper triangle, offset 63.
    pub fn to_graph6(&self) -> String {
        let mut out = String::new();
        if self.n < 63 {
            out.push((self.n as u8 + 63) as char);
        } else {
            // 126 followed by three 6-bit digits, valid up to n = 258047.
            out.push(126 as char);
            out.push((((self.n >> 12) & 63) as u8 + 63) as char);
            out.push((((self.n >> 6) & 63) as u8 + 63) as char);
            out.push(((self.n & 63) as u8 + 63) as char);
        }
        let mut bits: u8 = 0;
        let mut count = 0;
        for j in 1..self.n {
            for i in 0..j {
                bits <<= 1;
                if self.has_edge(i, j) {
                    bits |= 1;
                }
                count += 1;
                if count == 6 {
                    out.push((bits + 63) as char);
                    bits = 0;
                    count = 0;
                }
            }
        }
        if count > 0 {
            bits <<= 6 - count;
            out.push((bits + 63) as char);
        }
        out
    }

    pub fn from_graph6(s: &str) -> Result<Self, GraphError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(GraphError::EmptyInput);
        }
        let bytes: Vec<u8> = s.bytes().collect();
        for &b in &bytes {
            if !(63..=126).contains(&b) {
                return Err(GraphError::BadGraph6(format!("byte {} out of range", b)));
            }
        }
        let vals: Vec<u8> = bytes.iter().map(|&b| b - 63).collect();
        let (n, start) = if vals[0] != 63 {
            (vals[0] as usize, 1)
        } else if vals.len() >= 4 && vals[1] != 63 {
            (
                ((vals[1] as usize) << 12) | ((vals[2] as usize) << 6) | vals[3] as usize,
                4,
            )
        } else {
            return Err(GraphError::BadGraph6("unsupported size header".into()));
        };
        let nbits = n * n.saturating_sub(1) / 2;
        let avail = (vals.len() - start) * 6;
        if avail < nbits {
            return Err(GraphError::BadGraph6(format!(
                "need {} adjacency bits, have {}",
                nbits, avail
            )));
        }
        let mut edges = Vec::new();
        let mut pos = 0;
        for j in 1..n {
            for i in 0..j {
                let byte = vals[start + pos / 6];
                let bit = (byte >> (5 - pos % 6)) & 1;
                if bit == 1 {
                    edges.push((i, j));
                }
                pos += 1;
            }
        }
        Graph::from_edges(n, edges)
    }

    pub fn parse(text: &str, format: GraphFormat) -> Result<Self, GraphError> {
        match format {
            GraphFormat::EdgeList => Graph::parse_edge_list(text),
            GraphFormat::Graph6 => Graph::from_graph6(text),
        }
    }

    pub fn serialize(&self, format: GraphFormat) -> String {
        match format {
            GraphFormat::EdgeList => self.to_edge_list(),
            GraphFormat::Graph6 => {
                let mut s = self.to_graph6();
                s.push('\n');
                s
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CubicKind {
    Q2,
    Q3,
    Q4,
}

impl fmt::Display for CubicKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CubicKind::Q2 => write!(f, "Q2"),
            CubicKind::Q3 => write!(f, "Q3"),
            CubicKind::Q4 => write!(f, "Q4"),
        }
    }
}

/// Classification of a connected cubic graph with a witness coloring.
///
/// The witness is a proper coloring with exactly as many colors as the
/// chromatic number; its classes realize `profile`. Class order is
/// normalized: sizes non-increasing, ties broken by smallest contained
/// vertex index (for Q2 the side containing vertex 0 comes first).
#[derive(Clone, Debug)]
pub struct CubicClass {
    pub kind: CubicKind,
    pub profile: Vec<usize>,
    pub witness: Coloring,
}

impl CubicClass {
    /// The partition sets X_1, X_2, ... in witness color order, each sorted.
    pub fn partition_sets(&self) -> Vec<Vec<usize>> {
        let mut sets = vec![Vec::new(); self.witness.k()];
        for v in 0..self.witness.n() {
            sets[self.witness.color(v) - 1].push(v);
        }
        sets
    }

    pub fn describe(&self) -> String {
        match self.kind {
            CubicKind::Q2 => format!("Q2({})", self.profile[0]),
            CubicKind::Q3 => format!(
                "Q3({},{},{})",
                self.profile[0], self.profile[1], self.profile[2]
            ),
            CubicKind::Q4 => "Q4".to_string(),
        }
    }
}

/// Classifies a connected cubic graph into Q2(t) / Q3(u,v,w) / Q4.
///
/// For Q3 the reported profile is the one minimizing u - w over all proper
/// 3-colorings, tie-broken by the lexicographically smallest color vector.
pub fn classify_cubic(g: &Graph) -> Result<CubicClass, GraphError> {
    if !g.is_cubic() {
        return Err(GraphError::NotCubic);
    }
    if !g.is_connected() {
        return Err(GraphError::NotConnected);
    }
    if let Some((a, b)) = g.bipartition() {
        // A connected cubic bipartite graph always has balanced sides.
        assert_eq!(a.len(), b.len());
        let t = a.len();
        let mut colors = vec![0usize; g.n()];
        for &v in &a {
            colors[v] = 1;
        }
        for &v in &b {
            colors[v] = 2;
        }
        let witness = Coloring::new(colors, 2).expect("valid 2-coloring");
        return Ok(CubicClass {
            kind: CubicKind::Q2,
            profile: vec![t, t],
            witness,
        });
    }
    if g.n() == 4 {
        // The only cubic graph on 4 vertices is K4.
        let witness = Coloring::new(vec![1, 2, 3, 4], 4).expect("valid 4-coloring");
        return Ok(CubicClass {
            kind: CubicKind::Q4,
            profile: vec![1, 1, 1, 1],
            witness,
        });
    }
    let best = best_three_coloring(g).expect("non-bipartite cubic graph other than K4 is 3-chromatic");
    let witness = normalize_witness(&best, 3);
    let mut profile: Vec<usize> = witness.profile().sizes().to_vec();
    profile.sort_unstable_by(|a, b| b.cmp(a));
    Ok(CubicClass {
        kind: CubicKind::Q3,
        profile,
        witness,
    })
}

/// Renumbers colors so classes come in non-increasing size order, equal
/// sizes ordered by smallest contained vertex.
pub(crate) fn normalize_witness(colors: &[usize], k: usize) -> Coloring {
    let mut size = vec![0usize; k + 1];
    let mut first = vec![usize::MAX; k + 1];
    for (v, &c) in colors.iter().enumerate() {
        size[c] += 1;
        if first[c] == usize::MAX {
            first[c] = v;
        }
    }
    let mut order: Vec<usize> = (1..=k).collect();
    order.sort_by(|&a, &b| size[b].cmp(&size[a]).then(first[a].cmp(&first[b])));
    let mut rename = vec![0usize; k + 1];
    for (new, &old) in order.iter().enumerate() {
        rename[old] = new + 1;
    }
    let renamed: Vec<usize> = colors.iter().map(|&c| rename[c]).collect();
    Coloring::new(renamed, k).expect("renaming preserves validity")
}

/// Enumerates proper 3-colorings (in first-use canonical form, which is the
/// lexicographically smallest representative of each color partition) and
/// returns the one minimizing max class size - min class size, tie-broken
/// lexicographically. `None` if the graph is not 3-colorable.
fn best_three_coloring(g: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    let mut colors = vec![0usize; n];
    let mut best: Option<(usize, Vec<usize>)> = None;

    fn rec(
        g: &Graph,
        v: usize,
        max_used: usize,
        colors: &mut Vec<usize>,
        best: &mut Option<(usize, Vec<usize>)>,
    ) {
        let n = g.n();
        if v == n {
            let mut sizes = [0usize; 3];
            for &c in colors.iter() {
                sizes[c - 1] += 1;
            }
            let spread = sizes.iter().max().unwrap() - sizes.iter().min().unwrap();
            let better = match best {
                None => true,
                Some((s, vec)) => spread < *s || (spread == *s && colors < vec),
            };
            if better {
                *best = Some((spread, colors.clone()));
            }
            return;
        }
        let limit = (max_used + 1).min(3);
        for c in 1..=limit {
            if g.neighbors(v).iter().all(|&u| colors[u] != c) {
                colors[v] = c;
                rec(g, v + 1, max_used.max(c), colors, best);
                colors[v] = 0;
            }
        }
    }

    rec(g, 0, 0, &mut colors, &mut best);
    best.map(|(_, c)| c)
}
