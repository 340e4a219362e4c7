//! Named small cubic graphs, exhaustive enumeration of connected cubic
//! graphs up to isomorphism, and a backtracking isomorphism test.

use crate::graph::Graph;

/// The complete graph K4.
pub fn k4() -> Graph {
    Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
}

/// The complete bipartite graph K_{3,3}: sides {0,1,2} and {3,4,5}.
pub fn k33() -> Graph {
    let edges = (0..3).flat_map(|a| (3..6).map(move |b| (a, b)));
    Graph::from_edges(6, edges).unwrap()
}

/// The k-prism C_k x K2: outer cycle 0..k-1, inner cycle k..2k-1, spokes.
pub fn circular_prism(k: usize) -> Graph {
    assert!(k >= 3);
    let mut edges = Vec::new();
    for i in 0..k {
        edges.push((i, (i + 1) % k));
        edges.push((k + i, k + (i + 1) % k));
        edges.push((i, k + i));
    }
    Graph::from_edges(2 * k, edges).unwrap()
}

/// The 3-prism (triangular prism), the smallest 3-chromatic cubic graph.
pub fn prism() -> Graph {
    circular_prism(3)
}

/// The cube graph C4 x K2.
pub fn cube() -> Graph {
    circular_prism(4)
}

/// Möbius ladder on n vertices (n even): C_n plus antipodal chords.
/// Non-bipartite exactly when n/2 is even (e.g. n = 8, 12, 16).
pub fn moebius_ladder(n: usize) -> Graph {
    assert!(n >= 4 && n % 2 == 0);
    let half = n / 2;
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    for i in 0..half {
        edges.push((i, i + half));
    }
    Graph::from_edges(n, edges).unwrap()
}

/// The Petersen graph: outer C5 on 0..4, inner pentagram on 5..9.
pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
        edges.push((i, 5 + i));
    }
    Graph::from_edges(10, edges).unwrap()
}

/// All connected cubic graphs on n vertices, one representative per
/// isomorphism class, in a deterministic order.
///
/// Enumerates labeled cubic graphs with N(0) = {1,2,3} (every isomorphism
/// class has such a labeling) by completing the lowest-indexed deficient
/// vertex first, then filters to connected and deduplicates.
pub fn enumerate_connected_cubic(n: usize) -> Vec<Graph> {
    assert!(n >= 4 && n % 2 == 0, "cubic graphs need even n >= 4");
    let mut reps: Vec<Graph> = Vec::new();
    let mut adj = vec![[usize::MAX; 3]; n];
    let mut deg = vec![0usize; n];
    // Force N(0) = {1, 2, 3}.
    for u in 1..=3.min(n - 1) {
        adj[0][deg[0]] = u;
        deg[0] += 1;
        adj[u][deg[u]] = 0;
        deg[u] += 1;
    }
    complete(&mut adj, &mut deg, n, &mut reps);
    reps
}

fn complete(adj: &mut Vec<[usize; 3]>, deg: &mut Vec<usize>, n: usize, reps: &mut Vec<Graph>) {
    let v = match (0..n).find(|&v| deg[v] < 3) {
        None => {
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|v| adj[v].iter().filter(move |&&u| u > v).map(move |&u| (v, u)))
                .collect();
            let g = Graph::from_edges(n, edges).unwrap();
            if g.is_connected() && !reps.iter().any(|r| are_isomorphic(r, &g)) {
                reps.push(g);
            }
            return;
        }
        Some(v) => v,
    };
    // All vertices below v are complete, so v's missing neighbors are all
    // above v; choose them as an increasing tuple to visit each labeled
    // graph exactly once.
    let need = 3 - deg[v];
    let candidates: Vec<usize> = (v + 1..n)
        .filter(|&u| deg[u] < 3 && !adj[v][..deg[v]].contains(&u))
        .collect();
    choose_neighbors(adj, deg, n, reps, v, &candidates, 0, need);
}

fn choose_neighbors(
    adj: &mut Vec<[usize; 3]>,
    deg: &mut Vec<usize>,
    n: usize,
    reps: &mut Vec<Graph>,
    v: usize,
    candidates: &[usize],
    start: usize,
    need: usize,
) {
    if need == 0 {
        complete(adj, deg, n, reps);
        return;
    }
    if candidates.len() - start < need {
        return;
    }
    for i in start..candidates.len() {
        let u = candidates[i];
        if deg[u] == 3 {
            continue;
        }
        adj[v][deg[v]] = u;
        deg[v] += 1;
        adj[u][deg[u]] = v;
        deg[u] += 1;
        choose_neighbors(adj, deg, n, reps, v, candidates, i + 1, need - 1);
        deg[u] -= 1;
        adj[u][deg[u]] = usize::MAX;
        deg[v] -= 1;
        adj[v][deg[v]] = usize::MAX;
    }
}

/// Backtracking graph isomorphism with degree pruning. Intended for the
/// small graphs this crate enumerates.
pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.n() != b.n() || a.m() != b.m() {
        return false;
    }
    let mut da: Vec<usize> = (0..a.n()).map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = (0..b.n()).map(|v| b.degree(v)).collect();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return false;
    }
    let n = a.n();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend_mapping(a, b, &mut map, &mut used, 0)
}

fn extend_mapping(a: &Graph, b: &Graph, map: &mut Vec<usize>, used: &mut Vec<bool>, v: usize) -> bool {
    let n = a.n();
    if v == n {
        return true;
    }
    'target: for t in 0..n {
        if used[t] || a.degree(v) != b.degree(t) {
            continue;
        }
        for &u in a.neighbors(v) {
            if u < v && !b.has_edge(map[u], t) {
                continue 'target;
            }
        }
        for u in 0..v {
            if !a.has_edge(u, v) && b.has_edge(map[u], t) {
                continue 'target;
            }
        }
        map[v] = t;
        used[t] = true;
        if extend_mapping(a, b, map, used, v + 1) {
            return true;
        }
        used[t] = false;
        map[v] = usize::MAX;
    }
    false
}
