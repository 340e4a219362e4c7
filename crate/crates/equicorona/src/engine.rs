//! Constructive equitable-coloring routines for l-corona products of cubic
//! graphs, one per structural case, plus the dispatcher that selects the
//! applicable construction and reports the equitable chromatic number or a
//! two-sided bound with a verified witness.

use std::fmt;

use thiserror::Error;

use crate::coloring::{verify_proper, Coloring};
use crate::corona::{l_corona, CoronaError, CoronaSpec};
use crate::graph::{classify_cubic, CubicClass, CubicKind, Graph, GraphError};
use crate::solver::{
    chromatic_number, equitable_chromatic_number, find_coloring_with_profile, find_equitable_k,
    find_semi_equitable, find_strong_equitable_k, ChiEqStatus, SearchBudget, SearchError,
};
use crate::coloring::ClassProfile;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Solver(#[from] SearchError),
    #[error(transparent)]
    Corona(#[from] CoronaError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("construction defect: {0}")]
    Defect(String),
    #[error("instance not covered: {0}")]
    NotCovered(String),
}

fn precondition(msg: impl Into<String>) -> EngineError {
    EngineError::Precondition(msg.into())
}

// ---------------------------------------------------------------------------
// Rotation extension
// ---------------------------------------------------------------------------

/// 1-based partition-set index per outer vertex.
fn part_index(n_h: usize, parts: &[Vec<usize>]) -> Vec<usize> {
    let mut of = vec![0usize; n_h];
    for (j, part) in parts.iter().enumerate() {
        for &v in part {
            of[v] = j + 1;
        }
    }
    debug_assert!(of.iter().all(|&j| j > 0));
    of
}

/// Orders partition sets by decreasing size, ties by smallest contained
/// vertex, so X_1 is always the canonical largest set.
fn normalize_parts(mut parts: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    parts.retain(|p| !p.is_empty());
    for p in &mut parts {
        p.sort_unstable();
    }
    parts.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    parts
}

/// Extends `base` level by level: the copy attached to an i-vertex colors
/// its set X_j with ((i + j - 1) mod k) + 1.
fn rotate_extend(base: &[usize], k: usize, n_h: usize, part_of: &[usize], depth: u32) -> Vec<usize> {
    let mut colors = base.to_vec();
    for _ in 0..depth {
        let n_prev = colors.len();
        colors.reserve(n_prev * n_h);
        for p in 0..n_prev {
            let i = colors[p];
            for w in 0..n_h {
                colors.push((i + part_of[w] - 1) % k + 1);
            }
        }
    }
    colors
}

fn check_strong_base(g: &Graph, c: &Coloring, k: usize) -> Result<(), EngineError> {
    if c.n() != g.n() {
        return Err(precondition("base coloring size does not match center"));
    }
    if c.k() != k {
        return Err(precondition(format!("base coloring must use k = {}", k)));
    }
    if !verify_proper(g, c).map_err(|e| precondition(e.to_string()))? {
        return Err(precondition("base coloring is not proper"));
    }
    if !c.is_strong_equitable() {
        return Err(precondition("base coloring is not strong equitable"));
    }
    Ok(())
}

/// Extends a strong equitable k-coloring (k >= 5) of the center to a strong
/// equitable k-coloring of G∘^l H, using a (k-1)-partition of H found by the
/// exact solver.
pub fn extend_strong_k(
    g: &Graph,
    c: &Coloring,
    h: &Graph,
    l: u32,
    k: usize,
    budget: &SearchBudget,
) -> Result<Coloring, EngineError> {
    if k < 5 {
        return Err(precondition("extend_strong_k requires k >= 5"));
    }
    if g.n() % k != 0 {
        return Err(precondition("k must divide the center order"));
    }
    check_strong_base(g, c, k)?;
    let partition = find_equitable_k(h, k - 1, budget)?
        .ok_or_else(|| EngineError::Defect(format!("outer graph has no {}-partition", k - 1)))?;
    let parts = normalize_parts((1..=k - 1).map(|col| partition.class(col)).collect());
    let part_of = part_index(h.n(), &parts);
    let colors = rotate_extend(c.colors(), k, h.n(), &part_of, l);
    Ok(Coloring::new(colors, k).expect("rotation yields valid colors"))
}

/// Partition sets of a cubic outer graph in Q2 or Q3 (from its witness
/// coloring, normalized). Errors on K4.
fn outer_parts(h: &Graph) -> Result<(CubicClass, Vec<Vec<usize>>), EngineError> {
    let cls = classify_cubic(h)?;
    if cls.kind == CubicKind::Q4 {
        return Err(precondition("outer graph must not be K4"));
    }
    let parts = normalize_parts(cls.partition_sets());
    Ok((cls, parts))
}

/// Extends a strong equitable 4-coloring of the center to a strong
/// equitable 4-coloring of G∘^l H, for outer graphs in Q2 or Q3.
pub fn extend_strong_4(g: &Graph, c: &Coloring, h: &Graph, l: u32) -> Result<Coloring, EngineError> {
    check_strong_base(g, c, 4)?;
    let (_, parts) = outer_parts(h)?;
    let part_of = part_index(h.n(), &parts);
    let colors = rotate_extend(c.colors(), 4, h.n(), &part_of, l);
    Ok(Coloring::new(colors, 4).expect("rotation yields valid colors"))
}

// ---------------------------------------------------------------------------
// The 3-color class-size recursion
// ---------------------------------------------------------------------------

/// Class sizes of the canonical 3-coloring of G∘^l H after l steps of
/// n_i^l = n_i^{l-1} + (sum of the other two at l-1) * t.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Recursion3State {
    pub sizes: (u64, u64, u64),
    pub initial: (u64, u64, u64),
    pub t: u64,
    pub depth: u32,
}

pub fn recursion3(n1: u64, n2: u64, n3: u64, t: u64, l: u32) -> Recursion3State {
    assert!(n1 >= n2 && n2 >= n3, "class sizes must be non-increasing");
    assert!(t >= 3, "bipartite cubic side size is at least 3");
    let (mut a, mut b, mut c) = (n1, n2, n3);
    for _ in 0..l {
        let (pa, pb, pc) = (a, b, c);
        a = pa + (pb + pc) * t;
        b = pb + (pa + pc) * t;
        c = pc + (pa + pb) * t;
    }
    Recursion3State {
        sizes: (a, b, c),
        initial: (n1, n2, n3),
        t,
        depth: l,
    }
}

// ---------------------------------------------------------------------------
// Equitable 3- and 4-colorings for outer graphs in Q2
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub enum Equitable3Outcome {
    Colored(Coloring),
    Impossible(Equitable3Obstruction),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Equitable3Obstruction {
    OuterNotBipartite,
    /// Proven by exhaustive search (in particular whenever 6 does not
    /// divide the center order).
    NoStrongEquitable3,
}

/// Strong equitable 3-coloring of G∘^l H when one exists: requires H in Q2
/// and a strong equitable 3-coloring of G; otherwise names the obstruction.
pub fn equitable3(
    g: &Graph,
    h: &Graph,
    l: u32,
    budget: &SearchBudget,
) -> Result<Equitable3Outcome, EngineError> {
    let cls_h = classify_cubic(h)?;
    if cls_h.kind != CubicKind::Q2 {
        return Ok(Equitable3Outcome::Impossible(
            Equitable3Obstruction::OuterNotBipartite,
        ));
    }
    let base = match find_strong_equitable_k(g, 3, budget)? {
        Some(c) => c,
        None => {
            return Ok(Equitable3Outcome::Impossible(
                Equitable3Obstruction::NoStrongEquitable3,
            ))
        }
    };
    let parts = normalize_parts(cls_h.partition_sets());
    let part_of = part_index(h.n(), &parts);
    let colors = rotate_extend(base.colors(), 3, h.n(), &part_of, l);
    Ok(Equitable3Outcome::Colored(
        Coloring::new(colors, 3).expect("rotation yields valid colors"),
    ))
}

/// Equitable 4-coloring of G∘^l H for any cubic center and outer in Q2,
/// by cases on the center's class.
pub fn equitable4_q2_outer(
    g: &Graph,
    h: &Graph,
    l: u32,
    budget: &SearchBudget,
) -> Result<Coloring, EngineError> {
    let cls_g = classify_cubic(g)?;
    let cls_h = classify_cubic(h)?;
    if cls_h.kind != CubicKind::Q2 {
        return Err(precondition("outer graph must be bipartite"));
    }
    let h_parts = normalize_parts(cls_h.partition_sets());
    let part_of = part_index(h.n(), &h_parts);

    match cls_g.kind {
        CubicKind::Q2 => {
            // Split each side in half: colors 1/2 on one side, 3/4 on the
            // other, colors 1 and 3 taking the ceilings. Copies attached to
            // a 1- or 2-vertex use colors 3,4; the others use 1,2.
            let g_parts = normalize_parts(cls_g.partition_sets());
            let x = g_parts[0].len();
            let ceil = x.div_ceil(2);
            let mut base = vec![0usize; g.n()];
            for (i, &v) in g_parts[0].iter().enumerate() {
                base[v] = if i < ceil { 1 } else { 2 };
            }
            for (i, &v) in g_parts[1].iter().enumerate() {
                base[v] = if i < ceil { 3 } else { 4 };
            }
            let mut colors = base;
            for _ in 0..l {
                let n_prev = colors.len();
                for p in 0..n_prev {
                    let low = colors[p] <= 2;
                    for w in 0..h.n() {
                        let in_x = part_of[w] == 1;
                        colors.push(match (low, in_x) {
                            (true, true) => 3,
                            (true, false) => 4,
                            (false, true) => 1,
                            (false, false) => 2,
                        });
                    }
                }
            }
            Ok(Coloring::new(colors, 4).expect("valid colors"))
        }
        CubicKind::Q3 if g.n() % 4 == 0 => {
            let base = find_strong_equitable_k(g, 4, budget)?.ok_or_else(|| {
                EngineError::Defect("cubic center with 4 | n lacks a strong equitable 4-coloring".into())
            })?;
            extend_strong_4(g, &base, h, l)
        }
        CubicKind::Q3 => {
            // n = 4s + 2: start from an equitable 4-coloring with colors 1
            // and 2 one larger; the designated lowest 1- and 2-vertices keep
            // a fixed special scheme for their copies at every level.
            let s = g.n() / 4;
            let base = find_coloring_with_profile(
                g,
                &ClassProfile::new(vec![s + 1, s + 1, s, s]),
                budget,
            )?
            .ok_or_else(|| {
                EngineError::Defect("cubic center lacks an equitable 4-coloring".into())
            })?;
            let v1 = base.class(1)[0];
            let v2 = base.class(2)[0];
            let mut colors = base.colors().to_vec();
            for _ in 0..l {
                let n_prev = colors.len();
                for p in 0..n_prev {
                    let i = colors[p];
                    for w in 0..h.n() {
                        let in_x = part_of[w] == 1;
                        let col = if p == v1 {
                            if in_x { 2 } else { 3 }
                        } else if p == v2 {
                            if in_x { 4 } else { 1 }
                        } else {
                            (i + part_of[w] - 1) % 4 + 1
                        };
                        colors.push(col);
                    }
                }
            }
            Ok(Coloring::new(colors, 4).expect("valid colors"))
        }
        CubicKind::Q4 => {
            let base = Coloring::new(vec![1, 2, 3, 4], 4).expect("valid");
            extend_strong_4(g, &base, h, l)
        }
    }
}

// ---------------------------------------------------------------------------
// Equitable 5-colorings for outer graphs in Q3
// ---------------------------------------------------------------------------

/// Output of the recolor-to-5 construction, exposing the per-color deficits
/// d_i = n/4 - target_i for inspection.
#[derive(Clone, Debug)]
pub struct Equitable5Detail {
    pub coloring: Coloring,
    pub deficits: [usize; 4],
    /// |X_1| of the outer graph's canonical partition.
    pub x1_size: usize,
    /// n_G / 4.
    pub x: usize,
}

/// Equitable 5-coloring of G∘^l H for a (subgraph of a) cubic center with
/// 4 | n_G and an outer graph in Q3: build the strong equitable 4-coloring
/// by rotation, then recolor d_i vertices of each color i to 5, drawn from
/// X_1 sets of level-l copies keyed by parent color, lowest addresses first.
pub fn equitable5_div4(
    g: &Graph,
    h: &Graph,
    l: u32,
    budget: &SearchBudget,
) -> Result<Coloring, EngineError> {
    Ok(equitable5_div4_detail(g, h, l, budget)?.coloring)
}

pub fn equitable5_div4_detail(
    g: &Graph,
    h: &Graph,
    l: u32,
    budget: &SearchBudget,
) -> Result<Equitable5Detail, EngineError> {
    let base = find_strong_equitable_k(g, 4, budget)?.ok_or_else(|| {
        EngineError::Defect("center with 4 | n lacks a strong equitable 4-coloring".into())
    })?;
    equitable5_div4_with_base(g, &base, h, l)
}

/// Same construction from a caller-supplied strong equitable 4-coloring of
/// the center (needed when the center coloring must agree with a coloring
/// of a supergraph).
pub fn equitable5_div4_with_base(
    g: &Graph,
    base: &Coloring,
    h: &Graph,
    l: u32,
) -> Result<Equitable5Detail, EngineError> {
    if g.n() == 0 || g.n() % 4 != 0 {
        return Err(precondition("center order must be a positive multiple of 4"));
    }
    if (0..g.n()).any(|v| g.degree(v) > 3) {
        return Err(precondition("center must be subcubic"));
    }
    if l < 1 {
        return Err(precondition("depth must be at least 1"));
    }
    check_strong_base(g, base, 4)?;
    let (cls_h, parts) = outer_parts(h)?;
    if cls_h.kind != CubicKind::Q3 {
        return Err(precondition("outer graph must be in Q3"));
    }
    let part_of = part_index(h.n(), &parts);
    let mut colors = rotate_extend(base.colors(), 4, h.n(), &part_of, l);

    let n = colors.len();
    let n_h = h.n();
    let n_prev = n / (n_h + 1);
    let quarter = n / 4;
    let r = n % 5;
    let target = |i: usize| n / 5 + usize::from(i <= r); // 1-based color, color 5 never a ceiling before colors 1..r
    let x1 = &parts[0];

    let mut deficits = [0usize; 4];
    for i in 1..=4usize {
        let d = quarter - target(i);
        deficits[i - 1] = d;
        // X_1 of a copy attached to an (i-1)-vertex currently has color i
        // (color 4 plays the role of color 0).
        let parent_color = if i == 1 { 4 } else { i - 1 };
        let mut need = d;
        'outer: for p in 0..n_prev {
            if colors[p] != parent_color {
                continue;
            }
            let copy_base = n_prev + p * n_h;
            for &w in x1 {
                if need == 0 {
                    break 'outer;
                }
                debug_assert_eq!(colors[copy_base + w], i);
                colors[copy_base + w] = 5;
                need -= 1;
            }
        }
        if need > 0 {
            return Err(EngineError::Defect(format!(
                "recolor pool insufficient for color {}: {} left",
                i, need
            )));
        }
    }
    Ok(Equitable5Detail {
        coloring: Coloring::new(colors, 5).expect("valid colors"),
        deficits,
        x1_size: x1.len(),
        x: g.n() / 4,
    })
}

/// Maps flat indices of S∘^l H (center S, a sorted vertex subset of the full
/// center) to the corresponding flat indices of G∘^l H.
fn sub_address_map(sub_center: &[usize], full_center_n: usize, n_h: usize, depth: u32) -> Vec<usize> {
    let mut map: Vec<usize> = sub_center.to_vec();
    let mut sub_prev = sub_center.len();
    let mut full_prev = full_center_n;
    for _ in 0..depth {
        let mut next = map.clone();
        for p in 0..sub_prev {
            for w in 0..n_h {
                next.push(full_prev + map[p] * n_h + w);
            }
        }
        map = next;
        sub_prev *= n_h + 1;
        full_prev *= n_h + 1;
    }
    map
}

/// Equitable 5-coloring of G∘^l H for any cubic center with n_G >= 8 and an
/// outer graph in Q3, by the residue of n_G mod 5: a semi-equitable seed of
/// the matching type splits the center into an excess part (handled by the
/// recolor-to-5 construction) and a strong equitably 5-colored remainder
/// (handled by rotation); the two sub-corona colorings are combined.
pub fn equitable5_general(
    g: &Graph,
    h: &Graph,
    l: u32,
    budget: &SearchBudget,
) -> Result<Coloring, EngineError> {
    let n = g.n();
    if !g.is_cubic() || !g.is_connected() {
        return Err(precondition("center must be connected cubic"));
    }
    if n < 8 {
        return Err(EngineError::NotCovered(
            "centers on fewer than 8 vertices are handled separately".into(),
        ));
    }
    let cls_h = classify_cubic(h)?;
    if cls_h.kind != CubicKind::Q3 {
        return Err(precondition("outer graph must be in Q3"));
    }
    if l < 1 {
        return Err(precondition("depth must be at least 1"));
    }
    let r = n % 5;
    if r == 0 {
        let base = find_strong_equitable_k(g, 5, budget)?.ok_or_else(|| {
            EngineError::Defect("cubic center with 5 | n lacks a strong equitable 5-coloring".into())
        })?;
        return extend_strong_k(g, &base, h, l, 5, budget);
    }
    if r == 1 && n < 16 {
        return Err(EngineError::NotCovered(format!(
            "n mod 5 = 1 requires n >= 16, got {}",
            n
        )));
    }
    let excess = 4 * (5 - r); // 4, 8, 12 or 16 vertices, e/4 per color
    let special = (n - excess) / 5;
    let seed = find_semi_equitable(g, 5, special, budget)?.ok_or_else(|| {
        EngineError::Defect(format!(
            "semi-equitable seed of special size {} not found",
            special
        ))
    })?;

    // Excess set: the e/4 lowest-indexed vertices of each of colors 1..4.
    let per_color = excess / 4;
    let mut ve: Vec<usize> = (1..=4)
        .flat_map(|c| seed.class(c).into_iter().take(per_color))
        .collect();
    ve.sort_unstable();
    let rest: Vec<usize> = {
        let in_ve: std::collections::HashSet<usize> = ve.iter().copied().collect();
        (0..n).filter(|v| !in_ve.contains(v)).collect()
    };

    let sub_excess = g.induced(&ve);
    let base_excess = Coloring::new(ve.iter().map(|&v| seed.color(v)).collect(), 4)
        .expect("excess vertices carry colors 1..4");
    let part_excess = equitable5_div4_with_base(&sub_excess, &base_excess, h, l)?;

    let total = n * (h.n() + 1).pow(l);
    let mut colors = vec![0usize; total];
    let map_excess = sub_address_map(&ve, n, h.n(), l);
    for (sub, &full) in map_excess.iter().enumerate() {
        colors[full] = part_excess.coloring.color(sub);
    }
    if !rest.is_empty() {
        let sub_rest = g.induced(&rest);
        let base_rest = Coloring::new(rest.iter().map(|&v| seed.color(v)).collect(), 5)
            .expect("seed colors are valid");
        let part_rest = extend_strong_k(&sub_rest, &base_rest, h, l, 5, budget)?;
        let map_rest = sub_address_map(&rest, n, h.n(), l);
        for (sub, &full) in map_rest.iter().enumerate() {
            colors[full] = part_rest.color(sub);
        }
    }
    debug_assert!(colors.iter().all(|&c| c >= 1));
    Ok(Coloring::new(colors, 5).expect("valid colors"))
}

// ---------------------------------------------------------------------------
// Complete outer graphs and ordinary colorings
// ---------------------------------------------------------------------------

/// Equitable (m+1)-coloring of G∘^l K_m: color the center optimally, then
/// give each copy of K_m the m colors other than its parent's, ascending.
/// After one level every class has exactly one vertex per copy.
pub fn color_complete_outer(
    g: &Graph,
    m: usize,
    l: u32,
    budget: &SearchBudget,
) -> Result<Coloring, EngineError> {
    let (chi, base) = chromatic_number(g, budget)?;
    if chi > m + 1 {
        return Err(precondition(format!(
            "center needs {} colors, more than m + 1 = {}",
            chi,
            m + 1
        )));
    }
    let mut colors = base.colors().to_vec();
    for _ in 0..l {
        let n_prev = colors.len();
        for p in 0..n_prev {
            let skip = colors[p];
            for c in (1..=m + 1).filter(|&c| c != skip) {
                colors.push(c);
            }
        }
    }
    Ok(Coloring::new(colors, m + 1).expect("valid colors"))
}

/// Proper coloring of G∘^l H with exactly the optimal number of ordinary
/// colors (3 for bipartite outers unless the center is K4, 4 for outers in
/// Q3, 5 for K4 outers): optimal center coloring plus rotation through the
/// outer graph's partition sets.
pub fn ordinary_coloring(
    g: &Graph,
    h: &Graph,
    l: u32,
    budget: &SearchBudget,
) -> Result<Coloring, EngineError> {
    let cls_g = classify_cubic(g)?;
    let cls_h = classify_cubic(h)?;
    let k = match cls_h.kind {
        CubicKind::Q2 => {
            if cls_g.kind == CubicKind::Q4 {
                4
            } else {
                3
            }
        }
        CubicKind::Q3 => 4,
        CubicKind::Q4 => 5,
    };
    let parts = match cls_h.kind {
        CubicKind::Q4 => (0..4).map(|v| vec![v]).collect(),
        _ => normalize_parts(cls_h.partition_sets()),
    };
    let part_of = part_index(h.n(), &parts);
    let (_, base) = chromatic_number(g, budget)?;
    let colors = rotate_extend(base.colors(), k, h.n(), &part_of, l);
    Ok(Coloring::new(colors, k).expect("valid colors"))
}

// ---------------------------------------------------------------------------
// The n_G = 6 fallback for outers in Q3
// ---------------------------------------------------------------------------

/// Bound produced by the dispatcher: an exact equitable chromatic number or
/// a closed interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChiBound {
    Exact(usize),
    Between(usize, usize),
}

impl ChiBound {
    pub fn lo(&self) -> usize {
        match *self {
            ChiBound::Exact(v) => v,
            ChiBound::Between(lo, _) => lo,
        }
    }

    pub fn hi(&self) -> usize {
        match *self {
            ChiBound::Exact(v) => v,
            ChiBound::Between(_, hi) => hi,
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.lo() <= v && v <= self.hi()
    }
}

impl fmt::Display for ChiBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ChiBound::Exact(v) => write!(f, "{}", v),
            ChiBound::Between(lo, hi) => write!(f, "{}..{}", lo, hi),
        }
    }
}

/// Centers on 6 vertices with an outer in Q3 fall outside the general
/// construction: depth 1 is settled by the exact solver on the 42-vertex
/// corona; deeper products are colored greedily level by level, assigning
/// each copy's partition sets to the colors minimizing the running
/// max-min class-size spread, and verified at the end.
pub fn n6_fallback(
    g: &Graph,
    h: &Graph,
    l: u32,
    budget: &SearchBudget,
) -> Result<(ChiBound, Coloring), EngineError> {
    if g.n() != 6 {
        return Err(precondition("fallback applies to 6-vertex centers only"));
    }
    let (cls_h, parts) = outer_parts(h)?;
    if cls_h.kind != CubicKind::Q3 {
        return Err(precondition("outer graph must be in Q3"));
    }
    let product1 = corona_product_graph(g, h);
    let (k1, base) = match find_equitable_k(&product1, 4, budget)? {
        Some(c) => (4, c),
        None => {
            let c = find_equitable_k(&product1, 5, budget)?.ok_or_else(|| {
                EngineError::Defect("no equitable 5-coloring of a 42-vertex corona".into())
            })?;
            (5, c)
        }
    };
    if l == 1 {
        // chi >= 4 because the outer is 3-chromatic, so both outcomes are exact.
        return Ok((ChiBound::Exact(k1), base));
    }

    let mut colors = base.colors().to_vec();
    let mut counts = [0usize; 5];
    for &c in &colors {
        counts[c - 1] += 1;
    }
    let sizes: Vec<usize> = parts.iter().map(|p| p.len()).collect();
    for _ in 2..=l {
        let n_prev = colors.len();
        for p in 0..n_prev {
            let parent = colors[p];
            let avail: Vec<usize> = (1..=5).filter(|&c| c != parent).collect();
            let mut best: Option<([usize; 3], usize)> = None;
            for &c1 in &avail {
                for &c2 in &avail {
                    if c2 == c1 {
                        continue;
                    }
                    for &c3 in &avail {
                        if c3 == c1 || c3 == c2 {
                            continue;
                        }
                        let mut trial = counts;
                        trial[c1 - 1] += sizes[0];
                        trial[c2 - 1] += sizes[1];
                        trial[c3 - 1] += sizes[2];
                        let spread =
                            trial.iter().max().unwrap() - trial.iter().min().unwrap();
                        let cand = ([c1, c2, c3], spread);
                        let better = match &best {
                            None => true,
                            Some((assign, s)) => {
                                spread < *s || (spread == *s && cand.0 < *assign)
                            }
                        };
                        if better {
                            best = Some(cand);
                        }
                    }
                }
            }
            let (assign, _) = best.expect("four colors admit an injection of three sets");
            let mut copy = vec![0usize; h.n()];
            for (j, part) in parts.iter().enumerate() {
                for &w in part {
                    copy[w] = assign[j];
                }
                counts[assign[j] - 1] += sizes[j];
            }
            colors.extend(copy);
        }
    }
    let witness = Coloring::new(colors, 5).expect("valid colors");
    // The greedy rule carries no proof; verify and report failures.
    let spec = CoronaSpec::new(g.clone(), h.clone(), l)?;
    let product = l_corona(&spec)?;
    if !verify_proper(&product, &witness).map_err(|e| EngineError::Defect(e.to_string()))? {
        return Err(EngineError::Defect("greedy fallback produced an improper coloring".into()));
    }
    if !witness.is_equitable() {
        return Err(EngineError::Defect(
            "greedy fallback failed to reach an equitable coloring".into(),
        ));
    }
    Ok((ChiBound::Between(4, 5), witness))
}

fn corona_product_graph(g: &Graph, h: &Graph) -> Graph {
    crate::corona::corona_product(g, h)
}

// ---------------------------------------------------------------------------
// Dispatcher
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Thm3,
    Thm4,
    Thm4Cub3,
    Thm6,
    Thm7,
    Fallback,
    Exact,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::Thm3 => "thm3",
            Method::Thm4 => "thm4",
            Method::Thm4Cub3 => "thm4_cub3",
            Method::Thm6 => "thm6",
            Method::Thm7 => "thm7",
            Method::Fallback => "fallback",
            Method::Exact => "exact",
        };
        write!(f, "{}", s)
    }
}

#[derive(Clone, Debug)]
pub struct DispatchResult {
    pub chi: ChiBound,
    pub witness: Coloring,
    pub method: Method,
    pub cell: (CubicKind, CubicKind),
}

#[derive(Clone, Copy, Debug)]
pub struct DispatchOptions {
    /// Settle two-sided bounds by exact search when the product is small.
    pub exact: bool,
    pub exact_max_vertices: usize,
}

impl Default for DispatchOptions {
    fn default() -> Self {
        DispatchOptions {
            exact: false,
            exact_max_vertices: 48,
        }
    }
}

pub fn dispatch(
    g: &Graph,
    h: &Graph,
    l: u32,
    budget: &SearchBudget,
) -> Result<DispatchResult, EngineError> {
    dispatch_with(g, h, l, budget, &DispatchOptions::default())
}

/// Selects the applicable construction for (G, H, l), verifies the witness
/// on the constructed product, and returns the equitable chromatic number
/// (exact where the theory settles it, a bound otherwise).
pub fn dispatch_with(
    g: &Graph,
    h: &Graph,
    l: u32,
    budget: &SearchBudget,
    opts: &DispatchOptions,
) -> Result<DispatchResult, EngineError> {
    if l < 1 {
        return Err(precondition("depth must be at least 1"));
    }
    let cls_g = classify_cubic(g)?;
    let cls_h = classify_cubic(h)?;
    let cell = (cls_g.kind, cls_h.kind);

    let (mut chi, mut witness, mut method) = match cls_h.kind {
        CubicKind::Q4 => {
            let w = color_complete_outer(g, 4, l, budget)?;
            (ChiBound::Exact(5), w, Method::Thm7)
        }
        CubicKind::Q2 => match equitable3(g, h, l, budget)? {
            Equitable3Outcome::Colored(w) => (ChiBound::Exact(3), w, Method::Thm3),
            Equitable3Outcome::Impossible(_) => {
                let w = equitable4_q2_outer(g, h, l, budget)?;
                (ChiBound::Exact(4), w, Method::Thm4)
            }
        },
        CubicKind::Q3 => {
            if let Some(base) = find_strong_equitable_k(g, 4, budget)? {
                let w = extend_strong_4(g, &base, h, l)?;
                (ChiBound::Exact(4), w, Method::Thm4Cub3)
            } else if g.n() == 6 {
                let (chi, w) = n6_fallback(g, h, l, budget)?;
                (chi, w, Method::Fallback)
            } else {
                let w = equitable5_general(g, h, l, budget)?;
                (ChiBound::Between(4, 5), w, Method::Thm6)
            }
        }
    };

    let spec = CoronaSpec::new(g.clone(), h.clone(), l)?;
    let product = l_corona(&spec)?;

    if opts.exact {
        if let ChiBound::Between(lo, hi) = chi {
            if product.n() <= opts.exact_max_vertices {
                let res = equitable_chromatic_number(&product, budget)?;
                if let ChiEqStatus::Exact(v) = res.status {
                    if v < lo || v > hi {
                        return Err(EngineError::Defect(format!(
                            "exact value {} outside dispatched bound {}..{}",
                            v, lo, hi
                        )));
                    }
                    chi = ChiBound::Exact(v);
                    witness = res.witness;
                    method = Method::Exact;
                }
            }
        }
    }

    if !verify_proper(&product, &witness).map_err(|e| EngineError::Defect(e.to_string()))? {
        return Err(EngineError::Defect("dispatched witness is not proper".into()));
    }
    if !witness.is_equitable() {
        return Err(EngineError::Defect("dispatched witness is not equitable".into()));
    }
    if witness.k() != chi.hi() {
        return Err(EngineError::Defect(format!(
            "witness uses {} colors, bound says {}",
            witness.k(),
            chi.hi()
        )));
    }
    Ok(DispatchResult {
        chi,
        witness,
        method,
        cell,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    fn budget() -> SearchBudget {
        SearchBudget::default()
    }

    fn product(g: &Graph, h: &Graph, l: u32) -> Graph {
        l_corona(&CoronaSpec::new(g.clone(), h.clone(), l).unwrap()).unwrap()
    }

    #[test]
    fn extend_strong_k_petersen_k33() {
        let g = generate::petersen();
        let h = generate::k33();
        let base = find_strong_equitable_k(&g, 5, &budget()).unwrap().unwrap();
        let c = extend_strong_k(&g, &base, &h, 1, 5, &budget()).unwrap();
        assert_eq!(c.n(), 70);
        assert_eq!(c.profile().sizes(), &[14, 14, 14, 14, 14]);
        assert!(verify_proper(&product(&g, &h, 1), &c).unwrap());
        let c2 = extend_strong_k(&g, &base, &h, 2, 5, &budget()).unwrap();
        assert_eq!(c2.n(), 490);
        assert_eq!(c2.profile().sizes(), &[98, 98, 98, 98, 98]);
        assert!(verify_proper(&product(&g, &h, 2), &c2).unwrap());
    }

    #[test]
    fn extend_strong_k_depth_zero_is_identity() {
        let g = generate::petersen();
        let base = find_strong_equitable_k(&g, 5, &budget()).unwrap().unwrap();
        let c = extend_strong_k(&g, &base, &generate::k33(), 0, 5, &budget()).unwrap();
        assert_eq!(c, base);
    }

    #[test]
    fn extend_strong_4_k4_center() {
        let g = generate::k4();
        let base = Coloring::new(vec![1, 2, 3, 4], 4).unwrap();
        for h in [generate::k33(), generate::prism()] {
            let c = extend_strong_4(&g, &base, &h, 1).unwrap();
            assert_eq!(c.profile().sizes(), &[7, 7, 7, 7]);
            assert!(c.is_strong_equitable());
            assert!(verify_proper(&product(&g, &h, 1), &c).unwrap());
        }
    }

    #[test]
    fn extend_strong_4_rejects_k4_outer() {
        let g = generate::k4();
        let base = Coloring::new(vec![1, 2, 3, 4], 4).unwrap();
        assert!(matches!(
            extend_strong_4(&g, &base, &generate::k4(), 1),
            Err(EngineError::Precondition(_))
        ));
    }

    #[test]
    fn recursion3_values() {
        assert_eq!(recursion3(2, 2, 2, 3, 1).sizes, (14, 14, 14));
        assert_eq!(recursion3(5, 4, 3, 4, 0).sizes, (5, 4, 3));
        // Frozen from iterating the recursion by hand.
        assert_eq!(recursion3(3, 2, 1, 3, 1).sizes, (12, 14, 16));
        assert_eq!(recursion3(3, 2, 1, 3, 2).sizes, (102, 98, 94));
    }

    #[test]
    fn equitable3_prism_center() {
        let g = generate::prism();
        let h = generate::k33();
        match equitable3(&g, &h, 2, &budget()).unwrap() {
            Equitable3Outcome::Colored(c) => {
                assert_eq!(c.n(), 294);
                assert_eq!(c.profile().sizes(), &[98, 98, 98]);
                assert!(verify_proper(&product(&g, &h, 2), &c).unwrap());
            }
            other => panic!("expected coloring, got {:?}", other),
        }
    }

    #[test]
    fn equitable3_obstructions() {
        let k33 = generate::k33();
        match equitable3(&k33, &k33, 1, &budget()).unwrap() {
            Equitable3Outcome::Impossible(Equitable3Obstruction::NoStrongEquitable3) => {}
            other => panic!("unexpected {:?}", other),
        }
        let cube = generate::cube();
        match equitable3(&cube, &k33, 1, &budget()).unwrap() {
            Equitable3Outcome::Impossible(Equitable3Obstruction::NoStrongEquitable3) => {}
            other => panic!("unexpected {:?}", other),
        }
        match equitable3(&generate::prism(), &generate::prism(), 1, &budget()).unwrap() {
            Equitable3Outcome::Impossible(Equitable3Obstruction::OuterNotBipartite) => {}
            other => panic!("unexpected {:?}", other),
        }
    }

    #[test]
    fn equitable4_q2_center_case() {
        let g = generate::k33();
        let h = generate::k33();
        let c = equitable4_q2_outer(&g, &h, 1, &budget()).unwrap();
        assert_eq!(c.profile().sizes(), &[11, 10, 11, 10]);
        assert!(verify_proper(&product(&g, &h, 1), &c).unwrap());
        assert!(c.is_equitable());
        let c2 = equitable4_q2_outer(&g, &h, 2, &budget()).unwrap();
        assert!(verify_proper(&product(&g, &h, 2), &c2).unwrap());
        assert!(c2.is_equitable());
    }

    #[test]
    fn equitable4_q3_center_odd_case() {
        let g = generate::prism();
        let h = generate::k33();
        for l in [1, 2] {
            let c = equitable4_q2_outer(&g, &h, l, &budget()).unwrap();
            assert!(verify_proper(&product(&g, &h, l), &c).unwrap());
            assert!(c.is_equitable());
            let sizes = c.profile().sizes().to_vec();
            // Colors 1 and 2 stay one larger at every level.
            assert_eq!(sizes[0], sizes[1]);
            assert_eq!(sizes[2], sizes[3]);
            assert_eq!(sizes[0], sizes[2] + 1);
        }
    }

    #[test]
    fn equitable4_q4_center_case() {
        let g = generate::k4();
        let h = generate::k33();
        let c = equitable4_q2_outer(&g, &h, 2, &budget()).unwrap();
        assert_eq!(c.profile().sizes(), &[49, 49, 49, 49]);
        assert!(verify_proper(&product(&g, &h, 2), &c).unwrap());
    }

    #[test]
    fn equitable5_div4_k4_prism() {
        let g = generate::k4();
        let h = generate::prism();
        let d = equitable5_div4_detail(&g, &h, 1, &budget()).unwrap();
        assert_eq!(d.deficits, [1, 1, 1, 2]);
        assert_eq!(d.coloring.profile().sizes(), &[6, 6, 6, 5, 5]);
        assert!(verify_proper(&product(&g, &h, 1), &d.coloring).unwrap());
        assert!(d.coloring.is_equitable());
    }

    #[test]
    fn equitable5_div4_k4_petersen() {
        let g = generate::k4();
        let h = generate::petersen();
        let d = equitable5_div4_detail(&g, &h, 1, &budget()).unwrap();
        assert_eq!(d.coloring.profile().sizes(), &[9, 9, 9, 9, 8]);
        assert!(verify_proper(&product(&g, &h, 1), &d.coloring).unwrap());
        assert!(d.coloring.is_equitable());
    }

    #[test]
    fn equitable5_div4_depth_two_uses_widened_pool() {
        let g = generate::k4();
        let h = generate::prism();
        let d = equitable5_div4_detail(&g, &h, 2, &budget()).unwrap();
        assert_eq!(d.coloring.n(), 196);
        assert!(verify_proper(&product(&g, &h, 2), &d.coloring).unwrap());
        assert!(d.coloring.is_equitable());
    }

    #[test]
    fn equitable5_general_residues() {
        let h = generate::prism();
        // n = 14: residue 4.
        let g = generate::circular_prism(7);
        let c = equitable5_general(&g, &h, 1, &budget()).unwrap();
        assert_eq!(c.n(), 98);
        assert_eq!(c.profile().sizes(), &[20, 20, 20, 19, 19]);
        assert!(verify_proper(&product(&g, &h, 1), &c).unwrap());
    }

    #[test]
    fn equitable5_general_rejects_small_centers() {
        assert!(matches!(
            equitable5_general(&generate::prism(), &generate::prism(), 1, &budget()),
            Err(EngineError::NotCovered(_))
        ));
    }

    #[test]
    fn color_complete_outer_examples() {
        let g = generate::k4();
        let c = color_complete_outer(&g, 4, 1, &budget()).unwrap();
        assert_eq!(c.profile().sizes(), &[4, 4, 4, 4, 4]);
        assert!(verify_proper(&product(&g, &generate::k4(), 1), &c).unwrap());
        let c = color_complete_outer(&g, 4, 2, &budget()).unwrap();
        assert_eq!(c.n(), 100);
        assert!(verify_proper(&product(&g, &generate::k4(), 2), &c).unwrap());
        assert!(c.is_equitable());
        let p = generate::petersen();
        let c = color_complete_outer(&p, 4, 1, &budget()).unwrap();
        assert_eq!(c.n(), 50);
        assert!(verify_proper(&product(&p, &generate::k4(), 1), &c).unwrap());
        assert!(c.is_equitable());
    }

    #[test]
    fn ordinary_coloring_examples() {
        let cases = [
            (generate::k33(), generate::k33(), 3),
            (generate::k4(), generate::k33(), 4),
            (generate::prism(), generate::k4(), 5),
        ];
        for (g, h, k) in cases {
            let c = ordinary_coloring(&g, &h, 1, &budget()).unwrap();
            assert_eq!(c.k(), k);
            assert_eq!(c.colors_used(), k);
            assert!(verify_proper(&product(&g, &h, 1), &c).unwrap());
        }
    }

    #[test]
    fn dispatch_examples() {
        let r = dispatch(&generate::k4(), &generate::prism(), 1, &budget()).unwrap();
        assert_eq!(r.chi, ChiBound::Exact(4));
        assert_eq!(r.method, Method::Thm4Cub3);
        assert_eq!(r.cell, (CubicKind::Q4, CubicKind::Q3));

        let r = dispatch(&generate::prism(), &generate::k33(), 3, &budget()).unwrap();
        assert_eq!(r.chi, ChiBound::Exact(3));
        assert_eq!(r.method, Method::Thm3);

        let r = dispatch(&generate::k33(), &generate::prism(), 1, &budget()).unwrap();
        assert!(matches!(r.chi, ChiBound::Between(4, 5) | ChiBound::Exact(_)));
        assert_eq!(r.method, Method::Fallback);
    }

    #[test]
    fn dispatch_exact_mode_settles_bounds() {
        let opts = DispatchOptions {
            exact: true,
            exact_max_vertices: 48,
        };
        let r = dispatch_with(
            &generate::k33(),
            &generate::prism(),
            1,
            &budget(),
            &opts,
        )
        .unwrap();
        assert!(matches!(r.chi, ChiBound::Exact(4) | ChiBound::Exact(5)));
    }

    #[test]
    fn dispatch_rejects_depth_zero() {
        assert!(matches!(
            dispatch(&generate::k4(), &generate::k4(), 0, &budget()),
            Err(EngineError::Precondition(_))
        ));
    }
}
