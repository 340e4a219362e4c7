//! Exact backtracking search for proper colorings under class-size
//! constraints, and the equitable / strong equitable / semi-equitable
//! search entry points built on it.
//!
//! Search order is fixed: vertices by descending degree then index, colors
//! by most remaining capacity (ties by index), with class-capacity pruning,
//! symmetry breaking across colors of identical capacity, and memoization
//! of exhausted states. Identical inputs always yield identical witnesses.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::coloring::{ClassProfile, Coloring};
use crate::graph::Graph;

pub const DEFAULT_NODE_LIMIT: u64 = 100_000_000;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("search budget exhausted")]
    BudgetExhausted,
    #[error("profile sums to {sum} but graph has {n} vertices")]
    ProfileMismatch { sum: usize, n: usize },
}

/// Limits on a single search. The default is 10^8 nodes and no time limit.
#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: Some(DEFAULT_NODE_LIMIT),
            max_time: None,
        }
    }
}

impl SearchBudget {
    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget {
            max_nodes: Some(max_nodes),
            max_time: None,
        }
    }

    pub fn unlimited() -> Self {
        SearchBudget {
            max_nodes: None,
            max_time: None,
        }
    }
}

/// Result of computing an equitable chromatic number.
#[derive(Clone, Debug)]
pub struct ChiEqResult {
    pub status: ChiEqStatus,
    pub witness: Coloring,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChiEqStatus {
    /// Every k below the value was proven infeasible.
    Exact(usize),
    /// Some k below `hi` ran out of budget; `lo` is the smallest undecided k.
    Bounds { lo: usize, hi: usize },
}

impl ChiEqResult {
    pub fn upper(&self) -> usize {
        match self.status {
            ChiEqStatus::Exact(v) => v,
            ChiEqStatus::Bounds { hi, .. } => hi,
        }
    }
}

struct Searcher<'a> {
    g: &'a Graph,
    order: Vec<usize>,
    caps: Vec<usize>,
    counts: Vec<usize>,
    /// Colors sharing a capacity form a symmetry group; a color may only be
    /// opened if every lower color in its group is already in use.
    group_members: Vec<Vec<usize>>,
    group_of: Vec<usize>,
    colors: Vec<usize>,
    /// last_pos[v]: position (in `order`) of v's last-placed neighbor.
    last_pos: Vec<usize>,
    /// Exhausted states, keyed by position, class counts and the colors of
    /// placed vertices that still have unplaced neighbors. Two branches
    /// that agree on all three are interchangeable, so a state proven
    /// colorless once never needs revisiting. Insertion stops at the cap;
    /// lookups stay sound either way.
    failed: HashSet<Vec<u32>>,
    nodes: u64,
    max_nodes: u64,
    deadline: Option<Instant>,
}

const MEMO_CAP: usize = 2_000_000;

impl<'a> Searcher<'a> {
    fn new(g: &'a Graph, caps: Vec<usize>, budget: &SearchBudget) -> Self {
        let mut order: Vec<usize> = (0..g.n()).collect();
        order.sort_by(|&a, &b| g.degree(b).cmp(&g.degree(a)).then(a.cmp(&b)));
        let mut pos = vec![0usize; g.n()];
        for (p, &v) in order.iter().enumerate() {
            pos[v] = p;
        }
        let last_pos: Vec<usize> = (0..g.n())
            .map(|v| g.neighbors(v).iter().map(|&u| pos[u]).max().unwrap_or(0))
            .collect();
        let k = caps.len();
        let mut group_of = vec![0usize; k];
        let mut group_members: Vec<Vec<usize>> = Vec::new();
        let mut cap_values: Vec<usize> = Vec::new();
        for (i, &cap) in caps.iter().enumerate() {
            match cap_values.iter().position(|&c| c == cap) {
                Some(gid) => {
                    group_of[i] = gid;
                    group_members[gid].push(i);
                }
                None => {
                    group_of[i] = cap_values.len();
                    cap_values.push(cap);
                    group_members.push(vec![i]);
                }
            }
        }
        Searcher {
            colors: vec![0; g.n()],
            counts: vec![0; k],
            g,
            order,
            caps,
            group_members,
            group_of,
            last_pos,
            failed: HashSet::new(),
            nodes: 0,
            max_nodes: budget.max_nodes.unwrap_or(u64::MAX),
            deadline: budget.max_time.map(|d| Instant::now() + d),
        }
    }

    fn tick(&mut self) -> Result<(), SearchError> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(SearchError::BudgetExhausted);
        }
        if self.nodes % 4096 == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() > deadline {
                    return Err(SearchError::BudgetExhausted);
                }
            }
        }
        Ok(())
    }

    fn symmetry_allowed(&self, c: usize) -> bool {
        // c is 0-based here.
        for &d in &self.group_members[self.group_of[c]] {
            if d == c {
                return true;
            }
            if self.counts[d] == 0 {
                // A lower color of the same capacity is still unused.
                return false;
            }
        }
        true
    }

    fn state_key(&self, idx: usize) -> Vec<u32> {
        let mut key = Vec::with_capacity(1 + self.caps.len() + idx);
        key.push(idx as u32);
        key.extend(self.counts.iter().map(|&c| c as u32));
        for p in 0..idx {
            let v = self.order[p];
            if self.last_pos[v] >= idx {
                key.push(self.colors[v] as u32);
            }
        }
        key
    }

    fn assign(&mut self, idx: usize) -> Result<bool, SearchError> {
        if idx == self.g.n() {
            return Ok(true);
        }
        self.tick()?;
        let key = self.state_key(idx);
        if self.failed.contains(&key) {
            return Ok(false);
        }
        let v = self.order[idx];
        // Least-constraining value order: colors with the most remaining
        // capacity first, ties by index. Deterministic, and it keeps class
        // counts balanced so capacity dead-ends surface early.
        let mut by_slack: Vec<usize> = (0..self.caps.len()).collect();
        by_slack.sort_by(|&a, &b| {
            (self.caps[b] - self.counts[b])
                .cmp(&(self.caps[a] - self.counts[a]))
                .then(a.cmp(&b))
        });
        for c in by_slack {
            if self.counts[c] >= self.caps[c] {
                continue;
            }
            if !self.symmetry_allowed(c) {
                continue;
            }
            let col = c + 1;
            if self.g.neighbors(v).iter().any(|&u| self.colors[u] == col) {
                continue;
            }
            self.colors[v] = col;
            self.counts[c] += 1;
            if self.assign(idx + 1)? {
                return Ok(true);
            }
            self.colors[v] = 0;
            self.counts[c] -= 1;
        }
        if self.failed.len() < MEMO_CAP {
            self.failed.insert(key);
        }
        Ok(false)
    }
}

/// Core primitive: proper coloring with per-color class caps. `Ok(None)`
/// means exhaustive search proved no such coloring exists.
fn search_with_caps(
    g: &Graph,
    caps: Vec<usize>,
    budget: &SearchBudget,
) -> Result<Option<Coloring>, SearchError> {
    let k = caps.len();
    let mut searcher = Searcher::new(g, caps, budget);
    if searcher.assign(0)? {
        Ok(Some(
            Coloring::new(searcher.colors, k).expect("search produces a total coloring"),
        ))
    } else {
        Ok(None)
    }
}

/// A proper coloring whose class sizes equal `profile` exactly, or proven
/// none. Deterministic for a fixed graph and profile.
pub fn find_coloring_with_profile(
    g: &Graph,
    profile: &ClassProfile,
    budget: &SearchBudget,
) -> Result<Option<Coloring>, SearchError> {
    let sum = profile.total();
    if sum != g.n() {
        return Err(SearchError::ProfileMismatch { sum, n: g.n() });
    }
    search_with_caps(g, profile.sizes().to_vec(), budget)
}

/// The unique equitable size multiset for n vertices and k classes: the
/// first n mod k classes get ceil(n/k), the rest floor(n/k).
pub fn equitable_profile(n: usize, k: usize) -> ClassProfile {
    let r = n % k;
    let sizes = (0..k).map(|i| n / k + usize::from(i < r)).collect();
    ClassProfile::new(sizes)
}

pub fn find_equitable_k(
    g: &Graph,
    k: usize,
    budget: &SearchBudget,
) -> Result<Option<Coloring>, SearchError> {
    find_coloring_with_profile(g, &equitable_profile(g.n(), k), budget)
}

pub fn find_strong_equitable_k(
    g: &Graph,
    k: usize,
    budget: &SearchBudget,
) -> Result<Option<Coloring>, SearchError> {
    if g.n() % k != 0 {
        return Ok(None);
    }
    find_equitable_k(g, k, budget)
}

/// Profile of a semi-equitable k-coloring of type
/// [ceil((n-s)/(k-1)), ..., floor((n-s)/(k-1)), s] with the special class last.
pub fn semi_equitable_profile(n: usize, k: usize, s: usize) -> ClassProfile {
    let rest = n - s;
    let r = rest % (k - 1);
    let mut sizes: Vec<usize> = (0..k - 1)
        .map(|i| rest / (k - 1) + usize::from(i < r))
        .collect();
    sizes.push(s);
    ClassProfile::new(sizes)
}

/// Searches for a semi-equitable k-coloring with special class size `s`.
/// Existence is guaranteed (for subcubic g other than K4 and K_{3,3},
/// k >= 4, s <= ceil(n/3)) — check with [`semi_equitable_guaranteed`];
/// outside those preconditions the search is still attempted.
pub fn find_semi_equitable(
    g: &Graph,
    k: usize,
    s: usize,
    budget: &SearchBudget,
) -> Result<Option<Coloring>, SearchError> {
    find_coloring_with_profile(g, &semi_equitable_profile(g.n(), k, s), budget)
}

/// Whether the semi-equitable existence guarantee applies to (g, k, s).
pub fn semi_equitable_guaranteed(g: &Graph, k: usize, s: usize) -> bool {
    let subcubic = (0..g.n()).all(|v| g.degree(v) <= 3);
    let is_k4 = g.n() == 4 && g.m() == 6;
    let is_k33 = g.n() == 6 && g.m() == 9 && g.bipartition().is_some() && g.is_cubic();
    k >= 4 && s <= g.n().div_ceil(3) && subcubic && !is_k4 && !is_k33
}

/// Scans k = 1, 2, 3, ... independently (equitable colorability is not
/// monotone in k) until a coloring is found. Each k gets a fresh budget.
pub fn equitable_chromatic_number(
    g: &Graph,
    budget: &SearchBudget,
) -> Result<ChiEqResult, SearchError> {
    let mut lowest_undecided: Option<usize> = None;
    for k in 1..=g.n().max(1) {
        match find_equitable_k(g, k, budget) {
            Ok(Some(witness)) => {
                let status = match lowest_undecided {
                    None => ChiEqStatus::Exact(k),
                    Some(lo) => ChiEqStatus::Bounds { lo, hi: k },
                };
                return Ok(ChiEqResult { status, witness });
            }
            Ok(None) => {}
            Err(SearchError::BudgetExhausted) => {
                lowest_undecided.get_or_insert(k);
            }
            Err(e) => return Err(e),
        }
    }
    // k = n always admits the all-singletons coloring.
    Err(SearchError::BudgetExhausted)
}

/// Smallest k admitting any proper k-coloring, with a witness.
pub fn chromatic_number(
    g: &Graph,
    budget: &SearchBudget,
) -> Result<(usize, Coloring), SearchError> {
    for k in 1..=g.n().max(1) {
        // Caps of n per color impose no size constraint; the shared-capacity
        // symmetry rule then reduces to first-use color canonicity.
        if let Some(w) = search_with_caps(g, vec![g.n(); k], budget)? {
            return Ok((k, w));
        }
    }
    unreachable!("n colors always suffice");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::verify_proper;
    use crate::corona::corona_product;
    use crate::generate;

    fn default_budget() -> SearchBudget {
        SearchBudget::default()
    }

    #[test]
    fn k4_singleton_profile_exists() {
        let c = find_coloring_with_profile(
            &generate::k4(),
            &ClassProfile::new(vec![1, 1, 1, 1]),
            &default_budget(),
        )
        .unwrap()
        .unwrap();
        assert!(verify_proper(&generate::k4(), &c).unwrap());
        assert!(c.is_strong_equitable());
    }

    #[test]
    fn k33_has_no_222_coloring() {
        let res = find_coloring_with_profile(
            &generate::k33(),
            &ClassProfile::new(vec![2, 2, 2]),
            &default_budget(),
        )
        .unwrap();
        assert!(res.is_none());
    }

    #[test]
    fn prism_has_222_coloring() {
        let g = generate::prism();
        let c = find_coloring_with_profile(
            &g,
            &ClassProfile::new(vec![2, 2, 2]),
            &default_budget(),
        )
        .unwrap()
        .unwrap();
        assert!(verify_proper(&g, &c).unwrap());
        assert_eq!(c.profile().sizes(), &[2, 2, 2]);
    }

    #[test]
    fn profile_mismatch_is_an_error() {
        let res = find_coloring_with_profile(
            &generate::k4(),
            &ClassProfile::new(vec![1, 1, 1]),
            &default_budget(),
        );
        assert!(matches!(res, Err(SearchError::ProfileMismatch { .. })));
    }

    #[test]
    fn equitable_searches() {
        assert!(find_equitable_k(&generate::k33(), 3, &default_budget())
            .unwrap()
            .is_none());
        let c = find_equitable_k(&generate::k4(), 4, &default_budget())
            .unwrap()
            .unwrap();
        assert_eq!(c.profile().sizes(), &[1, 1, 1, 1]);
        // Every cubic graph is equitably 4- and 5-colorable.
        for g in [generate::k4(), generate::k33(), generate::prism(), generate::petersen()] {
            for k in [4, 5] {
                let c = find_equitable_k(&g, k, &default_budget()).unwrap().unwrap();
                assert!(verify_proper(&g, &c).unwrap());
                assert!(c.is_equitable());
            }
        }
    }

    #[test]
    fn strong_equitable_divisibility_shortcut() {
        // 4 does not divide 10: immediately proven none.
        let res =
            find_strong_equitable_k(&generate::petersen(), 4, &SearchBudget::nodes(1)).unwrap();
        assert!(res.is_none());
        let c = find_strong_equitable_k(&generate::prism(), 3, &default_budget())
            .unwrap()
            .unwrap();
        assert!(c.is_strong_equitable());
        assert!(find_strong_equitable_k(&generate::k33(), 3, &default_budget())
            .unwrap()
            .is_none());
    }

    #[test]
    fn semi_equitable_profiles_match_cases() {
        assert_eq!(semi_equitable_profile(12, 5, 0).sizes(), &[3, 3, 3, 3, 0]);
        assert_eq!(semi_equitable_profile(14, 5, 2).sizes(), &[3, 3, 3, 3, 2]);
        assert_eq!(semi_equitable_profile(8, 5, 0).sizes(), &[2, 2, 2, 2, 0]);
        assert_eq!(semi_equitable_profile(16, 5, 0).sizes(), &[4, 4, 4, 4, 0]);
    }

    #[test]
    fn semi_equitable_guarantee_flag() {
        assert!(!semi_equitable_guaranteed(&generate::k33(), 5, 0));
        assert!(!semi_equitable_guaranteed(&generate::k4(), 5, 0));
        assert!(semi_equitable_guaranteed(&generate::prism(), 5, 0));
        assert!(!semi_equitable_guaranteed(&generate::prism(), 3, 0));
    }

    #[test]
    fn chi_eq_examples() {
        let r = equitable_chromatic_number(&generate::k33(), &default_budget()).unwrap();
        assert_eq!(r.status, ChiEqStatus::Exact(2));
        let r = equitable_chromatic_number(&generate::k4(), &default_budget()).unwrap();
        assert_eq!(r.status, ChiEqStatus::Exact(4));
    }

    #[test]
    fn chi_eq_of_k4_corona_k4_is_five() {
        let p = corona_product(&generate::k4(), &generate::k4());
        let r = equitable_chromatic_number(&p, &default_budget()).unwrap();
        assert_eq!(r.status, ChiEqStatus::Exact(5));
        assert!(verify_proper(&p, &r.witness).unwrap());
        assert!(r.witness.is_equitable());
    }

    #[test]
    fn chromatic_numbers() {
        assert_eq!(chromatic_number(&generate::k33(), &default_budget()).unwrap().0, 2);
        assert_eq!(chromatic_number(&generate::petersen(), &default_budget()).unwrap().0, 3);
        let p = corona_product(&generate::k4(), &generate::k4());
        assert_eq!(chromatic_number(&p, &default_budget()).unwrap().0, 5);
    }

    #[test]
    fn budget_exhaustion_is_distinct_from_proven_none() {
        let g = generate::petersen();
        let res = find_equitable_k(&g, 3, &SearchBudget::nodes(2));
        assert!(matches!(res, Err(SearchError::BudgetExhausted)));
    }

    #[test]
    fn determinism() {
        let g = generate::petersen();
        let a = find_equitable_k(&g, 4, &default_budget()).unwrap().unwrap();
        let b = find_equitable_k(&g, 4, &default_budget()).unwrap().unwrap();
        assert_eq!(a, b);
    }
}
