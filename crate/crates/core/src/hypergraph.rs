//! Berge girth, regularity checks, and a constructor for linear, regular,
//! uniform hypergraphs of prescribed girth.
//!
//! A hypergraph is a [`SetFamily`] read with vertices as the universe and
//! members as hyperedges.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitset::ElementSet;
use crate::error::{Error, Result};
use crate::exec;
use crate::family::{PropertyReport, SetFamily, Witness};

pub type Hypergraph = SetFamily;

/// Restarts used by [`model3_construction`].
pub const DEFAULT_RESTARTS: usize = 256;

/// Search nodes explored per restart before giving up on it.
pub const NODES_PER_RESTART: u64 = 20_000;

/// Length of a shortest Berge cycle, `None` when the hypergraph has none.
///
/// Computed as half the girth of the vertex–edge incidence graph, so two
/// edges sharing two vertices form a cycle of length 2.
pub fn berge_girth(h: &Hypergraph) -> Result<Option<usize>> {
    if let Some(index) = h.sets().iter().position(ElementSet::is_empty) {
        return Err(Error::EmptyEdge { index });
    }
    let n = h.n();
    let m = h.len();
    // nodes 0..n are vertices, n..n+m are edges
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n + m];
    for (e, set) in h.sets().iter().enumerate() {
        for v in set.iter() {
            adj[v - 1].push(n + e);
            adj[n + e].push(v - 1);
        }
    }
    let shortest = exec::map_index(n + m, |s| shortest_cycle_through(&adj, s));
    Ok(shortest.into_iter().flatten().min().map(|len| len / 2))
}

/// Length of the shortest cycle found by BFS from `source` (an upper bound on
/// the cycle through `source`; the minimum over all sources is exact).
fn shortest_cycle_through(adj: &[Vec<usize>], source: usize) -> Option<usize> {
    if adj[source].len() < 2 {
        return None;
    }
    let mut dist = vec![usize::MAX; adj.len()];
    let mut parent = vec![usize::MAX; adj.len()];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    let mut best: Option<usize> = None;
    while let Some(u) = queue.pop_front() {
        if best.is_some_and(|b| 2 * dist[u] + 1 >= b) {
            break;
        }
        for &v in &adj[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                parent[v] = u;
                queue.push_back(v);
            } else if parent[u] != v {
                let len = dist[u] + dist[v] + 1;
                best = Some(best.map_or(len, |b| b.min(len)));
            }
        }
    }
    best
}

/// `r`-uniform, `d`-regular, linear, and Berge girth at least `g`.
pub fn validate_hypergraph(h: &Hypergraph, r: usize, d: usize, g: usize) -> PropertyReport {
    validate_with_sizes(h, r..=r, d, g)
}

/// What [`model3_construction`] promises: `d`-regular, linear, girth at
/// least 5, edges of size `r` (`r = 4` for `d = 2`, else `r = d`), or one
/// less when a vertex was deleted, and never below 3.
pub fn validate_model3_family(h: &Hypergraph, d: usize) -> PropertyReport {
    let r = if d == 2 { 4 } else { d };
    validate_with_sizes(h, r.saturating_sub(1).max(3)..=r, d, 5)
}

fn validate_with_sizes(h: &Hypergraph, sizes: std::ops::RangeInclusive<usize>, d: usize, g: usize) -> PropertyReport {
    if let Some(e) = h.sets().iter().position(|s| !sizes.contains(&s.len())) {
        return PropertyReport::violated(Witness::sets(vec![e], "edge size outside the allowed range"));
    }
    if let Some(v) = (1..=h.n()).find(|&v| h.star(v).len() != d) {
        return PropertyReport::violated(Witness {
            elements: vec![v],
            note: Some("vertex degree differs from d".into()),
            ..Default::default()
        });
    }
    let sets = h.sets();
    for a in 0..sets.len() {
        for b in a + 1..sets.len() {
            if sets[a].intersection(&sets[b]).len() > 1 {
                return PropertyReport::violated(Witness::sets(vec![a, b], "edges share more than one vertex"));
            }
        }
    }
    match berge_girth(h) {
        Ok(Some(girth)) if girth < g => {
            PropertyReport::violated(Witness { note: Some(format!("Berge girth {girth} < {g}")), ..Default::default() })
        }
        Ok(_) => PropertyReport::holds(),
        Err(e) => PropertyReport::violated(Witness { note: Some(e.to_string()), ..Default::default() }),
    }
}

enum Attempt {
    Found(Vec<Vec<usize>>),
    /// The whole search space was explored without a solution.
    Exhausted,
    /// Node budget ran out.
    GaveUp,
}

/// Depth-first construction of the vertex–edge incidence structure.
///
/// Edges are filled one at a time. Each new edge starts at the smallest
/// vertex that still needs degree, and later slots take strictly larger
/// vertices. Vertices without any incidence yet are interchangeable, so only
/// the lowest such vertex is ever tried. Both rules keep the search complete,
/// which lets an exhausted search prove infeasibility.
struct GirthSearch {
    n: usize,
    r: usize,
    g: usize,
    edges: Vec<Vec<usize>>,
    member_of: Vec<Vec<usize>>,
    remaining: Vec<usize>,
    nodes: u64,
    node_limit: u64,
    /// Reuse touched vertices eagerly instead of drawing uniformly; wins on
    /// tight instances close to the smallest possible `n`.
    dense: bool,
    rng: ChaCha8Rng,
}

impl GirthSearch {
    fn fresh_start(&self) -> usize {
        self.remaining.iter().zip(&self.member_of).position(|(_, m)| m.is_empty()).unwrap_or(self.n)
    }

    /// Vertices within hyperedge distance `g - 2` of the members of edge `e`,
    /// walking only through other edges.
    fn blocked_near(&self, e: usize) -> Vec<bool> {
        let mut blocked = vec![false; self.n];
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        for &u in &self.edges[e] {
            dist[u] = 0;
            blocked[u] = true;
            queue.push_back(u);
        }
        let radius = self.g - 2;
        while let Some(u) = queue.pop_front() {
            if dist[u] == radius {
                continue;
            }
            for &f in &self.member_of[u] {
                if f == e {
                    continue;
                }
                for &w in &self.edges[f] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        blocked[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        blocked
    }

    fn place(&mut self, e: usize, v: usize) {
        self.edges[e].push(v);
        self.member_of[v].push(e);
        self.remaining[v] -= 1;
    }

    fn unplace(&mut self, e: usize, v: usize) {
        self.edges[e].pop();
        self.member_of[v].pop();
        self.remaining[v] += 1;
    }

    /// Fills edge `e` from its current length onward, then the edges after it.
    fn extend(&mut self, e: usize) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return None;
        }
        if e == self.edges.len() {
            return Some(true);
        }
        if self.edges[e].len() == self.r {
            return self.extend(e + 1);
        }
        if self.edges[e].is_empty() {
            let Some(start) = self.remaining.iter().position(|&k| k > 0) else {
                return Some(false);
            };
            self.place(e, start);
            let res = self.extend(e);
            if res != Some(true) {
                self.unplace(e, start);
            }
            return res;
        }
        let last = *self.edges[e].last().expect("nonempty edge");
        let blocked = self.blocked_near(e);
        let fresh = self.fresh_start();
        let mut candidates: Vec<usize> =
            (last + 1..fresh.min(self.n)).filter(|&v| self.remaining[v] > 0 && !blocked[v]).collect();
        let needed = self.r - self.edges[e].len();
        let fresh_ok = fresh < self.n && fresh > last;
        if candidates.len() + usize::from(fresh_ok) * (self.n - fresh) < needed {
            return Some(false);
        }
        candidates.shuffle(&mut self.rng);
        if fresh_ok && self.dense {
            let at = self.rng.gen_range(0..=candidates.len());
            candidates.insert(at, fresh);
        } else if fresh_ok {
            // where the first fresh vertex would land in a uniformly random
            // order of all allowed vertices
            let unused = self.n - fresh;
            let mut at = 0;
            while at < candidates.len() && !self.rng.gen_bool(unused as f64 / (unused + candidates.len() - at) as f64) {
                at += 1;
            }
            candidates.insert(at, fresh);
        }
        for v in candidates {
            self.place(e, v);
            let res = self.extend(e);
            match res {
                Some(true) => return res,
                None => {
                    self.unplace(e, v);
                    return None;
                }
                Some(false) => self.unplace(e, v),
            }
        }
        Some(false)
    }

    fn run(n: usize, r: usize, d: usize, g: usize, seed: u64, node_limit: u64, dense: bool) -> Attempt {
        let m = d * n / r;
        let mut search = GirthSearch {
            n,
            r,
            g,
            edges: vec![Vec::with_capacity(r); m],
            member_of: vec![Vec::with_capacity(d); n],
            remaining: vec![d; n],
            nodes: 0,
            node_limit,
            dense,
            rng: ChaCha8Rng::seed_from_u64(seed),
        };
        match search.extend(0) {
            Some(true) => Attempt::Found(search.edges),
            Some(false) => Attempt::Exhausted,
            None => Attempt::GaveUp,
        }
    }
}

fn restart_seed(seed: u64, attempt: usize) -> u64 {
    seed ^ (attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Linear, `d`-regular, `r`-uniform hypergraph on `n` vertices with Berge
/// girth at least `g`, exactly `d·n/r` edges.
///
/// Deterministic for a fixed seed: restarts may run in parallel but the
/// lowest-numbered successful restart wins. A restart that explores its whole
/// search space proves the parameters infeasible and ends the search early.
pub fn construct_girth_hypergraph(
    n: usize,
    r: usize,
    d: usize,
    g: usize,
    seed: u64,
    max_restarts: usize,
) -> Result<Hypergraph> {
    construct_with_budget(n, r, d, g, seed, max_restarts, NODES_PER_RESTART)
}

pub fn construct_with_budget(
    n: usize,
    r: usize,
    d: usize,
    g: usize,
    seed: u64,
    max_restarts: usize,
    nodes_per_restart: u64,
) -> Result<Hypergraph> {
    if d < 1 || r < 2 || g < 3 {
        return Err(Error::BadParameter(format!("need d >= 1, r >= 2, g >= 3 (got d={d}, r={r}, g={g})")));
    }
    if r > n {
        return Err(Error::BadParameter(format!("edge size r = {r} exceeds n = {n}")));
    }
    if !(d * n).is_multiple_of(r) {
        return Err(Error::BadParameter(format!("r = {r} does not divide d·n = {}", d * n)));
    }
    let restarts = max_restarts.max(1);
    let outcome = exec::find_map_first_index(restarts, |attempt| {
        match GirthSearch::run(n, r, d, g, restart_seed(seed, attempt), nodes_per_restart, attempt % 2 == 1) {
            Attempt::Found(edges) => Some(Ok(edges)),
            Attempt::Exhausted => Some(Err(attempt)),
            Attempt::GaveUp => None,
        }
    });
    match outcome {
        Some(Ok(edges)) => {
            let sets = edges.iter().map(|e| ElementSet::from_elements(n, e.iter().map(|v| v + 1))).collect();
            SetFamily::new(n, sets)
        }
        Some(Err(attempt)) => Err(Error::ConstructionFailed { restarts: attempt + 1, exhausted: true }),
        None => Err(Error::ConstructionFailed { restarts, exhausted: false }),
    }
}

/// Query family solving Model 3 for `d` defectives on `n` elements.
///
/// `d ≥ 3`: a `d`-uniform `d`-regular linear hypergraph of girth ≥ 5.
/// `d = 2`: a 4-uniform 2-regular one; for odd `n` it is built on `n + 1`
/// vertices and the extra vertex is deleted, leaving edges of size 3 or 4.
pub fn model3_construction(n: usize, d: usize, seed: u64) -> Result<SetFamily> {
    if d < 2 {
        return Err(Error::BadParameter(format!("d = {d} must be at least 2")));
    }
    let r = if d == 2 { 4 } else { d };
    if n < d * r + 2 {
        return Err(Error::BadParameter(format!("n = {n} must be at least d·r + 2 = {}", d * r + 2)));
    }
    if d == 2 && n % 2 == 1 {
        let bigger = construct_girth_hypergraph(n + 1, r, d, 5, seed, DEFAULT_RESTARTS)?;
        let sets = bigger.sets().iter().map(|e| ElementSet::from_elements(n, e.iter().filter(|&v| v <= n))).collect();
        return SetFamily::new(n, sets);
    }
    construct_girth_hypergraph(n, r, d, 5, seed, DEFAULT_RESTARTS)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: usize, sets: &[&[usize]]) -> SetFamily {
        SetFamily::from_lists(n, sets)
    }

    fn fano() -> SetFamily {
        f(7, &[&[1, 2, 3], &[1, 4, 5], &[1, 6, 7], &[2, 4, 6], &[2, 5, 7], &[3, 4, 7], &[3, 5, 6]])
    }

    fn c5() -> SetFamily {
        f(5, &[&[1, 2], &[2, 3], &[3, 4], &[4, 5], &[1, 5]])
    }

    #[test]
    fn girth_examples() {
        assert_eq!(berge_girth(&f(3, &[&[1, 2], &[2, 3], &[1, 3]])).unwrap(), Some(3));
        assert_eq!(berge_girth(&f(5, &[&[1, 2, 3], &[3, 4, 5]])).unwrap(), None);
        assert_eq!(berge_girth(&fano()).unwrap(), Some(3));
        assert_eq!(berge_girth(&c5()).unwrap(), Some(5));
        assert_eq!(berge_girth(&f(3, &[&[1, 2, 3], &[1, 2]])).unwrap(), Some(2));
        assert_eq!(berge_girth(&f(2, &[&[1, 2], &[1, 2]])).unwrap(), Some(2));
        assert_eq!(berge_girth(&f(2, &[&[1], &[]])), Err(Error::EmptyEdge { index: 1 }));
    }

    #[test]
    fn validate_examples() {
        assert!(validate_hypergraph(&c5(), 2, 2, 5).holds);
        assert!(!validate_hypergraph(&fano(), 3, 3, 5).holds);
        assert!(validate_hypergraph(&fano(), 3, 3, 3).holds);
        assert!(!validate_hypergraph(&SetFamily::all_k_subsets(4, 2), 2, 3, 5).holds);
    }

    #[test]
    fn constructor_parameter_errors() {
        assert!(matches!(construct_girth_hypergraph(10, 3, 2, 5, 1, 1), Err(Error::BadParameter(_))));
        assert!(matches!(model3_construction(7, 2, 1), Err(Error::BadParameter(_))));
        assert!(matches!(model3_construction(20, 1, 1), Err(Error::BadParameter(_))));
    }

    #[test]
    fn fano_parameters_are_infeasible_at_girth_five() {
        let err = construct_girth_hypergraph(7, 3, 3, 5, 0, 4).unwrap_err();
        assert_eq!(err, Error::ConstructionFailed { restarts: 1, exhausted: true });
        // the Fano plane itself is found when girth 3 is allowed
        let h = construct_girth_hypergraph(7, 3, 3, 3, 0, 4).unwrap();
        assert!(validate_hypergraph(&h, 3, 3, 3).holds);
    }

    #[test]
    fn small_graph_cases() {
        // Petersen graph: the smallest cubic graph of girth 5
        let h = construct_girth_hypergraph(15, 3, 2, 5, 3, 8).unwrap();
        assert_eq!(h.len(), 10);
        assert!(validate_hypergraph(&h, 3, 2, 5).holds);
        // a cubic girth-5 graph needs 10 vertices, so 8 is impossible
        let err = construct_girth_hypergraph(12, 3, 2, 5, 7, 8).unwrap_err();
        assert!(matches!(err, Error::ConstructionFailed { exhausted: true, .. }));
    }

    #[test]
    fn construction_is_reproducible_and_valid() {
        let a = construct_girth_hypergraph(100, 3, 3, 5, 11, 16).unwrap();
        let b = construct_girth_hypergraph(100, 3, 3, 5, 11, 16).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 100);
        assert!(validate_hypergraph(&a, 3, 3, 5).holds);
        assert!(berge_girth(&a).unwrap().unwrap() >= 5);
    }
}
