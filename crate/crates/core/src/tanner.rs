//! Tanner graphs, girth and shortest-cycle counts.
//!
//! Girth is found by breadth-first search from every variable node; the
//! minimum over roots of the shortest closed walk seen by each search is the
//! exact girth. Once the girth `g = 2k` is known, the cycles of length `g`
//! through a root correspond one-to-one with unordered pairs of shortest paths
//! of length `k` from the root to a common endpoint, which gives an exact
//! count without enumerating cycles.
//!
//! [`qc_girth`] runs the same searches on the lifted graph of a circulant
//! code, but generates adjacency from the shifts and roots one search per
//! protograph column: the offset reached by a walk is its alternating shift
//! sum, and cyclic relabelling is a graph automorphism.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::time::Duration;

use crate::protograph::{ProtoMatrix, QcParityCheck};
use crate::sparse::SparseMatrix;
use crate::{Error, Result};

/// Default search cap used by [`qc_girth`] callers.
pub const DEFAULT_MAX_LEN: u32 = 12;

/// Bipartite graph of a parity-check matrix: one variable node per column,
/// one check node per row, one edge per non-zero entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TannerGraph {
    var_adj: Vec<Vec<usize>>,
    check_adj: Vec<Vec<usize>>,
}

impl TannerGraph {
    pub fn from_parity_check(h: &SparseMatrix) -> Self {
        TannerGraph {
            var_adj: h.cols().to_vec(),
            check_adj: h.rows().to_vec(),
        }
    }

    /// Builds a graph from `(variable, check)` pairs; repeated pairs are kept once.
    pub fn from_edges(n_var: usize, n_check: usize, edges: &[(usize, usize)]) -> Self {
        let mut var_adj = vec![Vec::new(); n_var];
        let mut check_adj = vec![Vec::new(); n_check];
        for &(v, c) in edges {
            if !var_adj[v].contains(&c) {
                var_adj[v].push(c);
                check_adj[c].push(v);
            }
        }
        TannerGraph { var_adj, check_adj }
    }

    pub fn n_var(&self) -> usize {
        self.var_adj.len()
    }

    pub fn n_check(&self) -> usize {
        self.check_adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.var_adj.iter().map(Vec::len).sum()
    }

    /// Edges as `(variable, check)` pairs in variable order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.var_adj
            .iter()
            .enumerate()
            .flat_map(|(v, cs)| cs.iter().map(move |&c| (v, c)))
    }

    pub fn var_neighbors(&self, v: usize) -> &[usize] {
        &self.var_adj[v]
    }

    pub fn check_neighbors(&self, c: usize) -> &[usize] {
        &self.check_adj[c]
    }
}

/// Length of the shortest cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Girth {
    Cycle(u32),
    /// No cycle up to the search cap; the girth is at least this value.
    AtLeast(u32),
    Acyclic,
}

impl Girth {
    /// Value used for ranking; acyclic graphs rank above everything.
    pub fn rank(&self) -> u32 {
        match *self {
            Girth::Cycle(g) | Girth::AtLeast(g) => g,
            Girth::Acyclic => u32::MAX,
        }
    }

    pub fn cycle_len(&self) -> Option<u32> {
        match *self {
            Girth::Cycle(g) => Some(g),
            _ => None,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Cycle(g) => write!(f, "{g}"),
            Girth::AtLeast(g) => write!(f, ">={g}"),
            Girth::Acyclic => f.write_str("acyclic"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GirthReport {
    pub girth: Girth,
    /// Number of distinct cycles of length `girth` (0 when none was found).
    pub multiplicity: u64,
    /// Wall time, filled in by callers that have a clock.
    pub elapsed: Duration,
}

/// Node ids: variables `0..n_var`, checks `n_var..n_var + n_check`.
pub(crate) trait Bipartite {
    fn n_var(&self) -> usize;
    fn n_nodes(&self) -> usize;
    fn for_each_neighbor(&self, node: usize, f: impl FnMut(usize));
}

impl Bipartite for TannerGraph {
    fn n_var(&self) -> usize {
        self.var_adj.len()
    }

    fn n_nodes(&self) -> usize {
        self.var_adj.len() + self.check_adj.len()
    }

    #[inline]
    fn for_each_neighbor(&self, node: usize, mut f: impl FnMut(usize)) {
        let nv = self.var_adj.len();
        if node < nv {
            self.var_adj[node].iter().for_each(|&c| f(nv + c));
        } else {
            self.check_adj[node - nv].iter().for_each(|&v| f(v));
        }
    }
}

const UNSEEN: u32 = u32::MAX;

/// Reusable BFS buffers.
#[derive(Debug, Default)]
pub(crate) struct Scratch {
    dist: Vec<u32>,
    parent: Vec<u32>,
    paths: Vec<u64>,
    queue: Vec<u32>,
}

impl Scratch {
    fn reset(&mut self, n: usize) {
        if self.dist.len() != n {
            self.dist = vec![UNSEEN; n];
            self.parent = vec![UNSEEN; n];
            self.paths = vec![0; n];
        } else {
            for &u in &self.queue {
                self.dist[u as usize] = UNSEEN;
                self.parent[u as usize] = UNSEEN;
                self.paths[u as usize] = 0;
            }
        }
        self.queue.clear();
    }

    /// Shortest closed walk through `root` no longer than `limit`.
    fn shortest_cycle_from<G: Bipartite>(&mut self, g: &G, root: usize, limit: u32) -> Option<u32> {
        self.reset(g.n_nodes());
        self.dist[root] = 0;
        self.queue.push(root as u32);
        let mut best = u32::MAX;
        let mut head = 0;
        while head < self.queue.len() {
            let u = self.queue[head] as usize;
            head += 1;
            let du = self.dist[u];
            // Every walk closed from `u` is at least 2 * du long.
            if 2 * du >= best || 2 * du > limit {
                break;
            }
            let pu = self.parent[u];
            let (dist, parent, queue) = (&mut self.dist, &mut self.parent, &mut self.queue);
            g.for_each_neighbor(u, |x| {
                if dist[x] == UNSEEN {
                    dist[x] = du + 1;
                    parent[x] = u as u32;
                    queue.push(x as u32);
                } else if x as u32 != pu {
                    best = best.min(du + dist[x] + 1);
                }
            });
        }
        (best <= limit).then_some(best)
    }

    /// Cycles of length `2 * half` through `root`, valid when `2 * half` is the girth.
    fn cycles_through<G: Bipartite>(&mut self, g: &G, root: usize, half: u32) -> u64 {
        self.reset(g.n_nodes());
        self.dist[root] = 0;
        self.paths[root] = 1;
        self.queue.push(root as u32);
        let mut head = 0;
        while head < self.queue.len() {
            let u = self.queue[head] as usize;
            head += 1;
            let du = self.dist[u];
            if du == half {
                continue;
            }
            let pu = self.paths[u];
            let (dist, paths, queue) = (&mut self.dist, &mut self.paths, &mut self.queue);
            g.for_each_neighbor(u, |x| {
                if dist[x] == UNSEEN {
                    dist[x] = du + 1;
                    paths[x] = pu;
                    queue.push(x as u32);
                } else if dist[x] == du + 1 {
                    paths[x] += pu;
                }
            });
        }
        self.queue
            .iter()
            .filter(|&&u| self.dist[u as usize] == half)
            .map(|&u| {
                let p = self.paths[u as usize];
                p * (p - 1) / 2
            })
            .sum()
    }
}

/// Girth search over `roots`. `weight` multiplies per-root counts, for
/// symmetric graphs where `roots` represent `weight` equivalent roots each.
/// Returns `None` when no cycle of length `<= limit` exists.
pub(crate) fn search<G: Bipartite>(
    g: &G,
    roots: impl Iterator<Item = usize> + Clone,
    weight: u64,
    limit: u32,
    scratch: &mut Scratch,
) -> Option<(u32, u64)> {
    let mut girth = u32::MAX;
    for root in roots.clone() {
        if let Some(len) = scratch.shortest_cycle_from(g, root, limit.min(girth)) {
            girth = girth.min(len);
            if girth == 4 {
                break;
            }
        }
    }
    if girth == u32::MAX {
        return None;
    }
    let half = girth / 2;
    let through: u64 = roots.map(|r| scratch.cycles_through(g, r, half)).sum();
    // Each cycle visits `half` variable nodes.
    debug_assert_eq!((through * weight) % half as u64, 0);
    Some((girth, through * weight / half as u64))
}

fn is_forest<G: Bipartite>(g: &G) -> bool {
    let mut uf = UnionFind::new(g.n_nodes());
    let mut ok = true;
    for v in 0..g.n_var() {
        g.for_each_neighbor(v, |c| ok &= uf.union(v, c));
        if !ok {
            return false;
        }
    }
    true
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already connected.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
        ra != rb
    }
}

fn report(found: Option<(u32, u64)>, fallback: Girth) -> GirthReport {
    let (girth, multiplicity) = match found {
        Some((g, m)) => (Girth::Cycle(g), m),
        None => (fallback, 0),
    };
    GirthReport {
        girth,
        multiplicity,
        elapsed: Duration::ZERO,
    }
}

fn even_cap(max_len: u32) -> Result<u32> {
    if max_len < 4 {
        return Err(Error::InvalidInput(format!("girth cap {max_len} is below 4")));
    }
    Ok(max_len & !1)
}

/// Exact girth and shortest-cycle count by BFS from every variable node.
pub fn girth(g: &TannerGraph) -> GirthReport {
    let mut scratch = Scratch::default();
    report(
        search(g, 0..g.n_var(), 1, u32::MAX / 4, &mut scratch),
        Girth::Acyclic,
    )
}

/// Like [`girth`], but only looks for cycles up to `max_len`.
pub fn girth_capped(g: &TannerGraph, max_len: u32) -> Result<GirthReport> {
    let cap = even_cap(max_len)?;
    let mut scratch = Scratch::default();
    let found = search(g, 0..g.n_var(), 1, cap, &mut scratch);
    let fallback = if found.is_none() && is_forest(g) {
        Girth::Acyclic
    } else {
        Girth::AtLeast(cap + 2)
    };
    Ok(report(found, fallback))
}

/// Lifted graph of a circulant assignment, with adjacency computed from shifts.
#[derive(Debug, Clone)]
pub(crate) struct CirculantGraph {
    v: usize,
    n_var: usize,
    /// Variable nodes at or past this index are removed.
    n_live: usize,
    n_check: usize,
    /// Per protograph column: `(row, edge copy index)`.
    col_edges: Vec<Vec<(usize, usize)>>,
    /// Per protograph row: `(column, edge copy index)`.
    row_edges: Vec<Vec<(usize, usize)>>,
    shifts: Vec<u32>,
}

impl CirculantGraph {
    /// Edge copies follow [`ProtoMatrix::edge_copies`] order; all shifts start at 0.
    pub(crate) fn new(p: &ProtoMatrix, v: usize) -> Self {
        let mut col_edges = vec![Vec::new(); p.cols()];
        let mut row_edges = vec![Vec::new(); p.rows()];
        for (idx, (r, c, _)) in p.edge_copies().enumerate() {
            col_edges[c].push((r, idx));
            row_edges[r].push((c, idx));
        }
        CirculantGraph {
            v,
            n_var: p.cols() * v,
            n_live: p.cols() * v,
            n_check: p.rows() * v,
            col_edges,
            row_edges,
            shifts: vec![0; p.edge_count()],
        }
    }

    pub(crate) fn set_shifts(&mut self, shifts: &[u32]) {
        self.shifts.copy_from_slice(shifts);
    }

    /// Drops every variable node from `n_live` on, as truncation does.
    pub(crate) fn set_live(&mut self, n_live: usize) {
        self.n_live = n_live.min(self.n_var);
    }

    /// One root per protograph column, each standing for `v` equivalent
    /// roots. Truncation breaks that symmetry, so then every live variable
    /// node is a root.
    pub(crate) fn search(&self, limit: u32, scratch: &mut Scratch) -> Option<(u32, u64)> {
        let v = self.v;
        if self.n_live < self.n_var {
            return search(self, 0..self.n_live, 1, limit, scratch);
        }
        search(
            self,
            (0..self.col_edges.len()).map(move |c| c * v),
            v as u64,
            limit,
            scratch,
        )
    }
}

impl Bipartite for CirculantGraph {
    fn n_var(&self) -> usize {
        self.n_var
    }

    fn n_nodes(&self) -> usize {
        self.n_var + self.n_check
    }

    #[inline]
    fn for_each_neighbor(&self, node: usize, mut f: impl FnMut(usize)) {
        let v = self.v;
        if node < self.n_var {
            let (c, i) = (node / v, node % v);
            for &(r, e) in &self.col_edges[c] {
                let s = self.shifts[e] as usize;
                f(self.n_var + r * v + (i + v - s) % v);
            }
        } else {
            let (r, j) = ((node - self.n_var) / v, (node - self.n_var) % v);
            for &(c, e) in &self.row_edges[r] {
                let s = self.shifts[e] as usize;
                let var = c * v + (j + s) % v;
                if var < self.n_live {
                    f(var);
                }
            }
        }
    }
}

/// Multigraph forest test on the protograph; a lift has a cycle iff its base does.
fn proto_is_forest(p: &ProtoMatrix) -> bool {
    let mut uf = UnionFind::new(p.rows() + p.cols());
    p.edge_copies()
        .all(|(r, c, _)| uf.union(c, p.cols() + r))
}

/// Girth of a circulant lifting up to `max_len`, using the shift structure.
pub fn qc_girth(h: &QcParityCheck, max_len: u32) -> Result<GirthReport> {
    if !h.is_circulant() {
        return Err(Error::UnsupportedStructure(
            "qc_girth needs an untruncated circulant lifting".to_string(),
        ));
    }
    let cap = even_cap(max_len)?;
    let p = h.proto();
    let mut graph = CirculantGraph::new(p, h.lifting());
    let shifts: Vec<u32> = (0..p.rows())
        .flat_map(|r| (0..p.cols()).map(move |c| (r, c)))
        .flat_map(|(r, c)| h.shifts().shifts(r, c).unwrap_or_default())
        .collect();
    graph.set_shifts(&shifts);
    let found = graph.search(cap, &mut Scratch::default());
    let fallback = if found.is_none() && proto_is_forest(p) {
        Girth::Acyclic
    } else {
        Girth::AtLeast(cap + 2)
    };
    Ok(report(found, fallback))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protograph::{lift, ShiftAssignment};

    fn hamming() -> SparseMatrix {
        SparseMatrix::from_dense(&[
            [1u8, 0, 1, 1, 1, 0, 0],
            [1, 1, 1, 0, 0, 1, 0],
            [0, 0, 1, 1, 0, 0, 1],
        ])
        .unwrap()
    }

    #[test]
    fn hamming_graph() {
        let g = TannerGraph::from_parity_check(&hamming());
        assert_eq!((g.n_var(), g.n_check(), g.edge_count()), (7, 3, 11));
        let r = girth(&g);
        assert_eq!(r.girth, Girth::Cycle(4));
        // Columns 0 and 2 share rows 0 and 1, columns 2 and 3 share rows 0 and 2.
        assert_eq!(r.multiplicity, 2);
    }

    #[test]
    fn degenerate_graphs() {
        let empty = TannerGraph::from_parity_check(&SparseMatrix::from_dense(&[[0u8, 0], [0, 0]]).unwrap());
        assert_eq!(empty.edge_count(), 0);
        assert_eq!(girth(&empty).girth, Girth::Acyclic);
        let eye = SparseMatrix::from_rows(5, (0..5).map(|i| vec![i]).collect()).unwrap();
        let g = TannerGraph::from_parity_check(&eye);
        assert_eq!(g.edge_count(), 5);
        assert_eq!(girth(&g).girth, Girth::Acyclic);
        // A path v0 - c0 - v1 - c1 - v2 is a tree.
        let tree = TannerGraph::from_edges(3, 2, &[(0, 0), (1, 0), (1, 1), (2, 1)]);
        assert_eq!(girth(&tree).girth, Girth::Acyclic);
        assert_eq!(girth_capped(&tree, 8).unwrap().girth, Girth::Acyclic);
    }

    #[test]
    fn single_long_cycle() {
        // A 12-cycle: v_i - c_i - v_{i+1}.
        let edges: Vec<_> = (0..6).flat_map(|i| [(i, i), ((i + 1) % 6, i)]).collect();
        let g = TannerGraph::from_edges(6, 6, &edges);
        let r = girth(&g);
        assert_eq!((r.girth, r.multiplicity), (Girth::Cycle(12), 1));
        assert_eq!(girth_capped(&g, 10).unwrap().girth, Girth::AtLeast(12));
        assert!(girth_capped(&g, 2).is_err());
    }

    #[test]
    fn complete_bipartite_counts() {
        // K_{3,3} has C(3,2)^2 = 9 four-cycles.
        let edges: Vec<_> = (0..3).flat_map(|v| (0..3).map(move |c| (v, c))).collect();
        let r = girth(&TannerGraph::from_edges(3, 3, &edges));
        assert_eq!((r.girth, r.multiplicity), (Girth::Cycle(4), 9));
    }

    fn ones2x2(s: [u32; 4], v: usize) -> QcParityCheck {
        let p = ProtoMatrix::new_graph("ones", vec![vec![1, 1], vec![1, 1]], vec![]).unwrap();
        lift(
            &p,
            &ShiftAssignment::from_shifts(v, 2, s.iter().map(|&x| vec![x]).collect()),
        )
        .unwrap()
    }

    #[test]
    fn qc_two_by_two() {
        // Cycles of a 2x2 base have length 4k and close when k * (s00 - s01 + s11 - s10) = 0 mod v.
        let h = ones2x2([0, 0, 0, 1], 3);
        let r = qc_girth(&h, 12).unwrap();
        assert_eq!(r.girth, Girth::Cycle(12));
        let g = girth(&TannerGraph::from_parity_check(h.matrix()));
        assert_eq!((r.girth, r.multiplicity), (g.girth, g.multiplicity));
        let zeros = ones2x2([0, 0, 0, 0], 3);
        assert_eq!(qc_girth(&zeros, 12).unwrap().girth, Girth::Cycle(4));
        let h = ones2x2([0, 1, 0, 3], 4);
        assert_eq!(qc_girth(&h, 12).unwrap().girth, Girth::Cycle(8));
        assert_eq!(qc_girth(&h, 6).unwrap().girth, Girth::AtLeast(8));
    }

    #[test]
    fn qc_rejects_truncated() {
        let p = crate::protograph::ar4ja_base().unwrap();
        let h = lift(&p, &ShiftAssignment::zeros(&p, 4)).unwrap().truncate(1).unwrap();
        assert!(matches!(qc_girth(&h, 12), Err(Error::UnsupportedStructure(_))));
    }

    #[test]
    fn qc_cap_reports_lower_bound() {
        let h = ones2x2([0, 0, 0, 1], 3);
        assert_eq!(qc_girth(&h, 4).unwrap().girth, Girth::AtLeast(6));
        let tree = ProtoMatrix::new_graph("t", vec![vec![1, 1]], vec![]).unwrap();
        let h = lift(&tree, &ShiftAssignment::zeros(&tree, 5)).unwrap();
        assert_eq!(qc_girth(&h, 12).unwrap().girth, Girth::Acyclic);
    }
}
