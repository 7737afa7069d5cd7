//! Explicit simple graphs, the generators used throughout the crate, and exact
//! clique / independence / chromatic search.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{cap, domain, Error, Result};

pub const EXPLICIT_CAP: usize = 4096;
pub const EXACT_SEARCH_CAP: usize = 128;

/// Simple undirected graph on `0..vertex_count` with dense bitset rows.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
    labels: Option<Vec<u64>>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n, self.edge_count())
    }
}

impl Graph {
    pub fn new(n: usize) -> Result<Self> {
        cap("vertex count", n, EXPLICIT_CAP)?;
        let words = n.div_ceil(64).max(1);
        Ok(Self { n, words, adj: vec![0; n * words], labels: None })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::new(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn with_labels(mut self, labels: Vec<u64>) -> Self {
        assert_eq!(labels.len(), self.n);
        self.labels = Some(labels);
        self
    }

    pub fn labels(&self) -> Option<&[u64]> {
        self.labels.as_deref()
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return domain(format!("edge ({u}, {v}) outside 0..{}", self.n));
        }
        if u == v {
            return domain(format!("self-loop at {u}"));
        }
        self.adj[u * self.words + v / 64] |= 1 << (v % 64);
        self.adj[v * self.words + u / 64] |= 1 << (u % 64);
        Ok(())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        bits_iter(self.row(v))
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            out.extend(self.neighbors(u).filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::new(self.n).unwrap();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        g.labels = self.labels.clone();
        g
    }

    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| if self.has_edge(i, j) { 1.0 } else { 0.0 })
    }

    pub fn is_regular(&self) -> Option<usize> {
        let d = if self.n == 0 { 0 } else { self.degree(0) };
        (0..self.n).all(|v| self.degree(v) == d).then_some(d)
    }

    /// `perm[v]` is the image of `v`; true if every edge maps to an edge.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        perm.len() == self.n
            && self.edges().iter().all(|&(u, v)| self.has_edge(perm[u], perm[v]))
            && perm.iter().collect::<BTreeSet<_>>().len() == self.n
    }

    /// Adjacency-list text: `"n m"` then one `"u v"` line per edge.
    pub fn to_edge_list(&self) -> String {
        let edges = self.edges();
        let mut s = format!("{} {}\n", self.n, edges.len());
        for (u, v) in edges {
            writeln!(s, "{u} {v}").unwrap();
        }
        s
    }

    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Domain("empty graph file".into()))?;
        let nums = parse_pair(header)?;
        let mut g = Graph::new(nums.0)?;
        let mut count = 0;
        for line in lines {
            let (u, v) = parse_pair(line)?;
            g.add_edge(u, v)?;
            count += 1;
        }
        if count != nums.1 {
            return domain(format!("header announces {} edges, found {count}", nums.1));
        }
        Ok(g)
    }
}

fn parse_pair(line: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    let parse = |s: &str| s.parse::<usize>().map_err(|e| Error::Domain(format!("bad integer {s:?}: {e}")));
    match parts.as_slice() {
        [a, b] => Ok((parse(a)?, parse(b)?)),
        _ => domain(format!("expected two integers, got {line:?}")),
    }
}

fn bits_iter(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            }
        })
    })
}

pub fn complete_graph(n: usize) -> Result<Graph> {
    let mut g = Graph::new(n)?;
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v)?;
        }
    }
    Ok(g)
}

pub fn empty_graph(n: usize) -> Result<Graph> {
    Graph::new(n)
}

pub fn cycle_graph(n: usize) -> Result<Graph> {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges)
}

pub fn path_graph(n: usize) -> Result<Graph> {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges)
}

pub fn random_graph<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::new(n).unwrap();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

fn check_hamming_size(n: u64) -> Result<()> {
    if n > 12 {
        return Err(Error::SizeCap { what: "2^n explicit vertices", value: 1usize << n.min(62), cap: EXPLICIT_CAP });
    }
    Ok(())
}

fn graph_by_distance(n: u64, keep: impl Fn(u32) -> bool) -> Result<Graph> {
    check_hamming_size(n)?;
    let size = 1usize << n;
    let mut g = Graph::new(size)?;
    for u in 0..size {
        for v in u + 1..size {
            if keep((u ^ v).count_ones()) {
                g.add_edge(u, v)?;
            }
        }
    }
    Ok(g.with_labels((0..size as u64).collect()))
}

/// `H(n, d)`: vertex `v` is the bitstring with bits `v`, edges at distance `d`.
pub fn hamming_graph(n: u64, d: u64) -> Result<Graph> {
    if d > n {
        return domain(format!("hamming_graph needs d ≤ n, got n={n} d={d}"));
    }
    graph_by_distance(n, |w| w as u64 == d)
}

/// Adjacency oracle for Hamming graphs too large to store.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HammingOracle {
    pub n: u64,
    pub d: u64,
}

impl HammingOracle {
    pub fn adjacent(&self, x: u64, y: u64) -> bool {
        (x ^ y).count_ones() as u64 == self.d
    }

    pub fn degree(&self) -> num_bigint::BigInt {
        crate::numerics::binom(self.n, self.d as i64)
    }
}

/// `G_K(n)`: bitstrings adjacent at every distance in `n/2..=n`.
pub fn gk_graph(n: u64) -> Result<Graph> {
    if !n.is_multiple_of(2) || n == 0 {
        return domain(format!("gk_graph needs positive even n, got {n}"));
    }
    graph_by_distance(n, |w| 2 * w as u64 >= n)
}

/// A family of lists over the universe `0..universe`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListFamily {
    pub universe: usize,
    pub lists: Vec<Vec<usize>>,
}

impl ListFamily {
    pub fn new(universe: usize, lists: Vec<Vec<usize>>) -> Result<Self> {
        for l in &lists {
            if l.is_empty() {
                return domain("empty list in family");
            }
            if let Some(&bad) = l.iter().find(|&&e| e >= universe) {
                return domain(format!("list element {bad} outside universe 0..{universe}"));
            }
        }
        Ok(Self { universe, lists })
    }

    /// All `k`-subsets of `0..n`, in lexicographic order.
    pub fn all_k_subsets(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n {
            return domain(format!("need 1 ≤ k ≤ N, got N={n} k={k}"));
        }
        Self::new(n, k_subsets(n, k))
    }

    /// `ω(L)`, the size of the largest list.
    pub fn omega(&self) -> usize {
        self.lists.iter().map(|l| l.iter().collect::<BTreeSet<_>>().len()).max().unwrap_or(0)
    }
}

pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// `G_L`: a clique on every list.
pub fn list_graph(f: &ListFamily) -> Result<Graph> {
    let mut g = Graph::new(f.universe)?;
    for l in &f.lists {
        for (i, &a) in l.iter().enumerate() {
            for &b in &l[i + 1..] {
                if a != b {
                    g.add_edge(a, b)?;
                }
            }
        }
    }
    Ok(g)
}

/// Adds `t` new vertices, adjacent to each other and to every old vertex.
pub fn suspension(g: &Graph, t: usize) -> Result<Graph> {
    let n = g.vertex_count();
    let mut h = Graph::new(n + t)?;
    for (u, v) in g.edges() {
        h.add_edge(u, v)?;
    }
    for a in n..n + t {
        for b in 0..a {
            h.add_edge(a, b)?;
        }
    }
    Ok(h)
}

/// For every pair `i < j`, four fresh vertices `a, b, c, d` with edges
/// `ia, ab, ib, jc, cd, jd, id, bc, aj`.
pub fn gadget_graph(g: &Graph) -> Result<Graph> {
    let n = g.vertex_count();
    if n < 2 {
        return domain("gadget_graph needs at least two vertices");
    }
    let mut h = Graph::new(n + 2 * n * (n - 1))?;
    for (u, v) in g.edges() {
        h.add_edge(u, v)?;
    }
    let mut next = n;
    for i in 0..n {
        for j in i + 1..n {
            let (a, b, c, d) = (next, next + 1, next + 2, next + 3);
            next += 4;
            for (u, v) in [(i, a), (a, b), (i, b), (j, c), (c, d), (j, d), (i, d), (b, c), (a, j)] {
                h.add_edge(u, v)?;
            }
        }
    }
    Ok(h)
}

/// Maximum clique by branch and bound with greedy-coloring bounds.
/// Works on any explicit graph; running time is exponential in the worst case.
pub fn max_clique(g: &Graph) -> Vec<usize> {
    let mut p = vec![0u64; g.words];
    for v in 0..g.n {
        p[v / 64] |= 1 << (v % 64);
    }
    max_clique_within(g, &p)
}

/// Maximum clique inside the vertex set `p` (a bitset over `g`'s vertices).
pub fn max_clique_within(g: &Graph, p: &[u64]) -> Vec<usize> {
    let mut best = Vec::new();
    let mut r = Vec::new();
    expand(g, &mut r, p.to_vec(), &mut best);
    best
}

/// Largest clique containing `v`.
pub fn max_clique_containing(g: &Graph, v: usize) -> Vec<usize> {
    let mut c = max_clique_within(g, g.row(v));
    c.insert(0, v);
    c
}

fn color_order(g: &Graph, p: &[u64]) -> Vec<(usize, usize)> {
    let mut uncolored = p.to_vec();
    let mut out = Vec::new();
    let mut color = 0;
    while uncolored.iter().any(|&w| w != 0) {
        color += 1;
        let mut q = uncolored.clone();
        loop {
            let Some(v) = bits_iter(&q).next() else { break };
            q[v / 64] &= !(1 << (v % 64));
            uncolored[v / 64] &= !(1 << (v % 64));
            for (qw, rw) in q.iter_mut().zip(g.row(v)) {
                *qw &= !rw;
            }
            out.push((v, color));
        }
    }
    out
}

fn expand(g: &Graph, r: &mut Vec<usize>, mut p: Vec<u64>, best: &mut Vec<usize>) {
    let order = color_order(g, &p);
    for &(v, c) in order.iter().rev() {
        if r.len() + c <= best.len() {
            return;
        }
        r.push(v);
        let np: Vec<u64> = p.iter().zip(g.row(v)).map(|(a, b)| a & b).collect();
        if np.iter().all(|&w| w == 0) {
            if r.len() > best.len() {
                *best = r.clone();
            }
        } else {
            expand(g, r, np, best);
        }
        r.pop();
        p[v / 64] &= !(1 << (v % 64));
    }
}

pub fn clique_number(g: &Graph) -> Result<usize> {
    cap("vertex count for exact search", g.vertex_count(), EXACT_SEARCH_CAP)?;
    Ok(max_clique(g).len())
}

pub fn independence_number(g: &Graph) -> Result<usize> {
    cap("vertex count for exact search", g.vertex_count(), EXACT_SEARCH_CAP)?;
    Ok(max_clique(&g.complement()).len())
}

/// Exact chromatic number by DSATUR branch and bound, seeded with the clique
/// number as lower bound and the greedy DSATUR coloring as upper bound.
pub fn chromatic_number(g: &Graph) -> Result<usize> {
    Ok(optimal_coloring(g)?.into_iter().max().map_or(0, |c| c + 1))
}

/// A coloring using `χ(G)` colors, `colors[v] ∈ 0..χ`.
pub fn optimal_coloring(g: &Graph) -> Result<Vec<usize>> {
    let n = g.vertex_count();
    cap("vertex count for exact search", n, EXACT_SEARCH_CAP)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let adj: Vec<u128> = (0..n)
        .map(|v| {
            let r = g.row(v);
            r[0] as u128 | (r.get(1).copied().unwrap_or(0) as u128) << 64
        })
        .collect();
    let lower = max_clique(g).len();
    let mut search = Dsatur { adj: &adj, n, colors: vec![usize::MAX; n], best: Vec::new(), best_k: n + 1, lower };
    search.greedy();
    if search.best_k > lower {
        let mut colors = vec![usize::MAX; n];
        search.branch(&mut colors, 0, 0);
    }
    Ok(search.best)
}

fn bits128(w: u128) -> impl Iterator<Item = usize> {
    let mut w = w;
    std::iter::from_fn(move || {
        if w == 0 {
            None
        } else {
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(b)
        }
    })
}

struct Dsatur<'a> {
    adj: &'a [u128],
    n: usize,
    colors: Vec<usize>,
    best: Vec<usize>,
    best_k: usize,
    lower: usize,
}

impl Dsatur<'_> {
    fn pick(&self, colors: &[usize]) -> Option<usize> {
        let mut pick = None;
        let mut key = (0usize, 0usize);
        for v in 0..self.n {
            if colors[v] != usize::MAX {
                continue;
            }
            let mut seen = 0u128;
            let mut free_deg = 0;
            for u in bits128(self.adj[v]) {
                if colors[u] == usize::MAX {
                    free_deg += 1;
                } else {
                    seen |= 1 << colors[u];
                }
            }
            let k = (seen.count_ones() as usize, free_deg);
            if pick.is_none() || k > key {
                pick = Some(v);
                key = k;
            }
        }
        pick
    }

    fn forbidden(&self, colors: &[usize], v: usize) -> u128 {
        bits128(self.adj[v]).filter(|&u| colors[u] != usize::MAX).fold(0, |m, u| m | 1 << colors[u])
    }

    fn greedy(&mut self) {
        let mut colors = self.colors.clone();
        let mut used = 0;
        while let Some(v) = self.pick(&colors) {
            let f = self.forbidden(&colors, v);
            let c = (!f).trailing_zeros() as usize;
            colors[v] = c;
            used = used.max(c + 1);
        }
        self.best_k = used;
        self.best = colors;
    }

    fn branch(&mut self, colors: &mut Vec<usize>, colored: usize, used: usize) {
        if self.best_k <= self.lower {
            return;
        }
        if colored == self.n {
            if used < self.best_k {
                self.best_k = used;
                self.best = colors.clone();
            }
            return;
        }
        let v = self.pick(colors).unwrap();
        let f = self.forbidden(colors, v);
        for c in 0..used {
            if f >> c & 1 == 0 {
                colors[v] = c;
                self.branch(colors, colored + 1, used);
                colors[v] = usize::MAX;
                if self.best_k <= self.lower {
                    return;
                }
            }
        }
        if used + 1 < self.best_k {
            colors[v] = used;
            self.branch(colors, colored + 1, used + 1);
            colors[v] = usize::MAX;
        }
    }
}

pub fn is_proper_coloring(g: &Graph, colors: &[usize]) -> bool {
    g.edges().iter().all(|&(u, v)| colors[u] != colors[v])
}

/// Canonical form of a graph on `n ≤ 7` vertices: the lexicographically
/// smallest upper-triangle adjacency code over all vertex permutations.
pub fn canonical_code(g: &Graph) -> u64 {
    let n = g.vertex_count();
    assert!(n <= 7, "canonical_code is brute force over n!");
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = u64::MAX;
    permute_all(&mut perm, 0, &mut |p| {
        let mut code = 0u64;
        let mut bit = 0;
        for i in 0..n {
            for j in i + 1..n {
                if g.has_edge(p[i], p[j]) {
                    code |= 1 << bit;
                }
                bit += 1;
            }
        }
        best = best.min(code);
    });
    best
}

pub(crate) fn permute_all(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute_all(p, k + 1, f);
        p.swap(k, i);
    }
}

/// One representative per isomorphism class of graphs on `n ≤ 6` vertices.
pub fn nonisomorphic_graphs(n: usize) -> Result<Vec<Graph>> {
    if n > 6 {
        return Err(Error::SizeCap { what: "vertices for isomorphism enumeration", value: n, cap: 6 });
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let edges: Vec<_> = pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e).collect();
        let g = Graph::from_edges(n, &edges)?;
        if seen.insert(canonical_code(&g)) {
            out.push(g);
        }
    }
    Ok(out)
}

/// The Hamming-scheme map `x ↦ π(x ⊕ u) ⊕ s` sending the edge `(u, v)` to
/// `(s, t)`, where the coordinate permutation `π` carries the support of
/// `u ⊕ v` onto the support of `s ⊕ t`.
pub fn hamming_edge_map(n: u64, u: u64, v: u64, s: u64, t: u64) -> Result<Vec<u64>> {
    let a = u ^ v;
    let b = s ^ t;
    if a.count_ones() != b.count_ones() {
        return domain("edges at different distances");
    }
    let in_a: Vec<u64> = (0..n).filter(|i| a >> i & 1 == 1).collect();
    let out_a: Vec<u64> = (0..n).filter(|i| a >> i & 1 == 0).collect();
    let in_b: Vec<u64> = (0..n).filter(|i| b >> i & 1 == 1).collect();
    let out_b: Vec<u64> = (0..n).filter(|i| b >> i & 1 == 0).collect();
    let mut pi = vec![0u64; n as usize];
    for (x, y) in in_a.iter().zip(&in_b).chain(out_a.iter().zip(&out_b)) {
        pi[*x as usize] = *y;
    }
    Ok((0..1u64 << n)
        .map(|x| {
            let w = x ^ u;
            let mut img = 0;
            for i in 0..n {
                if w >> i & 1 == 1 {
                    img |= 1 << pi[i as usize];
                }
            }
            img ^ s
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Brute-force oracle: smallest k admitting a proper k-coloring.
    fn chromatic_brute(g: &Graph) -> usize {
        let n = g.vertex_count();
        if n == 0 {
            return 0;
        }
        for k in 1..=n {
            let mut colors = vec![0usize; n];
            loop {
                if is_proper_coloring(g, &colors) {
                    return k;
                }
                let mut i = 0;
                while i < n {
                    colors[i] += 1;
                    if colors[i] < k {
                        break;
                    }
                    colors[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
            }
        }
        n
    }

    fn clique_brute(g: &Graph) -> usize {
        let n = g.vertex_count();
        let mut best = 0;
        for mask in 0u32..1 << n {
            let vs: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            if vs.len() > best && vs.iter().enumerate().all(|(i, &a)| vs[i + 1..].iter().all(|&b| g.has_edge(a, b))) {
                best = vs.len();
            }
        }
        best
    }

    #[test]
    fn hamming_examples() {
        let c4 = hamming_graph(2, 1).unwrap();
        assert_eq!(c4.edge_count(), 4);
        assert_eq!(c4.is_regular(), Some(2));
        assert_eq!(canonical_code(&c4), canonical_code(&cycle_graph(4).unwrap()));
        let m = hamming_graph(2, 2).unwrap();
        assert_eq!(m.edge_count(), 2);
        assert_eq!(m.is_regular(), Some(1));
        let h = hamming_graph(4, 2).unwrap();
        assert_eq!(h.vertex_count(), 16);
        assert_eq!(h.is_regular(), Some(6));
        assert!(hamming_graph(13, 2).is_err());
        assert!(hamming_graph(3, 4).is_err());
        let oracle = HammingOracle { n: 20, d: 5 };
        assert!(oracle.adjacent(0, 0b11111));
        assert!(!oracle.adjacent(0, 0b1111));
    }

    #[test]
    fn gk_examples() {
        let k4 = gk_graph(2).unwrap();
        assert_eq!(k4.edge_count(), 6);
        assert_eq!(gk_graph(4).unwrap().is_regular(), Some(11));
        assert_eq!(gk_graph(8).unwrap().is_regular(), Some(163));
        assert!(gk_graph(5).is_err());
    }

    #[test]
    fn list_graph_examples() {
        let tri = list_graph(&ListFamily::new(3, vec![vec![0, 1, 2]]).unwrap()).unwrap();
        assert_eq!(tri.edge_count(), 3);
        let path = list_graph(&ListFamily::new(3, vec![vec![0, 1], vec![1, 2]]).unwrap()).unwrap();
        assert_eq!(path.edges(), vec![(0, 1), (1, 2)]);
        let all = ListFamily::all_k_subsets(6, 3).unwrap();
        assert_eq!(all.omega(), 3);
        assert_eq!(list_graph(&all).unwrap(), complete_graph(6).unwrap());
        assert!(ListFamily::new(3, vec![vec![]]).is_err());
        assert!(ListFamily::new(3, vec![vec![3]]).is_err());
    }

    #[test]
    fn complement_suspension_gadget_examples() {
        assert_eq!(complete_graph(4).unwrap().complement().edge_count(), 0);
        let p = suspension(&empty_graph(2).unwrap(), 1).unwrap();
        assert_eq!(canonical_code(&p), canonical_code(&path_graph(3).unwrap()));
        let tri = complete_graph(3).unwrap();
        let gad = gadget_graph(&tri).unwrap();
        assert_eq!(gad.vertex_count(), 15);
        assert_eq!(gad.edge_count(), 3 + 9 * 3);
        assert!(gadget_graph(&empty_graph(1).unwrap()).is_err());
    }

    #[test]
    fn search_examples() {
        let k4 = complete_graph(4).unwrap();
        assert_eq!(chromatic_number(&k4).unwrap(), 4);
        assert_eq!(clique_number(&k4).unwrap(), 4);
        assert_eq!(independence_number(&k4).unwrap(), 1);
        let c4 = cycle_graph(4).unwrap();
        assert_eq!(chromatic_number(&c4).unwrap(), 2);
        assert_eq!(clique_number(&c4).unwrap(), 2);
        assert_eq!(independence_number(&c4).unwrap(), 2);
        let gad = gadget_graph(&complete_graph(3).unwrap()).unwrap();
        assert_eq!(chromatic_number(&gad).unwrap(), 3);
        assert_eq!(chromatic_number(&cycle_graph(5).unwrap()).unwrap(), 3);
        assert!(chromatic_number(&empty_graph(129).unwrap()).is_err());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = hamming_graph(3, 2).unwrap();
        let text = g.to_edge_list();
        assert!(text.starts_with("8 12\n"));
        let h = Graph::from_edge_list(&text).unwrap();
        assert_eq!(h.edges(), g.edges());
        assert!(Graph::from_edge_list("3 2\n0 1\n").is_err());
        assert!(Graph::from_edge_list("3 1\n0 0\n").is_err());
    }

    #[test]
    fn nonisomorphic_counts() {
        // OEIS A000088.
        let want = [1, 1, 2, 4, 11, 34];
        for (n, &w) in want.iter().enumerate() {
            assert_eq!(nonisomorphic_graphs(n).unwrap().len(), w, "n={n}");
        }
    }

    #[test]
    fn hamming_transitivity_witnesses() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..=6u64 {
            for d in 1..=n {
                let g = hamming_graph(n, d).unwrap();
                let size = 1u64 << n;
                for _ in 0..10 {
                    let (u, v) = (rng.gen_range(0..size), rng.gen_range(0..size));
                    let perm: Vec<usize> = (0..size).map(|x| (x ^ u ^ v) as usize).collect();
                    assert!(g.is_automorphism(&perm));
                    assert_eq!(perm[u as usize], v as usize);
                }
                let edges = g.edges();
                for &(u, v) in &edges {
                    let (s, t) = edges[rng.gen_range(0..edges.len())];
                    let nu = hamming_edge_map(n, u as u64, v as u64, s as u64, t as u64).unwrap();
                    let perm: Vec<usize> = nu.iter().map(|&x| x as usize).collect();
                    assert!(g.is_automorphism(&perm));
                    assert_eq!((perm[u], perm[v]), (s, t));
                }
            }
        }
    }

    #[test]
    fn clique_containing_hadamard_code() {
        // Distance-4 words of length 8 include the extended Hamming code.
        let g = hamming_graph(8, 4).unwrap();
        let c = max_clique_containing(&g, 0);
        assert_eq!(c.len(), 8);
        assert!(c.iter().enumerate().all(|(i, &a)| c[i + 1..].iter().all(|&b| g.has_edge(a, b))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn search_matches_brute_force(n in 1usize..=8, p in 0.0f64..1.0, seed in any::<u64>()) {
            let g = random_graph(n, p, &mut ChaCha8Rng::seed_from_u64(seed));
            let chi = chromatic_number(&g).unwrap();
            prop_assert_eq!(chi, chromatic_brute(&g));
            prop_assert!(is_proper_coloring(&g, &optimal_coloring(&g).unwrap()));
            prop_assert_eq!(clique_number(&g).unwrap(), clique_brute(&g));
            let alpha = independence_number(&g).unwrap();
            prop_assert_eq!(alpha, clique_brute(&g.complement()));
            prop_assert!(chi * alpha >= n);
        }

        #[test]
        fn suspension_adds_t_colors(n in 1usize..=10, p in 0.0f64..1.0, t in 0usize..=3, seed in any::<u64>()) {
            let g = random_graph(n, p, &mut ChaCha8Rng::seed_from_u64(seed));
            let s = suspension(&g, t).unwrap();
            prop_assert_eq!(chromatic_number(&s).unwrap(), chromatic_number(&g).unwrap() + t);
        }

        #[test]
        fn gadget_counts(n in 2usize..=8, p in 0.0f64..1.0, seed in any::<u64>()) {
            let g = random_graph(n, p, &mut ChaCha8Rng::seed_from_u64(seed));
            let h = gadget_graph(&g).unwrap();
            prop_assert_eq!(h.vertex_count(), n + 2 * n * (n - 1));
            prop_assert_eq!(2 * h.edge_count(), 2 * g.edge_count() + 9 * n * (n - 1));
        }

        #[test]
        fn gadget_three_color_equivalence(n in 2usize..=6, p in 0.0f64..1.0, seed in any::<u64>()) {
            let g = random_graph(n, p, &mut ChaCha8Rng::seed_from_u64(seed));
            let chi = chromatic_number(&g).unwrap();
            let chi_h = chromatic_number(&gadget_graph(&g).unwrap()).unwrap();
            prop_assert_eq!(chi <= 3, chi_h == 3);
        }
    }
}
