//! Abstract multigraphs with loops and parallel edges.
//!
//! Besides the container itself this module carries the automorphism
//! machinery (pruned backtracking with a stabilizer chain), the symmetric
//! product test on vertex orbits, the usual graph constructions and a
//! planarity oracle used to cross-check certificates.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use petgraph::graph::UnGraph;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default vertex limit for the exhaustive group computations.
pub const DEFAULT_VERTEX_LIMIT: usize = 10;

/// Finite multigraph on vertices `0..n`.
///
/// Edges are stored normalized (`u <= v`) and sorted, so equality is
/// equality of edge multisets. Edge indices refer to this sorted order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Multigraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut es = Vec::new();
        for (u, v) in edges {
            if u >= n {
                return Err(Error::InvalidVertex(u));
            }
            if v >= n {
                return Err(Error::InvalidVertex(v));
            }
            es.push((u.min(v), u.max(v)));
        }
        es.sort_unstable();
        Ok(Multigraph { n, edges: es })
    }

    pub fn empty(n: usize) -> Self {
        Multigraph { n, edges: Vec::new() }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Multigraph::new(n, edges).unwrap()
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let edges = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)));
        Multigraph::new(a + b, edges).unwrap()
    }

    pub fn cycle(n: usize) -> Self {
        Multigraph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn path(n: usize) -> Self {
        Multigraph::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    pub fn is_simple(&self) -> bool {
        self.edges.iter().all(|&(u, v)| u != v) && self.edges.windows(2).all(|w| w[0] != w[1])
    }

    /// Multiplicity matrix; loops are counted once on the diagonal.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut m = vec![vec![0; self.n]; self.n];
        for &(u, v) in &self.edges {
            m[u][v] += 1;
            if u != v {
                m[v][u] += 1;
            }
        }
        m
    }

    /// Edges incident to `v` as `(edge index, other endpoint)`.
    pub fn incident(&self, v: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if a == v {
                out.push((i, b));
            } else if b == v {
                out.push((i, a));
            }
        }
        out
    }

    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.n);
        for &(u, v) in &self.edges {
            uf.union(u, v);
        }
        uf.classes()
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Image of the graph under a vertex relabeling.
    pub fn relabel(&self, p: &Permutation) -> Multigraph {
        Multigraph::new(self.n, self.edges.iter().map(|&(u, v)| (p.apply(u), p.apply(v)))).unwrap()
    }

    /// Subgraph spanned by a subset of edge indices, on the same vertex set.
    pub fn edge_subgraph(&self, edge_ids: &[usize]) -> Multigraph {
        Multigraph::new(self.n, edge_ids.iter().map(|&i| self.edges[i])).unwrap()
    }

    /// Parses the `graph <n>` / `edge <u> <v>` text format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n = None;
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |msg: &str| Error::Syntax { line: lineno + 1, msg: msg.to_string() };
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                ["graph", k] => {
                    if n.is_some() {
                        return Err(syntax("duplicate graph header"));
                    }
                    n = Some(k.parse::<usize>().map_err(|_| syntax("bad vertex count"))?);
                }
                ["edge", u, v] => {
                    if n.is_none() {
                        return Err(syntax("edge before graph header"));
                    }
                    let u = u.parse::<usize>().map_err(|_| syntax("bad vertex"))?;
                    let v = v.parse::<usize>().map_err(|_| syntax("bad vertex"))?;
                    edges.push((u, v));
                }
                _ => return Err(syntax("expected `graph <n>` or `edge <u> <v>`")),
            }
        }
        let n = n.ok_or(Error::Syntax { line: 0, msg: "missing graph header".into() })?;
        Multigraph::new(n, edges)
    }
}

impl fmt::Display for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "graph {}", self.n)?;
        for &(u, v) in &self.edges {
            writeln!(f, "edge {u} {v}")?;
        }
        Ok(())
    }
}

/// Bijection on `0..n`, stored as its image sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; image.len()];
        for &i in &image {
            if i >= image.len() || seen[i] {
                return Err(Error::Invalid(format!("not a permutation: {image:?}")));
            }
            seen[i] = true;
        }
        Ok(Permutation(image))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn image(&self) -> &[usize] {
        &self.0
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutGroup {
    pub generators: Vec<Permutation>,
    pub order: u64,
}

impl AutGroup {
    /// Vertex orbits, each sorted, ordered by smallest element.
    pub fn orbits(&self, n: usize) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(n);
        for g in &self.generators {
            for i in 0..n {
                uf.union(i, g.apply(i));
            }
        }
        uf.classes()
    }
}

/// Backtracking search for label-preserving automorphisms.
struct AutSearch {
    n: usize,
    adj: Vec<Vec<usize>>,
    profile: Vec<(usize, usize, Vec<usize>)>,
}

impl AutSearch {
    fn new(g: &Multigraph) -> Self {
        let adj = g.adjacency();
        let profile = (0..g.n)
            .map(|v| {
                let mut row = adj[v].clone();
                row.sort_unstable();
                (g.degree(v), adj[v][v], row)
            })
            .collect();
        AutSearch { n: g.n, adj, profile }
    }

    fn compatible(&self, map: &[usize], v: usize, w: usize) -> bool {
        if self.profile[v] != self.profile[w] || self.adj[v][v] != self.adj[w][w] {
            return false;
        }
        (0..v).all(|u| self.adj[u][v] == self.adj[map[u]][w])
    }

    /// Visits every automorphism extending `prefix` (images of `0..prefix.len()`).
    /// The visitor returns `false` to stop.
    fn search(&self, prefix: &[usize], visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let mut map = vec![usize::MAX; self.n];
        let mut used = vec![false; self.n];
        for (v, &w) in prefix.iter().enumerate() {
            if used[w] || !self.compatible(&map, v, w) {
                return true;
            }
            map[v] = w;
            used[w] = true;
        }
        self.extend(&mut map, &mut used, prefix.len(), visit)
    }

    fn extend(
        &self,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        v: usize,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if v == self.n {
            return visit(map);
        }
        for w in 0..self.n {
            if !used[w] && self.compatible(map, v, w) {
                map[v] = w;
                used[w] = true;
                let go_on = self.extend(map, used, v + 1, visit);
                used[w] = false;
                map[v] = usize::MAX;
                if !go_on {
                    return false;
                }
            }
        }
        true
    }

    fn find(&self, prefix: &[usize]) -> Option<Permutation> {
        let mut found = None;
        self.search(prefix, &mut |m| {
            found = Some(Permutation(m.to_vec()));
            false
        });
        found
    }
}

fn check_limit(g: &Multigraph, limit: usize) -> Result<()> {
    if g.n > limit {
        Err(Error::SizeLimitExceeded { n: g.n, limit })
    } else {
        Ok(())
    }
}

pub fn automorphism_group(g: &Multigraph) -> Result<AutGroup> {
    automorphism_group_with_limit(g, DEFAULT_VERTEX_LIMIT)
}

/// Full automorphism group through a stabilizer chain: at level `i` one
/// automorphism fixing `0..i` and sending `i` to each point of its orbit.
/// The order is the product of the orbit lengths.
pub fn automorphism_group_with_limit(g: &Multigraph, limit: usize) -> Result<AutGroup> {
    check_limit(g, limit)?;
    let search = AutSearch::new(g);
    let mut generators = Vec::new();
    let mut order: u64 = 1;
    for i in 0..g.n {
        let mut orbit = 1u64;
        let mut prefix: Vec<usize> = (0..i).collect();
        prefix.push(0);
        for j in i + 1..g.n {
            prefix[i] = j;
            if let Some(p) = search.find(&prefix) {
                orbit += 1;
                generators.push(p);
            }
        }
        order *= orbit;
    }
    Ok(AutGroup { generators, order })
}

/// Every automorphism, in lexicographic order of images.
pub fn all_automorphisms(g: &Multigraph, limit: usize) -> Result<Vec<Permutation>> {
    check_limit(g, limit)?;
    let search = AutSearch::new(g);
    let mut out = Vec::new();
    search.search(&[], &mut |m| {
        out.push(Permutation(m.to_vec()));
        true
    });
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetricProductCertificate {
    pub blocks: Vec<Vec<usize>>,
}

impl SymmetricProductCertificate {
    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

/// Certificate that Aut(g) is the full block-preserving group on its orbits.
pub fn symmetric_product_decomposition(g: &Multigraph) -> Result<Option<SymmetricProductCertificate>> {
    let aut = automorphism_group(g)?;
    let blocks = aut.orbits(g.n);
    let full: u64 = blocks.iter().map(|b| factorial(b.len())).product();
    Ok((full == aut.order).then_some(SymmetricProductCertificate { blocks }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MinimalizabilityStatus {
    StronglyMinimalizableByTrivialAut,
    StronglyMinimalizableByProduct,
    Unknown,
}

/// Never negative: `Unknown` only means neither sufficient condition applied.
pub fn minimalizability_status(g: &Multigraph) -> Result<MinimalizabilityStatus> {
    let aut = automorphism_group(g)?;
    if aut.order == 1 {
        return Ok(MinimalizabilityStatus::StronglyMinimalizableByTrivialAut);
    }
    Ok(match symmetric_product_decomposition(g)? {
        Some(_) => MinimalizabilityStatus::StronglyMinimalizableByProduct,
        None => MinimalizabilityStatus::Unknown,
    })
}

/// Planarity of the underlying simple graph (loops and parallel edges do
/// not affect planarity), decided by the left-right planarity test.
pub fn planarity_oracle(g: &Multigraph) -> Result<bool> {
    check_limit(g, 64)?;
    Ok(is_planar_unchecked(g))
}

pub(crate) fn is_planar_unchecked(g: &Multigraph) -> bool {
    let mut simple: Vec<(u32, u32)> = g
        .edges
        .iter()
        .filter(|(u, v)| u != v)
        .map(|&(u, v)| (u as u32, v as u32))
        .collect();
    simple.dedup();
    let mut pg: UnGraph<(), ()> = UnGraph::with_capacity(g.n, simple.len());
    for _ in 0..g.n {
        pg.add_node(());
    }
    pg.extend_with_edges(simple);
    rustworkx_core::planar::is_planar(&pg)
}

pub fn disjoint_union(g1: &Multigraph, g2: &Multigraph) -> Multigraph {
    let off = g1.n;
    let edges = g1.edges.iter().copied().chain(g2.edges.iter().map(|&(u, v)| (u + off, v + off)));
    Multigraph::new(g1.n + g2.n, edges).unwrap()
}

/// Vertex map for `g2` inside `one_point_union(g1, v1, g2, v2)`.
pub fn one_point_union_map(n1: usize, v1: usize, n2: usize, v2: usize) -> Vec<usize> {
    (0..n2)
        .map(|w| match w.cmp(&v2) {
            std::cmp::Ordering::Equal => v1,
            std::cmp::Ordering::Less => n1 + w,
            std::cmp::Ordering::Greater => n1 + w - 1,
        })
        .collect()
}

pub fn one_point_union(g1: &Multigraph, v1: usize, g2: &Multigraph, v2: usize) -> Result<Multigraph> {
    if v1 >= g1.n {
        return Err(Error::InvalidVertex(v1));
    }
    if v2 >= g2.n {
        return Err(Error::InvalidVertex(v2));
    }
    let map = one_point_union_map(g1.n, v1, g2.n, v2);
    let edges = g1.edges.iter().copied().chain(g2.edges.iter().map(|&(u, v)| (map[u], map[v])));
    Multigraph::new(g1.n + g2.n - 1, edges)
}

/// Replaces `e1 = {v1, v2}` and `e2 = {w1, w2}` by `{v1, w1}` and `{v2, w2}`.
pub fn connected_sum(
    g1: &Multigraph,
    e1: (usize, usize),
    g2: &Multigraph,
    e2: (usize, usize),
) -> Result<Multigraph> {
    let (v1, v2) = e1;
    let (w1, w2) = e2;
    if v1 == v2 {
        return Err(Error::LoopEdge(v1));
    }
    if w1 == w2 {
        return Err(Error::LoopEdge(w1));
    }
    let find = |g: &Multigraph, (a, b): (usize, usize)| {
        let key = (a.min(b), a.max(b));
        g.edges.iter().position(|&e| e == key).ok_or(Error::MissingEdge(a, b))
    };
    let i1 = find(g1, e1)?;
    let i2 = find(g2, e2)?;
    let off = g1.n;
    let mut edges: Vec<(usize, usize)> = g1
        .edges
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != i1)
        .map(|(_, &e)| e)
        .collect();
    edges.extend(
        g2.edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != i2)
            .map(|(_, &(u, v))| (u + off, v + off)),
    );
    edges.push((v1, w1 + off));
    edges.push((v2, w2 + off));
    Multigraph::new(g1.n + g2.n, edges)
}

/// Brute-force isomorphism test over all bijections; desk scale only.
pub fn isomorphic(g1: &Multigraph, g2: &Multigraph) -> bool {
    if g1.n != g2.n || g1.edges.len() != g2.edges.len() {
        return false;
    }
    let mut found = false;
    permutations(g1.n, &mut |p| {
        if g1.relabel(&Permutation(p.to_vec())) == *g2 {
            found = true;
            return false;
        }
        true
    });
    found
}

/// Visits every permutation of `0..n` (Heap's algorithm order is not
/// guaranteed; callers must not depend on it). Visitor returns `false` to stop.
pub fn permutations(n: usize, visit: &mut dyn FnMut(&[usize]) -> bool) {
    fn rec(k: usize, a: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if k == a.len() {
            return visit(a);
        }
        for i in k..a.len() {
            a.swap(k, i);
            if !rec(k + 1, a, visit) {
                a.swap(k, i);
                return false;
            }
            a.swap(k, i);
        }
        true
    }
    let mut a: Vec<usize> = (0..n).collect();
    rec(0, &mut a, visit);
}

/// Simple cycle of a multigraph: `edges[i]` joins `vertices[i]` and
/// `vertices[(i + 1) % len]`. Loops are 1-cycles and parallel pairs 2-cycles.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cycle {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl Cycle {
    pub fn shares_vertex_with(&self, other: &Cycle) -> bool {
        self.vertices.iter().any(|v| other.vertices.contains(v))
    }

    pub fn contains_edge(&self, e: usize) -> bool {
        self.edges.contains(&e)
    }
}

/// All simple cycles, each reported once (as an edge set), sorted.
pub fn simple_cycles(g: &Multigraph) -> Vec<Cycle> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for s in 0..g.n {
        // Paths from s through vertices > s, closing back at s.
        let mut stack_v = vec![s];
        let mut stack_e: Vec<usize> = Vec::new();
        cycles_from(g, s, &mut stack_v, &mut stack_e, &mut seen, &mut out);
    }
    out.sort();
    out
}

fn cycles_from(
    g: &Multigraph,
    s: usize,
    vs: &mut Vec<usize>,
    es: &mut Vec<usize>,
    seen: &mut HashSet<Vec<usize>>,
    out: &mut Vec<Cycle>,
) {
    let cur = *vs.last().unwrap();
    for (e, w) in g.incident(cur) {
        if es.contains(&e) {
            continue;
        }
        if w == s {
            es.push(e);
            let mut key = es.clone();
            key.sort_unstable();
            if seen.insert(key) {
                out.push(Cycle { vertices: vs.clone(), edges: es.clone() });
            }
            es.pop();
        } else if w > s && !vs.contains(&w) {
            vs.push(w);
            es.push(e);
            cycles_from(g, s, vs, es, seen, out);
            es.pop();
            vs.pop();
        }
    }
}

/// Simple paths from `from` to `to` that avoid the `forbidden` vertices,
/// as `(vertices, edges)` with `edges[i]` joining `vertices[i]`, `vertices[i+1]`.
pub fn simple_paths(
    g: &Multigraph,
    from: usize,
    to: usize,
    forbidden: &[usize],
) -> Vec<(Vec<usize>, Vec<usize>)> {
    fn rec(
        g: &Multigraph,
        to: usize,
        forbidden: &[usize],
        vs: &mut Vec<usize>,
        es: &mut Vec<usize>,
        out: &mut Vec<(Vec<usize>, Vec<usize>)>,
    ) {
        let cur = *vs.last().unwrap();
        if cur == to {
            out.push((vs.clone(), es.clone()));
            return;
        }
        for (e, w) in g.incident(cur) {
            if w == cur || vs.contains(&w) || forbidden.contains(&w) {
                continue;
            }
            vs.push(w);
            es.push(e);
            rec(g, to, forbidden, vs, es, out);
            es.pop();
            vs.pop();
        }
    }
    let mut out = Vec::new();
    if forbidden.contains(&from) || forbidden.contains(&to) {
        return out;
    }
    rec(g, to, forbidden, &mut vec![from], &mut Vec::new(), &mut out);
    out
}

/// Edge partition into blocks (maximal 2-connected pieces, bridges and
/// loop bundles). Each block is a sorted list of edge indices.
pub fn blocks(g: &Multigraph) -> Vec<Vec<usize>> {
    // Edges u-v lie in the same block iff they lie on a common cycle; for
    // desk-scale graphs this is computed from cycle membership directly.
    let m = g.edges.len();
    let mut uf = UnionFind::new(m);
    for c in simple_cycles(g) {
        for w in c.edges.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let mut classes = uf.classes();
    classes.sort();
    classes
}

/// Lower bound for cr(g): one crossing per non-planar block.
pub fn block_crossing_lower_bound(g: &Multigraph) -> usize {
    blocks(g)
        .iter()
        .filter(|b| !is_planar_unchecked(&g.edge_subgraph(b)))
        .count()
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut x = x;
        while self.parent[x] != r {
            let next = self.parent[x];
            self.parent[x] = r;
            x = next;
        }
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    /// Classes sorted internally and by smallest element.
    pub(crate) fn classes(&mut self) -> Vec<Vec<usize>> {
        let mut map: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..self.parent.len() {
            let r = self.find(i);
            map.entry(r).or_default().push(i);
        }
        map.into_values().collect()
    }
}
