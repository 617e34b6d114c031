//! Two-page book drawings of multigraphs.
//!
//! Vertices sit on the spine at their positions and every edge is an arc in
//! the upper or lower page. Two arcs on one page cross exactly when their
//! endpoints strictly interleave. Over/under data is descending: of two
//! different edges, the one earlier in edge order passes over.

use serde::{Deserialize, Serialize};

use super::{Diagram, Draft, NodeKind, Over, SlotRef};
use crate::multigraph::{Multigraph, UnionFind};
use crate::{Error, Result};

const EXHAUSTIVE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BookLayout {
    /// `positions[v]` is the spine position of vertex `v`.
    pub positions: Vec<usize>,
    /// `upper[e]` places edge `e` in the upper page.
    pub upper: Vec<bool>,
}

impl BookLayout {
    /// Layout at the given positions with a crossing-minimal page choice.
    pub fn minimal(g: &Multigraph, positions: Vec<usize>) -> Result<BookLayout> {
        let upper = page_assignments(g, &positions)?;
        Ok(BookLayout { positions, upper })
    }

    pub fn crossing_count(&self, g: &Multigraph) -> usize {
        let e = g.edges();
        let mut count = 0;
        for i in 0..e.len() {
            for j in i + 1..e.len() {
                if self.upper[i] == self.upper[j] && interleave(span(&self.positions, e[i]), span(&self.positions, e[j])) {
                    count += 1;
                }
            }
        }
        count
    }
}

fn span(pos: &[usize], (u, v): (usize, usize)) -> (usize, usize) {
    let (a, b) = (pos[u], pos[v]);
    (a.min(b), a.max(b))
}

fn interleave((a, b): (usize, usize), (c, d): (usize, usize)) -> bool {
    (a < c && c < b && b < d) || (c < a && a < d && d < b)
}

fn check_positions(g: &Multigraph, positions: &[usize]) -> Result<()> {
    let mut seen = positions.to_vec();
    seen.sort_unstable();
    if positions.len() != g.vertex_count() || seen.iter().enumerate().any(|(i, &p)| i != p) {
        return Err(Error::Invalid("positions must be a permutation of the vertices".into()));
    }
    Ok(())
}

/// Page of each edge minimizing same-page interleavings: exhaustive on each
/// component of the conflict graph up to 20 edges, greedy beyond.
pub fn page_assignments(g: &Multigraph, positions: &[usize]) -> Result<Vec<bool>> {
    check_positions(g, positions)?;
    let e = g.edges();
    let m = e.len();
    let mut conflicts = vec![Vec::new(); m];
    let mut uf = UnionFind::new(m);
    for i in 0..m {
        for j in i + 1..m {
            if interleave(span(positions, e[i]), span(positions, e[j])) {
                conflicts[i].push(j);
                conflicts[j].push(i);
                uf.union(i, j);
            }
        }
    }
    let mut upper = vec![true; m];
    for comp in uf.classes() {
        if comp.len() <= 1 {
            continue;
        }
        let local: Vec<Vec<usize>> = comp
            .iter()
            .map(|&i| conflicts[i].iter().map(|j| comp.iter().position(|c| c == j).unwrap()).collect())
            .collect();
        let choice = if comp.len() <= EXHAUSTIVE_LIMIT { exhaustive(&local) } else { greedy(&local) };
        for (k, &i) in comp.iter().enumerate() {
            upper[i] = choice >> k & 1 == 0;
        }
    }
    Ok(upper)
}

fn cost(adj: &[Vec<usize>], mask: u64) -> usize {
    let mut c = 0;
    for (i, ns) in adj.iter().enumerate() {
        for &j in ns {
            if i < j && (mask >> i & 1) == (mask >> j & 1) {
                c += 1;
            }
        }
    }
    c
}

fn exhaustive(adj: &[Vec<usize>]) -> u64 {
    // bit 0 fixed: the two pages are interchangeable
    let n = adj.len();
    let mut best = (usize::MAX, 0);
    for half in 0..1u64 << (n - 1) {
        let mask = half << 1;
        let c = cost(adj, mask);
        if c < best.0 {
            best = (c, mask);
            if c == 0 {
                break;
            }
        }
    }
    best.1
}

fn greedy(adj: &[Vec<usize>]) -> u64 {
    let mut mask = 0u64;
    loop {
        let mut improved = false;
        for i in 0..adj.len() {
            let same = adj[i].iter().filter(|&&j| (mask >> i & 1) == (mask >> j & 1)).count();
            if 2 * same > adj[i].len() {
                mask ^= 1 << i;
                improved = true;
            }
        }
        if !improved {
            return mask;
        }
    }
}

/// One drawn edge: spine coordinates, page and height factor.
struct Curve {
    left: usize,
    right: usize,
    l: f64,
    r: f64,
    h: f64,
    upper: bool,
}

impl Curve {
    fn height2(&self, x: f64) -> f64 {
        self.h * self.h * (x - self.l) * (self.r - x)
    }

    /// Outward size near either endpoint; larger is further out.
    fn nesting_key(&self) -> f64 {
        self.h * self.h * (self.r - self.l)
    }
}

/// Spine coordinate where two interleaving curves meet.
fn meet(p: &Curve, q: &Curve) -> f64 {
    let (p, q) = if p.l < q.l { (p, q) } else { (q, p) };
    let (mut lo, mut hi) = (q.l, p.r);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if p.height2(mid) - q.height2(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn coordinate(p: usize) -> f64 {
    // small generic offsets keep meeting points distinct
    p as f64 + 1e-3 * ((p * p + 1) as f64 * 0.618_033_988_75).fract()
}

/// Descending diagram of the book drawing. Vertex `v` carries label `v`.
pub fn book_diagram(g: &Multigraph, layout: &BookLayout) -> Result<Diagram> {
    check_positions(g, &layout.positions)?;
    let e = g.edges();
    if layout.upper.len() != e.len() {
        return Err(Error::Invalid("one page per edge expected".into()));
    }
    let pos = &layout.positions;
    let mut copies = std::collections::HashMap::new();
    let curves: Vec<Curve> = e
        .iter()
        .enumerate()
        .map(|(i, &(u, v))| {
            let (left, right) = if pos[u] <= pos[v] { (u, v) } else { (v, u) };
            let k = copies.entry((left, right, layout.upper[i])).or_insert(0usize);
            *k += 1;
            Curve {
                left,
                right,
                l: coordinate(pos[left]),
                r: coordinate(pos[right]),
                h: 1.0 + 1e-6 * *k as f64,
                upper: layout.upper[i],
            }
        })
        .collect();

    // Rotation at each vertex: upper right arcs inner first, loops, upper
    // left arcs outer first, lower left arcs inner first, lower right arcs
    // outer first.
    let n = g.vertex_count();
    let mut ends: Vec<Vec<(u8, f64, usize, usize)>> = vec![Vec::new(); n];
    for (i, c) in curves.iter().enumerate() {
        if c.left == c.right {
            ends[c.left].push((1, 0.0, i, 0));
            ends[c.left].push((1, 0.0, i, 1));
            continue;
        }
        let key = c.nesting_key();
        let (rk, lk) = if c.upper { ((0, key), (2, -key)) } else { ((4, -key), (3, key)) };
        ends[c.left].push((rk.0, rk.1, i, 0));
        ends[c.right].push((lk.0, lk.1, i, 1));
    }
    let mut draft = Draft::new();
    let mut end_slot = vec![[SlotRef::new(0, 0); 2]; e.len()];
    for (v, list) in ends.iter_mut().enumerate() {
        list.sort_by(|a, b| (a.0, a.1, a.2, a.3).partial_cmp(&(b.0, b.1, b.2, b.3)).unwrap());
        let node = draft.add_node(NodeKind::Vertex { label: v }, list.len());
        for (j, &(_, _, i, side)) in list.iter().enumerate() {
            end_slot[i][side] = SlotRef::new(node, j);
        }
    }

    // Crossings: p starts left of q. Slots ccw: p out, q, p in, q; q's
    // outgoing direction is slot 1 in the upper page and slot 3 below.
    let mut along: Vec<Vec<(f64, SlotRef, SlotRef)>> = vec![Vec::new(); e.len()];
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            let (a, b) = (&curves[i], &curves[j]);
            if a.upper != b.upper || !interleave(span(pos, e[i]), span(pos, e[j])) {
                continue;
            }
            let x = meet(a, b);
            let (p, q) = if a.l < b.l { (i, j) } else { (j, i) };
            let over = if i == p { Over::Even } else { Over::Odd };
            let c = draft.add_node(NodeKind::Crossing(over), 4);
            let (q_in, q_out) = if curves[p].upper { (3, 1) } else { (1, 3) };
            along[p].push((x, SlotRef::new(c, 2), SlotRef::new(c, 0)));
            along[q].push((x, SlotRef::new(c, q_in), SlotRef::new(c, q_out)));
        }
    }
    for (i, list) in along.iter_mut().enumerate() {
        list.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut prev = end_slot[i][0];
        for &(_, entry, exit) in list.iter() {
            draft.link(prev, entry);
            prev = exit;
        }
        draft.link(prev, end_slot[i][1]);
    }
    draft.finish()
}
