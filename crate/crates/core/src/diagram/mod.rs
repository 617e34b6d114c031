//! Plane graph diagrams as rotation systems.
//!
//! A [`Diagram`] is a list of nodes, each with its slots listed in
//! counterclockwise order, plus an involution pairing slots into arcs.
//! Nodes are either crossings (four slots, straight-through strands `0-2`
//! and `1-3`, one of them designated over) or graph vertices of any degree.
//! Closed strands that meet no node at all are kept as a count of free
//! loops. Every connected piece of the map lives on its own sphere and must
//! satisfy Euler's formula there.

mod build;
mod draft;
mod format;
mod ops;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::multigraph::UnionFind;
use crate::{Error, Result};

pub use build::{book_diagram, page_assignments, BookLayout};
pub(crate) use draft::Draft;
pub(crate) use ops::{extract_cycles, sub_diagram};
pub use format::DiagramJson;
pub use ops::{
    connected_sum_diagrams, crossing_assignments, extract_sublink, ArcRef, CrossingAssignments,
    EdgeTrace, Pass, StrandSet,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SlotRef {
    pub node: usize,
    pub slot: usize,
}

impl SlotRef {
    pub const fn new(node: usize, slot: usize) -> Self {
        SlotRef { node, slot }
    }
}

impl std::fmt::Display for SlotRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}.{}", self.node, self.slot)
    }
}

/// Which straight-through pair of a crossing is the over strand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Over {
    /// Slots 0 and 2.
    Even,
    /// Slots 1 and 3.
    Odd,
}

impl Over {
    pub fn flip(self) -> Over {
        match self {
            Over::Even => Over::Odd,
            Over::Odd => Over::Even,
        }
    }

    pub fn contains(self, slot: usize) -> bool {
        (slot % 2 == 1) == (self == Over::Odd)
    }

    /// The designation whose pair contains `slot`.
    pub fn through(slot: usize) -> Over {
        if slot % 2 == 0 {
            Over::Even
        } else {
            Over::Odd
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    Crossing(Over),
    Vertex { label: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Node {
    pub kind: NodeKind,
    /// Partner slot of each slot, in counterclockwise order.
    pub links: Vec<SlotRef>,
}

impl Node {
    pub fn degree(&self) -> usize {
        self.links.len()
    }

    pub fn is_crossing(&self) -> bool {
        matches!(self.kind, NodeKind::Crossing(_))
    }

    pub fn over(&self) -> Option<Over> {
        match self.kind {
            NodeKind::Crossing(o) => Some(o),
            NodeKind::Vertex { .. } => None,
        }
    }

    pub fn label(&self) -> Option<usize> {
        match self.kind {
            NodeKind::Vertex { label } => Some(label),
            NodeKind::Crossing(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagram {
    nodes: Vec<Node>,
    free_loops: usize,
}

/// Mode for canonical keys: keep or forget over/under data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KeyMode {
    Full,
    Shadow,
}

impl Diagram {
    /// Builds and validates a diagram.
    pub fn from_parts(nodes: Vec<Node>, free_loops: usize) -> Result<Self> {
        let d = Diagram { nodes, free_loops };
        d.validate()?;
        Ok(d)
    }

    pub(crate) fn from_parts_unchecked(nodes: Vec<Node>, free_loops: usize) -> Self {
        Diagram { nodes, free_loops }
    }

    /// `k` disjoint crossing-free circles.
    pub fn unlink(k: usize) -> Self {
        Diagram { nodes: Vec::new(), free_loops: k }
    }

    pub fn unknot() -> Self {
        Self::unlink(1)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Node {
        &self.nodes[i]
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn mate(&self, s: SlotRef) -> SlotRef {
        self.nodes[s.node].links[s.slot]
    }

    pub fn crossing_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_crossing()).count()
    }

    pub fn crossings(&self) -> impl Iterator<Item = usize> + '_ {
        self.nodes.iter().enumerate().filter(|(_, n)| n.is_crossing()).map(|(i, _)| i)
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.nodes.iter().enumerate().filter(|(_, n)| !n.is_crossing()).map(|(i, _)| i)
    }

    pub fn is_link(&self) -> bool {
        self.nodes.iter().all(Node::is_crossing)
    }

    /// Node index of the graph vertex with the given label.
    pub fn vertex_node(&self, label: usize) -> Option<usize> {
        self.nodes.iter().position(|n| n.label() == Some(label))
    }

    pub fn slots(&self) -> impl Iterator<Item = SlotRef> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .flat_map(|(i, n)| (0..n.degree()).map(move |j| SlotRef::new(i, j)))
    }

    /// Arcs as slot pairs `(a, b)` with `a < b`, sorted.
    pub fn arcs(&self) -> Vec<(SlotRef, SlotRef)> {
        let mut out: Vec<_> = self
            .slots()
            .filter_map(|s| {
                let t = self.mate(s);
                (s < t).then_some((s, t))
            })
            .collect();
        out.sort();
        out
    }

    pub(crate) fn next_ccw(&self, s: SlotRef) -> SlotRef {
        SlotRef::new(s.node, (s.slot + 1) % self.nodes[s.node].degree())
    }

    pub(crate) fn nodes_mut(&mut self) -> &mut Vec<Node> {
        &mut self.nodes
    }

    pub fn validate(&self) -> Result<()> {
        let mut labels = Vec::new();
        for (i, n) in self.nodes.iter().enumerate() {
            match n.kind {
                NodeKind::Crossing(_) if n.degree() != 4 => {
                    return Err(Error::Topology(format!("crossing {i} has {} slots", n.degree())));
                }
                NodeKind::Vertex { label } => labels.push(label),
                _ => {}
            }
            for (j, &t) in n.links.iter().enumerate() {
                let s = SlotRef::new(i, j);
                if t.node >= self.nodes.len() || t.slot >= self.nodes[t.node].degree() {
                    return Err(Error::Topology(format!("slot {s} links to missing slot {t}")));
                }
                if t == s {
                    return Err(Error::Topology(format!("slot {s} is paired with itself")));
                }
                if self.mate(t) != s {
                    return Err(Error::Topology(format!("pairing is not an involution at {s}")));
                }
            }
        }
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Topology("duplicate vertex label".into()));
        }
        for (comp, chi) in self.euler_characteristics() {
            if chi != 2 {
                return Err(Error::Topology(format!(
                    "component containing node {} has Euler characteristic {chi}",
                    comp[0]
                )));
            }
        }
        Ok(())
    }

    /// Connected pieces of the map as sorted node lists.
    pub fn map_components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.nodes.len());
        for (s, t) in self.arcs() {
            uf.union(s.node, t.node);
        }
        uf.classes()
    }

    /// Faces as dart orbits of `s -> next_ccw(mate(s))`.
    pub fn faces(&self) -> Vec<Vec<SlotRef>> {
        let mut seen: Vec<Vec<bool>> = self.nodes.iter().map(|n| vec![false; n.degree()]).collect();
        let mut faces = Vec::new();
        for s in self.slots() {
            if seen[s.node][s.slot] {
                continue;
            }
            let mut face = Vec::new();
            let mut cur = s;
            while !seen[cur.node][cur.slot] {
                seen[cur.node][cur.slot] = true;
                face.push(cur);
                cur = self.next_ccw(self.mate(cur));
            }
            faces.push(face);
        }
        faces
    }

    fn euler_characteristics(&self) -> Vec<(Vec<usize>, i64)> {
        let comps = self.map_components();
        let mut comp_of = vec![0; self.nodes.len()];
        for (ci, c) in comps.iter().enumerate() {
            for &n in c {
                comp_of[n] = ci;
            }
        }
        let mut faces = vec![0i64; comps.len()];
        for f in self.faces() {
            faces[comp_of[f[0].node]] += 1;
        }
        comps
            .into_iter()
            .enumerate()
            .map(|(ci, c)| {
                let v = c.len() as i64;
                let darts: usize = c.iter().map(|&n| self.nodes[n].degree()).sum();
                let e = darts as i64 / 2;
                // An isolated vertex bounds a single face with no darts.
                let f = if darts == 0 { 1 } else { faces[ci] };
                (c, v - e + f)
            })
            .collect()
    }

    /// Same diagram with one crossing's over/under data flipped.
    pub fn with_crossing_changed(&self, c: usize) -> Result<Diagram> {
        let mut d = self.clone();
        match &mut d.nodes.get_mut(c).map(|n| &mut n.kind) {
            Some(NodeKind::Crossing(o)) => *o = o.flip(),
            _ => return Err(Error::Invalid(format!("node {c} is not a crossing"))),
        }
        Ok(d)
    }

    /// Forgets over/under data (all crossings set to `Over::Even`).
    pub fn shadow(&self) -> Diagram {
        let mut d = self.clone();
        for n in &mut d.nodes {
            if let NodeKind::Crossing(o) = &mut n.kind {
                *o = Over::Even;
            }
        }
        d
    }

    /// Canonical form up to orientation-preserving relabeling of nodes and
    /// rotation of slots, together with its key.
    pub fn canonical(&self, mode: KeyMode) -> (Diagram, Vec<u32>) {
        let mut pieces: Vec<(Vec<u32>, Vec<(usize, usize)>)> = self
            .map_components()
            .into_iter()
            .map(|comp| self.canonical_component(&comp, mode))
            .collect();
        pieces.sort();
        let mut key = vec![self.free_loops as u32, pieces.len() as u32];
        // order: (old node, base slot) in canonical order
        let mut order: Vec<(usize, usize)> = Vec::new();
        for (code, nodes) in &pieces {
            key.push(code.len() as u32);
            key.extend_from_slice(code);
            order.extend_from_slice(nodes);
        }
        let mut new_index = vec![0; self.nodes.len()];
        for (ni, &(old, _)) in order.iter().enumerate() {
            new_index[old] = ni;
        }
        let base_of: Vec<usize> = {
            let mut b = vec![0; self.nodes.len()];
            for &(old, base) in &order {
                b[old] = base;
            }
            b
        };
        let nodes = order
            .iter()
            .map(|&(old, base)| {
                let n = &self.nodes[old];
                let deg = n.degree();
                let kind = match n.kind {
                    NodeKind::Crossing(_) if mode == KeyMode::Shadow => NodeKind::Crossing(Over::Even),
                    NodeKind::Crossing(o) => NodeKind::Crossing(if base % 2 == 1 { o.flip() } else { o }),
                    k => k,
                };
                let links = (0..deg)
                    .map(|j| {
                        let t = n.links[(j + base) % deg];
                        let tdeg = self.nodes[t.node].degree();
                        SlotRef::new(new_index[t.node], (t.slot + tdeg - base_of[t.node]) % tdeg)
                    })
                    .collect();
                Node { kind, links }
            })
            .collect();
        (Diagram { nodes, free_loops: self.free_loops }, key)
    }

    pub fn canonical_key(&self, mode: KeyMode) -> Vec<u32> {
        self.canonical(mode).1
    }

    fn node_code(&self, node: usize, base: usize, mode: KeyMode, out: &mut Vec<u32>) {
        match self.nodes[node].kind {
            NodeKind::Crossing(o) => {
                let code = match mode {
                    KeyMode::Shadow => 1,
                    KeyMode::Full => 1 + o.contains(base) as u32,
                };
                out.push(code);
            }
            NodeKind::Vertex { label } => {
                out.push(3);
                out.push(label as u32);
                out.push(self.nodes[node].degree() as u32);
            }
        }
    }

    /// Minimal traversal code over all starting darts of one map component.
    fn canonical_component(&self, comp: &[usize], mode: KeyMode) -> (Vec<u32>, Vec<(usize, usize)>) {
        let starts: Vec<SlotRef> = comp
            .iter()
            .flat_map(|&n| (0..self.nodes[n].degree()).map(move |j| SlotRef::new(n, j)))
            .collect();
        if starts.is_empty() {
            let mut code = Vec::new();
            self.node_code(comp[0], 0, mode, &mut code);
            return (code, vec![(comp[0], 0)]);
        }
        let mut best: Option<(Vec<u32>, Vec<(usize, usize)>)> = None;
        let mut number = vec![usize::MAX; self.nodes.len()];
        for s in starts {
            let (code, order) = self.traversal_code(s, mode, &mut number);
            for &(n, _) in &order {
                number[n] = usize::MAX;
            }
            if best.as_ref().is_none_or(|(b, _)| code < *b) {
                best = Some((code, order));
            }
        }
        best.unwrap()
    }

    fn traversal_code(
        &self,
        start: SlotRef,
        mode: KeyMode,
        number: &mut [usize],
    ) -> (Vec<u32>, Vec<(usize, usize)>) {
        let mut order = vec![(start.node, start.slot)];
        number[start.node] = 0;
        let mut code = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            let (node, base) = order[k];
            let deg = self.nodes[node].degree();
            self.node_code(node, base, mode, &mut code);
            for j in 0..deg {
                let t = self.nodes[node].links[(base + j) % deg];
                if number[t.node] == usize::MAX {
                    number[t.node] = order.len();
                    order.push((t.node, t.slot));
                    queue.push_back(number[t.node]);
                }
                let (_, tbase) = order[number[t.node]];
                let tdeg = self.nodes[t.node].degree();
                code.push(number[t.node] as u32);
                code.push(((t.slot + tdeg - tbase) % tdeg) as u32);
            }
        }
        (code, order)
    }
}
