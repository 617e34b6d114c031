use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{Diagram, Draft, NodeKind, SlotRef};
use crate::multigraph::{Cycle, Multigraph, UnionFind};
use crate::{Error, Result};

/// One passage of a strand through a crossing: enters at `entry`, leaves
/// at the opposite slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pass {
    pub crossing: usize,
    pub entry: usize,
}

impl Pass {
    pub fn exit(&self) -> usize {
        (self.entry + 2) % 4
    }

    pub fn reversed(&self) -> Pass {
        Pass { crossing: self.crossing, entry: self.exit() }
    }
}

/// Strand from one vertex slot to another, straight through crossings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeTrace {
    pub start: SlotRef,
    pub end: SlotRef,
    pub passes: Vec<Pass>,
}

impl EdgeTrace {
    pub fn reversed(&self) -> EdgeTrace {
        EdgeTrace {
            start: self.end,
            end: self.start,
            passes: self.passes.iter().rev().map(Pass::reversed).collect(),
        }
    }
}

/// Decomposition of a diagram into strands.
///
/// `edges[i]` is the trace of edge `i` of the underlying multigraph (whose
/// vertices are the graph vertices ranked by label); `closed` holds the
/// strands that never meet a vertex, each starting at its smallest slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrandSet {
    pub vertex_nodes: Vec<usize>,
    pub graph: Multigraph,
    pub edges: Vec<EdgeTrace>,
    pub closed: Vec<Vec<Pass>>,
}

impl StrandSet {
    pub fn vertex_index(&self, node: usize) -> usize {
        self.vertex_nodes.iter().position(|&n| n == node).expect("vertex node")
    }
}

impl Diagram {
    fn trace_from(&self, start: SlotRef) -> Result<EdgeTrace> {
        let mut passes = Vec::new();
        let mut cur = self.mate(start);
        let limit = self.slots().count();
        while self.node(cur.node).is_crossing() {
            passes.push(Pass { crossing: cur.node, entry: cur.slot });
            if passes.len() > limit {
                return Err(Error::DanglingStrand);
            }
            cur = self.mate(SlotRef::new(cur.node, (cur.slot + 2) % 4));
        }
        Ok(EdgeTrace { start, end: cur, passes })
    }

    /// Closed strand starting by entering `start`.
    fn closed_from(&self, start: SlotRef) -> Vec<Pass> {
        let mut passes = Vec::new();
        let mut cur = start;
        loop {
            passes.push(Pass { crossing: cur.node, entry: cur.slot });
            cur = self.mate(SlotRef::new(cur.node, (cur.slot + 2) % 4));
            if cur == start {
                return passes;
            }
        }
    }

    pub fn strands(&self) -> StrandSet {
        let mut vertex_nodes: Vec<usize> = self.vertices().collect();
        vertex_nodes.sort_by_key(|&n| self.node(n).label());
        let rank = |node: usize| vertex_nodes.iter().position(|&v| v == node).unwrap();
        let mut used: HashSet<SlotRef> = HashSet::new();
        let mut traces = Vec::new();
        for &v in &vertex_nodes {
            for j in 0..self.node(v).degree() {
                let s = SlotRef::new(v, j);
                if used.contains(&s) {
                    continue;
                }
                let t = self.trace_from(s).expect("valid diagrams have no dangling strands");
                used.insert(t.start);
                used.insert(t.end);
                for p in &t.passes {
                    used.insert(SlotRef::new(p.crossing, p.entry));
                    used.insert(SlotRef::new(p.crossing, p.exit()));
                }
                // orient from the lower-ranked endpoint, ties by slot
                let t = if (rank(t.end.node), t.end.slot) < (rank(t.start.node), t.start.slot) {
                    t.reversed()
                } else {
                    t
                };
                traces.push(t);
            }
        }
        traces.sort_by_key(|t| (rank(t.start.node), rank(t.end.node), t.start.slot, t.end.slot));
        let graph = Multigraph::new(
            vertex_nodes.len(),
            traces.iter().map(|t| (rank(t.start.node), rank(t.end.node))),
        )
        .unwrap();
        let mut closed = Vec::new();
        for s in self.slots() {
            if !used.contains(&s) {
                let c = self.closed_from(s);
                for p in &c {
                    used.insert(SlotRef::new(p.crossing, p.entry));
                    used.insert(SlotRef::new(p.crossing, p.exit()));
                }
                closed.push(c);
            }
        }
        StrandSet { vertex_nodes, graph, edges: traces, closed }
    }

    /// Abstract graph of the diagram: graph vertices ranked by label,
    /// edges traced through crossings. Closed strands are not edges.
    pub fn underlying_graph(&self) -> Multigraph {
        self.strands().graph
    }

    /// Link components (closed strands followed by one empty entry per free
    /// loop), each oriented from its smallest slot.
    pub fn link_components(&self) -> Result<Vec<Vec<Pass>>> {
        if !self.is_link() {
            return Err(Error::NotALink);
        }
        let mut comps = self.strands().closed;
        comps.extend(std::iter::repeat_n(Vec::new(), self.free_loops()));
        Ok(comps)
    }

    /// Every component alternates over and under along its traversal.
    pub fn is_alternating(&self) -> Result<bool> {
        for comp in self.link_components()? {
            let overs: Vec<bool> = comp
                .iter()
                .map(|p| self.node(p.crossing).over().unwrap().contains(p.entry))
                .collect();
            let k = overs.len();
            if (0..k).any(|i| overs[i] == overs[(i + 1) % k]) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Crossings whose removal disconnects their piece of the map.
    pub fn nugatory_crossings(&self) -> Result<Vec<usize>> {
        if !self.is_link() {
            return Err(Error::NotALink);
        }
        let comps = self.map_components();
        let mut out = Vec::new();
        for comp in comps {
            for &p in &comp {
                if self.splits_without(&comp, p) {
                    out.push(p);
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    fn splits_without(&self, comp: &[usize], p: usize) -> bool {
        // Items: nodes of the piece other than p, plus one item per arc at p.
        let idx = |n: usize| comp.iter().position(|&c| c == n).unwrap();
        let k = comp.len();
        let mut uf = UnionFind::new(k + 4);
        for (a, b) in self.arcs() {
            if !comp.contains(&a.node) {
                continue;
            }
            match (a.node == p, b.node == p) {
                (false, false) => uf.union(idx(a.node), idx(b.node)),
                (true, false) => uf.union(k + a.slot, idx(b.node)),
                (false, true) => uf.union(idx(a.node), k + b.slot),
                (true, true) => uf.union(k + a.slot, k + b.slot),
            }
        }
        let mut roots = HashSet::new();
        for i in 0..k + 4 {
            if i < k && comp[i] == p {
                continue;
            }
            roots.insert(uf.find(i));
        }
        roots.len() > 1
    }

    pub fn is_reduced(&self) -> Result<bool> {
        Ok(self.nugatory_crossings()?.is_empty())
    }

    /// Connected as a map with no stray free loops (0-crossing unknot counts).
    pub fn is_connected(&self) -> bool {
        let pieces = self.map_components().len() + self.free_loops();
        pieces <= 1
    }
}

/// An arc of a diagram, named by one of its slots, or a free loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ArcRef {
    Slot(SlotRef),
    FreeLoop,
}

/// Cuts one arc in each diagram and splices the ends so the result is the
/// connected sum along those arcs. Crossing counts add.
pub fn connected_sum_diagrams(d1: &Diagram, a1: ArcRef, d2: &Diagram, a2: ArcRef) -> Result<Diagram> {
    if !d1.is_link() || !d2.is_link() {
        return Err(Error::NotALink);
    }
    let mut draft = Draft::from_diagram(d1);
    let off = draft.append(d2);
    let shift = |s: SlotRef| SlotRef::new(s.node + off, s.slot);
    match (a1, a2) {
        (ArcRef::FreeLoop, ArcRef::FreeLoop) => {
            check_loop(d1)?;
            check_loop(d2)?;
            draft.free_loops -= 1;
        }
        (ArcRef::FreeLoop, ArcRef::Slot(_)) => {
            check_loop(d1)?;
            draft.free_loops -= 1;
        }
        (ArcRef::Slot(_), ArcRef::FreeLoop) => {
            check_loop(d2)?;
            draft.free_loops -= 1;
        }
        (ArcRef::Slot(s1), ArcRef::Slot(s2)) => {
            let t1 = d1.mate(s1);
            let t2 = d2.mate(s2);
            draft.link(s1, shift(t2));
            draft.link(t1, shift(s2));
        }
    }
    draft.finish()
}

fn check_loop(d: &Diagram) -> Result<()> {
    if d.free_loops() == 0 {
        Err(Error::Invalid("diagram has no free loop".into()))
    } else {
        Ok(())
    }
}

/// Two-component link diagram traced by two vertex-disjoint cycles of the
/// underlying graph. Crossings between kept strands survive; the cycles
/// are smoothed through their vertices; everything else is dropped.
pub fn extract_sublink(d: &Diagram, c1: &Cycle, c2: &Cycle) -> Result<Diagram> {
    if c1.shares_vertex_with(c2) {
        return Err(Error::CyclesShareVertex);
    }
    let strands = d.strands();
    extract_cycles(d, &strands, &[c1, c2])
}

/// Sublink traced by pairwise vertex-disjoint cycles (one component each).
pub(crate) fn extract_cycles(d: &Diagram, strands: &StrandSet, cycles: &[&Cycle]) -> Result<Diagram> {
    let g = &strands.graph;
    if let Some(e) = cycles.iter().flat_map(|c| c.edges.iter()).find(|&&e| e >= g.edge_count()) {
        return Err(Error::Invalid(format!("no edge {e}")));
    }
    let mut paths = Vec::new();
    for c in cycles {
        let mut path: Vec<Pass> = Vec::new();
        for (i, &e) in c.edges.iter().enumerate() {
            let t = &strands.edges[e];
            let from = c.vertices[i];
            let forward = g.edges()[e].0 == g.edges()[e].1 || strands.vertex_index(t.start.node) == from;
            let trace = if forward { t.clone() } else { t.reversed() };
            path.extend(trace.passes);
        }
        paths.push(path);
    }
    sub_diagram(d, &paths)
}

/// Link diagram made of the given closed strands (cyclic pass lists).
/// Crossings met twice by the kept strands survive; all others are
/// smoothed away. An empty strand becomes a free loop.
pub(crate) fn sub_diagram(d: &Diagram, paths: &[Vec<Pass>]) -> Result<Diagram> {
    let mut passes_per_crossing = vec![0usize; d.nodes().len()];
    for p in paths.iter().flatten() {
        passes_per_crossing[p.crossing] += 1;
    }
    let mut draft = Draft::new();
    let mut new_index = vec![usize::MAX; d.nodes().len()];
    for (i, n) in d.nodes().iter().enumerate() {
        if let NodeKind::Crossing(o) = n.kind {
            if passes_per_crossing[i] == 2 {
                new_index[i] = draft.add_node(NodeKind::Crossing(o), 4);
            }
        }
    }
    for path in paths {
        let kept: Vec<Pass> = path.iter().copied().filter(|p| new_index[p.crossing] != usize::MAX).collect();
        if kept.is_empty() {
            draft.free_loops += 1;
            continue;
        }
        for i in 0..kept.len() {
            let a = kept[i];
            let b = kept[(i + 1) % kept.len()];
            draft.link(
                SlotRef::new(new_index[a.crossing], a.exit()),
                SlotRef::new(new_index[b.crossing], b.entry),
            );
        }
    }
    draft.finish()
}

/// The `2^c` over/under choices of a diagram, in binary-counter order:
/// bit `i` of the counter flips the `i`-th crossing (node order).
pub struct CrossingAssignments {
    base: Diagram,
    crossings: Vec<usize>,
    next: u64,
    total: u64,
}

impl Iterator for CrossingAssignments {
    type Item = (u64, Diagram);

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.total {
            return None;
        }
        let mask = self.next;
        self.next += 1;
        let mut d = self.base.clone();
        for (i, &c) in self.crossings.iter().enumerate() {
            if mask >> i & 1 == 1 {
                if let NodeKind::Crossing(o) = &mut d.nodes_mut()[c].kind {
                    *o = o.flip();
                }
            }
        }
        Some((mask, d))
    }
}

/// Enumerates all crossing assignments; fails if `2^c` exceeds `2^max_crossings`.
pub fn crossing_assignments(d: &Diagram, max_crossings: usize) -> Result<CrossingAssignments> {
    let crossings: Vec<usize> = d.crossings().collect();
    if crossings.len() > max_crossings || crossings.len() >= 64 {
        return Err(Error::BudgetExceeded(format!(
            "{} crossings exceeds the enumeration budget of {max_crossings}",
            crossings.len()
        )));
    }
    Ok(CrossingAssignments { base: d.clone(), total: 1u64 << crossings.len(), crossings, next: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hopf() -> Diagram {
        Diagram::parse(
            "diagram\ncrossing 13\ncrossing 13\narc 0.0 1.3\narc 0.1 1.2\narc 0.2 1.1\narc 0.3 1.0\n",
        )
        .unwrap()
    }

    fn kink() -> Diagram {
        Diagram::parse("diagram\ncrossing 02\narc 0.0 0.1\narc 0.2 0.3\n").unwrap()
    }

    fn triangle() -> Diagram {
        Diagram::parse(
            "diagram\nvertex 0 2\nvertex 1 2\nvertex 2 2\narc 0.0 1.1\narc 1.0 2.1\narc 2.0 0.1\n",
        )
        .unwrap()
    }

    #[test]
    fn hopf_components() {
        let d = hopf();
        assert_eq!(d.link_components().unwrap().len(), 2);
        assert!(d.is_alternating().unwrap());
        assert!(d.is_reduced().unwrap());
        let g = d.underlying_graph();
        assert_eq!((g.vertex_count(), g.edge_count()), (0, 0));
    }

    #[test]
    fn kink_is_not_reduced() {
        let d = kink();
        assert_eq!(d.link_components().unwrap().len(), 1);
        assert!(!d.is_reduced().unwrap());
    }

    #[test]
    fn triangle_graph() {
        let g = triangle().underlying_graph();
        assert_eq!(g, Multigraph::cycle(3));
        assert_eq!(triangle().is_alternating(), Err(Error::NotALink));
    }

    #[test]
    fn connected_sums() {
        let u = Diagram::unknot();
        let s = connected_sum_diagrams(&u, ArcRef::FreeLoop, &u, ArcRef::FreeLoop).unwrap();
        assert_eq!((s.crossing_count(), s.free_loops()), (0, 1));
        let h = hopf();
        let hh = connected_sum_diagrams(&h, ArcRef::Slot(SlotRef::new(0, 0)), &h, ArcRef::Slot(SlotRef::new(0, 0)))
            .unwrap();
        assert_eq!(hh.crossing_count(), 4);
        assert_eq!(hh.link_components().unwrap().len(), 3);
        assert_eq!(
            connected_sum_diagrams(&triangle(), ArcRef::FreeLoop, &u, ArcRef::FreeLoop),
            Err(Error::NotALink)
        );
    }

    #[test]
    fn assignments_count_and_budget() {
        assert_eq!(crossing_assignments(&Diagram::unknot(), 16).unwrap().count(), 1);
        let hh = {
            let h = hopf();
            let k = kink();
            connected_sum_diagrams(&h, ArcRef::Slot(SlotRef::new(0, 0)), &k, ArcRef::Slot(SlotRef::new(0, 0)))
                .unwrap()
        };
        assert_eq!(crossing_assignments(&hh, 16).unwrap().count(), 8);
        assert!(matches!(crossing_assignments(&hh, 2), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn sublink_of_two_triangles() {
        let text = "diagram\nvertex 0 2\nvertex 1 2\nvertex 2 2\nvertex 3 2\nvertex 4 2\nvertex 5 2\n\
                    arc 0.0 1.1\narc 1.0 2.1\narc 2.0 0.1\narc 3.0 4.1\narc 4.0 5.1\narc 5.0 3.1\n";
        let d = Diagram::parse(text).unwrap();
        let cycles = crate::multigraph::simple_cycles(&d.underlying_graph());
        assert_eq!(cycles.len(), 2);
        let s = extract_sublink(&d, &cycles[0], &cycles[1]).unwrap();
        assert_eq!((s.crossing_count(), s.free_loops()), (0, 2));
        assert_eq!(extract_sublink(&d, &cycles[0], &cycles[0]), Err(Error::CyclesShareVertex));
    }
}
