//! Non-planarity criterion at a degree-four vertex, the crossing-number
//! driver over automorphism rewirings, and additivity checks.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::diagram::{book_diagram, crossing_assignments, BookLayout, Diagram, KeyMode, SlotRef};
use crate::invariants::{cr_at_least_two, crossing_lower_bound, crossing_number_exact, CrTwoCertificate};
use crate::moves::Budget;
use crate::multigraph::{
    all_automorphisms, block_crossing_lower_bound, disjoint_union, minimalizability_status, one_point_union,
    planarity_oracle, simple_cycles, Cycle, MinimalizabilityStatus, Multigraph, DEFAULT_VERTEX_LIMIT,
};
use crate::tangle::{substitute, RationalTangle, VertexOrientation};
use crate::{Error, Result};

/// Largest crossing count whose `2^c` assignments are enumerated.
pub const DEFAULT_ASSIGNMENT_LIMIT: usize = 16;

/// Cycles through the four neighbouring edge pairs at a vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionIWitness {
    /// Graph vertex index of the vertex.
    pub vertex_index: usize,
    /// Graph edge at each slot, in rotation order.
    pub edges: [usize; 4],
    /// `cycles[k]` contains `edges[k]` and `edges[(k + 1) % 4]`.
    pub cycles: [Cycle; 4],
}

/// Degree-4 vertex node with its graph index and the edge at each slot.
fn vertex_edges(d: &Diagram, label: usize) -> Result<(usize, [usize; 4])> {
    let node = d.vertex_node(label).ok_or(Error::InvalidVertex(label))?;
    let degree = d.node(node).degree();
    if degree != 4 {
        return Err(Error::WrongDegree { vertex: label, degree });
    }
    let strands = d.strands();
    let mut edges = [0; 4];
    for (j, e) in edges.iter_mut().enumerate() {
        let s = SlotRef::new(node, j);
        *e = strands.edges.iter().position(|t| t.start == s || t.end == s).expect("every slot starts a strand");
    }
    Ok((strands.vertex_index(node), edges))
}

fn is_cycle_of(g: &Multigraph, c: &Cycle) -> bool {
    let n = c.vertices.len();
    if n == 0 || n != c.edges.len() {
        return false;
    }
    let distinct: HashSet<usize> = c.vertices.iter().copied().collect();
    let distinct_edges: HashSet<usize> = c.edges.iter().copied().collect();
    distinct.len() == n
        && distinct_edges.len() == n
        && c.edges.iter().enumerate().all(|(i, &e)| {
            let Some(&(u, v)) = g.edges().get(e) else { return false };
            let (a, b) = (c.vertices[i], c.vertices[(i + 1) % n]);
            (u, v) == (a.min(b), a.max(b)) || (u, v) == (a, b) || (u, v) == (b, a)
        })
}

fn meet_only_at(a: &Cycle, b: &Cycle, v: usize) -> bool {
    a.vertices.iter().all(|x| *x == v || !b.vertices.contains(x))
}

/// Cycles of the underlying graph through each neighbouring pair of edges
/// at `vertex`, with the cycles of opposite pairs meeting only there.
pub fn condition_i(d: &Diagram, vertex: usize) -> Result<Option<ConditionIWitness>> {
    let (vi, edges) = vertex_edges(d, vertex)?;
    let cycles = simple_cycles(&d.underlying_graph());
    let through: Vec<Vec<&Cycle>> = (0..4)
        .map(|k| {
            let (e, f) = (edges[k], edges[(k + 1) % 4]);
            cycles.iter().filter(|c| c.contains_edge(e) && c.contains_edge(f)).collect()
        })
        .collect();
    let pick = |k: usize| -> Option<(Cycle, Cycle)> {
        through[k].iter().find_map(|a| {
            through[k + 2].iter().find(|b| meet_only_at(a, b, vi)).map(|b| ((*a).clone(), (*b).clone()))
        })
    };
    let (Some((c0, c2)), Some((c1, c3))) = (pick(0), pick(1)) else { return Ok(None) };
    Ok(Some(ConditionIWitness { vertex_index: vi, edges, cycles: [c0, c1, c2, c3] }))
}

impl ConditionIWitness {
    pub fn verify(&self, d: &Diagram, vertex: usize) -> Result<()> {
        let fail = |m: &str| Err(Error::Invalid(format!("condition i witness rejected: {m}")));
        let (vi, edges) = vertex_edges(d, vertex)?;
        if vi != self.vertex_index || edges != self.edges {
            return fail("edges at the vertex differ");
        }
        let g = d.underlying_graph();
        for (k, c) in self.cycles.iter().enumerate() {
            if !is_cycle_of(&g, c) {
                return fail("not a cycle of the underlying graph");
            }
            if !c.contains_edge(edges[k]) || !c.contains_edge(edges[(k + 1) % 4]) {
                return fail("cycle misses a required edge");
            }
        }
        for k in 0..2 {
            if !meet_only_at(&self.cycles[k], &self.cycles[k + 2], vi) {
                return fail("opposite cycles share a vertex other than the given one");
            }
        }
        Ok(())
    }
}

/// Evidence for one crossing assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentWitness {
    /// Bit `i` set when the `i`-th crossing is flipped.
    pub mask: u64,
    /// `1` or its mirror.
    pub tangle: RationalTangle,
    pub certificate: CrTwoCertificate,
}

/// For every crossing assignment, a choice of `1` or its mirror at the
/// vertex whose substituted diagram provably has two or more crossings.
/// `None` when some assignment defeats both.
pub fn condition_ii(d: &Diagram, o: VertexOrientation, max_crossings: usize) -> Result<Option<Vec<AssignmentWitness>>> {
    vertex_edges(d, o.vertex)?;
    let mut out = Vec::new();
    for (mask, assigned) in crossing_assignments(d, max_crossings)? {
        let mut found = None;
        for r in [RationalTangle::one(), RationalTangle::one_bar()] {
            if let Some(certificate) = cr_at_least_two(&substitute(&assigned, o, &r)?)? {
                found = Some(AssignmentWitness { mask, tangle: r, certificate });
                break;
            }
        }
        match found {
            Some(w) => out.push(w),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// Replayable proof that the underlying graph of a diagram is non-planar,
/// valid when the graph is minimalizable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonPlanarCertificate {
    pub orientation: VertexOrientation,
    /// The diagram in text form; masks refer to its crossing order.
    pub diagram: String,
    /// Sufficient condition for minimalizability met by the graph, if any.
    pub minimalizability: MinimalizabilityStatus,
    pub condition_i: ConditionIWitness,
    pub per_assignment: Vec<AssignmentWitness>,
}

impl NonPlanarCertificate {
    pub fn diagram(&self) -> Result<Diagram> {
        Diagram::parse(&self.diagram)
    }

    /// Replays every witness without searching.
    pub fn verify(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Invalid(format!("certificate rejected: {m}")));
        let d = self.diagram()?;
        let o = self.orientation;
        self.condition_i.verify(&d, o.vertex)?;
        if minimalizability_status(&d.underlying_graph())? != self.minimalizability {
            return fail("minimalizability status differs");
        }
        let assignments = crossing_assignments(&d, 63)?;
        let total = 1u64 << d.crossing_count();
        if self.per_assignment.len() as u64 != total {
            return fail("assignments missing");
        }
        for ((mask, assigned), w) in assignments.zip(&self.per_assignment) {
            if w.mask != mask {
                return fail("assignments out of order");
            }
            let r = &w.tangle;
            r.validate()?;
            if *r != RationalTangle::one() && *r != RationalTangle::one_bar() {
                return fail("substituted tangle must be 1 or its mirror");
            }
            w.certificate.verify(&substitute(&assigned, o, r)?)?;
        }
        Ok(())
    }

    /// [`verify`](Self::verify), after checking the certificate is about `d`.
    pub fn verify_for(&self, d: &Diagram) -> Result<()> {
        if self.diagram()? != *d {
            return Err(Error::Invalid("certificate is for a different diagram".into()));
        }
        self.verify()
    }
}

/// Both conditions at the oriented vertex. `None` is inconclusive.
pub fn check_nonplanar(d: &Diagram, o: VertexOrientation) -> Result<Option<NonPlanarCertificate>> {
    check_nonplanar_with(d, o, DEFAULT_ASSIGNMENT_LIMIT)
}

pub fn check_nonplanar_with(
    d: &Diagram,
    o: VertexOrientation,
    max_crossings: usize,
) -> Result<Option<NonPlanarCertificate>> {
    if o.a_slot >= 4 {
        return Err(Error::Invalid(format!("slot {} out of range", o.a_slot)));
    }
    let Some(condition_i) = condition_i(d, o.vertex)? else { return Ok(None) };
    let Some(per_assignment) = condition_ii(d, o, max_crossings)? else { return Ok(None) };
    Ok(Some(NonPlanarCertificate {
        orientation: o,
        diagram: d.to_string(),
        minimalizability: minimalizability_status(&d.underlying_graph())?,
        condition_i,
        per_assignment,
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SubproblemOutcome {
    Exact { value: usize },
    /// Skipped: its lower bound cannot beat the best value already found.
    Pruned { lower: usize },
    /// The bounded search finished without the bounds meeting.
    Open { lower: usize },
    BudgetExceeded { lower: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subproblem {
    /// Vertex `v` is placed at spine position `automorphism[v]`.
    pub automorphism: Vec<usize>,
    pub mask: u64,
    pub crossings: usize,
    #[serde(flatten)]
    pub outcome: SubproblemOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DriverOutcome {
    /// `None` when some subproblem stayed open and the minimum is unproven.
    pub value: Option<usize>,
    /// Best value among resolved subproblems.
    pub best: Option<usize>,
    /// Lower bound for the graph from planarity of its blocks.
    pub lower_bound: usize,
    pub transcript: Vec<Subproblem>,
}

/// Graph-level lower bound: non-planar blocks each force a crossing.
fn graph_lower_bound(g: &Multigraph) -> Result<usize> {
    if planarity_oracle(g)? {
        Ok(0)
    } else {
        Ok(block_crossing_lower_bound(g).max(1))
    }
}

/// Minimum of the exact crossing numbers over every automorphism rewiring
/// of a base book drawing and every crossing assignment of each.
pub fn enumerated_crossing_number(g: &Multigraph, budget: &Budget) -> Result<DriverOutcome> {
    let lower_bound = graph_lower_bound(g)?;
    let mut best: Option<usize> = None;
    let mut unresolved = false;
    let mut transcript = Vec::new();
    let mut seen = HashSet::new();
    for p in all_automorphisms(g, DEFAULT_VERTEX_LIMIT)? {
        let layout = BookLayout::minimal(g, p.image().to_vec())?;
        let base = book_diagram(g, &layout)?;
        if !seen.insert(base.canonical_key(KeyMode::Full)) {
            continue;
        }
        for (mask, d) in crossing_assignments(&base, budget.max_crossings)? {
            let lower = crossing_lower_bound(&d)?.max(lower_bound);
            let outcome = if best.is_some_and(|b| lower >= b) {
                SubproblemOutcome::Pruned { lower }
            } else {
                match crossing_number_exact(&d, budget) {
                    Ok(Some(value)) => {
                        best = Some(best.map_or(value, |b| b.min(value)));
                        SubproblemOutcome::Exact { value }
                    }
                    Ok(None) => {
                        unresolved = true;
                        SubproblemOutcome::Open { lower }
                    }
                    Err(Error::BudgetExceeded(_)) => {
                        unresolved = true;
                        SubproblemOutcome::BudgetExceeded { lower }
                    }
                    Err(e) => return Err(e),
                }
            };
            transcript.push(Subproblem {
                automorphism: p.image().to_vec(),
                mask,
                crossings: d.crossing_count(),
                outcome,
            });
            if best == Some(lower_bound) {
                return Ok(DriverOutcome { value: best, best, lower_bound, transcript });
            }
        }
    }
    let value = if unresolved { None } else { best };
    Ok(DriverOutcome { value, best, lower_bound, transcript })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnionKind {
    Disjoint,
    /// Vertex 0 of both graphs identified.
    OnePoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdditivityReport {
    pub kind: UnionKind,
    pub first: Option<usize>,
    pub second: Option<usize>,
    pub union: Option<usize>,
    /// `None` when some crossing number was not determined.
    pub holds: Option<bool>,
    /// Crossings of the union's base drawing.
    pub start_crossings: usize,
    /// In that drawing every edge of the first graph passes over every
    /// edge of the second it meets.
    pub layered: bool,
}

/// Over edge at each crossing between two different edges of a graph
/// diagram, as `(over, under)` edge indices.
fn crossing_layers(d: &Diagram) -> Vec<(usize, usize)> {
    let strands = d.strands();
    let mut at: Vec<Vec<(usize, usize)>> = vec![Vec::new(); d.nodes().len()];
    for (e, t) in strands.edges.iter().enumerate() {
        for p in &t.passes {
            at[p.crossing].push((e, p.entry));
        }
    }
    at.iter()
        .enumerate()
        .filter(|(_, ps)| ps.len() == 2 && ps[0].0 != ps[1].0)
        .map(|(c, ps)| {
            let over = d.node(c).over().expect("crossing");
            if over.contains(ps[0].1) {
                (ps[0].0, ps[1].0)
            } else {
                (ps[1].0, ps[0].0)
            }
        })
        .collect()
}

pub fn additivity_check(g1: &Multigraph, g2: &Multigraph, kind: UnionKind, budget: &Budget) -> Result<AdditivityReport> {
    let union = match kind {
        UnionKind::Disjoint => disjoint_union(g1, g2),
        UnionKind::OnePoint => one_point_union(g1, 0, g2, 0)?,
    };
    let m1 = g1.edge_count();
    let layout = BookLayout::minimal(&union, (0..union.vertex_count()).collect())?;
    let start = book_diagram(&union, &layout)?;
    let layered = crossing_layers(&start).iter().all(|&(over, under)| !(over >= m1 && under < m1));
    let first = enumerated_crossing_number(g1, budget)?.value;
    let second = enumerated_crossing_number(g2, budget)?.value;
    let whole = enumerated_crossing_number(&union, budget)?.value;
    let holds = match (first, second, whole) {
        (Some(a), Some(b), Some(c)) => Some(a + b == c),
        _ => None,
    };
    Ok(AdditivityReport {
        kind,
        first,
        second,
        union: whole,
        holds,
        start_crossings: start.crossing_count(),
        layered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::Multigraph;

    fn k5() -> Diagram {
        Diagram::parse(include_str!("../data/k5.diagram")).unwrap()
    }

    fn drawn(g: &Multigraph, positions: Vec<usize>, upper: Vec<bool>) -> Diagram {
        book_diagram(g, &BookLayout { positions, upper }).unwrap()
    }

    #[test]
    fn k5_is_certified_at_every_vertex() {
        let d = k5();
        assert_eq!(d.crossing_count(), 1);
        for vertex in 0..5 {
            let o = VertexOrientation { vertex, a_slot: 0 };
            let cert = check_nonplanar(&d, o).unwrap().expect("certificate");
            assert_eq!(cert.per_assignment.len(), 2);
            for w in &cert.per_assignment {
                assert!(matches!(w.certificate, CrTwoCertificate::LinkedCycles { linking_number: 1 | -1, .. }));
            }
            cert.verify_for(&d).unwrap();
            let json = serde_json::to_string(&cert).unwrap();
            assert_eq!(serde_json::from_str::<NonPlanarCertificate>(&json).unwrap(), cert);
        }
    }

    #[test]
    fn tampered_certificates_are_rejected() {
        let d = k5();
        let cert = check_nonplanar(&d, VertexOrientation { vertex: 2, a_slot: 1 }).unwrap().unwrap();
        let mut bad = cert.clone();
        bad.per_assignment[0].tangle = bad.per_assignment[0].tangle.mirror();
        assert!(bad.verify().is_err());
        let mut bad = cert.clone();
        bad.per_assignment.pop();
        assert!(bad.verify().is_err());
        let mut bad = cert.clone();
        bad.condition_i.cycles.swap(0, 1);
        assert!(bad.verify().is_err());
        let other = d.with_crossing_changed(5).unwrap();
        assert!(cert.verify_for(&other).is_err());
    }

    #[test]
    fn condition_i_fails_at_cut_vertices() {
        let bowtie = Multigraph::new(5, [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)]).unwrap();
        let d = drawn(&bowtie, vec![2, 0, 1, 3, 4], vec![true; 6]);
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(condition_i(&d, 0).unwrap(), None);
        let glued = Multigraph::new(7, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5), (5, 6), (6, 0)]).unwrap();
        let d = drawn(&glued, vec![3, 0, 1, 2, 4, 5, 6], vec![true; 8]);
        assert_eq!(condition_i(&d, 0).unwrap(), None);
        assert!(matches!(condition_i(&d, 1), Err(Error::WrongDegree { vertex: 1, degree: 2 })));
    }

    #[test]
    fn planar_wheel_is_never_certified() {
        let wheel = Multigraph::new(5, [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        let mut tried = 0;
        for upper in 0u32..256 {
            let upper: Vec<bool> = (0..8).map(|i| upper >> i & 1 == 1).collect();
            let d = drawn(&wheel, vec![2, 0, 1, 3, 4], upper);
            if d.crossing_count() > 2 {
                continue;
            }
            tried += 1;
            for a_slot in 0..4 {
                assert_eq!(check_nonplanar(&d, VertexOrientation { vertex: 0, a_slot }).unwrap(), None);
            }
        }
        assert!(tried > 10);
    }

    #[test]
    fn driver_small_graphs() {
        let budget = Budget { max_crossings: 6, max_states: 100_000 };
        let k4 = enumerated_crossing_number(&Multigraph::complete(4), &budget).unwrap();
        assert_eq!(k4.value, Some(0));
        let k5 = enumerated_crossing_number(&Multigraph::complete(5), &budget).unwrap();
        assert_eq!((k5.value, k5.lower_bound), (Some(1), 1));
        assert!(!k5.transcript.is_empty());
    }

    #[test]
    fn additivity_of_cycles() {
        let c3 = Multigraph::cycle(3);
        let r = additivity_check(&c3, &c3, UnionKind::Disjoint, &Budget::default()).unwrap();
        assert_eq!((r.first, r.second, r.union, r.holds), (Some(0), Some(0), Some(0), Some(true)));
        assert!(r.layered);
    }
}
