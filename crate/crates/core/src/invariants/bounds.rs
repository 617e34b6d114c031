use serde::{Deserialize, Serialize};

use super::{kauffman_bracket, linking_matrix, linking_number};
use crate::diagram::{extract_cycles, sub_diagram, Diagram, KeyMode};
use crate::moves::{simplify, Budget};
use crate::multigraph::{block_crossing_lower_bound, simple_cycles, Cycle, UnionFind};
use crate::{Error, Result};

/// Cap on cycles examined per diagram when hunting for sublinks.
const CYCLE_LIMIT: usize = 400;

/// Number of classes of link components under "joined by a nonzero
/// linking number".
pub fn linked_groups(d: &Diagram) -> Result<usize> {
    let m = linking_matrix(d)?;
    let k = m.len();
    let mut uf = UnionFind::new(k);
    for i in 0..k {
        for j in i + 1..k {
            if m[i][j] != 0 {
                uf.union(i, j);
            }
        }
    }
    Ok(uf.classes().len())
}

/// `ceil((span - 4 (g - 1)) / 4)` for `g` linked groups, floored at 0.
///
/// Components in different groups may be split, and each split piece can
/// add 4 to the span of a diagram without adding crossings.
pub fn span_bound(d: &Diagram) -> Result<usize> {
    let span = kauffman_bracket(d)?.span().unwrap_or(0);
    let g = linked_groups(d)? as i64;
    let excess = (span - 4 * (g - 1)).max(0);
    Ok(((excess + 3) / 4) as usize)
}

/// [`span_bound`] on a diagram that is connected as a map.
pub fn span_lower_bound(d: &Diagram) -> Result<usize> {
    if !d.is_link() {
        return Err(Error::NotALink);
    }
    if !d.is_connected() {
        return Err(Error::Disconnected);
    }
    span_bound(d)
}

/// [`span_bound`] applied to a diagram with several map components.
pub fn span_lower_bound_split(d: &Diagram) -> Result<usize> {
    span_bound(d)
}

/// Which strands of a diagram form a sublink.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Sublink {
    /// Link components, by index into [`Diagram::link_components`].
    Components { indices: Vec<usize> },
    /// Vertex-disjoint cycles of the underlying graph.
    Cycles { cycles: Vec<Cycle> },
}

impl Sublink {
    pub fn diagram(&self, d: &Diagram) -> Result<Diagram> {
        match self {
            Sublink::Components { indices } => {
                let comps = d.link_components()?;
                let mut paths = Vec::new();
                for (n, &i) in indices.iter().enumerate() {
                    if i >= comps.len() || indices[..n].contains(&i) {
                        return Err(Error::Invalid(format!("bad component index {i}")));
                    }
                    paths.push(comps[i].clone());
                }
                sub_diagram(d, &paths)
            }
            Sublink::Cycles { cycles } => {
                for (i, a) in cycles.iter().enumerate() {
                    if cycles[i + 1..].iter().any(|b| a.shares_vertex_with(b)) {
                        return Err(Error::CyclesShareVertex);
                    }
                }
                let strands = d.strands();
                for c in cycles {
                    let ok = c.vertices.len() == c.edges.len()
                        && c.edges.iter().enumerate().all(|(i, &e)| {
                            let Some(&(u, v)) = strands.graph.edges().get(e) else { return false };
                            let (a, b) = (c.vertices[i], c.vertices[(i + 1) % c.vertices.len()]);
                            (u, v) == (a.min(b), a.max(b))
                        });
                    if !ok {
                        return Err(Error::Invalid("cycle does not match the underlying graph".into()));
                    }
                }
                let refs: Vec<&Cycle> = cycles.iter().collect();
                extract_cycles(d, &strands, &refs)
            }
        }
    }
}

/// Evidence that every diagram of the same embedding has at least two
/// crossings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CrTwoCertificate {
    /// Two curves with nonzero linking number.
    LinkedCycles { sublink: Sublink, linking_number: i64, diagram: String },
    /// A sublink whose bracket span forces at least two crossings.
    SpanBound { sublink: Sublink, span: i64, linked_groups: usize, diagram: String },
    /// Every diagram reachable within the cap has at least two crossings.
    ExhaustiveBfs { cap: usize, states: usize },
}

fn canonical_text(d: &Diagram) -> String {
    d.canonical(KeyMode::Full).0.to_string()
}

impl CrTwoCertificate {
    /// Recomputes the evidence on `d`.
    pub fn verify(&self, d: &Diagram) -> Result<()> {
        let fail = |m: &str| Err(Error::Invalid(format!("certificate rejected: {m}")));
        match self {
            CrTwoCertificate::LinkedCycles { sublink, linking_number: lk, diagram } => {
                let sub = sublink.diagram(d)?;
                if canonical_text(&sub) != *diagram {
                    return fail("sublink diagram differs");
                }
                if sub.link_components()?.len() != 2 {
                    return fail("sublink must have two components");
                }
                let actual = linking_number(&sub, 0, 1)?;
                if actual != *lk {
                    return fail("linking number differs");
                }
                if actual == 0 {
                    return fail("linking number is zero");
                }
                Ok(())
            }
            CrTwoCertificate::SpanBound { sublink, span, linked_groups: g, diagram } => {
                let sub = sublink.diagram(d)?;
                if canonical_text(&sub) != *diagram {
                    return fail("sublink diagram differs");
                }
                let actual = kauffman_bracket(&sub)?.span().unwrap_or(0);
                if actual != *span || linked_groups(&sub)? != *g {
                    return fail("span data differs");
                }
                if span_bound(&sub)? < 2 {
                    return fail("span bound below two");
                }
                Ok(())
            }
            CrTwoCertificate::ExhaustiveBfs { cap, states } => {
                let out = simplify(d, &Budget { max_crossings: *cap, max_states: *states })?;
                if out.complete && out.diagram.crossing_count() >= 2 {
                    Ok(())
                } else {
                    fail("search reaches a diagram with fewer than two crossings")
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CrTwoOptions {
    /// Also accept an exhaustive search that never drops below two
    /// crossings. Off by default: the move set only covers part of the
    /// isotopy class, so this step can be fooled.
    pub exhaustive: Option<Budget>,
}

/// Candidate sublinks in search order: pairs first, then singles, then the
/// whole link.
fn candidates(d: &Diagram) -> Result<(Vec<Sublink>, Vec<Sublink>)> {
    let mut pairs = Vec::new();
    let mut others = Vec::new();
    if d.is_link() {
        let k = d.link_components()?.len();
        for i in 0..k {
            for j in i + 1..k {
                pairs.push(Sublink::Components { indices: vec![i, j] });
            }
        }
        others.extend((0..k).map(|i| Sublink::Components { indices: vec![i] }));
        if k > 2 {
            others.push(Sublink::Components { indices: (0..k).collect() });
        }
    } else {
        let cycles = simple_cycles(&d.underlying_graph());
        let cycles = &cycles[..cycles.len().min(CYCLE_LIMIT)];
        for (i, a) in cycles.iter().enumerate() {
            for b in &cycles[i + 1..] {
                if !a.shares_vertex_with(b) {
                    pairs.push(Sublink::Cycles { cycles: vec![a.clone(), b.clone()] });
                }
            }
        }
        others.extend(cycles.iter().map(|c| Sublink::Cycles { cycles: vec![c.clone()] }));
    }
    Ok((pairs, others))
}

pub fn cr_at_least_two(d: &Diagram) -> Result<Option<CrTwoCertificate>> {
    cr_at_least_two_with(d, &CrTwoOptions::default())
}

pub fn cr_at_least_two_with(d: &Diagram, opts: &CrTwoOptions) -> Result<Option<CrTwoCertificate>> {
    if d.crossing_count() < 2 {
        return Ok(None);
    }
    let (pairs, others) = candidates(d)?;
    for s in &pairs {
        let sub = s.diagram(d)?;
        let lk = linking_number(&sub, 0, 1)?;
        if lk != 0 {
            return Ok(Some(CrTwoCertificate::LinkedCycles {
                sublink: s.clone(),
                linking_number: lk,
                diagram: canonical_text(&sub),
            }));
        }
    }
    for s in others.iter().chain(&pairs) {
        let sub = s.diagram(d)?;
        let bound = match span_bound(&sub) {
            Ok(b) => b,
            Err(Error::BudgetExceeded(_)) => continue,
            Err(e) => return Err(e),
        };
        if bound >= 2 {
            return Ok(Some(CrTwoCertificate::SpanBound {
                sublink: s.clone(),
                span: kauffman_bracket(&sub)?.span().unwrap_or(0),
                linked_groups: linked_groups(&sub)?,
                diagram: canonical_text(&sub),
            }));
        }
    }
    if let Some(budget) = opts.exhaustive {
        match simplify(d, &budget) {
            Ok(out) if out.complete && out.diagram.crossing_count() >= 2 => {
                return Ok(Some(CrTwoCertificate::ExhaustiveBfs { cap: budget.max_crossings, states: out.states }));
            }
            Ok(_) | Err(Error::BudgetExceeded(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// Sound lower bound on the crossing number of the link or embedded graph.
pub fn crossing_lower_bound(d: &Diagram) -> Result<usize> {
    let mut bound = if d.is_link() {
        if d.crossing_count() == 0 {
            return Ok(0);
        }
        match span_bound(d) {
            Ok(b) => b,
            Err(Error::BudgetExceeded(_)) => 0,
            Err(e) => return Err(e),
        }
    } else {
        block_crossing_lower_bound(&d.underlying_graph())
    };
    if bound < 2 && d.crossing_count() >= 2 {
        let (pairs, others) = candidates(d)?;
        for s in &pairs {
            if linking_number(&s.diagram(d)?, 0, 1)? != 0 {
                bound = 2;
                break;
            }
        }
        if bound < 2 {
            for s in &others {
                if let Ok(b) = span_bound(&s.diagram(d)?) {
                    bound = bound.max(b);
                }
            }
        }
    }
    Ok(bound)
}

/// Crossing number when the lower bound meets a diagram found by
/// [`simplify`]; `None` when the search finishes without the bounds
/// closing.
pub fn crossing_number_exact(d: &Diagram, budget: &Budget) -> Result<Option<usize>> {
    let lower = crossing_lower_bound(d)?;
    if lower == d.crossing_count() {
        return Ok(Some(lower));
    }
    let out = simplify(d, budget)?;
    let found = out.diagram.crossing_count();
    if found == lower {
        Ok(Some(found))
    } else if out.complete {
        Ok(None)
    } else {
        Err(Error::BudgetExceeded(format!("bounds {lower}..={found} did not close within {} states", budget.max_states)))
    }
}
