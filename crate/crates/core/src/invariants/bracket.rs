use super::LaurentPoly;
use crate::diagram::{Diagram, Over, Pass};
use crate::{Error, Result};

pub const DEFAULT_BRACKET_LIMIT: usize = 20;

pub fn kauffman_bracket(d: &Diagram) -> Result<LaurentPoly> {
    kauffman_bracket_with_limit(d, DEFAULT_BRACKET_LIMIT)
}

/// State sum over all `2^c` smoothings, normalized so a crossing-free
/// circle has bracket 1.
pub fn kauffman_bracket_with_limit(d: &Diagram, limit: usize) -> Result<LaurentPoly> {
    if !d.is_link() {
        return Err(Error::NotALink);
    }
    let c = d.crossing_count();
    if c > limit {
        return Err(Error::BudgetExceeded(format!("{c} crossings exceeds the bracket limit of {limit}")));
    }
    if c == 0 && d.free_loops() == 0 {
        return Err(Error::Invalid("empty diagram".into()));
    }
    let n = 4 * c;
    let arc: Vec<usize> = (0..n)
        .map(|id| {
            let m = d.mate(crate::diagram::SlotRef::new(id / 4, id % 4));
            4 * m.node + m.slot
        })
        .collect();
    // A-smoothing partners. With over slots 1-3 the under strand enters at
    // slot 0, so A joins 0-1 and 2-3; otherwise A joins 1-2 and 3-0.
    let a_pair: Vec<[usize; 4]> = (0..c)
        .map(|i| match d.node(i).over() {
            Some(Over::Odd) => [1, 0, 3, 2],
            _ => [3, 2, 1, 0],
        })
        .collect();
    let mut counts = vec![vec![0i64; n / 2 + 2]; 2 * c + 1];
    let mut seen = vec![false; n];
    for state in 0u64..1u64 << c {
        seen.iter_mut().for_each(|s| *s = false);
        let mut loops = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            loops += 1;
            let mut cur = start;
            loop {
                seen[cur] = true;
                let other = arc[cur];
                seen[other] = true;
                let (x, s) = (other / 4, other % 4);
                let next = 4 * x + if state >> x & 1 == 0 { a_pair[x][s] } else { b_partner(a_pair[x][s], s) };
                if seen[next] {
                    break;
                }
                cur = next;
            }
        }
        let b = state.count_ones() as usize;
        let a = c - b;
        counts[a + c - b][loops] += 1;
    }
    let dval = LaurentPoly::loop_value();
    let mut total = LaurentPoly::zero();
    for (ab, row) in counts.iter().enumerate() {
        for (loops, &k) in row.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let all_loops = loops + d.free_loops();
            let term = dval.pow(all_loops as u32 - 1).shift(ab as i32 - c as i32).scale(k);
            total = total + term;
        }
    }
    Ok(total)
}

/// The slot joined to `s` by the B-smoothing, given the A partner of `s`.
fn b_partner(a_partner: usize, s: usize) -> usize {
    // A and B partners are the two neighbours of s in the cyclic order.
    if a_partner == (s + 1) % 4 {
        (s + 3) % 4
    } else {
        (s + 1) % 4
    }
}

/// Passes of every link component under the canonical orientations.
fn component_passes(d: &Diagram) -> Result<Vec<Vec<Pass>>> {
    d.link_components()
}

/// Sign of each crossing given the two passes through it.
fn sign(d: &Diagram, p: Pass, q: Pass) -> i64 {
    let over = d.node(p.crossing).over().expect("crossing");
    let (o, u) = if over.contains(p.entry) { (p.entry, q.entry) } else { (q.entry, p.entry) };
    if (u + 4 - o) % 4 == 1 {
        1
    } else {
        -1
    }
}

/// For each crossing, `(component, pass)` of its two passes.
fn passes_by_crossing(d: &Diagram, comps: &[Vec<Pass>]) -> Vec<Vec<(usize, Pass)>> {
    let mut by = vec![Vec::new(); d.nodes().len()];
    for (ci, comp) in comps.iter().enumerate() {
        for &p in comp {
            by[p.crossing].push((ci, p));
        }
    }
    by
}

pub fn writhe(d: &Diagram) -> Result<i64> {
    let comps = component_passes(d)?;
    Ok(passes_by_crossing(d, &comps).iter().map(|ps| sign(d, ps[0].1, ps[1].1)).sum())
}

/// Linking number of components `c1` and `c2` (indices into
/// [`Diagram::link_components`]).
pub fn linking_number(d: &Diagram, c1: usize, c2: usize) -> Result<i64> {
    let comps = component_passes(d)?;
    if c1 == c2 {
        return Err(Error::SameComponent);
    }
    if c1 >= comps.len() || c2 >= comps.len() {
        return Err(Error::Invalid(format!("diagram has {} components", comps.len())));
    }
    let total: i64 = passes_by_crossing(d, &comps)
        .iter()
        .filter(|ps| {
            let (a, b) = (ps[0].0, ps[1].0);
            (a == c1 && b == c2) || (a == c2 && b == c1)
        })
        .map(|ps| sign(d, ps[0].1, ps[1].1))
        .sum();
    Ok(total / 2)
}

/// Matrix of pairwise linking numbers.
pub fn linking_matrix(d: &Diagram) -> Result<Vec<Vec<i64>>> {
    let comps = component_passes(d)?;
    let k = comps.len();
    let mut m = vec![vec![0i64; k]; k];
    for ps in passes_by_crossing(d, &comps) {
        let (a, b) = (ps[0].0, ps[1].0);
        if a != b {
            let s = sign(d, ps[0].1, ps[1].1);
            m[a][b] += s;
            m[b][a] += s;
        }
    }
    for row in &mut m {
        for x in row.iter_mut() {
            *x /= 2;
        }
    }
    Ok(m)
}
