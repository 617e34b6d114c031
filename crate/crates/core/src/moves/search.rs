use std::collections::HashMap;
use std::hash::{DefaultHasher, Hash, Hasher};

use serde::{Deserialize, Serialize};

use super::{apply_in, enumerate_moves, MoveSite};
use crate::diagram::{Diagram, KeyMode};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_crossings: usize,
    pub max_states: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_crossings: 10, max_states: 2_000_000 }
    }
}

/// Sequence of moves, each applied to the canonical form of the previous
/// diagram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Path {
    pub mode: KeyMode,
    pub steps: Vec<MoveSite>,
}

impl Path {
    pub fn replay(&self, start: &Diagram) -> Result<Diagram> {
        replay(start, &self.steps, self.mode)
    }

    /// Replays from `start` and checks the result is `target` up to
    /// relabeling (and over/under data in shadow mode).
    pub fn connects(&self, start: &Diagram, target: &Diagram) -> bool {
        self.replay(start).is_ok_and(|d| d.canonical_key(self.mode) == target.canonical_key(self.mode))
    }
}

pub fn replay(start: &Diagram, steps: &[MoveSite], mode: KeyMode) -> Result<Diagram> {
    let mut cur = start.canonical(mode).0;
    for step in steps {
        cur = apply_in(&cur, step, mode)?.canonical(mode).0;
    }
    Ok(cur)
}

fn fingerprint(key: &[u32]) -> u128 {
    let mut h1 = DefaultHasher::new();
    key.hash(&mut h1);
    let mut h2 = DefaultHasher::new();
    0xa5u8.hash(&mut h2);
    key.hash(&mut h2);
    (h1.finish() as u128) << 64 | h2.finish() as u128
}

struct Entry {
    parent: u32,
    site: Option<MoveSite>,
}

/// One breadth-first search tree over canonical diagrams.
struct Tree {
    mode: KeyMode,
    index: HashMap<u128, u32>,
    entries: Vec<Entry>,
    frontier: Vec<(u32, Diagram)>,
}

impl Tree {
    fn new(root: &Diagram, mode: KeyMode) -> Tree {
        let (canon, key) = root.canonical(mode);
        let mut index = HashMap::new();
        index.insert(fingerprint(&key), 0);
        Tree { mode, index, entries: vec![Entry { parent: 0, site: None }], frontier: vec![(0, canon)] }
    }

    /// Expands one layer. Calls `found` on each new state; stops early when
    /// it returns true and reports the state.
    fn expand(
        &mut self,
        budget: &Budget,
        states: &mut usize,
        mut found: impl FnMut(u128, &Diagram) -> bool,
    ) -> Result<Option<(u128, u32)>> {
        let layer = std::mem::take(&mut self.frontier);
        for (idx, d) in layer {
            for site in enumerate_moves(&d, self.mode) {
                let Ok(next) = apply_in(&d, &site, self.mode) else { continue };
                if next.crossing_count() > budget.max_crossings {
                    continue;
                }
                let (canon, key) = next.canonical(self.mode);
                let fp = fingerprint(&key);
                if self.index.contains_key(&fp) {
                    continue;
                }
                *states += 1;
                if *states > budget.max_states {
                    return Err(Error::BudgetExceeded(format!("more than {} states", budget.max_states)));
                }
                let new = self.entries.len() as u32;
                self.entries.push(Entry { parent: idx, site: Some(site) });
                self.index.insert(fp, new);
                if found(fp, &canon) {
                    return Ok(Some((fp, new)));
                }
                self.frontier.push((new, canon));
            }
        }
        Ok(None)
    }

    fn path_to(&self, mut idx: u32) -> Vec<MoveSite> {
        let mut steps = Vec::new();
        while let Some(site) = &self.entries[idx as usize].site {
            steps.push(site.clone());
            idx = self.entries[idx as usize].parent;
        }
        steps.reverse();
        steps
    }
}

/// Canonical diagrams along a path, starting with the canonical start.
fn trail(start: &Diagram, steps: &[MoveSite], mode: KeyMode) -> Result<Vec<Diagram>> {
    let mut out = vec![start.canonical(mode).0];
    for step in steps {
        let next = apply_in(out.last().unwrap(), step, mode)?.canonical(mode).0;
        out.push(next);
    }
    Ok(out)
}

/// A move taking `from` to a diagram with the canonical key of `to`.
fn inverse_step(from: &Diagram, to: &Diagram, mode: KeyMode) -> Option<MoveSite> {
    let want = to.canonical_key(mode);
    enumerate_moves(from, mode)
        .into_iter()
        .find(|site| apply_in(from, site, mode).is_ok_and(|d| d.canonical_key(mode) == want))
}

fn search(d1: &Diagram, d2: &Diagram, budget: &Budget, mode: KeyMode) -> Result<Option<Path>> {
    if d1.crossing_count() > budget.max_crossings || d2.crossing_count() > budget.max_crossings {
        return Err(Error::BudgetExceeded(format!("diagram exceeds {} crossings", budget.max_crossings)));
    }
    if d1.canonical_key(mode) == d2.canonical_key(mode) {
        return Ok(Some(Path { mode, steps: Vec::new() }));
    }
    let mut fwd = Tree::new(d1, mode);
    let mut bwd = Tree::new(d2, mode);
    let mut states = 2;
    loop {
        if fwd.frontier.is_empty() || bwd.frontier.is_empty() {
            return Ok(None);
        }
        let forward_turn = fwd.frontier.len() <= bwd.frontier.len();
        let (grow, other) = if forward_turn { (&mut fwd, &bwd) } else { (&mut bwd, &fwd) };
        let Some((fp, idx)) = grow.expand(budget, &mut states, |fp, _| other.index.contains_key(&fp))? else {
            continue;
        };
        let other_idx = other.index[&fp];
        let (fi, bi) = if forward_turn { (idx, other_idx) } else { (other_idx, idx) };
        let mut steps = fwd.path_to(fi);
        let back = trail(d2, &bwd.path_to(bi), mode)?;
        for w in back.windows(2).rev() {
            let step = inverse_step(&w[1], &w[0], mode)
                .ok_or_else(|| Error::MoveNotApplicable("a backward move has no inverse".into()))?;
            steps.push(step);
        }
        let path = Path { mode, steps };
        if !path.connects(d1, d2) {
            return Err(Error::Invalid("search produced a path that does not replay".into()));
        }
        return Ok(Some(path));
    }
}

/// Bidirectional search for a move sequence (no crossing changes) from `d1`
/// to `d2`. `Ok(None)` means the budgeted space was exhausted without a
/// connection.
pub fn equivalent_within(d1: &Diagram, d2: &Diagram, budget: &Budget) -> Result<Option<Path>> {
    search(d1, d2, budget, KeyMode::Full)
}

/// As [`equivalent_within`] with crossing changes allowed: the search runs
/// on shadows and ignores over/under conditions.
pub fn cc_equivalent_within(d1: &Diagram, d2: &Diagram, budget: &Budget) -> Result<Option<Path>> {
    search(d1, d2, budget, KeyMode::Shadow)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplifyOutcome {
    /// Fewest-crossing diagram reached (canonical form).
    pub diagram: Diagram,
    pub path: Path,
    /// True when the result is known minimal within the budget: either no
    /// crossings remain or the whole budgeted space was explored.
    pub complete: bool,
    pub states: usize,
}

/// Breadth-first search for a diagram with fewest crossings.
pub fn simplify(d: &Diagram, budget: &Budget) -> Result<SimplifyOutcome> {
    if d.crossing_count() > budget.max_crossings {
        return Err(Error::BudgetExceeded(format!("diagram exceeds {} crossings", budget.max_crossings)));
    }
    let mode = KeyMode::Full;
    let mut tree = Tree::new(d, mode);
    let mut best = (d.crossing_count(), 0u32, tree.frontier[0].1.clone());
    let mut states = 1;
    let mut complete = true;
    while !tree.frontier.is_empty() && best.0 > 0 {
        let mut candidate: Option<(usize, u128, Diagram)> = None;
        let r = tree.expand(budget, &mut states, |fp, c| {
            if c.crossing_count() < best.0 && candidate.as_ref().is_none_or(|x| c.crossing_count() < x.0) {
                candidate = Some((c.crossing_count(), fp, c.clone()));
            }
            false
        });
        if let Some((n, fp, c)) = candidate {
            best = (n, tree.index[&fp], c);
        }
        if let Err(Error::BudgetExceeded(_)) = r {
            complete = false;
            break;
        }
        r?;
    }
    if best.0 == 0 && !tree.frontier.is_empty() {
        complete = true;
    }
    let path = Path { mode, steps: tree.path_to(best.1) };
    Ok(SimplifyOutcome { diagram: best.2, path, complete, states })
}
