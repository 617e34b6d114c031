//! Rational tangles: Conway sequences, fractions, twists, normal forms,
//! closures and substitution for a degree-four vertex.
//!
//! A tangle fragment is stored as a diagram with one extra boundary vertex
//! standing for the outside of the tangle disk. Its slots 0, 1, 2, 3 are the
//! ends a (top left), b (top right), c (bottom right) and d (bottom left).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::diagram::{Diagram, Draft, NodeKind, Over, SlotRef};
use crate::{Error, Result};

/// Extended rational `p/q` in lowest terms with `q >= 0`; `1/0` is infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Fraction {
    p: i64,
    q: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Fraction {
    pub const ZERO: Fraction = Fraction { p: 0, q: 1 };
    pub const INFINITY: Fraction = Fraction { p: 1, q: 0 };

    /// `p/q` reduced; `x/0` is infinity for any `x != 0`.
    pub fn new(p: i64, q: i64) -> Result<Fraction> {
        if p == 0 && q == 0 {
            return Err(Error::Invalid("0/0 is not a fraction".into()));
        }
        if q == 0 {
            return Ok(Fraction::INFINITY);
        }
        let g = gcd(p, q);
        let s = q.signum();
        Ok(Fraction { p: s * p / g, q: s * q / g })
    }

    pub fn integer(n: i64) -> Fraction {
        Fraction { p: n, q: 1 }
    }

    pub fn numer(self) -> i64 {
        self.p
    }

    pub fn denom(self) -> i64 {
        self.q
    }

    pub fn is_infinite(self) -> bool {
        self.q == 0
    }

    pub fn add_int(self, k: i64) -> Fraction {
        if self.is_infinite() {
            self
        } else {
            Fraction { p: self.p + k * self.q, q: self.q }
        }
    }

    pub fn recip(self) -> Fraction {
        match self.p.signum() {
            0 => Fraction::INFINITY,
            s => Fraction { p: s * self.q, q: s * self.p },
        }
    }

    pub fn neg(self) -> Fraction {
        if self.is_infinite() {
            self
        } else {
            Fraction { p: -self.p, q: self.q }
        }
    }

    /// `a_n + 1/(a_{n-1} + ... + 1/a_1)`.
    pub fn from_sequence(seq: &[i64]) -> Fraction {
        let mut it = seq.iter();
        let Some(&first) = it.next() else { return Fraction::ZERO };
        it.fold(Fraction::integer(first), |x, &a| x.recip().add_int(a))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Fraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Fraction> {
        let bad = || Error::Syntax { line: 1, msg: format!("bad fraction {s:?}") };
        let (p, q) = s.trim().split_once('/').unwrap_or((s.trim(), "1"));
        Fraction::new(p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?)
    }
}

impl From<Fraction> for String {
    fn from(f: Fraction) -> String {
        f.to_string()
    }
}

impl TryFrom<String> for Fraction {
    type Error = Error;

    fn try_from(s: String) -> Result<Fraction> {
        s.parse()
    }
}

/// Conway notation: an atom or a sequence of twist counts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Conway {
    Zero,
    Infinity,
    Twists(Vec<i64>),
}

impl Conway {
    /// Sequence form; the atoms are `[0]` and `[0, 0]`.
    pub fn sequence(&self) -> Vec<i64> {
        match self {
            Conway::Zero => vec![0],
            Conway::Infinity => vec![0, 0],
            Conway::Twists(v) => v.clone(),
        }
    }

    pub fn fraction(&self) -> Fraction {
        Fraction::from_sequence(&self.sequence())
    }
}

impl fmt::Display for Conway {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conway::Zero => write!(f, "0"),
            Conway::Infinity => write!(f, "inf"),
            Conway::Twists(v) => {
                let parts: Vec<String> = v.iter().map(i64::to_string).collect();
                write!(f, "{}", parts.join(" "))
            }
        }
    }
}

impl FromStr for Conway {
    type Err = Error;

    fn from_str(s: &str) -> Result<Conway> {
        let words: Vec<&str> = s.split_whitespace().collect();
        match words.as_slice() {
            [] => Err(Error::Syntax { line: 1, msg: "empty tangle".into() }),
            ["0"] => Ok(Conway::Zero),
            ["inf"] | ["∞"] => Ok(Conway::Infinity),
            _ => words
                .iter()
                .map(|w| w.parse::<i64>().map_err(|_| Error::Syntax { line: 1, msg: format!("bad twist count {w:?}") }))
                .collect::<Result<Vec<_>>>()
                .map(Conway::Twists),
        }
    }
}

impl From<Conway> for String {
    fn from(c: Conway) -> String {
        c.to_string()
    }
}

impl TryFrom<String> for Conway {
    type Error = Error;

    fn try_from(s: String) -> Result<Conway> {
        s.parse()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    fn of(n: i64) -> Sign {
        if n < 0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    /// Over strand of the added crossing: top left to bottom right for `Plus`.
    fn over(self) -> Over {
        match self {
            Sign::Plus => Over::Odd,
            Sign::Minus => Over::Even,
        }
    }
}

/// Twist of the bottom ends (`Horizontal`) or the right ends (`Vertical`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Twist {
    Horizontal(Sign),
    Vertical(Sign),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalTangle {
    pub conway: Conway,
    pub fraction: Fraction,
}

impl RationalTangle {
    pub fn new(conway: Conway) -> RationalTangle {
        let fraction = conway.fraction();
        RationalTangle { conway, fraction }
    }

    pub fn zero() -> RationalTangle {
        RationalTangle::new(Conway::Zero)
    }

    pub fn infinity() -> RationalTangle {
        RationalTangle::new(Conway::Infinity)
    }

    pub fn one() -> RationalTangle {
        RationalTangle::new(Conway::Twists(vec![1]))
    }

    pub fn one_bar() -> RationalTangle {
        RationalTangle::new(Conway::Twists(vec![-1]))
    }

    /// Normal-form tangle with the given fraction.
    pub fn from_fraction(f: Fraction) -> RationalTangle {
        RationalTangle { conway: normal_sequence(f), fraction: f }
    }

    /// Checks the stored fraction against the Conway sequence.
    pub fn validate(&self) -> Result<()> {
        if self.conway.fraction() != self.fraction {
            return Err(Error::Invalid(format!("{} does not evaluate to {}", self.conway, self.fraction)));
        }
        if matches!(&self.conway, Conway::Twists(v) if v.is_empty()) {
            return Err(Error::Invalid("empty Conway sequence".into()));
        }
        Ok(())
    }

    pub fn mirror(&self) -> RationalTangle {
        let conway = match &self.conway {
            Conway::Twists(v) => Conway::Twists(v.iter().map(|x| -x).collect()),
            atom => atom.clone(),
        };
        RationalTangle { conway, fraction: self.fraction.neg() }
    }
}

impl fmt::Display for RationalTangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.conway)
    }
}

pub fn parse_conway(text: &str) -> Result<RationalTangle> {
    Ok(RationalTangle::new(text.parse()?))
}

pub fn twist(t: &RationalTangle, kind: Twist) -> RationalTangle {
    let mut seq = t.conway.sequence();
    let fraction = match kind {
        Twist::Horizontal(s) => {
            *seq.last_mut().expect("nonempty") += s.value();
            t.fraction.add_int(s.value())
        }
        Twist::Vertical(s) => {
            let n = seq.len();
            if n >= 2 && seq[n - 1] == 0 {
                seq[n - 2] += s.value();
            } else {
                seq.extend([s.value(), 0]);
            }
            t.fraction.recip().add_int(s.value()).recip()
        }
    };
    RationalTangle { conway: Conway::Twists(seq), fraction }
}

/// Same-sign expansion whose first entry (the last partial quotient) is at
/// least 2 unless the fraction is an integer.
fn normal_sequence(f: Fraction) -> Conway {
    if f.is_infinite() {
        return Conway::Infinity;
    }
    if f.p == 0 {
        return Conway::Zero;
    }
    let sign = f.p.signum();
    let (mut p, mut q) = (f.p.abs(), f.q);
    let mut quotients = Vec::new();
    while q != 0 {
        quotients.push(p / q);
        (p, q) = (q, p % q);
    }
    quotients.reverse();
    Conway::Twists(quotients.into_iter().map(|x| sign * x).collect())
}

pub fn normal_form(t: &RationalTangle) -> RationalTangle {
    RationalTangle::from_fraction(t.fraction)
}

pub fn tangle_crossing_number(t: &RationalTangle) -> usize {
    match normal_sequence(t.fraction) {
        Conway::Twists(v) => v.iter().map(|x| x.unsigned_abs() as usize).sum(),
        _ => 0,
    }
}

/// Twist word building the normal-form diagram, with its starting atom.
pub fn normal_word(t: &RationalTangle) -> (RationalTangle, Vec<Twist>) {
    let seq = match normal_sequence(t.fraction) {
        Conway::Twists(v) => v,
        atom => return (RationalTangle::new(atom), Vec::new()),
    };
    let odd = seq.len() % 2 == 1;
    let start = if odd { RationalTangle::zero() } else { RationalTangle::infinity() };
    let mut word = Vec::new();
    for (i, &a) in seq.iter().enumerate() {
        let sign = Sign::of(a);
        let step = if (i % 2 == 0) == odd { Twist::Horizontal(sign) } else { Twist::Vertical(sign) };
        word.extend(std::iter::repeat_n(step, a.unsigned_abs() as usize));
    }
    (start, word)
}

/// A tangle diagram closed off by a boundary vertex whose slots 0..4 are
/// the ends a, b, c, d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangleFragment {
    pub diagram: Diagram,
    pub boundary: usize,
}

const A: usize = 0;
const B: usize = 1;
const C: usize = 2;
const D: usize = 3;

/// Crossing slots in the tangle frame.
const NE: usize = 0;
const NW: usize = 1;
const SW: usize = 2;
const SE: usize = 3;

impl TangleFragment {
    fn atom(pairs: [(usize, usize); 2]) -> TangleFragment {
        let mut draft = Draft::new();
        let w = draft.add_node(NodeKind::Vertex { label: 0 }, 4);
        for (x, y) in pairs {
            draft.link(SlotRef::new(w, x), SlotRef::new(w, y));
        }
        TangleFragment { diagram: draft.finish().expect("atom is planar"), boundary: w }
    }

    pub fn zero() -> TangleFragment {
        TangleFragment::atom([(A, D), (B, C)])
    }

    pub fn infinity() -> TangleFragment {
        TangleFragment::atom([(A, B), (D, C)])
    }

    /// Fragment of an atom; `None` for tangles with crossings.
    pub fn of_atom(t: &RationalTangle) -> Option<TangleFragment> {
        match t.conway {
            Conway::Zero => Some(TangleFragment::zero()),
            Conway::Infinity => Some(TangleFragment::infinity()),
            Conway::Twists(_) => None,
        }
    }

    pub fn twisted(&self, kind: Twist) -> TangleFragment {
        let mut draft = Draft::from_diagram(&self.diagram);
        let w = self.boundary;
        let end = |e: usize| SlotRef::new(w, e);
        let (sign, moving, first, second, outs) = match kind {
            // The crossing sits below: d and c enter at its top.
            Twist::Horizontal(s) => (s, [D, C], NW, NE, [SW, SE]),
            // The crossing sits to the right: b and c enter at its left.
            Twist::Vertical(s) => (s, [B, C], NW, SW, [NE, SE]),
        };
        let x = draft.add_node(NodeKind::Crossing(sign.over()), 4);
        let slot = |s: usize| SlotRef::new(x, s);
        let (m0, m1) = (draft.mate(end(moving[0])), draft.mate(end(moving[1])));
        if m0 == end(moving[1]) {
            draft.link(slot(first), slot(second));
        } else {
            draft.link(slot(first), m0);
            draft.link(slot(second), m1);
        }
        draft.link(end(moving[0]), slot(outs[0]));
        draft.link(end(moving[1]), slot(outs[1]));
        TangleFragment { diagram: draft.finish().expect("twist keeps planarity"), boundary: w }
    }

    pub fn from_word(start: &TangleFragment, word: &[Twist]) -> TangleFragment {
        word.iter().fold(start.clone(), |f, &k| f.twisted(k))
    }

    /// Removes the boundary vertex, joining its ends in the given pairs.
    fn close(&self, pairs: [(usize, usize); 2]) -> Diagram {
        let mut draft = Draft::from_diagram(&self.diagram);
        let w = self.boundary;
        draft.splice_out_with(&[w], |s| {
            let (x, y) = pairs.into_iter().find(|&(x, y)| s.slot == x || s.slot == y).expect("end slot");
            SlotRef::new(w, if s.slot == x { y } else { x })
        });
        draft.finish().expect("closure is planar")
    }

    pub fn closure_n(&self) -> Diagram {
        self.close([(A, B), (D, C)])
    }

    pub fn closure_d(&self) -> Diagram {
        self.close([(A, D), (B, C)])
    }
}

/// Alternating normal-form fragment of `t`.
pub fn tangle_diagram(t: &RationalTangle) -> TangleFragment {
    let (start, word) = normal_word(t);
    let base = TangleFragment::of_atom(&start).expect("normal words start at an atom");
    TangleFragment::from_word(&base, &word)
}

pub fn closure_n(t: &RationalTangle) -> Diagram {
    tangle_diagram(t).closure_n()
}

pub fn closure_d(t: &RationalTangle) -> Diagram {
    tangle_diagram(t).closure_d()
}

/// A degree-4 graph vertex (by label) with the slot that receives end a.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexOrientation {
    pub vertex: usize,
    pub a_slot: usize,
}

impl VertexOrientation {
    /// Slot of the vertex meeting tangle end `e` (0..4 for a..d).
    pub fn slot_of_end(self, e: usize) -> usize {
        (self.a_slot + 4 - e) % 4
    }
}

/// Replaces the vertex by the normal-form fragment of `t`.
pub fn substitute(d: &Diagram, o: VertexOrientation, t: &RationalTangle) -> Result<Diagram> {
    let v = d.vertex_node(o.vertex).ok_or(Error::InvalidVertex(o.vertex))?;
    let degree = d.node(v).degree();
    if degree != 4 {
        return Err(Error::WrongDegree { vertex: o.vertex, degree });
    }
    if o.a_slot >= 4 {
        return Err(Error::Invalid(format!("slot {} out of range", o.a_slot)));
    }
    let frag = tangle_diagram(t);
    let mut draft = Draft::from_diagram(d);
    let off = draft.append(&frag.diagram);
    let w = off + frag.boundary;
    draft.splice_out_with(&[v, w], |s| {
        if s.node == v {
            SlotRef::new(w, (o.a_slot + 4 - s.slot) % 4)
        } else {
            SlotRef::new(v, o.slot_of_end(s.slot))
        }
    });
    draft.finish()
}
