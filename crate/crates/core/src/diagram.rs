//! Virtual link diagrams given by CD (planar diagram) codes and signed Gauss codes.
//!
//! A crossing `X[i,j,k,l]` lists the four edge labels around a classical
//! crossing, starting at the incoming under-edge and proceeding
//! counterclockwise. Slots are indexed `0..4` in that order, so the
//! under-strand joins slots 0 and 2 and the over-strand joins slots 1 and 3.
//! Virtual crossings are never listed; they are implied by edge connectivity.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// One classical crossing `X[i,j,k,l]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub slots: [u32; 4],
}

impl Crossing {
    pub fn new(i: u32, j: u32, k: u32, l: u32) -> Self {
        Crossing {
            slots: [i, j, k, l],
        }
    }

    pub fn mirror(&self) -> Self {
        let [i, j, k, l] = self.slots;
        Crossing::new(i, l, k, j)
    }
}

/// A single traversal of a strand through a crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Passage {
    pub crossing: usize,
    pub in_slot: usize,
    pub out_slot: usize,
}

impl Passage {
    pub fn is_under(&self) -> bool {
        self.in_slot % 2 == 0
    }

    fn reversed(&self) -> Self {
        Passage {
            crossing: self.crossing,
            in_slot: self.out_slot,
            out_slot: self.in_slot,
        }
    }
}

/// A closed strand of the diagram in its default direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub passages: Vec<Passage>,
    /// `edges[n]` is the edge leaving `passages[n]`.
    pub edges: Vec<u32>,
}

impl Component {
    pub fn min_edge(&self) -> u32 {
        self.edges.iter().copied().min().unwrap_or(0)
    }
}

/// An oriented virtual link diagram.
#[derive(Clone, Debug)]
pub struct Diagram {
    crossings: Vec<Crossing>,
    /// Crossingless components; only the empty code `CD[]` has one.
    loops: usize,
    components: Vec<Component>,
    /// `true` keeps a component's default direction.
    orientation: Vec<bool>,
    signs: Vec<i8>,
    /// Component index and per-crossing in-slots under the current orientation.
    under_in: Vec<usize>,
    over_in: Vec<usize>,
}

impl PartialEq for Diagram {
    fn eq(&self, other: &Self) -> bool {
        self.crossings == other.crossings
            && self.loops == other.loops
            && self.orientation == other.orientation
    }
}

impl Eq for Diagram {}

impl Diagram {
    /// Builds a diagram from crossings, validating edge labels and tracing components.
    pub fn from_crossings(crossings: Vec<Crossing>) -> Result<Self> {
        let n = crossings.len();
        let max = 2 * n as u32;
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for x in &crossings {
            for &e in &x.slots {
                if e == 0 || e > max {
                    return Err(Error::LabelRange { label: e, max });
                }
                *counts.entry(e).or_default() += 1;
            }
        }
        for e in 1..=max {
            let count = counts.get(&e).copied().unwrap_or(0);
            if count != 2 {
                return Err(Error::LabelCount { label: e, count });
            }
        }
        let loops = usize::from(n == 0);
        let components = trace_components(&crossings);
        let orientation = vec![true; components.len()];
        let mut d = Diagram {
            crossings,
            loops,
            components,
            orientation,
            signs: Vec::new(),
            under_in: Vec::new(),
            over_in: Vec::new(),
        };
        d.compute_signs();
        Ok(d)
    }

    /// The crossingless unknot.
    pub fn empty() -> Self {
        Diagram::from_crossings(Vec::new()).expect("empty diagram is valid")
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn edge_count(&self) -> usize {
        2 * self.crossings.len()
    }

    pub fn loops(&self) -> usize {
        self.loops
    }

    /// Components in order of their minimal edge label.
    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// Number of link components, including crossingless ones.
    pub fn component_count(&self) -> usize {
        self.components.len() + self.loops
    }

    pub fn orientation(&self) -> &[bool] {
        &self.orientation
    }

    /// Per-crossing signs (+1 / -1) under the current orientation.
    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn n_plus(&self) -> usize {
        self.signs.iter().filter(|&&s| s > 0).count()
    }

    pub fn n_minus(&self) -> usize {
        self.signs.iter().filter(|&&s| s < 0).count()
    }

    /// Re-orients the diagram: `flags[c]` keeps (true) or reverses (false)
    /// component `c` relative to its default direction.
    pub fn with_orientation(&self, flags: &[bool]) -> Result<Self> {
        if flags.len() != self.components.len() {
            return Err(Error::Orientation(format!(
                "{} direction flags given for {} components",
                flags.len(),
                self.components.len()
            )));
        }
        let mut d = self.clone();
        d.orientation = flags.to_vec();
        d.compute_signs();
        Ok(d)
    }

    /// `(n_plus, n_minus)` under the given per-component orientation.
    pub fn crossing_signs(&self, flags: &[bool]) -> Result<(usize, usize)> {
        let d = self.with_orientation(flags)?;
        Ok((d.n_plus(), d.n_minus()))
    }

    /// Replaces every `X[i,j,k,l]` by `X[i,l,k,j]`.
    pub fn mirror(&self) -> Self {
        let crossings = self.crossings.iter().map(Crossing::mirror).collect();
        let d = Diagram::from_crossings(crossings).expect("mirror preserves validity");
        d.with_orientation(&self.orientation)
            .expect("mirror preserves components")
    }

    /// Oriented passages of a component under the current orientation.
    pub fn oriented_passages(&self, component: usize) -> Vec<Passage> {
        let comp = &self.components[component];
        if self.orientation[component] {
            comp.passages.clone()
        } else {
            comp.passages.iter().rev().map(Passage::reversed).collect()
        }
    }

    /// In-slot (0 or 2) of the under-strand at crossing `c` under the current orientation.
    pub fn under_in_slot(&self, c: usize) -> usize {
        self.under_in[c]
    }

    /// In-slot (1 or 3) of the over-strand at crossing `c` under the current orientation.
    pub fn over_in_slot(&self, c: usize) -> usize {
        self.over_in[c]
    }

    /// The two endpoints `(crossing, slot)` of every edge, indexed by `label - 1`,
    /// each pair in increasing order.
    pub fn edge_endpoints(&self) -> Vec<[(usize, usize); 2]> {
        let mut ends: Vec<Vec<(usize, usize)>> = vec![Vec::with_capacity(2); self.edge_count()];
        for (c, x) in self.crossings.iter().enumerate() {
            for (s, &e) in x.slots.iter().enumerate() {
                ends[e as usize - 1].push((c, s));
            }
        }
        ends.into_iter().map(|v| [v[0], v[1]]).collect()
    }

    fn compute_signs(&mut self) {
        let n = self.crossings.len();
        let mut under_in = vec![0; n];
        let mut over_in = vec![1; n];
        for c in 0..self.components.len() {
            for p in self.oriented_passages(c) {
                if p.is_under() {
                    under_in[p.crossing] = p.in_slot;
                } else {
                    over_in[p.crossing] = p.in_slot;
                }
            }
        }
        // Under-strand entering at slot 0 with the over-strand entering at
        // slot 3 is a positive crossing; each reversal flips the sign.
        self.signs = (0..n)
            .map(|c| {
                let u = if under_in[c] == 0 { 1 } else { -1 };
                let o = if over_in[c] == 3 { 1 } else { -1 };
                u * o
            })
            .collect();
        self.under_in = under_in;
        self.over_in = over_in;
    }
}

fn other_endpoint(
    crossings: &[Crossing],
    (c, s): (usize, usize),
) -> (usize, usize) {
    let e = crossings[c].slots[s];
    for (c2, x) in crossings.iter().enumerate() {
        for (s2, &e2) in x.slots.iter().enumerate() {
            if e2 == e && (c2, s2) != (c, s) {
                return (c2, s2);
            }
        }
    }
    unreachable!("every edge label occurs twice")
}

fn trace_components(crossings: &[Crossing]) -> Vec<Component> {
    let n = crossings.len();
    // visited[c][0] under-strand, visited[c][1] over-strand
    let mut visited = vec![[false; 2]; n];
    let mut comps = Vec::new();
    let trace = |start: Passage, visited: &mut Vec<[bool; 2]>| {
        let mut passages = Vec::new();
        let mut edges = Vec::new();
        let mut p = start;
        loop {
            visited[p.crossing][p.in_slot % 2] = true;
            passages.push(p);
            let e = crossings[p.crossing].slots[p.out_slot];
            edges.push(e);
            let (c2, s2) = other_endpoint(crossings, (p.crossing, p.out_slot));
            p = Passage {
                crossing: c2,
                in_slot: s2,
                out_slot: (s2 + 2) % 4,
            };
            if p.crossing == start.crossing && p.in_slot % 2 == start.in_slot % 2 {
                break;
            }
        }
        Component { passages, edges }
    };
    // Default direction: i -> k at the component's first under-passage.
    for c in 0..n {
        if !visited[c][0] {
            let start = Passage {
                crossing: c,
                in_slot: 0,
                out_slot: 2,
            };
            comps.push(trace(start, &mut visited));
        }
    }
    // Components that never pass under run l -> j at their first crossing.
    for c in 0..n {
        if !visited[c][1] {
            let start = Passage {
                crossing: c,
                in_slot: 3,
                out_slot: 1,
            };
            comps.push(trace(start, &mut visited));
        }
    }
    comps.sort_by_key(Component::min_edge);
    comps
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CD[")?;
        for (n, x) in self.crossings.iter().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            let [i, j, k, l] = x.slots;
            write!(f, "X[{i},{j},{k},{l}]")?;
        }
        write!(f, "]")
    }
}

struct Lexer<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            text: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn expect(&mut self, ch: u8) -> Result<()> {
        match self.peek() {
            Some(c) if c == ch => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(Error::syntax(
                self.pos,
                format!("expected '{}', found '{}'", ch as char, c as char),
            )),
            None => Err(Error::syntax(
                self.pos,
                format!("expected '{}', found end of input", ch as char),
            )),
        }
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::syntax(start, "expected a positive integer"));
        }
        let s = std::str::from_utf8(&self.text[start..self.pos]).expect("ascii digits");
        s.parse()
            .map_err(|_| Error::syntax(start, format!("integer '{s}' out of range")))
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }
}

/// Parses `CD[X[a,b,c,d], ...]`. Whitespace is ignored; `CD[]` is the crossingless unknot.
pub fn parse_cd(text: &str) -> Result<Diagram> {
    let mut lx = Lexer::new(text);
    lx.expect(b'C')?;
    lx.expect(b'D')?;
    lx.expect(b'[')?;
    let mut crossings = Vec::new();
    if lx.peek() != Some(b']') {
        loop {
            lx.expect(b'X')?;
            lx.expect(b'[')?;
            let mut slots = [0u32; 4];
            for (n, slot) in slots.iter_mut().enumerate() {
                if n > 0 {
                    lx.expect(b',')?;
                }
                *slot = lx.number()?;
            }
            lx.expect(b']')?;
            crossings.push(Crossing { slots });
            if lx.peek() == Some(b',') {
                lx.pos += 1;
            } else {
                break;
            }
        }
    }
    lx.expect(b']')?;
    if !lx.at_end() {
        return Err(Error::syntax(lx.pos, "trailing input after CD[...]"));
    }
    Diagram::from_crossings(crossings)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GaussToken {
    pub over: bool,
    pub id: u32,
    /// +1 or -1
    pub sign: i8,
}

/// A validated signed Gauss code of a virtual knot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussCode {
    tokens: Vec<GaussToken>,
}

impl GaussCode {
    pub fn tokens(&self) -> &[GaussToken] {
        &self.tokens
    }

    pub fn crossing_count(&self) -> usize {
        self.tokens.len() / 2
    }

    pub fn new(tokens: Vec<GaussToken>) -> Result<Self> {
        if tokens.is_empty() {
            return Err(Error::Gauss("empty code".into()));
        }
        if !tokens[0].over {
            return Err(Error::Gauss("code must start with an overcrossing".into()));
        }
        let mut seen: BTreeMap<u32, (usize, usize, i8)> = BTreeMap::new();
        for t in &tokens {
            let entry = seen.entry(t.id).or_insert((0, 0, t.sign));
            if t.over {
                entry.0 += 1;
            } else {
                entry.1 += 1;
            }
            if entry.2 != t.sign {
                return Err(Error::Gauss(format!(
                    "crossing {} has inconsistent signs",
                    t.id
                )));
            }
        }
        for (id, (o, u, _)) in &seen {
            if *o != 1 {
                return Err(Error::Gauss(format!(
                    "crossing {id} has {o} O tokens (expected 1)"
                )));
            }
            if *u != 1 {
                return Err(Error::Gauss(format!(
                    "crossing {id} has {u} U tokens (expected 1)"
                )));
            }
        }
        Ok(GaussCode { tokens })
    }
}

impl fmt::Display for GaussCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.tokens {
            let ou = if t.over { 'O' } else { 'U' };
            let s = if t.sign > 0 { '+' } else { '-' };
            write!(f, "{ou}{}{s}", t.id)?;
        }
        Ok(())
    }
}

/// Parses a signed Gauss code such as `O1-O2-U1-U2-`.
pub fn parse_gauss(text: &str) -> Result<GaussCode> {
    let mut lx = Lexer::new(text);
    let mut tokens = Vec::new();
    while let Some(c) = lx.peek() {
        let over = match c {
            b'O' | b'o' => true,
            b'U' | b'u' => false,
            _ => {
                return Err(Error::syntax(
                    lx.pos,
                    format!("expected 'O' or 'U', found '{}'", c as char),
                ))
            }
        };
        lx.pos += 1;
        let id = lx.number()?;
        let sign = match lx.peek() {
            Some(b'+') => 1,
            Some(b'-') => -1,
            _ => {
                return Err(Error::syntax(
                    lx.pos,
                    format!("missing sign suffix after crossing {id}"),
                ))
            }
        };
        lx.pos += 1;
        tokens.push(GaussToken { over, id, sign });
    }
    GaussCode::new(tokens)
}

/// Converts a signed Gauss code to a CD code.
///
/// The edge leaving token `n` (1-based) is labelled `n - 1`, with the edge
/// leaving the first token labelled `2c`. Crossings are listed by increasing
/// id; a `-` crossing becomes `X[in_u, out_o, out_u, in_o]` and a `+` crossing
/// `X[in_u, in_o, out_u, out_o]`.
pub fn gauss_to_cd(g: &GaussCode) -> Diagram {
    let len = g.tokens.len();
    let label = |n: usize| -> u32 { ((n + len - 1) % len) as u32 + 1 };
    // leaving token at 0-based position p: ((p+1) - 2 mod len) + 1
    let leaving = |p: usize| label(p);
    let entering = |p: usize| label((p + len - 1) % len);
    let mut by_id: BTreeMap<u32, (usize, usize, i8)> = BTreeMap::new();
    for (p, t) in g.tokens.iter().enumerate() {
        let entry = by_id.entry(t.id).or_insert((0, 0, t.sign));
        if t.over {
            entry.0 = p;
        } else {
            entry.1 = p;
        }
    }
    let crossings = by_id
        .values()
        .map(|&(po, pu, sign)| {
            let (in_u, out_u) = (entering(pu), leaving(pu));
            let (in_o, out_o) = (entering(po), leaving(po));
            if sign < 0 {
                Crossing::new(in_u, out_o, out_u, in_o)
            } else {
                Crossing::new(in_u, in_o, out_u, out_o)
            }
        })
        .collect();
    Diagram::from_crossings(crossings).expect("Gauss conversion yields a valid CD code")
}

/// Parses either code format: text starting with `CD` is a CD code, otherwise a Gauss code.
pub fn parse_any(text: &str) -> Result<Diagram> {
    let t = text.trim_start();
    if t.starts_with("CD") {
        parse_cd(text)
    } else {
        parse_gauss(text).map(|g| gauss_to_cd(&g))
    }
}
