//! The decorated cube of resolutions.
//!
//! At crossing `X[i,j,k,l]` the 0-smoothing joins slots `{i,j}` and `{k,l}`,
//! the 1-smoothing joins `{l,i}` and `{j,k}`. Each smoothing has two arcs:
//!
//! | bit | arc 0   | arc 1   |
//! |-----|---------|---------|
//! | 0   | `{i,j}` | `{k,l}` |
//! | 1   | `{l,i}` | `{j,k}` |
//!
//! An arc is traversed forwards when a circle runs through it from slot `s`
//! to slot `s+1 (mod 4)`, i.e. `i→j`, `k→l`, `l→i` or `j→k`.
//!
//! Words are bitmasks; bit `c` is the smoothing of crossing `c`, printed as
//! the `c`-th character.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::diagram::Diagram;
use crate::error::{Error, Result};

pub type Word = u64;

pub const DEFAULT_MAX_CROSSINGS: usize = 16;

pub fn word_weight(w: Word) -> u32 {
    w.count_ones()
}

/// `n` characters, crossing 0 first.
pub fn word_string(w: Word, n: usize) -> String {
    (0..n)
        .map(|c| if w >> c & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Sort key realizing lexicographic order of [`word_string`].
pub fn word_order_key(w: Word, n: usize) -> u64 {
    if n == 0 {
        0
    } else {
        w.reverse_bits() >> (64 - n)
    }
}

/// Parses a word such as `"01"`, or a saddle such as `"0*1"` (returning the `*` position).
pub fn parse_word(s: &str) -> Result<(Word, Option<usize>)> {
    let mut w = 0;
    let mut star = None;
    for (c, ch) in s.trim().chars().enumerate() {
        match ch {
            '0' => {}
            '1' => w |= 1 << c,
            '*' if star.is_none() => star = Some(c),
            _ => return Err(Error::syntax(c, format!("unexpected '{ch}' in word"))),
        }
    }
    Ok((w, star))
}

/// Passage of a circle through one arc of a smoothed crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Visit {
    pub crossing: usize,
    pub arc: usize,
    pub forward: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circle {
    /// Position in the resolution's numbering, starting at 0.
    pub id: usize,
    /// Smallest edge label on the circle; 0 for a crossingless circle.
    pub min_edge: u32,
    /// Visits in traversal order, read in the circle's orientation.
    pub visits: Vec<Visit>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    pub word: Word,
    /// Circles in numbering order (`circles[k].id == k`).
    pub circles: Vec<Circle>,
    arc_circle: Vec<[usize; 2]>,
    arc_forward: Vec<[bool; 2]>,
}

impl Resolution {
    pub fn circle_count(&self) -> usize {
        self.circles.len()
    }

    pub fn arc_circle(&self, crossing: usize, arc: usize) -> usize {
        self.arc_circle[crossing][arc]
    }

    pub fn arc_forward(&self, crossing: usize, arc: usize) -> bool {
        self.arc_forward[crossing][arc]
    }

    fn circle_by_min_edge(&self, e: u32) -> usize {
        self.circles
            .iter()
            .find(|c| c.min_edge == e)
            .map(|c| c.id)
            .expect("circle present")
    }
}

/// Which slot of a crossing carries the x-marker.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XMarker {
    /// The marked circles run through the arcs at slot `i`: `{i,j}` before and `{l,i}` after.
    SlotI,
    /// The marked circles run through `{i,j}` before and `{j,k}` after.
    SlotJ,
}

/// How a circle's reference direction is chosen on its smallest edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CircleOrientation {
    /// From the endpoint with smaller `(crossing, slot)` to the larger one.
    EdgeOrder,
    /// Along the link orientation.
    Link,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeOptions {
    /// Randomly renumber circles in every resolution.
    pub numbering_seed: Option<u64>,
    /// Randomly reverse circle orientations in every resolution.
    pub orientation_seed: Option<u64>,
    pub max_crossings: usize,
    pub xmarker: XMarker,
    pub circle_orientation: CircleOrientation,
}

impl Default for CubeOptions {
    fn default() -> Self {
        CubeOptions {
            numbering_seed: None,
            orientation_seed: None,
            max_crossings: DEFAULT_MAX_CROSSINGS,
            xmarker: XMarker::SlotI,
            circle_orientation: CircleOrientation::EdgeOrder,
        }
    }
}

/// Other slot of the arc containing `slot` under smoothing `bit`.
pub fn partner_slot(bit: bool, slot: usize) -> usize {
    if bit {
        3 - slot
    } else {
        slot ^ 1
    }
}

/// Arc index (0 or 1) containing `slot` under smoothing `bit`.
pub fn arc_of_slot(bit: bool, slot: usize) -> usize {
    if bit {
        usize::from(slot == 1 || slot == 2)
    } else {
        usize::from(slot >= 2)
    }
}

fn mix_seed(seed: u64, w: Word) -> u64 {
    seed ^ w.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Smooths every crossing according to `word` and traces the resulting circles.
pub fn resolve(d: &Diagram, word: Word, opts: &CubeOptions) -> Resolution {
    let n = d.crossing_count();
    if n == 0 {
        return Resolution {
            word,
            circles: (0..d.loops())
                .map(|id| Circle {
                    id,
                    min_edge: 0,
                    visits: Vec::new(),
                })
                .collect(),
            arc_circle: Vec::new(),
            arc_forward: Vec::new(),
        };
    }
    let ends = d.edge_endpoints();
    let xs = d.crossings();
    let other_end = |c: usize, s: usize| -> (usize, usize) {
        let e = xs[c].slots[s] as usize - 1;
        if ends[e][0] == (c, s) {
            ends[e][1]
        } else {
            ends[e][0]
        }
    };
    let bit = |c: usize| word >> c & 1 == 1;
    let mut arc_circle = vec![[usize::MAX; 2]; n];
    let mut arc_forward = vec![[false; 2]; n];
    let mut circles = Vec::new();
    for (e, pair) in ends.iter().enumerate() {
        let (c0, s0) = pair[0];
        if arc_circle[c0][arc_of_slot(bit(c0), s0)] != usize::MAX {
            continue;
        }
        let (mut from, mut to) = (pair[0], pair[1]);
        if opts.circle_orientation == CircleOrientation::Link && !slot_is_in(d, to) {
            std::mem::swap(&mut from, &mut to);
        }
        let id = circles.len();
        let mut visits = Vec::new();
        let start = from;
        loop {
            // arrive at `to`, cross its arc
            let (c, s) = to;
            let b = bit(c);
            let exit = partner_slot(b, s);
            let arc = arc_of_slot(b, s);
            let forward = exit == (s + 1) % 4;
            arc_circle[c][arc] = id;
            arc_forward[c][arc] = forward;
            visits.push(Visit {
                crossing: c,
                arc,
                forward,
            });
            if (c, exit) == start {
                break;
            }
            to = other_end(c, exit);
        }
        circles.push(Circle {
            id,
            min_edge: e as u32 + 1,
            visits,
        });
    }

    if let Some(seed) = opts.orientation_seed {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, word));
        for circ in circles.iter_mut() {
            if rng.gen::<bool>() {
                circ.visits.reverse();
                for v in circ.visits.iter_mut() {
                    v.forward = !v.forward;
                    arc_forward[v.crossing][v.arc] = v.forward;
                }
            }
        }
    }

    if let Some(seed) = opts.numbering_seed {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed.rotate_left(17), word));
        let mut perm: Vec<usize> = (0..circles.len()).collect();
        perm.shuffle(&mut rng);
        for row in arc_circle.iter_mut() {
            for id in row.iter_mut() {
                *id = perm[*id];
            }
        }
        for circ in circles.iter_mut() {
            circ.id = perm[circ.id];
        }
        circles.sort_by_key(|c| c.id);
    }

    Resolution {
        word,
        circles,
        arc_circle,
        arc_forward,
    }
}

fn slot_is_in(d: &Diagram, (c, s): (usize, usize)) -> bool {
    if s % 2 == 0 {
        d.under_in_slot(c) == s
    } else {
        d.over_in_slot(c) == s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SaddleKind {
    Merge,
    Split,
    Theta,
}

impl fmt::Display for SaddleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SaddleKind::Merge => "merge",
            SaddleKind::Split => "split",
            SaddleKind::Theta => "theta",
        })
    }
}

/// An edge of the cube, from `source` to `source | 1 << crossing`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Saddle {
    pub source: Word,
    pub crossing: usize,
    pub kind: SaddleKind,
    pub sign: i8,
    /// Source circles pre-composed with Φ.
    pub phi_in: Vec<usize>,
    /// Target circles post-composed with Φ.
    pub phi_out: Vec<usize>,
    /// Affected source circles, x-marked first.
    pub src_affected: Vec<usize>,
    /// Affected target circles, x-marked first.
    pub dst_affected: Vec<usize>,
    /// Untouched circles as `(source id, target id)`.
    pub cylinders: Vec<(usize, usize)>,
}

impl Saddle {
    pub fn target(&self) -> Word {
        self.source | 1 << self.crossing
    }

    /// `word*pos kind sign phi_in phi_out`, circles numbered from 1.
    pub fn dump_line(&self, n: usize) -> String {
        let mut w: Vec<char> = word_string(self.source, n).chars().collect();
        w[self.crossing] = '*';
        let set = |v: &[usize]| {
            let items: Vec<String> = v.iter().map(|i| (i + 1).to_string()).collect();
            format!("{{{}}}", items.join(","))
        };
        format!(
            "{} {} {:+} {} {}",
            w.into_iter().collect::<String>(),
            self.kind,
            self.sign,
            set(&self.phi_in),
            set(&self.phi_out)
        )
    }
}

fn check_flip(src: &Resolution, dst: &Resolution, c: usize) -> Result<()> {
    if src.word >> c & 1 != 0 || dst.word != src.word | 1 << c {
        return Err(Error::Request(format!(
            "resolutions do not differ exactly at crossing {}",
            c + 1
        )));
    }
    Ok(())
}

pub fn classify_saddle(src: &Resolution, dst: &Resolution, c: usize) -> Result<SaddleKind> {
    check_flip(src, dst, c)?;
    Ok(kind_of(src, dst, c))
}

fn kind_of(src: &Resolution, dst: &Resolution, c: usize) -> SaddleKind {
    if src.arc_circle(c, 0) != src.arc_circle(c, 1) {
        SaddleKind::Merge
    } else if dst.arc_circle(c, 0) != dst.arc_circle(c, 1) {
        SaddleKind::Split
    } else {
        SaddleKind::Theta
    }
}

/// Φ masks `(phi_in, phi_out)` of a merge or split, read off from the arc
/// directions at the crossing; circles whose orientation differs between
/// source and target also get Φ.
pub fn decorate(src: &Resolution, dst: &Resolution, c: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    check_flip(src, dst, c)?;
    let kind = kind_of(src, dst, c);
    if kind == SaddleKind::Theta {
        return Err(Error::Request("theta saddles carry no decorations".into()));
    }
    Ok(decorations(src, dst, c, kind))
}

fn decorations(
    src: &Resolution,
    dst: &Resolution,
    c: usize,
    kind: SaddleKind,
) -> (Vec<usize>, Vec<usize>) {
    let mut phi_in = Vec::new();
    let mut phi_out = Vec::new();
    match kind {
        SaddleKind::Merge => {
            for arc in 0..2 {
                if !src.arc_forward(c, arc) {
                    phi_in.push(src.arc_circle(c, arc));
                }
            }
            if dst.arc_forward(c, 1) {
                phi_out.push(dst.arc_circle(c, 1));
            }
        }
        SaddleKind::Split => {
            if !src.arc_forward(c, 0) {
                phi_in.push(src.arc_circle(c, 0));
            }
            for arc in 0..2 {
                if dst.arc_forward(c, arc) {
                    phi_out.push(dst.arc_circle(c, arc));
                }
            }
        }
        SaddleKind::Theta => {}
    }
    for (a, b) in cylinders(src, dst, c) {
        if !same_direction(&src.circles[a], &dst.circles[b]) {
            phi_out.push(b);
        }
    }
    phi_in.sort_unstable();
    phi_out.sort_unstable();
    (phi_in, phi_out)
}

/// Whether two traversals of the same untouched circle agree in direction.
fn same_direction(a: &Circle, b: &Circle) -> bool {
    let first = a.visits.first();
    match first {
        None => true,
        Some(v) => b
            .visits
            .iter()
            .find(|w| w.crossing == v.crossing && w.arc == v.arc)
            .map(|w| w.forward == v.forward)
            .unwrap_or(true),
    }
}

fn cylinders(src: &Resolution, dst: &Resolution, c: usize) -> Vec<(usize, usize)> {
    let touched: Vec<usize> = if src.arc_circle.is_empty() {
        Vec::new()
    } else {
        vec![src.arc_circle(c, 0), src.arc_circle(c, 1)]
    };
    let mut out: Vec<(usize, usize)> = src
        .circles
        .iter()
        .filter(|circ| !touched.contains(&circ.id))
        .map(|circ| (circ.id, dst.circle_by_min_edge(circ.min_edge)))
        .collect();
    out.sort_unstable();
    out
}

fn affected(
    src: &Resolution,
    dst: &Resolution,
    c: usize,
    kind: SaddleKind,
    xm: XMarker,
) -> (Vec<usize>, Vec<usize>) {
    let x_dst_arc = match xm {
        XMarker::SlotI => 0,
        XMarker::SlotJ => 1,
    };
    let s0 = src.arc_circle(c, 0);
    let s1 = src.arc_circle(c, 1);
    let d0 = dst.arc_circle(c, x_dst_arc);
    let d1 = dst.arc_circle(c, 1 - x_dst_arc);
    match kind {
        SaddleKind::Merge => (vec![s0, s1], vec![d0]),
        SaddleKind::Split => (vec![s0], vec![d0, d1]),
        SaddleKind::Theta => (vec![s0], vec![d0]),
    }
}

/// Parity of the permutation putting `front` first and the remaining circles in ascending order.
fn front_permutation_sign(front: &[usize], total: usize) -> i8 {
    let mut order: Vec<usize> = front.to_vec();
    order.extend((0..total).filter(|k| !front.contains(k)));
    let mut inversions = 0;
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            if order[a] > order[b] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn saddle_sign(src: &Resolution, dst: &Resolution, c: usize, xm: XMarker) -> Result<i8> {
    check_flip(src, dst, c)?;
    let kind = kind_of(src, dst, c);
    Ok(sign_of(src, dst, c, kind, xm))
}

fn sign_of(src: &Resolution, dst: &Resolution, c: usize, kind: SaddleKind, xm: XMarker) -> i8 {
    if kind == SaddleKind::Theta {
        return 1;
    }
    let (sa, da) = affected(src, dst, c, kind, xm);
    front_permutation_sign(&sa, src.circle_count()) * front_permutation_sign(&da, dst.circle_count())
}

pub fn make_saddle(src: &Resolution, dst: &Resolution, c: usize, xm: XMarker) -> Saddle {
    let kind = kind_of(src, dst, c);
    let (phi_in, phi_out) = decorations(src, dst, c, kind);
    let (src_affected, dst_affected) = affected(src, dst, c, kind, xm);
    Saddle {
        source: src.word,
        crossing: c,
        kind,
        sign: sign_of(src, dst, c, kind, xm),
        phi_in,
        phi_out,
        src_affected,
        dst_affected,
        cylinders: cylinders(src, dst, c),
    }
}

#[derive(Clone, Debug)]
pub struct Cube {
    pub diagram: Diagram,
    pub options: CubeOptions,
    /// Indexed by word.
    pub resolutions: Vec<Resolution>,
    saddles: Vec<Saddle>,
    saddle_index: Vec<usize>,
}

impl Cube {
    pub fn crossing_count(&self) -> usize {
        self.diagram.crossing_count()
    }

    pub fn resolution(&self, w: Word) -> &Resolution {
        &self.resolutions[w as usize]
    }

    pub fn saddle(&self, w: Word, c: usize) -> Option<&Saddle> {
        let n = self.crossing_count();
        let idx = *self.saddle_index.get(w as usize * n + c)?;
        self.saddles.get(idx)
    }

    /// All saddles, ordered by source word then crossing.
    pub fn saddles(&self) -> &[Saddle] {
        &self.saddles
    }

    /// Words in lexicographic order.
    pub fn words(&self) -> Vec<Word> {
        let n = self.crossing_count();
        let mut ws: Vec<Word> = (0..1u64 << n).collect();
        ws.sort_by_key(|&w| word_order_key(w, n));
        ws
    }
}

pub fn build_cube(d: &Diagram, opts: &CubeOptions) -> Result<Cube> {
    let n = d.crossing_count();
    if n > opts.max_crossings || n > 30 {
        return Err(Error::TooManyCrossings {
            crossings: n,
            limit: opts.max_crossings.min(30),
        });
    }
    let resolutions: Vec<Resolution> = (0..1u64 << n)
        .into_par_iter()
        .map(|w| resolve(d, w, opts))
        .collect();
    let saddles: Vec<Saddle> = (0..1u64 << n)
        .into_par_iter()
        .flat_map_iter(|w| {
            let res = &resolutions;
            (0..n).filter(move |&c| w >> c & 1 == 0).map(move |c| {
                make_saddle(
                    &res[w as usize],
                    &res[(w | 1 << c) as usize],
                    c,
                    opts.xmarker,
                )
            })
        })
        .collect();
    let mut saddle_index = vec![usize::MAX; (1usize << n) * n];
    for (k, s) in saddles.iter().enumerate() {
        saddle_index[s.source as usize * n + s.crossing] = k;
    }
    Ok(Cube {
        diagram: d.clone(),
        options: opts.clone(),
        resolutions,
        saddles,
        saddle_index,
    })
}

/// A 2-face `w` with stars at `c1 < c2` whose two composites do not anticommute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceViolation {
    pub word: Word,
    pub crossings: (usize, usize),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FaceReport {
    pub faces: usize,
    pub violations: Vec<FaceViolation>,
}

impl FaceReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every square face for anticommutativity at the matrix level.
pub fn check_faces(cube: &Cube, alg: &crate::frobenius::FrobeniusAlgebra) -> FaceReport {
    use crate::chain::apply_saddle;
    let n = cube.crossing_count();
    let faces: Vec<(Word, usize, usize)> = (0..1u64 << n)
        .flat_map(|w| {
            (0..n).flat_map(move |c1| {
                (c1 + 1..n)
                    .filter(move |&c2| w >> c1 & 1 == 0 && w >> c2 & 1 == 0)
                    .map(move |c2| (w, c1, c2))
            })
        })
        .collect();
    let violations: Vec<FaceViolation> = faces
        .par_iter()
        .filter(|&&(w, c1, c2)| {
            let src = cube.resolution(w);
            let path = |a: usize, b: usize| -> Vec<BTreeMap<u64, crate::ring::Scalar>> {
                let s1 = cube.saddle(w, a).expect("saddle");
                let mid = cube.resolution(w | 1 << a);
                let s2 = cube.saddle(w | 1 << a, b).expect("saddle");
                let end = cube.resolution(w | 1 << a | 1 << b);
                (0..1u64 << src.circle_count())
                    .map(|labels| {
                        let mut acc: BTreeMap<u64, crate::ring::Scalar> = BTreeMap::new();
                        for (l1, v1) in apply_saddle(alg, s1, src, mid, labels) {
                            for (l2, v2) in apply_saddle(alg, s2, mid, end, l1) {
                                let e = acc.entry(l2).or_insert_with(|| alg.ring.zero());
                                *e = alg.ring.add(e, &alg.ring.mul(&v1, &v2));
                            }
                        }
                        acc.retain(|_, v| !num_traits::Zero::is_zero(v));
                        acc
                    })
                    .collect()
            };
            let top = path(c1, c2);
            let bottom = path(c2, c1);
            top.iter().zip(&bottom).any(|(a, b)| {
                let mut sum = a.clone();
                for (l, v) in b {
                    let e = sum.entry(*l).or_insert_with(|| alg.ring.zero());
                    *e = alg.ring.add(e, v);
                }
                sum.values().any(|v| !num_traits::Zero::is_zero(v))
            })
        })
        .map(|&(w, c1, c2)| FaceViolation {
            word: w,
            crossings: (c1, c2),
        })
        .collect();
    FaceReport {
        faces: faces.len(),
        violations,
    }
}
