//! The algebraic chain complex of a cube.
//!
//! The chain group in weight `r` is the direct sum over words of weight `r`
//! of `A^{⊗k}`, one tensor factor per circle. Basis vectors are ordered by
//! word (lexicographically) and then by labels, read circle by circle with
//! `1` before `X`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rayon::prelude::*;

use crate::cube::{word_order_key, Cube, Resolution, Saddle, SaddleKind, Word};
use crate::error::{Error, Result};
use crate::frobenius::{FrobeniusAlgebra, Mat};
use crate::ring::{Ring, Scalar};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    #[default]
    Normalized,
    Raw,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "normalized" => Ok(Mode::Normalized),
            "raw" => Ok(Mode::Raw),
            _ => Err(Error::Request(format!("unknown mode '{s}'"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Normalized => "normalized",
            Mode::Raw => "raw",
        })
    }
}

/// A sparse matrix stored by columns; each column is sorted by row.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMat {
    pub rows: usize,
    pub cols: usize,
    pub columns: Vec<Vec<(usize, Scalar)>>,
}

impl SparseMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMat {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.columns[c]
            .iter()
            .find(|(i, _)| *i == r)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Scalar::zero)
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, ring: Ring, rhs: &SparseMat) -> SparseMat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let columns = rhs
            .columns
            .par_iter()
            .map(|col| {
                let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                for (k, a) in col {
                    for (i, b) in &self.columns[*k] {
                        let e = acc.entry(*i).or_insert_with(Scalar::zero);
                        *e = ring.add(e, &ring.mul(a, b));
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        SparseMat {
            rows: self.rows,
            cols: rhs.cols,
            columns,
        }
    }

    pub fn to_dense(&self) -> Mat {
        let mut m = Mat::zeros(self.rows, self.cols);
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                m.set(*i, j, v.clone());
            }
        }
        m
    }
}

fn add_into(ring: Ring, acc: &mut BTreeMap<u64, Scalar>, key: u64, v: &Scalar) {
    let e = acc.entry(key).or_insert_with(Scalar::zero);
    *e = ring.add(e, v);
}

fn apply_phi(alg: &FrobeniusAlgebra, terms: BTreeMap<u64, Scalar>, circles: &[usize]) -> BTreeMap<u64, Scalar> {
    let ring = alg.ring;
    let mut cur = terms;
    for &k in circles {
        let mut next = BTreeMap::new();
        for (labels, v) in cur {
            let b = (labels >> k & 1) as usize;
            for out in 0..2usize {
                let c = alg.phi.get(out, b);
                if !c.is_zero() {
                    let l = (labels & !(1 << k)) | (out as u64) << k;
                    add_into(ring, &mut next, l, &ring.mul(&v, c));
                }
            }
        }
        next.retain(|_, v| !v.is_zero());
        cur = next;
    }
    cur
}

/// Image of the basis vector `labels` of `src` under the saddle map, as
/// `(target labels, coefficient)` pairs.
pub fn apply_saddle(
    alg: &FrobeniusAlgebra,
    s: &Saddle,
    _src: &Resolution,
    _dst: &Resolution,
    labels: u64,
) -> Vec<(u64, Scalar)> {
    let ring = alg.ring;
    let mut start = BTreeMap::new();
    start.insert(labels, ring.one());
    let pre = apply_phi(alg, start, &s.phi_in);
    let sign = ring.from_i64(s.sign as i64);
    let mut mid: BTreeMap<u64, Scalar> = BTreeMap::new();
    for (l, v) in pre {
        let mut base = 0u64;
        for &(a, b) in &s.cylinders {
            base |= (l >> a & 1) << b;
        }
        let bit = |k: usize| (l >> k & 1) as usize;
        let coeff = ring.mul(&v, &sign);
        match s.kind {
            SaddleKind::Merge => {
                let col = 2 * bit(s.src_affected[0]) + bit(s.src_affected[1]);
                for row in 0..2usize {
                    let c = alg.m.get(row, col);
                    if !c.is_zero() {
                        let t = base | (row as u64) << s.dst_affected[0];
                        add_into(ring, &mut mid, t, &ring.mul(&coeff, c));
                    }
                }
            }
            SaddleKind::Split => {
                let col = bit(s.src_affected[0]);
                for row in 0..4usize {
                    let c = alg.delta.get(row, col);
                    if !c.is_zero() {
                        let t = base
                            | ((row >> 1) as u64) << s.dst_affected[0]
                            | ((row & 1) as u64) << s.dst_affected[1];
                        add_into(ring, &mut mid, t, &ring.mul(&coeff, c));
                    }
                }
            }
            SaddleKind::Theta => {
                let col = bit(s.src_affected[0]);
                for row in 0..2usize {
                    let c = alg.theta.get(row, col);
                    if !c.is_zero() {
                        let t = base | (row as u64) << s.dst_affected[0];
                        add_into(ring, &mut mid, t, &ring.mul(&coeff, c));
                    }
                }
            }
        }
    }
    mid.retain(|_, v| !v.is_zero());
    apply_phi(alg, mid, &s.phi_out).into_iter().collect()
}

/// The matrix of one saddle map, columns indexed by source basis order and
/// rows by target basis order.
pub fn saddle_matrix(
    alg: &FrobeniusAlgebra,
    s: &Saddle,
    src: &Resolution,
    dst: &Resolution,
) -> Result<SparseMat> {
    if s.source != src.word || s.target() != dst.word {
        return Err(Error::Request("saddle does not connect the given resolutions".into()));
    }
    let (ks, kd) = (src.circle_count(), dst.circle_count());
    let mut m = SparseMat::zeros(1 << kd, 1 << ks);
    for labels in 0..1u64 << ks {
        let j = word_order_key(labels, ks) as usize;
        let mut col: Vec<(usize, Scalar)> = apply_saddle(alg, s, src, dst, labels)
            .into_iter()
            .map(|(l, v)| (word_order_key(l, kd) as usize, v))
            .collect();
        col.sort_by_key(|(i, _)| *i);
        m.columns[j] = col;
    }
    Ok(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisVector {
    pub word: Word,
    /// Bit `k` set means circle `k` carries `X`.
    pub labels: u64,
    pub qdeg: i64,
}

#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub ring: Ring,
    pub mode: Mode,
    /// Whether differentials preserve the quantum degree.
    pub graded: bool,
    pub n_plus: usize,
    pub n_minus: usize,
    /// `groups[r]` is the chain group of resolution weight `r`.
    pub groups: Vec<Vec<BasisVector>>,
    /// `diffs[r]` maps `groups[r]` to `groups[r + 1]`.
    pub diffs: Vec<SparseMat>,
}

/// Largest total basis size accepted when assembling a complex.
pub const MAX_BASIS: usize = 1 << 24;

impl ChainComplex {
    /// Homological degree of weight `r`.
    pub fn hom_degree(&self, r: usize) -> i64 {
        match self.mode {
            Mode::Normalized => r as i64 - self.n_minus as i64,
            Mode::Raw => r as i64,
        }
    }

    pub fn weights(&self) -> std::ops::RangeInclusive<usize> {
        0..=self.groups.len() - 1
    }

    pub fn dims(&self) -> Vec<usize> {
        self.groups.iter().map(Vec::len).collect()
    }

    /// Differential out of weight `r` (zero map past the ends).
    pub fn diff(&self, r: usize) -> SparseMat {
        match self.diffs.get(r) {
            Some(d) => d.clone(),
            None => SparseMat::zeros(0, self.groups.get(r).map_or(0, Vec::len)),
        }
    }
}

fn qdeg(mode: Mode, labels: u64, k: usize, r: usize, n_plus: usize, n_minus: usize) -> i64 {
    let x = labels.count_ones() as i64;
    let base = (k as i64 - 2 * x) + r as i64;
    match mode {
        Mode::Normalized => base + n_plus as i64 - 2 * n_minus as i64,
        Mode::Raw => base,
    }
}

pub fn build_complex(cube: &Cube, alg: &FrobeniusAlgebra, mode: Mode) -> Result<ChainComplex> {
    let d = &cube.diagram;
    let n = d.crossing_count();
    let (n_plus, n_minus) = (d.n_plus(), d.n_minus());
    let total: usize = cube.resolutions.iter().map(|r| 1usize << r.circle_count().min(40)).sum();
    if total > MAX_BASIS {
        return Err(Error::TooManyCrossings {
            crossings: n,
            limit: cube.options.max_crossings,
        });
    }
    let words = cube.words();
    let mut by_weight: Vec<Vec<Word>> = vec![Vec::new(); n + 1];
    for &w in &words {
        by_weight[w.count_ones() as usize].push(w);
    }
    // offset of each word's block within its chain group
    let mut offset = vec![0usize; 1 << n];
    let mut groups = Vec::with_capacity(n + 1);
    for (r, ws) in by_weight.iter().enumerate() {
        let mut g = Vec::new();
        for &w in ws {
            offset[w as usize] = g.len();
            let k = cube.resolution(w).circle_count();
            let mut labels: Vec<u64> = (0..1u64 << k).collect();
            labels.sort_by_key(|&l| word_order_key(l, k));
            g.extend(labels.into_iter().map(|l| BasisVector {
                word: w,
                labels: l,
                qdeg: qdeg(mode, l, k, r, n_plus, n_minus),
            }));
        }
        groups.push(g);
    }
    let mut diffs = Vec::with_capacity(n);
    for r in 0..n {
        let columns: Vec<Vec<(usize, Scalar)>> = by_weight[r]
            .par_iter()
            .flat_map_iter(|&w| {
                let src = cube.resolution(w);
                let k = src.circle_count();
                let mut labels: Vec<u64> = (0..1u64 << k).collect();
                labels.sort_by_key(|&l| word_order_key(l, k));
                let offset = &offset;
                labels.into_iter().map(move |l| {
                    let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                    for c in (0..n).filter(|&c| w >> c & 1 == 0) {
                        let s = cube.saddle(w, c).expect("saddle");
                        let dst = cube.resolution(s.target());
                        let base = offset[s.target() as usize];
                        let kd = dst.circle_count();
                        for (tl, v) in apply_saddle(alg, s, src, dst, l) {
                            let row = base + word_order_key(tl, kd) as usize;
                            let e = acc.entry(row).or_insert_with(Scalar::zero);
                            *e = alg.ring.add(e, &v);
                        }
                    }
                    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
                })
            })
            .collect();
        diffs.push(SparseMat {
            rows: groups[r + 1].len(),
            cols: groups[r].len(),
            columns,
        });
    }
    Ok(ChainComplex {
        ring: alg.ring,
        mode,
        graded: alg.is_graded(),
        n_plus,
        n_minus,
        groups,
        diffs,
    })
}

/// Weights `r` with `d_{r+1} ∘ d_r ≠ 0`.
pub fn d_squared_failures(c: &ChainComplex) -> Vec<usize> {
    (0..c.diffs.len().saturating_sub(1))
        .filter(|&r| !c.diffs[r + 1].compose(c.ring, &c.diffs[r]).is_zero())
        .collect()
}

pub fn verify_d_squared(c: &ChainComplex) -> bool {
    d_squared_failures(c).is_empty()
}

/// Checks that every nonzero differential entry joins basis vectors of equal quantum degree.
pub fn preserves_qdeg(c: &ChainComplex) -> bool {
    c.diffs.iter().enumerate().all(|(r, d)| {
        d.columns.iter().enumerate().all(|(j, col)| {
            col.iter()
                .all(|(i, _)| c.groups[r + 1][*i].qdeg == c.groups[r][j].qdeg)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::{build_cube, parse_word, CubeOptions};
    use crate::diagram::{parse_any, Diagram};
    use crate::frobenius::{preset, Preset};

    fn complex(code: &str, p: Preset, ring: Ring) -> (Cube, ChainComplex) {
        let d = parse_any(code).unwrap();
        let cube = build_cube(&d, &CubeOptions::default()).unwrap();
        let c = build_complex(&cube, &preset(p, ring).unwrap(), Mode::Normalized).unwrap();
        (cube, c)
    }

    fn dense(m: &SparseMat) -> Vec<Vec<i64>> {
        let d = m.to_dense();
        (0..d.rows)
            .map(|i| (0..d.cols).map(|j| d.get(i, j).to_integer().try_into().unwrap()).collect())
            .collect()
    }

    fn neg(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
        m.iter().map(|r| r.iter().map(|x| -x).collect()).collect()
    }

    const UNKNOT: &str = "CD[X[1,3,2,4], X[2,1,3,4]]";

    #[test]
    fn unknot_dims_and_degrees() {
        let (_, c) = complex(UNKNOT, Preset::Khovanov, Ring::Z);
        assert_eq!(c.dims(), vec![2, 6, 2]);
        assert_eq!((c.hom_degree(0), c.hom_degree(2)), (-1, 1));
        assert!(verify_d_squared(&c));
        assert!(preserves_qdeg(&c));
    }

    #[test]
    fn empty_diagram() {
        let cube = build_cube(&Diagram::empty(), &CubeOptions::default()).unwrap();
        let c = build_complex(&cube, &preset(Preset::Khovanov, Ring::Z).unwrap(), Mode::Normalized).unwrap();
        assert_eq!(c.dims(), vec![2]);
        assert!(c.diffs.is_empty());
        let q: Vec<i64> = c.groups[0].iter().map(|b| b.qdeg).collect();
        assert_eq!(q, vec![1, -1]);
    }

    #[test]
    fn unknot_saddle_matrices() {
        let (cube, _) = complex(UNKNOT, Preset::Khovanov, Ring::Z);
        let alg = preset(Preset::Khovanov, Ring::Z).unwrap();
        let m = |w: &str| {
            let (w, c) = parse_word(w).unwrap();
            let s = cube.saddle(w, c.unwrap()).unwrap();
            dense(&saddle_matrix(&alg, s, cube.resolution(w), cube.resolution(s.target())).unwrap())
        };
        let split = m("0*");
        let listed_split = vec![vec![0, 0], vec![1, 0], vec![-1, 0], vec![0, 1]];
        assert!(split == listed_split || split == neg(&listed_split), "{split:?}");
        let merge = m("*1");
        let listed_merge = vec![vec![-1, 0, 0, 0], vec![0, -1, -1, 0]];
        assert!(merge == listed_merge || merge == neg(&listed_merge), "{merge:?}");
        assert!(m("*0").iter().flatten().all(|&x| x == 0));
        assert!(m("1*").iter().flatten().all(|&x| x == 0));
    }

    #[test]
    fn lee_trefoil_second_differential() {
        let (_, c) = complex("O1-O2-U1-U2-", Preset::Lee, Ring::Q);
        assert!(c.diffs[0].is_zero());
        let want = vec![
            vec![0, 1, 0, -1],
            vec![1, 0, 1, 0],
            vec![1, 0, -1, 0],
            vec![0, 1, 0, 1],
        ];
        let got = dense(&c.diffs[1]);
        assert!(got == want || got == neg(&want), "{got:?}");
    }

    #[test]
    fn flipped_sign_breaks_d_squared() {
        let (_, mut c) = complex("CD[X[1,5,2,4],X[5,3,6,2],X[3,1,4,6]]", Preset::Khovanov, Ring::Z);
        assert!(verify_d_squared(&c));
        let col = c.diffs[0].columns.iter_mut().find(|col| !col.is_empty()).unwrap();
        col[0].1 = -col[0].1.clone();
        assert!(!verify_d_squared(&c));
    }
}
