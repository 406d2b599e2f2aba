//! Bigraded homology of chain complexes.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::chain::{d_squared_failures, ChainComplex, Mode, SparseMat};
use crate::error::{Error, Result};
use crate::poly::{Laurent1, Laurent2};
use crate::ring::{is_prime, Ring};
use crate::snf::{rank_mod_p, rank_rational, sparse_smith, Columns};

/// Free rank and torsion invariant factors (> 1) in one bidegree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Group {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

/// Homology keyed by `(t, q)`; `q` is `None` when the complex is only filtered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedHomology {
    pub ring: Ring,
    pub mode: Mode,
    pub entries: BTreeMap<(i64, Option<i64>), Group>,
}

impl BigradedHomology {
    pub fn total_rank(&self) -> usize {
        self.entries.values().map(|g| g.rank).sum()
    }

    /// Total rank per homological degree.
    pub fn ranks_by_degree(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for (&(t, _), g) in &self.entries {
            if g.rank > 0 {
                *out.entry(t).or_insert(0) += g.rank;
            }
        }
        out
    }

    pub fn get(&self, t: i64, q: Option<i64>) -> Group {
        self.entries.get(&(t, q)).cloned().unwrap_or_default()
    }

    pub fn has_torsion(&self) -> bool {
        self.entries.values().any(|g| !g.torsion.is_empty())
    }

    /// Torsion factors split into prime powers, as `(t, q, p^k)`.
    pub fn primary_torsion(&self) -> Vec<(i64, Option<i64>, BigInt)> {
        let mut out = Vec::new();
        for (&(t, q), g) in &self.entries {
            for d in &g.torsion {
                for pk in prime_power_parts(d) {
                    out.push((t, q, pk));
                }
            }
        }
        out
    }
}

fn prime_power_parts(d: &BigInt) -> Vec<BigInt> {
    let mut n = d.clone();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut pk = BigInt::from(1);
        while (&n % &p).is_zero() {
            n /= &p;
            pk *= &p;
        }
        if pk > BigInt::from(1) {
            out.push(pk);
        }
        p += 1;
    }
    if n > BigInt::from(1) {
        out.push(n);
    }
    out
}

/// A block of one differential: rows and columns restricted to one quantum degree.
struct Block {
    rows: usize,
    columns: Columns<BigRational>,
}

/// Splits the basis of every chain group by quantum degree (or keeps it whole).
fn blocks(c: &ChainComplex, graded: bool) -> (Vec<BTreeMap<Option<i64>, Vec<usize>>>, Vec<BTreeMap<Option<i64>, Block>>) {
    let key = |q: i64| if graded { Some(q) } else { None };
    let parts: Vec<BTreeMap<Option<i64>, Vec<usize>>> = c
        .groups
        .iter()
        .map(|g| {
            let mut m: BTreeMap<Option<i64>, Vec<usize>> = BTreeMap::new();
            for (idx, b) in g.iter().enumerate() {
                m.entry(key(b.qdeg)).or_default().push(idx);
            }
            m
        })
        .collect();
    let diff_blocks = c
        .diffs
        .iter()
        .enumerate()
        .map(|(r, d)| split_diff(d, &parts[r], &parts[r + 1], c, r, graded))
        .collect();
    (parts, diff_blocks)
}

fn split_diff(
    d: &SparseMat,
    src: &BTreeMap<Option<i64>, Vec<usize>>,
    dst: &BTreeMap<Option<i64>, Vec<usize>>,
    c: &ChainComplex,
    r: usize,
    graded: bool,
) -> BTreeMap<Option<i64>, Block> {
    let mut pos = vec![0usize; c.groups[r + 1].len()];
    for idx in dst.values() {
        for (k, &i) in idx.iter().enumerate() {
            pos[i] = k;
        }
    }
    src.iter()
        .map(|(q, cols)| {
            let rows = dst.get(q).map_or(0, Vec::len);
            let columns = cols
                .iter()
                .map(|&j| {
                    d.columns[j]
                        .iter()
                        .map(|(i, v)| {
                            debug_assert!(!graded || Some(c.groups[r + 1][*i].qdeg) == *q);
                            (pos[*i], v.clone())
                        })
                        .collect()
                })
                .collect();
            (*q, Block { rows, columns })
        })
        .collect()
}

fn to_integer_columns(cols: &Columns<BigRational>) -> Columns<BigInt> {
    cols.iter()
        .map(|c| c.iter().map(|(i, v)| (*i, v.to_integer())).collect())
        .collect()
}

struct BlockResult {
    rank: usize,
    torsion: Vec<BigInt>,
}

fn reduce_block(b: &Block, complex_ring: Ring, ring: Ring) -> BlockResult {
    match ring {
        Ring::Q => BlockResult {
            rank: rank_rational(&b.columns),
            torsion: Vec::new(),
        },
        Ring::Fp(p) => BlockResult {
            rank: rank_mod_p(&to_integer_columns(&b.columns), p),
            torsion: Vec::new(),
        },
        Ring::Z => {
            debug_assert_eq!(complex_ring, Ring::Z);
            let s = sparse_smith(b.rows, &to_integer_columns(&b.columns));
            BlockResult {
                rank: s.rank,
                torsion: s.torsion(),
            }
        }
    }
}

fn check_ring(c: &ChainComplex, ring: Ring) -> Result<()> {
    let ok = match (c.ring, ring) {
        (Ring::Z, _) => true,
        (a, b) => a == b,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Request(format!(
            "cannot take homology over {ring} of a complex over {}",
            c.ring
        )))
    }
}

/// Homology over `ring`, after checking `d² = 0`. A complex over `Z` may be
/// reduced to `Q` or any `F_p`.
pub fn homology_over(c: &ChainComplex, ring: Ring) -> Result<BigradedHomology> {
    let bad = d_squared_failures(c);
    if !bad.is_empty() {
        return Err(Error::Invariant(format!(
            "d^2 != 0 out of weights {bad:?}"
        )));
    }
    homology_unchecked(c, ring)
}

/// Homology without the `d² = 0` guard.
pub fn homology_unchecked(c: &ChainComplex, ring: Ring) -> Result<BigradedHomology> {
    check_ring(c, ring)?;
    let graded = c.graded;
    let (parts, diff_blocks) = blocks(c, graded);
    let jobs: Vec<(usize, Option<i64>)> = diff_blocks
        .iter()
        .enumerate()
        .flat_map(|(r, m)| m.keys().map(move |q| (r, *q)))
        .collect();
    let results: BTreeMap<(usize, Option<i64>), BlockResult> = jobs
        .par_iter()
        .map(|&(r, q)| ((r, q), reduce_block(&diff_blocks[r][&q], c.ring, ring)))
        .collect();
    let mut entries = BTreeMap::new();
    for (r, part) in parts.iter().enumerate() {
        for (q, idx) in part {
            let dim = idx.len();
            let out = results.get(&(r, *q)).map_or(0, |b| b.rank);
            let (inc, torsion) = if r == 0 {
                (0, Vec::new())
            } else {
                results
                    .get(&(r - 1, *q))
                    .map_or((0, Vec::new()), |b| (b.rank, b.torsion.clone()))
            };
            let rank = dim - out - inc;
            if rank > 0 || !torsion.is_empty() {
                entries.insert((c.hom_degree(r), *q), Group { rank, torsion });
            }
        }
    }
    Ok(BigradedHomology {
        ring,
        mode: c.mode,
        entries,
    })
}

/// `Σ rank · q^q t^t`; filtered entries contribute `q^0`.
pub fn betti_poly(h: &BigradedHomology) -> Laurent2 {
    Laurent2::from_terms(
        h.entries
            .iter()
            .map(|(&(t, q), g)| (g.rank as i64, q.unwrap_or(0), t)),
    )
}

/// Number of invariant factors divisible by `p` in each bidegree of an integral homology.
pub fn torsion_poly(h: &BigradedHomology, p: u64) -> Result<Laurent2> {
    if !is_prime(p) {
        return Err(Error::Ring(format!("{p} is not prime")));
    }
    if h.ring != Ring::Z {
        return Err(Error::Request("torsion needs integral homology".into()));
    }
    let bp = BigInt::from(p);
    Ok(Laurent2::from_terms(h.entries.iter().map(|(&(t, q), g)| {
        let n = g.torsion.iter().filter(|d| d.is_multiple_of(&bp)).count();
        (n as i64, q.unwrap_or(0), t)
    })))
}

/// `Σ (-1)^t q^q` over the chain basis.
pub fn euler_chain_level(c: &ChainComplex) -> Laurent1 {
    let mut p = Laurent1::zero();
    for (r, g) in c.groups.iter().enumerate() {
        let sign = if c.hom_degree(r).rem_euclid(2) == 0 { 1 } else { -1 };
        for b in g {
            p.add_term(b.qdeg, sign);
        }
    }
    p
}

/// Graded Euler characteristic, computed from the chain groups and from
/// rational homology; the two must agree.
pub fn euler_char(c: &ChainComplex) -> Result<Laurent1> {
    if !c.graded {
        return Err(Error::Request("Euler characteristic needs a graded complex".into()));
    }
    let chain = euler_chain_level(c);
    let ring = if c.ring == Ring::Z { Ring::Q } else { c.ring };
    let h = homology_over(c, ring)?;
    let hom = betti_poly(&h).at_t_minus_one();
    if chain != hom {
        return Err(Error::Invariant(format!(
            "chain-level Euler characteristic {chain} differs from homology-level {hom}"
        )));
    }
    Ok(chain)
}
