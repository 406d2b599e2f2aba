//! Lee degeneration: non-alternating resolutions and the rank `2^n` check.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::chain::{build_complex, Mode};
use crate::cube::{build_cube, word_weight, CubeOptions, Word};
use crate::diagram::Diagram;
use crate::error::Result;
use crate::frobenius::{preset, Preset};
use crate::homology::homology_over;
use crate::ring::Ring;

/// The resolution forced by one orientation: positive crossings smoothed 0,
/// negative ones smoothed 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonAlternatingWitness {
    pub orientation: Vec<bool>,
    pub word: Word,
    /// Normalized homological degree relative to the diagram's own orientation.
    pub homdeg: i64,
}

pub fn non_alternating_resolutions(d: &Diagram) -> Result<Vec<NonAlternatingWitness>> {
    let m = d.component_count();
    let crossed = d.components().len();
    let base_minus = d.n_minus() as i64;
    let mut out = Vec::with_capacity(1 << m);
    for mask in 0..1u64 << m {
        let flags: Vec<bool> = (0..m).map(|c| mask >> c & 1 == 0).collect();
        let o = d.with_orientation(&flags[..crossed])?;
        let word = o
            .signs()
            .iter()
            .enumerate()
            .filter(|(_, &s)| s < 0)
            .fold(0, |w, (c, _)| w | 1 << c);
        out.push(NonAlternatingWitness {
            orientation: flags,
            word,
            homdeg: word_weight(word) as i64 - base_minus,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeeReport {
    pub components: usize,
    /// Rational Lee homology rank per normalized homological degree.
    pub ranks: BTreeMap<i64, usize>,
    pub total_rank: usize,
    pub expected_rank: usize,
    /// Ranks over `F_p` for the odd primes checked.
    pub fp_ranks: Vec<(u64, usize)>,
    /// Integral torsion invariant factors with their degrees.
    pub torsion: Vec<(i64, BigInt)>,
    pub violations: Vec<String>,
}

impl LeeReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub const ODD_PRIMES: [u64; 3] = [3, 5, 7];

pub fn lee_degeneration_check(d: &Diagram, opts: &CubeOptions) -> Result<LeeReport> {
    let cube = build_cube(d, opts)?;
    let cz = build_complex(&cube, &preset(Preset::Lee, Ring::Z)?, Mode::Normalized)?;
    let hq = homology_over(&cz, Ring::Q)?;
    let hz = homology_over(&cz, Ring::Z)?;
    let ranks = hq.ranks_by_degree();
    let total_rank = hq.total_rank();
    let components = d.component_count();
    let expected_rank = 1usize << components;
    let mut violations = Vec::new();
    if total_rank != expected_rank {
        violations.push(format!("total rank {total_rank}, expected {expected_rank}"));
    }
    if components == 1 && ranks.keys().any(|&t| t != 0) {
        violations.push(format!("knot generators outside degree 0: {ranks:?}"));
    }
    let torsion: Vec<(i64, BigInt)> = hz
        .entries
        .iter()
        .flat_map(|(&(t, _), g)| g.torsion.iter().map(move |f| (t, f.clone())))
        .collect();
    let mut fp_ranks = Vec::new();
    for p in ODD_PRIMES {
        let bp = BigInt::from(p);
        if torsion.iter().any(|(_, f)| f.is_multiple_of(&bp)) {
            violations.push(format!("{p}-torsion present"));
        }
        let r = homology_over(&cz, Ring::Fp(p))?.total_rank();
        if r != total_rank {
            violations.push(format!("rank over F{p} is {r}, over Q {total_rank}"));
        }
        fp_ranks.push((p, r));
    }
    Ok(LeeReport {
        components,
        ranks,
        total_rank,
        expected_rank,
        fp_ranks,
        torsion,
        violations,
    })
}
