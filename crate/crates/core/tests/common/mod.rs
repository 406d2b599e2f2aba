#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vkh::chain::{build_complex, ChainComplex, Mode};
use vkh::cube::{build_cube, CubeOptions, Word};
use vkh::diagram::{parse_any, Diagram};
use vkh::frobenius::{preset, Preset};
use vkh::homology::{homology_over, BigradedHomology};
use vkh::poly::{Laurent1, Laurent2};
use vkh::ring::Ring;

pub const UNKNOT: &str = "CD[X[1,3,2,4], X[2,1,3,4]]";
pub const KNOT21: &str = "CD[X[1,3,2,4], X[4,2,1,3]]";
pub const KNOT36: &str = "CD[X[1,5,2,4], X[5,3,6,2], X[3,1,4,6]]";
pub const KNOT36V: &str = "CD[X[1,4,2,5], X[2,5,3,6], X[3,6,4,1]]";
pub const KNOT32: &str = "CD[X[2,6,3,1], X[4,2,5,1], X[5,3,6,4]]";
pub const KNOT459: &str = "CD[X[2,8,3,1], X[4,2,5,1], X[3,6,4,7], X[5,8,6,7]]";
pub const KNOT53: &str = "CD[X[1,9,2,10], X[2,10,3,1], X[5,4,6,3], X[7,4,8,5], X[8,7,9,6]]";
pub const KNOT41_GAUSS: &str = "O1-O2-U1-U2-O3-O4-U3-U4-";
pub const KNOT21_GAUSS: &str = "O1-O2-U1-U2-";
pub const EXAMPLE1: &str = "CD[X[1,4,2,3], X[2,10,3,11], X[4,9,5,10], X[11,5,12,6], X[6,1,7,14], X[12,8,13,7], X[13,9,14,8]]";
pub const EXAMPLE2: &str = "CD[X[1,4,2,3], X[2,11,3,10], X[4,10,5,9], X[14,5,1,6], X[6,12,7,11], X[13,7,14,8], X[12,8,13,9]]";
pub const EXAMPLE3: &str = "CD[X[1,4,2,3], X[2,11,3,10], X[4,9,5,10], X[13,5,14,6], X[6,11,7,12], X[14,8,1,7], X[12,8,13,9]]";
pub const EXAMPLE4: &str = "CD[X[1,4,2,3], X[2,11,3,10], X[4,10,5,9], X[14,5,1,6], X[6,13,7,14], X[11,7,12,8], X[12,8,13,9]]";
/// Three crossings whose only non-alternating resolution is 011.
pub const RASEXAMPLE: &str = "CD[X[4,2,5,1], X[2,6,3,1], X[5,3,6,4]]";
pub const HOPF: &str = "CD[X[1,3,2,4], X[3,1,4,2]]";
pub const VIRTUAL_HOPF: &str = "CD[X[1,2,1,2]]";
pub const TWO_HOPF: &str = "CD[X[1,5,2,6], X[5,1,6,2], X[3,7,4,8], X[7,3,8,4]]";

/// Every diagram with a reference value, plus a few links.
pub fn corpus() -> Vec<(&'static str, Diagram)> {
    [
        ("unknot", UNKNOT),
        ("knot21", KNOT21),
        ("knot36", KNOT36),
        ("knot36v", KNOT36V),
        ("knot32", KNOT32),
        ("knot459", KNOT459),
        ("knot53", KNOT53),
        ("knot41", KNOT41_GAUSS),
        ("knot21gauss", KNOT21_GAUSS),
        ("example1", EXAMPLE1),
        ("example2", EXAMPLE2),
        ("example3", EXAMPLE3),
        ("example4", EXAMPLE4),
        ("rasexample", RASEXAMPLE),
        ("hopf", HOPF),
        ("virtual hopf", VIRTUAL_HOPF),
        ("two hopf", TWO_HOPF),
        ("kink", "O1+U1+"),
        ("circle", "CD[]"),
    ]
    .into_iter()
    .map(|(n, c)| (n, parse_any(c).unwrap()))
    .collect()
}

pub fn d(code: &str) -> Diagram {
    parse_any(code).unwrap()
}

pub fn complex_with(d: &Diagram, p: Preset, ring: Ring, opts: &CubeOptions) -> ChainComplex {
    let cube = build_cube(d, opts).unwrap();
    build_complex(&cube, &preset(p, ring).unwrap(), Mode::Normalized).unwrap()
}

pub fn khovanov(d: &Diagram) -> ChainComplex {
    complex_with(d, Preset::Khovanov, Ring::Z, &CubeOptions::default())
}

pub fn homology(d: &Diagram, ring: Ring) -> BigradedHomology {
    homology_over(&khovanov(d), ring).unwrap()
}

/// `Σ c q^a t^b` from `(c, a, b)` triples.
pub fn l2(terms: &[(i64, i64, i64)]) -> Laurent2 {
    Laurent2::from_terms(terms.iter().copied())
}

/// `Σ c q^a` from `(a, c)` pairs.
pub fn l1(terms: &[(i64, i64)]) -> Laurent1 {
    Laurent1::from_terms(terms.iter().copied())
}

/// Independent circle count: union-find over crossing slots.
pub fn trace_circles(d: &Diagram, word: Word) -> usize {
    let xs = d.crossings();
    let n = xs.len();
    if n == 0 {
        return d.loops();
    }
    let mut parent: Vec<usize> = (0..4 * n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    let union = |p: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(p, a), find(p, b));
        p[ra] = rb;
    };
    let mut first_seen = std::collections::HashMap::new();
    for (c, x) in xs.iter().enumerate() {
        for (s, &e) in x.slots.iter().enumerate() {
            if let Some(other) = first_seen.insert(e, 4 * c + s) {
                union(&mut parent, other, 4 * c + s);
            }
        }
        let pairs = if word >> c & 1 == 0 { [(0, 1), (2, 3)] } else { [(3, 0), (1, 2)] };
        for (a, b) in pairs {
            union(&mut parent, 4 * c + a, 4 * c + b);
        }
    }
    let mut roots: Vec<usize> = (0..4 * n).map(|v| find(&mut parent, v)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

/// Bracket by the recursion ⟨D⟩ = ⟨D₀⟩ - q⟨D₁⟩, smoothing one crossing at a time.
pub fn recursive_bracket(d: &Diagram) -> Laurent1 {
    fn go(d: &Diagram, c: usize, word: Word) -> Laurent1 {
        if c == d.crossing_count() {
            return Laurent1::circle().pow(trace_circles(d, word) as u32);
        }
        let zero = go(d, c + 1, word);
        let one = go(d, c + 1, word | 1 << c);
        zero + -(one.shift(1))
    }
    go(d, 0, 0)
}

/// A random signed Gauss code of a virtual knot with `n` crossings.
pub fn random_gauss(rng: &mut ChaCha8Rng, n: usize) -> String {
    let mut toks: Vec<(bool, usize)> = (0..n).flat_map(|c| [(true, c), (false, c)]).collect();
    toks.shuffle(rng);
    let start = toks.iter().position(|t| t.0).unwrap();
    toks.rotate_left(start);
    let mut relabel = vec![usize::MAX; n];
    let mut next = 1;
    for t in &toks {
        if relabel[t.1] == usize::MAX {
            relabel[t.1] = next;
            next += 1;
        }
    }
    let signs: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    toks.iter()
        .map(|&(o, c)| format!("{}{}{}", if o { 'O' } else { 'U' }, relabel[c], if signs[c] { '+' } else { '-' }))
        .collect()
}

pub fn random_diagrams(seed: u64, count: usize, crossings: std::ops::RangeInclusive<usize>) -> Vec<(String, Diagram)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(crossings.clone());
            let g = random_gauss(&mut rng, n);
            let d = parse_any(&g).unwrap();
            (g, d)
        })
        .collect()
}

pub fn det(m: &[Vec<BigInt>]) -> BigInt {
    // Bareiss fraction-free elimination
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Invariant factors from determinantal divisors: `d_k` is the gcd of all
/// `k × k` minors and the `k`-th factor is `d_k / d_{k-1}`.
pub fn naive_invariant_factors(m: &[Vec<i64>]) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=rows.min(cols) {
        let mut g = BigInt::zero();
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<BigInt>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| BigInt::from(m[r][c])).collect())
                    .collect();
                g = g.gcd(&det(&minor));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push((&g / &prev).abs());
        prev = g;
    }
    out
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> Vec<Vec<i64>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect()
}

// Reference polynomials, as (coefficient, q, t).

pub fn knot21_ref() -> Laurent2 {
    l2(&[(1, -3, 0), (1, -1, 0), (1, -6, -2), (1, -2, -1)])
}

pub fn trefoil_ref() -> Laurent2 {
    l2(&[(1, -3, 0), (1, -1, 0), (1, -9, -3), (1, -5, -2)])
}

pub fn example1_ref() -> Laurent2 {
    l2(&[
        (2, 0, 0), (1, -1, 0), (1, 1, 0), (2, 2, 0), (1, -3, -2), (2, -2, -1), (1, 1, -1),
        (2, 1, 1), (2, 4, 1), (1, 3, 2), (2, 5, 2), (1, 7, 3),
    ])
}

pub fn example3_ref() -> Laurent2 {
    l2(&[
        (2, -2, 0), (1, -1, 0), (3, 1, 0), (1, -6, -3), (2, -5, -2), (1, -2, -2), (2, -3, -1),
        (2, -1, -1), (1, 0, 1), (2, 2, 1), (1, 4, 2),
    ])
}

pub fn example4_ref() -> Laurent2 {
    l2(&[
        (1, 0, 0), (2, -2, 0), (2, -1, 0), (3, 1, 0), (1, -6, -3), (2, -5, -2), (1, -4, -2),
        (1, -2, -2), (1, 0, -1), (1, -4, -1), (2, -3, -1), (2, -1, -1), (1, 0, 1), (1, -1, 1),
        (2, 2, 1), (1, 3, 1), (1, 3, 2), (1, 4, 2),
    ])
}

pub fn unknot_ref() -> Laurent2 {
    l2(&[(1, -1, 0), (1, 1, 0)])
}

pub fn knot32_ref() -> Laurent2 {
    l2(&[(1, -2, 0), (1, -1, 0), (1, 1, 0), (1, -5, -2), (1, -1, -1), (1, 2, 1)])
}

pub fn knot53_ref() -> Laurent2 {
    l2(&[
        (2, 0, 0), (1, -3, 0), (1, -2, 0), (1, -1, 0), (1, -7, -3), (1, -6, -2), (1, -5, -2),
        (1, -3, -2), (2, -4, -1), (1, -2, -1), (1, -1, -1), (1, -1, 1), (1, 2, 1), (1, 3, 2),
    ])
}

pub fn knot41_ref() -> Laurent2 {
    l2(&[(1, 3, 0), (1, 5, 0), (2, 4, 1), (1, 5, 2), (2, 8, 2), (1, 7, 3), (1, 9, 3), (1, 11, 4)])
}

pub fn example12_extra() -> Laurent2 {
    l2(&[(1, 2, 1), (1, 2, 2), (1, 3, 0), (1, 3, 1), (1, 6, 2), (1, 6, 3)])
}
