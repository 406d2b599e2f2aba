//! Exact ranks and Smith normal forms of sparse matrices.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A sparse matrix given by columns of `(row, value)` pairs.
pub type Columns<T> = Vec<Vec<(usize, T)>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    /// Nonzero diagonal entries `d1 | d2 | ...`, all positive.
    pub invariant_factors: Vec<BigInt>,
    pub rank: usize,
}

impl SnfResult {
    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }

    pub fn divisibility_chain_holds(&self) -> bool {
        self.invariant_factors
            .windows(2)
            .all(|w| (&w[1] % &w[0]).is_zero())
    }
}

/// Dense integer matrix, row-major.
pub type Dense = Vec<Vec<BigInt>>;

fn identity(n: usize) -> Dense {
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect()
}

struct Reducer<'a> {
    a: Dense,
    u: Option<&'a mut Dense>,
    v: Option<&'a mut Dense>,
}

impl Reducer<'_> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        if let Some(u) = self.u.as_deref_mut() {
            u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        if let Some(v) = self.v.as_deref_mut() {
            for row in v.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    /// row_i += k * row_j
    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        let src = self.a[j].clone();
        for (x, y) in self.a[i].iter_mut().zip(&src) {
            *x += k * y;
        }
        if let Some(u) = self.u.as_deref_mut() {
            let src = u[j].clone();
            for (x, y) in u[i].iter_mut().zip(&src) {
                *x += k * y;
            }
        }
    }

    /// col_i += k * col_j
    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        for row in self.a.iter_mut() {
            let y = row[j].clone();
            row[i] += k * y;
        }
        if let Some(v) = self.v.as_deref_mut() {
            for row in v.iter_mut() {
                let y = row[j].clone();
                row[i] += k * y;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -&*x;
        }
        if let Some(u) = self.u.as_deref_mut() {
            for x in u[i].iter_mut() {
                *x = -&*x;
            }
        }
    }

    /// Position of the smallest nonzero entry in the trailing block from `t`.
    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for (i, row) in self.a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if !x.is_zero() && best.as_ref().map_or(true, |(_, _, b)| &x.abs() < b) {
                    best = Some((i, j, x.abs()));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn run(&mut self) -> Vec<BigInt> {
        let rows = self.a.len();
        let cols = if rows == 0 { 0 } else { self.a[0].len() };
        let mut diag = Vec::new();
        for t in 0..rows.min(cols) {
            loop {
                let Some((pi, pj)) = self.min_entry(t) else { return diag };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let p = self.a[t][t].clone();
                let mut clear = true;
                for i in t + 1..rows {
                    if !self.a[i][t].is_zero() {
                        let q = nearest_quotient(&self.a[i][t], &p);
                        self.add_row(i, t, &-q);
                        clear &= self.a[i][t].is_zero();
                    }
                }
                for j in t + 1..cols {
                    if !self.a[t][j].is_zero() {
                        let q = nearest_quotient(&self.a[t][j], &p);
                        self.add_col(j, t, &-q);
                        clear &= self.a[t][j].is_zero();
                    }
                }
                if !clear {
                    continue;
                }
                // pivot must divide the rest of the block
                let bad = (t + 1..rows)
                    .find(|&i| (t + 1..cols).any(|j| !(&self.a[i][j] % &p).is_zero()));
                match bad {
                    Some(i) => self.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
            diag.push(self.a[t][t].clone());
        }
        diag
    }
}

fn nearest_quotient(x: &BigInt, p: &BigInt) -> BigInt {
    let (q, r) = x.div_mod_floor(p);
    if (&r + &r).abs() > p.abs() {
        q + 1
    } else {
        q
    }
}

/// Smith normal form of a dense integer matrix.
pub fn smith_normal_form(m: &Dense) -> SnfResult {
    let diag = Reducer {
        a: m.clone(),
        u: None,
        v: None,
    }
    .run();
    SnfResult {
        rank: diag.len(),
        invariant_factors: diag,
    }
}

/// Returns `(U, D, V)` with `U·M·V = D`, `U` and `V` unimodular and `D` diagonal.
pub fn smith_decomposition(m: &Dense) -> (Dense, Dense, Dense) {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut r = Reducer {
        a: m.clone(),
        u: Some(&mut u),
        v: Some(&mut v),
    };
    r.run();
    let d = r.a;
    (u, d, v)
}

/// Smith normal form of a sparse integer matrix: unit pivots are eliminated
/// sparsely, the remainder is reduced densely.
pub fn sparse_smith(rows: usize, columns: &Columns<BigInt>) -> SnfResult {
    let mut cols: Vec<BTreeMap<usize, BigInt>> = columns
        .iter()
        .map(|c| c.iter().filter(|(_, v)| !v.is_zero()).cloned().collect())
        .collect();
    let mut row_cols: Vec<BTreeMap<usize, ()>> = vec![BTreeMap::new(); rows];
    for (j, col) in cols.iter().enumerate() {
        for &i in col.keys() {
            row_cols[i].insert(j, ());
        }
    }
    let mut alive = vec![true; cols.len()];
    let mut units = 0usize;
    loop {
        // unit pivot in the sparsest row
        let mut best: Option<(usize, usize, usize)> = None;
        for (j, col) in cols.iter().enumerate() {
            if !alive[j] {
                continue;
            }
            for (&i, v) in col {
                if v.abs().is_one() {
                    let cost = row_cols[i].len() * col.len();
                    if best.map_or(true, |(_, _, c)| cost < c) {
                        best = Some((i, j, cost));
                    }
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        let pivot_col = cols[pj].clone();
        let pv = pivot_col[&pi].clone();
        let others: Vec<usize> = row_cols[pi].keys().copied().filter(|&j| j != pj).collect();
        for j in others {
            let k = &cols[j][&pi] * &pv; // pv = ±1 so k/pv = k*pv
            for (&i, v) in &pivot_col {
                let e = cols[j].entry(i).or_insert_with(BigInt::zero);
                *e -= &k * v;
                if e.is_zero() {
                    cols[j].remove(&i);
                    row_cols[i].remove(&j);
                } else {
                    row_cols[i].insert(j, ());
                }
            }
        }
        for &i in pivot_col.keys() {
            row_cols[i].remove(&pj);
        }
        // row pi now only meets column pj; drop both
        alive[pj] = false;
        cols[pj].clear();
        units += 1;
    }
    let live: Vec<usize> = (0..cols.len()).filter(|&j| alive[j] && !cols[j].is_empty()).collect();
    let used_rows: Vec<usize> = {
        let mut r: Vec<usize> = live.iter().flat_map(|&j| cols[j].keys().copied()).collect();
        r.sort_unstable();
        r.dedup();
        r
    };
    let row_pos: BTreeMap<usize, usize> = used_rows.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let mut dense = vec![vec![BigInt::zero(); live.len()]; used_rows.len()];
    for (k, &j) in live.iter().enumerate() {
        for (i, v) in &cols[j] {
            dense[row_pos[i]][k] = v.clone();
        }
    }
    let rest = smith_normal_form(&dense);
    let mut factors = vec![BigInt::one(); units];
    factors.extend(rest.invariant_factors);
    SnfResult {
        rank: factors.len(),
        invariant_factors: factors,
    }
}

/// Rank over the rationals.
pub fn rank_rational(columns: &Columns<BigRational>) -> usize {
    let mut pivots: BTreeMap<usize, BTreeMap<usize, BigRational>> = BTreeMap::new();
    for col in columns {
        let mut v: BTreeMap<usize, BigRational> =
            col.iter().filter(|(_, x)| !x.is_zero()).cloned().collect();
        while let Some((&lead, lv)) = v.iter().next() {
            match pivots.get(&lead) {
                Some(p) => {
                    let k = lv / &p[&lead];
                    for (i, x) in p {
                        let e = v.entry(*i).or_insert_with(BigRational::zero);
                        *e -= &k * x;
                        if e.is_zero() {
                            v.remove(i);
                        }
                    }
                }
                None => {
                    pivots.insert(lead, v);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Rank over `F_p` of a matrix with integer entries.
pub fn rank_mod_p(columns: &Columns<BigInt>, p: u64) -> usize {
    let bp = BigInt::from(p);
    let red = |x: &BigInt| x.mod_floor(&bp).to_u64().expect("reduced");
    let inv = |a: u64| -> u64 {
        let mut r = 1u128;
        let mut b = a as u128;
        let mut e = p - 2;
        let m = p as u128;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % m;
            }
            b = b * b % m;
            e >>= 1;
        }
        r as u64
    };
    let mut pivots: BTreeMap<usize, BTreeMap<usize, u64>> = BTreeMap::new();
    for col in columns {
        let mut v: BTreeMap<usize, u64> = col
            .iter()
            .map(|(i, x)| (*i, red(x)))
            .filter(|(_, x)| *x != 0)
            .collect();
        while let Some((&lead, &lv)) = v.iter().next() {
            match pivots.get(&lead) {
                Some(pv) => {
                    let k = (lv as u128 * inv(pv[&lead]) as u128 % p as u128) as u64;
                    for (i, x) in pv {
                        let e = v.entry(*i).or_insert(0);
                        *e = ((*e as u128 + (p - k) as u128 * *x as u128) % p as u128) as u64;
                        if *e == 0 {
                            v.remove(i);
                        }
                    }
                }
                None => {
                    pivots.insert(lead, v);
                    break;
                }
            }
        }
    }
    pivots.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(rows: &[&[i64]]) -> Dense {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn columns(m: &Dense) -> Columns<BigInt> {
        let cols = if m.is_empty() { 0 } else { m[0].len() };
        (0..cols)
            .map(|j| {
                (0..m.len())
                    .filter(|&i| !m[i][j].is_zero())
                    .map(|i| (i, m[i][j].clone()))
                    .collect()
            })
            .collect()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cases() {
        let r = smith_normal_form(&dense(&[&[2, 0], &[0, 3]]));
        assert_eq!(r.invariant_factors, ints(&[1, 6]));
        let z = smith_normal_form(&dense(&[&[0, 0], &[0, 0]]));
        assert_eq!(z.rank, 0);
        assert!(z.invariant_factors.is_empty());
        let r = smith_normal_form(&dense(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        assert_eq!(r.invariant_factors, ints(&[2, 6, 12]));
    }

    #[test]
    fn sparse_agrees_with_dense() {
        let m = dense(&[&[1, 2, 0, 0], &[0, 2, 4, 0], &[0, 0, 1, 3], &[2, 0, 0, 6]]);
        assert_eq!(sparse_smith(4, &columns(&m)), smith_normal_form(&m));
    }

    #[test]
    fn field_ranks() {
        let m = dense(&[&[2, 0], &[0, 3]]);
        assert_eq!(rank_mod_p(&columns(&m), 2), 1);
        assert_eq!(rank_mod_p(&columns(&m), 5), 2);
        let q: Columns<BigRational> = columns(&m)
            .into_iter()
            .map(|c| c.into_iter().map(|(i, v)| (i, BigRational::from_integer(v))).collect())
            .collect();
        assert_eq!(rank_rational(&q), 2);
    }

    #[test]
    fn decomposition_identity() {
        let m = dense(&[&[4, 6, 2], &[2, 8, 6], &[6, 2, 4]]);
        let (u, d, v) = smith_decomposition(&m);
        let mul = |a: &Dense, b: &Dense| -> Dense {
            (0..a.len())
                .map(|i| {
                    (0..b[0].len())
                        .map(|j| (0..b.len()).map(|k| &a[i][k] * &b[k][j]).sum())
                        .collect()
                })
                .collect()
        };
        assert_eq!(mul(&mul(&u, &m), &v), d);
    }
}
