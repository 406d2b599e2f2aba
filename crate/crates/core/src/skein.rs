//! Bracket, Kauffman and Jones polynomials by state sum.

use rayon::prelude::*;

use crate::cube::{resolve, word_weight, CubeOptions, DEFAULT_MAX_CROSSINGS};
use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::poly::Laurent1;

/// `Σ_a (-q)^{r(a)} (q + q⁻¹)^{|γ_a|}` over all resolutions.
pub fn bracket(d: &Diagram) -> Result<Laurent1> {
    bracket_with_limit(d, DEFAULT_MAX_CROSSINGS)
}

pub fn bracket_with_limit(d: &Diagram, max_crossings: usize) -> Result<Laurent1> {
    let n = d.crossing_count();
    if n > max_crossings || n > 30 {
        return Err(Error::TooManyCrossings {
            crossings: n,
            limit: max_crossings.min(30),
        });
    }
    let opts = CubeOptions::default();
    let max_circles = 2 * n + d.loops();
    // counts[r][k] = number of states of weight r with k circles
    let counts = (0..1u64 << n)
        .into_par_iter()
        .fold(
            || vec![vec![0i64; max_circles + 1]; n + 1],
            |mut acc, w| {
                let k = resolve(d, w, &opts).circle_count();
                acc[word_weight(w) as usize][k] += 1;
                acc
            },
        )
        .reduce(
            || vec![vec![0i64; max_circles + 1]; n + 1],
            |mut a, b| {
                for (ra, rb) in a.iter_mut().zip(b) {
                    for (x, y) in ra.iter_mut().zip(rb) {
                        *x += y;
                    }
                }
                a
            },
        );
    let circle = Laurent1::circle();
    let mut out = Laurent1::zero();
    for (r, row) in counts.iter().enumerate() {
        let sign = if r % 2 == 0 { 1 } else { -1 };
        for (k, &m) in row.iter().enumerate() {
            if m != 0 {
                out = out + circle.pow(k as u32).shift(r as i64).scale(sign * m);
            }
        }
    }
    Ok(out)
}

/// `(-1)^{n₋} q^{n₊-2n₋} ⟨D⟩` under the diagram's stored orientation.
pub fn kauffman(d: &Diagram) -> Result<Laurent1> {
    Ok(normalize(d, &bracket(d)?))
}

pub(crate) fn normalize(d: &Diagram, b: &Laurent1) -> Laurent1 {
    let (np, nm) = (d.n_plus() as i64, d.n_minus() as i64);
    let sign = if nm % 2 == 0 { 1 } else { -1 };
    b.shift(np - 2 * nm).scale(sign)
}

/// `K(D) / (q + q⁻¹)`.
pub fn jones(d: &Diagram) -> Result<Laurent1> {
    let k = kauffman(d)?;
    k.div_exact(&Laurent1::circle())
        .ok_or_else(|| Error::NotDivisible(k.to_string()))
}
