//! Integer Laurent polynomials in `q` and in `(q, t)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A Laurent polynomial in `q` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Laurent1 {
    terms: BTreeMap<i64, i64>,
}

impl Laurent1 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(coeff: i64, exp: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    /// `q + q^-1`, the value of a single circle.
    pub fn circle() -> Self {
        Self::monomial(1, 1) + Self::monomial(1, -1)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut p = Self::zero();
        for (exp, c) in terms {
            p.add_term(exp, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let c = self.terms.entry(exp).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    /// `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn shift(&self, by: i64) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e + by, c)))
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e, c * k)))
    }

    /// Substitutes `q -> q^-1`.
    pub fn invert(&self) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (-e, c)))
    }

    /// Exact division; `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Laurent1) -> Option<Laurent1> {
        let (dlo, dhi) = (divisor.min_exp()?, divisor.max_exp()?);
        let lead = divisor.coeff(dhi);
        let mut rem = self.clone();
        let mut quot = Laurent1::zero();
        while let Some(hi) = rem.max_exp() {
            let lo = rem.min_exp().expect("nonempty");
            if hi - lo < dhi - dlo {
                return None;
            }
            let c = rem.coeff(hi);
            if c % lead != 0 {
                return None;
            }
            let m = Laurent1::monomial(c / lead, hi - dhi);
            rem = &rem - &(&m * divisor);
            quot = quot + m;
        }
        Some(quot)
    }

    /// Finds `s` with `self = q^s * other`.
    pub fn shift_to(&self, other: &Laurent1) -> Option<i64> {
        if self.is_zero() && other.is_zero() {
            return Some(0);
        }
        let s = self.min_exp()? - other.min_exp()?;
        (other.shift(s) == *self).then_some(s)
    }
}

impl Add for Laurent1 {
    type Output = Laurent1;
    fn add(mut self, rhs: Laurent1) -> Laurent1 {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl Sub for &Laurent1 {
    type Output = Laurent1;
    fn sub(self, rhs: &Laurent1) -> Laurent1 {
        self.clone() + -rhs.clone()
    }
}

impl Neg for Laurent1 {
    type Output = Laurent1;
    fn neg(self) -> Laurent1 {
        self.scale(-1)
    }
}

impl Mul for &Laurent1 {
    type Output = Laurent1;
    fn mul(self, rhs: &Laurent1) -> Laurent1 {
        let mut p = Laurent1::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                p.add_term(e1 + e2, c1 * c2);
            }
        }
        p
    }
}

/// A Laurent polynomial in `q` and `t` with integer coefficients, keyed by `(t, q)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Laurent2 {
    terms: BTreeMap<(i64, i64), i64>,
}

impl Laurent2 {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds from `(coefficient, q exponent, t exponent)` triples.
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, i64, i64)>) -> Self {
        let mut p = Self::zero();
        for (c, q, t) in terms {
            p.add_term(q, t, c);
        }
        p
    }

    pub fn add_term(&mut self, q: i64, t: i64, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let c = self.terms.entry((t, q)).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.terms.remove(&(t, q));
        }
    }

    pub fn coeff(&self, q: i64, t: i64) -> i64 {
        self.terms.get(&(t, q)).copied().unwrap_or(0)
    }

    /// `(coefficient, q exponent, t exponent)` sorted by `(t, q)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64, i64)> + '_ {
        self.terms.iter().map(|(&(t, q), &c)| (c, q, t))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiplies by `q^dq t^dt`.
    pub fn shift(&self, dq: i64, dt: i64) -> Self {
        Self::from_terms(self.terms().map(|(c, q, t)| (c, q + dq, t + dt)))
    }

    /// Substitutes `q -> q^-1, t -> t^-1`.
    pub fn invert(&self) -> Self {
        Self::from_terms(self.terms().map(|(c, q, t)| (c, -q, -t)))
    }

    /// Sets `t = -1`.
    pub fn at_t_minus_one(&self) -> Laurent1 {
        Laurent1::from_terms(
            self.terms()
                .map(|(c, q, t)| (q, if t.rem_euclid(2) == 0 { c } else { -c })),
        )
    }

    /// Finds `(a, b)` with `self = q^a t^b * other`, aligning the smallest terms.
    pub fn shift_to(&self, other: &Laurent2) -> Option<(i64, i64)> {
        if self.is_zero() && other.is_zero() {
            return Some((0, 0));
        }
        let (&(t1, q1), _) = self.terms.iter().next()?;
        let (&(t2, q2), _) = other.terms.iter().next()?;
        let (a, b) = (q1 - q2, t1 - t2);
        (other.shift(a, b) == *self).then_some((a, b))
    }
}

impl Add for Laurent2 {
    type Output = Laurent2;
    fn add(mut self, rhs: Laurent2) -> Laurent2 {
        for ((t, q), c) in rhs.terms {
            self.add_term(q, t, c);
        }
        self
    }
}

impl Sub for &Laurent2 {
    type Output = Laurent2;
    fn sub(self, rhs: &Laurent2) -> Laurent2 {
        let mut p = self.clone();
        for (c, q, t) in rhs.terms() {
            p.add_term(q, t, -c);
        }
        p
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, coeff: i64, vars: &[(&str, i64)]) -> fmt::Result {
    let mut factors: Vec<String> = Vec::new();
    for &(v, e) in vars {
        match e {
            0 => {}
            1 => factors.push(v.to_string()),
            _ => factors.push(format!("{v}^{e}")),
        }
    }
    if factors.is_empty() {
        return write!(f, "{coeff}");
    }
    match coeff {
        1 => {}
        -1 => write!(f, "-")?,
        c => write!(f, "{c}*")?,
    }
    write!(f, "{}", factors.join("*"))
}

impl fmt::Display for Laurent1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write_term(f, c, &[("q", e)])?;
        }
        Ok(())
    }
}

impl fmt::Display for Laurent2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (c, q, t)) in self.terms().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write_term(f, c, &[("q", q), ("t", t)])?;
        }
        Ok(())
    }
}
