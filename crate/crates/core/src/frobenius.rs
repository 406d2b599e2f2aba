//! Rank-two skew-extended Frobenius algebras `A = R[X]/(X^2 = t + a h X)`.
//!
//! All structure maps are dense matrices in the basis `(1, X)` of `A` and
//! `(1⊗1, 1⊗X, X⊗1, X⊗X)` of `A⊗A`; the index of a tensor basis element is
//! the binary number formed by its labels (1 ↦ 0, X ↦ 1), first factor most significant.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ring::{parse_scalar, Ring, Scalar};

/// A dense matrix over a [`Ring`], row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(ring: Ring, n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    /// Builds from columns: `cols[j]` is the image of basis vector `j`.
    pub fn from_columns(ring: Ring, rows: usize, cols: &[Vec<Scalar>]) -> Self {
        let mut m = Mat::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, ring.norm(v.clone()));
            }
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, ring: Ring, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in composition");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let v = ring.add(out.get(i, j), &ring.mul(a, b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn tensor(&self, ring: Ring, rhs: &Mat) -> Mat {
        let mut out = Mat::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.get(i1, j1);
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..rhs.rows {
                    for j2 in 0..rhs.cols {
                        let v = ring.mul(a, rhs.get(i2, j2));
                        out.set(i1 * rhs.rows + i2, j1 * rhs.cols + j2, v);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, ring: Ring, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| ring.add(a, b))
                .collect(),
        }
    }

    pub fn neg(&self, ring: Ring) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| ring.neg(a)).collect(),
        }
    }

    /// The flip `A⊗A -> A⊗A`.
    pub fn swap(ring: Ring) -> Mat {
        let mut m = Mat::zeros(4, 4);
        for a in 0..2 {
            for b in 0..2 {
                m.set(2 * b + a, 2 * a + b, ring.one());
            }
        }
        m
    }
}

/// Parameters of the universal algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobParams {
    pub a: Scalar,
    pub alpha: Scalar,
    pub beta: Scalar,
    pub gamma: Scalar,
    pub t: Scalar,
}

impl FrobParams {
    pub fn from_i64(a: i64, alpha: i64, beta: i64, gamma: i64, t: i64) -> Self {
        let s = |v: i64| Scalar::from_integer(v.into());
        FrobParams {
            a: s(a),
            alpha: s(alpha),
            beta: s(beta),
            gamma: s(gamma),
            t: s(t),
        }
    }

    pub fn khovanov() -> Self {
        Self::from_i64(1, 0, 0, 0, 0)
    }
}

impl FromStr for FrobParams {
    type Err = Error;

    /// Parses `a=..,alpha=..,beta=..,gamma=..,t=..`; missing keys default to
    /// `a = 1` and zero otherwise.
    fn from_str(s: &str) -> Result<Self> {
        let mut p = FrobParams::khovanov();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Params(format!("expected key=value, got '{part}'")))?;
            let v = parse_scalar(v)?;
            match k.trim() {
                "a" => p.a = v,
                "alpha" => p.alpha = v,
                "beta" => p.beta = v,
                "gamma" => p.gamma = v,
                "t" => p.t = v,
                other => return Err(Error::Params(format!("unknown parameter '{other}'"))),
            }
        }
        Ok(p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    Khovanov,
    Lee,
    Bn1,
    Bn2,
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "khovanov" => Ok(Preset::Khovanov),
            "lee" => Ok(Preset::Lee),
            "bn1" => Ok(Preset::Bn1),
            "bn2" => Ok(Preset::Bn2),
            _ => Err(Error::Params(format!("unknown preset '{s}'"))),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Preset::Khovanov => "khovanov",
            Preset::Lee => "lee",
            Preset::Bn1 => "bn1",
            Preset::Bn2 => "bn2",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusAlgebra {
    pub ring: Ring,
    /// Parameters in ring normal form.
    pub params: FrobParams,
    pub h: Scalar,
    pub iota: Mat,
    pub eps: Mat,
    pub m: Mat,
    pub delta: Mat,
    pub phi: Mat,
    pub theta: Mat,
}

/// Builds the algebra for a parameter set, rejecting parameters outside the
/// defining ideal or with `a` not a unit.
pub fn make_universal(ring: Ring, params: &FrobParams) -> Result<FrobeniusAlgebra> {
    let n = |x: &Scalar| ring.normalize(x);
    let a = n(&params.a)?;
    let alpha = n(&params.alpha)?;
    let beta = n(&params.beta)?;
    let gamma = n(&params.gamma)?;
    let t = n(&params.t)?;
    let ainv = ring
        .inv(&a)
        .map_err(|_| Error::Params(format!("a = {a} is not a unit in {ring}")))?;
    let mul = |x: &Scalar, y: &Scalar| ring.mul(x, y);
    let h = ring.sub(
        &ring.sub(&mul(&ainv, &gamma), &mul(&alpha, &alpha)),
        &mul(&mul(&beta, &beta), &t),
    );
    let two = ring.from_i64(2);
    let relations = [
        ("alpha*gamma", mul(&alpha, &gamma)),
        ("beta*gamma", mul(&beta, &gamma)),
        ("2*alpha", mul(&two, &alpha)),
        ("2*beta", mul(&two, &beta)),
        ("a^2*beta^2*h", mul(&mul(&mul(&a, &a), &mul(&beta, &beta)), &h)),
    ];
    for (name, v) in relations {
        if !v.is_zero() {
            return Err(Error::Params(format!("{name} = {v} is nonzero in {ring}")));
        }
    }

    let z = || ring.zero();
    let one = ring.one();
    let ah = mul(&a, &h);
    let iota = Mat::from_columns(ring, 2, &[vec![one.clone(), z()]]);
    let eps = Mat::from_columns(ring, 1, &[vec![z()], vec![a.clone()]]);
    let phi = Mat::from_columns(
        ring,
        2,
        &[vec![one.clone(), z()], vec![gamma.clone(), ring.neg(&one)]],
    );
    let theta = Mat::from_columns(
        ring,
        2,
        &[
            vec![alpha.clone(), beta.clone()],
            vec![
                mul(&beta, &t),
                ring.add(&alpha, &mul(&mul(&a, &beta), &h)),
            ],
        ],
    );
    // X·X = t + a h X, the relation defining A; this is the only choice
    // compatible with ·θ and Δ below when a ≠ 1.
    let m = Mat::from_columns(
        ring,
        2,
        &[
            vec![one.clone(), z()],
            vec![z(), one.clone()],
            vec![z(), one.clone()],
            vec![t.clone(), ah],
        ],
    );
    let delta = Mat::from_columns(
        ring,
        4,
        &[
            vec![ring.neg(&h), ainv.clone(), ainv.clone(), z()],
            vec![mul(&ainv, &t), z(), z(), ainv.clone()],
        ],
    );
    Ok(FrobeniusAlgebra {
        ring,
        params: FrobParams {
            a,
            alpha,
            beta,
            gamma,
            t,
        },
        h,
        iota,
        eps,
        m,
        delta,
        phi,
        theta,
    })
}

pub fn preset(name: Preset, ring: Ring) -> Result<FrobeniusAlgebra> {
    let params = match name {
        Preset::Khovanov => FrobParams::khovanov(),
        Preset::Lee => FrobParams::from_i64(1, 0, 0, 0, 1),
        Preset::Bn1 | Preset::Bn2 if ring != Ring::Fp(2) => {
            return Err(Error::Params(format!(
                "{name} requires characteristic 2 (ring F2), got {ring}"
            )))
        }
        Preset::Bn1 => FrobParams::from_i64(1, 0, 0, 1, 0),
        Preset::Bn2 => FrobParams::from_i64(1, 1, 0, 0, 0),
    };
    make_universal(ring, &params)
}

/// One checked identity and whether it held.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub ok: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    fn push(&mut self, name: &'static str, ok: bool) {
        self.checks.push(Check { name, ok });
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.ok).map(|c| c.name).collect()
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

impl FrobeniusAlgebra {
    pub fn id(&self) -> Mat {
        Mat::identity(self.ring, 2)
    }

    /// `m ∘ (·θ(1) ⊗ id)`: multiplication by the element θ.
    fn mul_by_theta_element(&self) -> Mat {
        let r = self.ring;
        let theta_elt = self.theta.compose(r, &self.iota);
        self.m.compose(r, &theta_elt.tensor(r, &self.id()))
    }

    /// Checks the axioms of a skew-extended Frobenius algebra as matrix identities.
    pub fn verify_axioms(&self) -> Report {
        let r = self.ring;
        let id = self.id();
        let tau = Mat::swap(r);
        let (m, d, phi, th, eps, iota) =
            (&self.m, &self.delta, &self.phi, &self.theta, &self.eps, &self.iota);
        let c = |a: &Mat, b: &Mat| a.compose(r, b);
        let t = |a: &Mat, b: &Mat| a.tensor(r, b);
        let mut rep = Report::default();

        rep.push("phi involution", c(phi, phi) == id);
        rep.push(
            "phi skew on delta",
            c(&c(&t(phi, phi), d), phi) == d.neg(r),
        );
        rep.push("phi skew on eps", c(eps, phi) == eps.neg(r));
        rep.push("theta phi invariant", c(th, phi) == *th && c(phi, th) == *th);
        rep.push(
            "theta squared",
            c(&c(m, &t(phi, &id)), d) == c(th, th),
        );
        rep.push(
            "theta is multiplication",
            self.mul_by_theta_element() == *th,
        );
        rep.push(
            "unit",
            c(m, &t(iota, &id)) == id && c(m, &t(&id, iota)) == id,
        );
        rep.push(
            "counit",
            c(&t(eps, &id), d) == id && c(&t(&id, eps), d) == id,
        );
        rep.push(
            "associativity",
            c(m, &t(m, &id)) == c(m, &t(&id, m)),
        );
        rep.push(
            "coassociativity",
            c(&t(d, &id), d) == c(&t(&id, d), d),
        );
        rep.push("commutativity", c(m, &tau) == *m);
        rep.push("cocommutativity", c(&tau, d) == *d);
        let dm = c(d, m);
        rep.push(
            "frobenius relation",
            dm == c(&t(m, &id), &t(&id, d)) && dm == c(&t(&id, m), &t(d, &id)),
        );
        rep.push(
            "phi multiplicative",
            c(phi, m) == c(m, &t(phi, phi)) && c(phi, iota) == *iota,
        );
        rep
    }

    /// Sphere, torus and four-tube relations.
    pub fn verify_bar_natan(&self) -> Report {
        let r = self.ring;
        let mut rep = Report::default();
        let sphere = self.eps.compose(r, &self.iota);
        rep.push("sphere", sphere.get(0, 0).is_zero());
        let torus = self
            .eps
            .compose(r, &self.m.compose(r, &self.delta.compose(r, &self.iota)));
        rep.push("torus", *torus.get(0, 0) == r.from_i64(2));
        let ci = self.delta.compose(r, &self.iota); // 4x1: Δ(1)
        let one = self.iota.clone();
        let lhs = ci
            .tensor(r, &one)
            .tensor(r, &one)
            .add(r, &one.tensor(r, &one).tensor(r, &ci));
        // Δ(1) placed on factors (1,3) and (2,4)
        let mut rhs = Mat::zeros(16, 1);
        for x in 0..2usize {
            for y in 0..2usize {
                let v = ci.get(2 * x + y, 0);
                if v.is_zero() {
                    continue;
                }
                let i13 = (x << 3) | (y << 1);
                let i24 = (x << 2) | y;
                for idx in [i13, i24] {
                    let nv = r.add(rhs.get(idx, 0), v);
                    rhs.set(idx, 0, nv);
                }
            }
        }
        rep.push("four tube", lhs == rhs);
        rep
    }

    /// Whether the differential of this algebra preserves the quantum grading
    /// (the Khovanov case `t = h = α = β = γ = 0`).
    pub fn is_graded(&self) -> bool {
        let p = &self.params;
        [&p.t, &self.h, &p.alpha, &p.beta, &p.gamma]
            .iter()
            .all(|x| x.is_zero())
    }

    /// Checks that `m`, `Δ` and `·θ` lower the quantum degree by one
    /// (deg 1 = +1, deg X = -1) on every nonzero matrix entry.
    pub fn degree_shifts_ok(&self) -> bool {
        let deg = |labels: usize, factors: usize| -> i64 {
            (0..factors)
                .map(|f| if labels >> f & 1 == 1 { -1 } else { 1 })
                .sum()
        };
        let check = |mat: &Mat, fin: usize, fout: usize| {
            (0..mat.rows).all(|i| {
                (0..mat.cols).all(|j| mat.get(i, j).is_zero() || deg(i, fout) - deg(j, fin) == -1)
            })
        };
        check(&self.m, 2, 1) && check(&self.delta, 1, 2) && check(&self.theta, 1, 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: i64) -> Scalar {
        Scalar::from_integer(v.into())
    }

    #[test]
    fn khovanov_table() {
        let k = preset(Preset::Khovanov, Ring::Z).unwrap();
        assert!(k.m.get(0, 3).is_zero() && k.m.get(1, 3).is_zero());
        assert_eq!(k.delta.get(1, 0), &s(1));
        assert_eq!(k.delta.get(2, 0), &s(1));
        assert_eq!(k.phi.get(1, 1), &s(-1));
        assert!(k.is_graded());
        assert!(k.degree_shifts_ok());
        assert_eq!(k, make_universal(Ring::Z, &FrobParams::khovanov()).unwrap());
    }

    #[test]
    fn lee_table() {
        let l = preset(Preset::Lee, Ring::Z).unwrap();
        assert_eq!(l.m.get(0, 3), &s(1));
        assert_eq!(l.delta.get(0, 1), &s(1));
        assert_eq!(l.delta.get(3, 1), &s(1));
        assert!(!l.is_graded());
    }

    #[test]
    fn ideal_violations_rejected() {
        let bad = FrobParams::from_i64(1, 1, 0, 0, 0);
        assert!(matches!(make_universal(Ring::Z, &bad), Err(Error::Params(_))));
        let non_unit = FrobParams::from_i64(2, 0, 0, 0, 0);
        assert!(make_universal(Ring::Z, &non_unit).is_err());
        assert!(make_universal(Ring::Q, &non_unit).is_ok());
        assert!(preset(Preset::Bn1, Ring::Q).is_err());
    }

    #[test]
    fn bar_natan_thetas() {
        let f2 = Ring::Fp(2);
        let bn1 = preset(Preset::Bn1, f2).unwrap();
        let bn2 = preset(Preset::Bn2, f2).unwrap();
        assert!(bn1.theta.is_zero());
        assert_eq!(bn2.theta, Mat::identity(f2, 2));
        assert_eq!(bn1.h, s(1));
        assert_eq!(bn2.h, s(1));
    }

    #[test]
    fn corrupted_phi_fails() {
        let mut k = preset(Preset::Khovanov, Ring::Z).unwrap();
        k.phi = Mat::identity(Ring::Z, 2);
        let failures = k.verify_axioms().failures();
        assert!(failures.contains(&"phi skew on eps"), "{failures:?}");
    }

    #[test]
    fn custom_params_parse() {
        let p: FrobParams = "a=1, gamma=1, t=0".parse().unwrap();
        assert_eq!(p, FrobParams::from_i64(1, 0, 0, 1, 0));
        assert!("a=1,foo=2".parse::<FrobParams>().is_err());
        assert!("a".parse::<FrobParams>().is_err());
    }

    #[test]
    fn presets_pass_axioms() {
        for (name, ring) in [
            (Preset::Khovanov, Ring::Z),
            (Preset::Khovanov, Ring::Q),
            (Preset::Lee, Ring::Z),
            (Preset::Lee, Ring::Fp(3)),
            (Preset::Bn1, Ring::Fp(2)),
            (Preset::Bn2, Ring::Fp(2)),
        ] {
            let alg = preset(name, ring).unwrap();
            assert!(alg.verify_axioms().passed(), "{name} {ring}: {:?}", alg.verify_axioms().failures());
            assert!(alg.verify_bar_natan().passed(), "{name} {ring}: {:?}", alg.verify_bar_natan().failures());
        }
    }

    #[test]
    fn non_trivial_unit_over_f3() {
        for gamma in 0..3 {
            for t in 0..3 {
                let p = FrobParams::from_i64(2, 0, 0, gamma, t);
                let alg = make_universal(Ring::Fp(3), &p).unwrap();
                assert!(alg.verify_axioms().passed(), "{p:?}: {:?}", alg.verify_axioms().failures());
            }
        }
    }
}
