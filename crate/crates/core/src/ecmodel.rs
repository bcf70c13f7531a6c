//! Weierstrass models, their invariants, coordinate changes and global
//! minimal models.
//!
//! This module is the oracle layer: curve records and Frey-curve data are
//! checked against what the formulary computes from actual coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::nt::{factor_small, valuation, Int, NtError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EcError {
    #[error("degenerate model: discriminant is zero")]
    Degenerate,
    #[error("scaling factor u must be nonzero")]
    ZeroScale,
    #[error("coordinate change does not give an integral model")]
    NonIntegral,
    #[error(transparent)]
    Factor(#[from] NtError),
}

/// `y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeierstrassModel {
    pub a1: Int,
    pub a2: Int,
    pub a3: Int,
    pub a4: Int,
    pub a6: Int,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invariants {
    pub b2: Int,
    pub b4: Int,
    pub b6: Int,
    pub b8: Int,
    pub c4: Int,
    pub c6: Int,
    pub delta: Int,
    /// `j = j_num / j_den` in lowest terms, `j_den > 0`.
    pub j_num: Int,
    pub j_den: Int,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReductionKind {
    Good,
    Multiplicative,
    Additive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReductionType {
    pub kind: ReductionKind,
    pub potentially_good: bool,
}

impl ReductionType {
    pub const GOOD: Self = Self {
        kind: ReductionKind::Good,
        potentially_good: true,
    };
    pub const MULTIPLICATIVE: Self = Self {
        kind: ReductionKind::Multiplicative,
        potentially_good: false,
    };
    pub const ADDITIVE_POT_GOOD: Self = Self {
        kind: ReductionKind::Additive,
        potentially_good: true,
    };
    pub const ADDITIVE_POT_MULT: Self = Self {
        kind: ReductionKind::Additive,
        potentially_good: false,
    };
}

impl fmt::Display for ReductionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match (self.kind, self.potentially_good) {
            (ReductionKind::Good, _) => "good",
            (ReductionKind::Multiplicative, _) => "multiplicative",
            (ReductionKind::Additive, true) => "additive (potentially good)",
            (ReductionKind::Additive, false) => "additive (potentially multiplicative)",
        };
        f.write_str(s)
    }
}

/// A global minimal model together with its discriminant data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalModel {
    pub model: WeierstrassModel,
    pub invariants: Invariants,
    pub disc_sign: i8,
    pub disc_valuations: BTreeMap<u64, u32>,
}

impl fmt::Display for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{},{},{},{},{}]",
            self.a1, self.a2, self.a3, self.a4, self.a6
        )
    }
}

impl WeierstrassModel {
    pub fn new(a1: Int, a2: Int, a3: Int, a4: Int, a6: Int) -> Self {
        Self { a1, a2, a3, a4, a6 }
    }

    pub fn from_i64(c: [i64; 5]) -> Self {
        let [a1, a2, a3, a4, a6] = c.map(Int::from);
        Self { a1, a2, a3, a4, a6 }
    }

    pub fn coefficients(&self) -> [&Int; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    /// The full formulary; fails only on a singular model.
    pub fn invariants(&self) -> Result<Invariants, EcError> {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let b2 = a1 * a1 + 4 * a2;
        let b4 = 2 * a4 + a1 * a3;
        let b6 = a3 * a3 + 4 * a6;
        let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        let c4 = &b2 * &b2 - 24 * &b4;
        let b2_cubed: Int = &b2 * &b2 * &b2;
        let c6 = -b2_cubed + 36 * &b2 * &b4 - 216 * &b6;
        let b2b2b8: Int = &b2 * &b2 * &b8;
        let delta: Int = -b2b2b8 - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6;
        if delta.is_zero() {
            return Err(EcError::Degenerate);
        }
        let num: Int = &c4 * &c4 * &c4;
        let g = num.gcd(&delta);
        let (mut j_num, mut j_den) = (num / &g, &delta / &g);
        if j_den.is_negative() {
            j_num = -j_num;
            j_den = -j_den;
        }
        Ok(Invariants {
            b2,
            b4,
            b6,
            b8,
            c4,
            c6,
            delta,
            j_num,
            j_den,
        })
    }

    pub fn discriminant(&self) -> Result<Int, EcError> {
        self.invariants().map(|i| i.delta)
    }

    /// Change of coordinates `x = u²x' + r`, `y = u³y' + u²s·x' + t`, so that
    /// `Δ' = Δ / u¹²`. Fails if the new model is not integral.
    pub fn transform(&self, u: &Int, r: &Int, s: &Int, t: &Int) -> Result<Self, EcError> {
        if u.is_zero() {
            return Err(EcError::ZeroScale);
        }
        let q = |x: &Int| BigRational::from_integer(x.clone());
        transform_rational(self, &q(u), &q(r), &q(s), &q(t))
    }

    /// The model `M` with `M.transform(u, r, s, t) == self`; for `r = s = t = 0`
    /// this multiplies `a_i` by `u^i`.
    pub fn inverse_transform(&self, u: &Int, r: &Int, s: &Int, t: &Int) -> Result<Self, EcError> {
        if u.is_zero() {
            return Err(EcError::ZeroScale);
        }
        let q = |x: &Int| BigRational::from_integer(x.clone());
        let (u, r, s, t) = (q(u), q(r), q(s), q(t));
        let ui = u.recip();
        let ri = -&r * &ui * &ui;
        let si = -&s * &ui;
        let ti = (&r * &s - &t) * &ui * &ui * &ui;
        transform_rational(self, &ui, &ri, &si, &ti)
    }

    /// Global minimal model, put into reduced form (`a1, a3 ∈ {0,1}`,
    /// `a2 ∈ {-1,0,1}`).
    pub fn minimal_model(&self) -> Result<MinimalModel, EcError> {
        let delta = self.discriminant()?;
        let primes: Vec<u64> = factor_small(&delta)?
            .factors
            .into_iter()
            .filter(|&(_, e)| e >= 12)
            .map(|(p, _)| p)
            .collect();
        let mut model = self.clone();
        for ell in primes {
            while let Some(m) = reduce_once(&model, ell)? {
                model = m;
            }
        }
        let model = model.reduced_form();
        let invariants = model.invariants()?;
        let f = factor_small(&invariants.delta)?;
        Ok(MinimalModel {
            model,
            disc_sign: f.sign,
            disc_valuations: f.factors,
            invariants,
        })
    }

    /// Unimodular change putting `a1, a3 ∈ {0,1}` and `a2 ∈ {-1,0,1}`.
    pub fn reduced_form(&self) -> Self {
        let s = -self.a1.div_floor(&Int::from(2));
        let a2 = &self.a2 - &s * &self.a1 - &s * &s;
        let r = -(a2 + 1i32).div_floor(&Int::from(3));
        let t = -(&self.a3 + &r * &self.a1).div_floor(&Int::from(2));
        self.transform(&Int::one(), &r, &s, &t)
            .expect("unimodular change is always integral")
    }
}

impl MinimalModel {
    pub fn valuation_at(&self, ell: u64) -> u32 {
        self.disc_valuations.get(&ell).copied().unwrap_or(0)
    }

    /// Reduction type at `ell`; valid because the model is minimal everywhere.
    pub fn reduction_type(&self, ell: u64) -> ReductionType {
        classify(&self.invariants, ell)
    }
}

/// Reduction type of a model that is minimal at `ell`.
pub fn reduction_type(model: &WeierstrassModel, ell: u64) -> Result<ReductionType, EcError> {
    Ok(classify(&model.invariants()?, ell))
}

fn classify(inv: &Invariants, ell: u64) -> ReductionType {
    let vd = valuation(&inv.delta, ell).unwrap_or(0);
    if vd == 0 {
        return ReductionType::GOOD;
    }
    if valuation(&inv.c4, ell) == Some(0) {
        return ReductionType::MULTIPLICATIVE;
    }
    let pg = valuation(&inv.j_den, ell) == Some(0);
    ReductionType {
        kind: ReductionKind::Additive,
        potentially_good: pg,
    }
}

fn transform_rational(
    m: &WeierstrassModel,
    u: &BigRational,
    r: &BigRational,
    s: &BigRational,
    t: &BigRational,
) -> Result<WeierstrassModel, EcError> {
    let q = |x: &Int| BigRational::from_integer(x.clone());
    let (a1, a2, a3, a4, a6) = (q(&m.a1), q(&m.a2), q(&m.a3), q(&m.a4), q(&m.a6));
    let two = BigRational::from_integer(Int::from(2));
    let three = BigRational::from_integer(Int::from(3));
    let u2 = u * u;
    let u3 = &u2 * u;
    let u4 = &u2 * &u2;
    let u6 = &u3 * &u3;
    let n1 = &a1 + &two * s;
    let n2 = &a2 - s * &a1 + &three * r - s * s;
    let n3 = &a3 + r * &a1 + &two * t;
    let n4 = &a4 - s * &a3 + &two * r * &a2 - (t + r * s) * &a1 + &three * r * r - &two * s * t;
    let n6 = &a6 + r * &a4 + r * r * &a2 + r * r * r - t * &a3 - t * t - r * t * &a1;
    let out = [n1 / u, n2 / u2, n3 / u3, n4 / u4, n6 / u6];
    if out.iter().any(|c| !c.is_integer()) {
        return Err(EcError::NonIntegral);
    }
    let [b1, b2, b3, b4, b6] = out.map(|c| c.to_integer());
    Ok(WeierstrassModel::new(b1, b2, b3, b4, b6))
}

/// One step `u = ell` towards minimality, if an integral one exists.
fn reduce_once(m: &WeierstrassModel, ell: u64) -> Result<Option<WeierstrassModel>, EcError> {
    let inv = m.invariants()?;
    if valuation(&inv.delta, ell).unwrap_or(0) < 12 {
        return Ok(None);
    }
    let l = Int::from(ell);
    if ell >= 5 {
        if valuation(&inv.c4, ell).is_none_or(|v| v < 4) {
            return Ok(None);
        }
        let l2 = &l * &l;
        let l3 = &l2 * &l;
        let inv2 = modinv(&Int::from(2), &l3);
        let inv3 = modinv(&Int::from(3), &l3);
        let s = (-&m.a1 * &inv2).mod_floor(&l);
        let r = ((&s * &s + &s * &m.a1 - &m.a2) * &inv3).mod_floor(&l2);
        let t = (-(&m.a3 + &r * &m.a1) * &inv2).mod_floor(&l3);
        return Ok(m.transform(&l, &r, &s, &t).ok());
    }
    // exhaustive search over s mod ℓ, r mod ℓ², t mod ℓ³
    let l2 = ell * ell;
    let l3 = l2 * ell;
    for s in 0..ell {
        let s = Int::from(s);
        let n1: Int = &m.a1 + 2 * &s;
        if !n1.is_multiple_of(&l) {
            continue;
        }
        for r in 0..l2 {
            let r = Int::from(r);
            let n2: Int = &m.a2 - &s * &m.a1 + 3 * &r - &s * &s;
            if !n2.is_multiple_of(&(&l * &l)) {
                continue;
            }
            for t in 0..l3 {
                let t = Int::from(t);
                if let Ok(reduced) = m.transform(&l, &r, &s, &t) {
                    return Ok(Some(reduced));
                }
            }
        }
    }
    Ok(None)
}

fn modinv(a: &Int, m: &Int) -> Int {
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(c: [i64; 5]) -> WeierstrassModel {
        WeierstrassModel::from_i64(c)
    }

    fn int(n: i64) -> Int {
        Int::from(n)
    }

    #[test]
    fn invariants_examples() {
        let inv = model([0, 0, 0, 0, 1]).invariants().unwrap();
        assert_eq!(inv.delta, int(-432));
        let inv = model([0, 0, 0, -1, 0]).invariants().unwrap();
        assert_eq!(inv.delta, int(64));
        assert_eq!(inv.c4, int(48));
        assert_eq!(inv.j_num, int(1728));
        assert_eq!(inv.j_den, int(1));
    }

    #[test]
    fn degenerate_model_is_rejected() {
        // y² = x³ is a cusp
        assert_eq!(
            model([0, 0, 0, 0, 0]).invariants(),
            Err(EcError::Degenerate)
        );
        assert_eq!(
            model([0, 0, 0, 0, 0]).minimal_model().unwrap_err(),
            EcError::Degenerate
        );
    }

    #[test]
    fn identity_transform() {
        let m = model([1, -1, 1, -4, 5]);
        let z = Int::zero();
        assert_eq!(m.transform(&Int::one(), &z, &z, &z).unwrap(), m);
    }

    #[test]
    fn scaling_by_two_and_back() {
        let base = model([0, 0, 0, -1, 0]);
        let z = Int::zero();
        let up = base.inverse_transform(&int(2), &z, &z, &z).unwrap();
        assert_eq!(up.discriminant().unwrap(), int(64) * int(4096));
        let down = up.transform(&int(2), &z, &z, &z).unwrap();
        assert_eq!(down, base);
        assert_eq!(down.discriminant().unwrap(), int(64));

        let twice = up.inverse_transform(&int(2), &z, &z, &z).unwrap();
        let back = twice
            .transform(&int(2), &z, &z, &z)
            .and_then(|m| m.transform(&int(2), &z, &z, &z))
            .unwrap();
        assert_eq!(
            back.discriminant().unwrap() * int(1 << 24),
            twice.discriminant().unwrap()
        );
    }

    #[test]
    fn non_integral_transform_errors() {
        let z = Int::zero();
        assert_eq!(
            model([0, 0, 0, -1, 0]).transform(&int(2), &z, &z, &z),
            Err(EcError::NonIntegral)
        );
        assert_eq!(
            model([0, 0, 0, -1, 0]).transform(&z, &z, &z, &z),
            Err(EcError::ZeroScale)
        );
    }

    #[test]
    fn minimal_model_examples() {
        let base = model([0, 0, 0, -1, 0]);
        let min = base.minimal_model().unwrap();
        assert_eq!(min.invariants.delta, int(64));
        assert_eq!(min.disc_valuations, BTreeMap::from([(2, 6)]));
        let z = Int::zero();
        let up = base.inverse_transform(&int(2), &z, &z, &z).unwrap();
        let min_up = up.minimal_model().unwrap();
        assert_eq!(min_up.invariants.delta, int(64));
        assert_eq!(min_up.model, min.model);
        assert_eq!(min.model.minimal_model().unwrap(), min);
    }

    #[test]
    fn minimal_model_at_larger_primes() {
        let base = model([1, 1, 1, -4, 5]);
        let min = base.minimal_model().unwrap();
        for (u, r, s, t) in [(5, 3, 1, -2), (7, -1, 0, 4), (3, 2, 2, 1), (6, 1, 1, 1)] {
            let up = base
                .inverse_transform(&int(u), &int(r), &int(s), &int(t))
                .unwrap();
            assert_eq!(up.minimal_model().unwrap().model, min.model, "u = {u}");
        }
    }

    #[test]
    fn reduction_type_examples() {
        let m = model([0, 0, 0, -1, 0]);
        assert_eq!(reduction_type(&m, 7).unwrap(), ReductionType::GOOD);
        // v2(Δ) = 6, v2(c4) = 4, j = 1728 is 2-integral
        assert_eq!(
            reduction_type(&m, 2).unwrap(),
            ReductionType::ADDITIVE_POT_GOOD
        );
        // 42a1 is multiplicative at 2, 3, 7
        let m = model([1, 1, 1, -4, 5]);
        for ell in [2, 3, 7] {
            assert_eq!(
                reduction_type(&m, ell).unwrap(),
                ReductionType::MULTIPLICATIVE
            );
        }
    }

    #[test]
    fn reduced_form_is_canonical() {
        let m = model([3, 5, -7, 2, 11]);
        let r = m.reduced_form();
        assert!(r.a1 == int(0) || r.a1 == int(1));
        assert!(r.a3 == int(0) || r.a3 == int(1));
        assert!(r.a2 >= int(-1) && r.a2 <= int(1));
        assert_eq!(r.discriminant().unwrap(), m.discriminant().unwrap());
    }
}
