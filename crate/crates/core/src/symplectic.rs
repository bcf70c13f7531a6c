//! Symplectic criteria for isomorphisms of p-torsion modules.
//!
//! Everything here is symbolic in the exponent p: valuations that are known
//! only modulo p are carried as integer representatives (e.g. `2p - 2` is
//! carried as `-2`), and conclusions are Legendre-symbol constraints on p.

use std::fmt;
use std::ops::Neg;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::nt::{jacobi, squarefree_part, Int, NtError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymplecticError {
    #[error("the criterion at 2 needs both curves to have SL2(F3) inertia at 2")]
    MissingSl2f3,
    #[error("the criterion at 2 needs exact 2-adic valuations, not residues mod p")]
    NotExact,
    #[error("valuation residue is 0 mod p; the multiplicative criterion does not apply")]
    ZeroResidue,
    #[error("constraint kernel must be nonzero")]
    ZeroKernel,
    #[error("{0}")]
    Factor(String),
    #[error("need at least two shared multiplicative primes, found {0}")]
    TooFewPrimes(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymplecticType {
    Symplectic,
    AntiSymplectic,
    Unknown,
}

impl fmt::Display for SymplecticType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymplecticType::Symplectic => "symplectic",
            SymplecticType::AntiSymplectic => "anti-symplectic",
            SymplecticType::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn from_i8(s: i8) -> Option<Sign> {
        match s {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i8(self.as_i8())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = i8::deserialize(d)?;
        Sign::from_i8(v).ok_or_else(|| serde::de::Error::custom("sign must be 1 or -1"))
    }
}

/// `(n/p) = sign`, with `n` squarefree and nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QrConstraint {
    n: Int,
    sign: Sign,
}

impl QrConstraint {
    /// Reduces `n` to its signed squarefree part.
    pub fn new(n: &Int, sign: Sign) -> Result<Self, SymplecticError> {
        let n = squarefree_part(n).map_err(|e| match e {
            NtError::Zero => SymplecticError::ZeroKernel,
            other => SymplecticError::Factor(other.to_string()),
        })?;
        Ok(QrConstraint { n, sign })
    }

    pub fn from_i64(n: i64, sign: Sign) -> Result<Self, SymplecticError> {
        Self::new(&Int::from(n), sign)
    }

    pub fn n(&self) -> &Int {
        &self.n
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn negated(&self) -> Self {
        QrConstraint {
            n: self.n.clone(),
            sign: -self.sign,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.n.is_one()
    }

    /// Evaluate at an odd prime p not dividing n.
    pub fn holds_at(&self, p: u64) -> Option<bool> {
        let j = jacobi(&self.n, &Int::from(p)).ok()?;
        (j != 0).then_some(j == self.sign.as_i8())
    }
}

impl fmt::Display for QrConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})={}", self.n, self.sign)
    }
}

impl Serialize for QrConstraint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QrConstraint", 2)?;
        st.serialize_field("n", &self.n.to_string())?;
        st.serialize_field("sign", &self.sign)?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Verdict {
    Constraint(QrConstraint),
    AlwaysConsistent,
    Contradiction,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Constraint(c) => write!(f, "{c}"),
            Verdict::AlwaysConsistent => f.write_str("consistent"),
            Verdict::Contradiction => f.write_str("contradiction"),
        }
    }
}

/// A discriminant valuation, either known exactly or only modulo p.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Valuation {
    Exact(Int),
    ModP(Int),
}

impl Valuation {
    /// The representative modulo p.
    pub fn residue(&self) -> &Int {
        match self {
            Valuation::Exact(v) | Valuation::ModP(v) => v,
        }
    }

    pub fn exact(&self) -> Option<&Int> {
        match self {
            Valuation::Exact(v) => Some(v),
            Valuation::ModP(_) => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(v) => write!(f, "{v}"),
            Valuation::ModP(v) => write!(f, "{v} mod p"),
        }
    }
}

/// The data the criterion at 2 reads from one curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtTwo {
    pub v2: Valuation,
    pub sl2f3: bool,
}

impl AtTwo {
    pub fn exact(v2: i64) -> Self {
        AtTwo {
            v2: Valuation::Exact(Int::from(v2)),
            sl2f3: true,
        }
    }
}

/// Symplectic type of the isomorphism for curves with SL₂(F₃) inertia at 2.
pub fn criterion_at_two(
    frey: &AtTwo,
    candidate: &AtTwo,
    legendre_2_p: Sign,
) -> Result<SymplecticType, SymplecticError> {
    if !frey.sl2f3 || !candidate.sl2f3 {
        return Err(SymplecticError::MissingSl2f3);
    }
    let (Some(v), Some(w)) = (frey.v2.exact(), candidate.v2.exact()) else {
        return Err(SymplecticError::NotExact);
    };
    if legendre_2_p == Sign::Plus {
        return Ok(SymplecticType::Symplectic);
    }
    let three = Int::from(3);
    let diff: Int = v - w;
    Ok(if (diff % three).is_zero() {
        SymplecticType::Symplectic
    } else {
        SymplecticType::AntiSymplectic
    })
}

/// Verdict at a prime where both curves are multiplicative.
///
/// Returns `Ok(None)` for an undetermined type.
pub fn criterion_multiplicative(
    v: &Int,
    v_cand: &Int,
    ty: SymplecticType,
) -> Result<Option<Verdict>, SymplecticError> {
    if v.is_zero() || v_cand.is_zero() {
        return Err(SymplecticError::ZeroResidue);
    }
    let sign = match ty {
        SymplecticType::Symplectic => Sign::Plus,
        SymplecticType::AntiSymplectic => Sign::Minus,
        SymplecticType::Unknown => return Ok(None),
    };
    let c = QrConstraint::new(&(v * v_cand), sign)?;
    Ok(Some(if !c.is_trivial() {
        Verdict::Constraint(c)
    } else if sign == Sign::Plus {
        Verdict::AlwaysConsistent
    } else {
        Verdict::Contradiction
    }))
}

/// Constraints forcing the two curves to have the same symplectic type at
/// every pair of shared multiplicative primes.
///
/// Only primes present in both lists are used; pairs are emitted in ascending
/// prime order.
pub fn pairwise_consistency(
    profile: &[(u64, Int)],
    candidate: &[(u64, Int)],
) -> Result<Vec<QrConstraint>, SymplecticError> {
    let mut shared: Vec<(u64, Int)> = profile
        .iter()
        .filter_map(|(l, v)| {
            candidate
                .iter()
                .find(|(m, _)| m == l)
                .map(|(_, w)| (*l, v * w))
        })
        .collect();
    shared.sort_by_key(|(l, _)| *l);
    shared.dedup_by_key(|(l, _)| *l);
    if shared.iter().any(|(_, prod)| prod.is_zero()) {
        return Err(SymplecticError::ZeroResidue);
    }
    if shared.len() < 2 {
        return Err(SymplecticError::TooFewPrimes(shared.len()));
    }
    let mut out = Vec::new();
    for i in 0..shared.len() {
        for j in i + 1..shared.len() {
            out.push(QrConstraint::new(
                &(&shared[i].1 * &shared[j].1),
                Sign::Plus,
            )?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> Int {
        Int::from(v)
    }

    fn qr(n: i64, s: i8) -> QrConstraint {
        QrConstraint::from_i64(n, Sign::from_i8(s).unwrap()).unwrap()
    }

    #[test]
    fn at_two_examples() {
        let t = |a, b, s| criterion_at_two(&AtTwo::exact(a), &AtTwo::exact(b), s).unwrap();
        assert_eq!(t(10, 4, Sign::Minus), SymplecticType::Symplectic);
        assert_eq!(t(8, 4, Sign::Minus), SymplecticType::AntiSymplectic);
        assert_eq!(t(8, 4, Sign::Plus), SymplecticType::Symplectic);
    }

    #[test]
    fn at_two_rejects_missing_data() {
        let good = AtTwo::exact(4);
        let residue = AtTwo {
            v2: Valuation::ModP(int(-2)),
            sl2f3: true,
        };
        let no_flag = AtTwo {
            v2: Valuation::Exact(int(8)),
            sl2f3: false,
        };
        assert_eq!(
            criterion_at_two(&residue, &good, Sign::Plus),
            Err(SymplecticError::NotExact)
        );
        assert_eq!(
            criterion_at_two(&good, &no_flag, Sign::Plus),
            Err(SymplecticError::MissingSl2f3)
        );
    }

    #[test]
    fn multiplicative_examples() {
        let m = |v, w, ty| {
            criterion_multiplicative(&int(v), &int(w), ty)
                .unwrap()
                .unwrap()
        };
        use SymplecticType::*;
        assert_eq!(m(2, 1, Symplectic), Verdict::Constraint(qr(2, 1)));
        assert_eq!(m(2, 4, Symplectic), Verdict::Constraint(qr(2, 1)));
        assert_eq!(m(2, 2, AntiSymplectic), Verdict::Contradiction);
        assert_eq!(m(-2, 3, Symplectic), Verdict::Constraint(qr(-6, 1)));
        assert_eq!(
            criterion_multiplicative(&int(2), &int(3), Unknown),
            Ok(None)
        );
        assert_eq!(
            criterion_multiplicative(&int(0), &int(3), Symplectic),
            Err(SymplecticError::ZeroResidue)
        );
    }

    #[test]
    fn pairwise_examples() {
        let prof = |xs: &[(u64, i64)]| xs.iter().map(|&(l, v)| (l, int(v))).collect::<Vec<_>>();
        let got = pairwise_consistency(
            &prof(&[(2, -4), (3, 2), (5, 2)]),
            &prof(&[(2, 4), (3, 3), (5, 1)]),
        )
        .unwrap();
        assert_eq!(got, vec![qr(-6, 1), qr(-2, 1), qr(3, 1)]);

        let same = prof(&[(2, -4), (3, 2), (5, 2)]);
        assert!(pairwise_consistency(&same, &same)
            .unwrap()
            .iter()
            .all(QrConstraint::is_trivial));

        let got = pairwise_consistency(&prof(&[(3, 2), (7, 2)]), &prof(&[(3, 1), (7, 1)])).unwrap();
        assert_eq!(got, vec![qr(1, 1)]);

        assert_eq!(
            pairwise_consistency(&prof(&[(3, 2), (7, 2)]), &prof(&[(3, 1), (5, 1)])),
            Err(SymplecticError::TooFewPrimes(1))
        );
    }

    #[test]
    fn display() {
        assert_eq!(qr(-8, -1).to_string(), "(-2)=-1");
        assert_eq!(qr(12, 1).to_string(), "(3)=+1");
    }
}
