//! Exact integer and modular arithmetic shared by the rest of the crate.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, Sign as BigSign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision signed integer used for every domain value.
pub type Int = BigInt;

/// Default trial-division bound for [`factor_small`].
pub const DEFAULT_TRIAL_BOUND: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NtError {
    #[error("Jacobi symbol needs an odd positive modulus, got {0}")]
    BadJacobiModulus(Int),
    #[error("zero has no factorization")]
    Zero,
    #[error("{0} has a cofactor beyond the trial-division bound {1}")]
    BeyondTrialBound(Int, u64),
}

/// Jacobi symbol `(n/m)` for odd positive `m`.
pub fn jacobi(n: &Int, m: &Int) -> Result<i8, NtError> {
    if !m.is_positive() || m.is_even() {
        return Err(NtError::BadJacobiModulus(m.clone()));
    }
    let mut a = n.mod_floor(m);
    let mut b = m.clone();
    let mut acc = 1i8;
    let three = Int::from(3u8);
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            a >>= tz;
            let r8 = (&b % 8u8).to_u8().unwrap_or(0);
            if tz % 2 == 1 && (r8 == 3 || r8 == 5) {
                acc = -acc;
            }
        }
        // reciprocity: flip when both are 3 mod 4
        if (&a % 4u8) == three && (&b % 4u8) == three {
            acc = -acc;
        }
        std::mem::swap(&mut a, &mut b);
        a = a.mod_floor(&b);
    }
    Ok(if b.is_one() { acc } else { 0 })
}

/// Jacobi symbol on machine words; `m` must be odd and positive.
pub fn jacobi_u64(n: u64, m: u64) -> i8 {
    debug_assert!(m % 2 == 1);
    let mut a = n % m;
    let mut b = m;
    let mut acc = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && (b % 8 == 3 || b % 8 == 5) {
            acc = -acc;
        }
        if a % 4 == 3 && b % 4 == 3 {
            acc = -acc;
        }
        std::mem::swap(&mut a, &mut b);
        a %= b;
    }
    if b == 1 {
        acc
    } else {
        0
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Deterministic primality test for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes `<= n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// `sign · ∏ prime^exponent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredInt {
    pub sign: i8,
    pub factors: BTreeMap<u64, u32>,
}

impl FactoredInt {
    pub fn value(&self) -> Int {
        let mut v = Int::from(self.sign);
        for (&p, &e) in &self.factors {
            v *= num_traits::pow(Int::from(p), e as usize);
        }
        v
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.keys().copied()
    }
}

impl fmt::Display for FactoredInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (p, e) in &self.factors {
            if !first {
                write!(f, "·")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Factor `n` by trial division up to [`DEFAULT_TRIAL_BOUND`].
pub fn factor_small(n: &Int) -> Result<FactoredInt, NtError> {
    factor_small_with_bound(n, DEFAULT_TRIAL_BOUND)
}

/// Trial division up to `bound`. A leftover cofactor is accepted only when it
/// is provably prime (smaller than `bound²`); otherwise this is an error.
pub fn factor_small_with_bound(n: &Int, bound: u64) -> Result<FactoredInt, NtError> {
    if n.is_zero() {
        return Err(NtError::Zero);
    }
    let sign = if n.sign() == BigSign::Minus { -1 } else { 1 };
    let mut rest = n.abs();
    let mut factors = BTreeMap::new();
    let tz = rest.trailing_zeros().unwrap_or(0);
    if tz > 0 {
        factors.insert(2, tz as u32);
        rest >>= tz;
    }
    let mut d = 3u64;
    while d <= bound {
        if let Some(r) = rest.to_u64() {
            if d.saturating_mul(d) > r {
                break;
            }
        }
        let dd = Int::from(d);
        let mut e = 0u32;
        loop {
            let (q, r) = rest.div_rem(&dd);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            factors.insert(d, e);
        }
        d += 2;
    }
    if !rest.is_one() {
        let limit = Int::from(bound) * Int::from(bound);
        let small_enough = rest
            .to_u64()
            .map(|r| d.saturating_mul(d) > r)
            .unwrap_or(false);
        if !small_enough && rest >= limit {
            return Err(NtError::BeyondTrialBound(n.clone(), bound));
        }
        let p = rest
            .to_u64()
            .ok_or_else(|| NtError::BeyondTrialBound(n.clone(), bound))?;
        *factors.entry(p).or_insert(0) += 1;
    }
    Ok(FactoredInt { sign, factors })
}

/// The squarefree `s` with `n = s·t²` and `sign(s) = sign(n)`.
pub fn squarefree_part(n: &Int) -> Result<Int, NtError> {
    let f = factor_small(n)?;
    let mut s = Int::from(f.sign);
    for (p, e) in f.factors {
        if e % 2 == 1 {
            s *= p;
        }
    }
    Ok(s)
}

/// `v_ℓ(n)` for nonzero `n`; `None` for zero.
pub fn valuation(n: &Int, ell: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let l = Int::from(ell);
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&l);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> Int {
        Int::from(n)
    }

    fn brute_squares(m: u64) -> Vec<bool> {
        let mut sq = vec![false; m as usize];
        for x in 1..m {
            sq[((x * x) % m) as usize] = true;
        }
        sq
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(&int(1), &int(3)), Ok(1));
        assert_eq!(jacobi(&int(2), &int(7)), Ok(1));
        assert_eq!(jacobi(&int(2), &int(5)), Ok(-1));
        assert_eq!(jacobi(&int(3), &int(19)), Ok(-1));
        // Euler's criterion for the last one
        assert_eq!(pow_mod(3, 9, 19), 18);
    }

    #[test]
    fn jacobi_rejects_bad_modulus() {
        assert!(jacobi(&int(3), &int(8)).is_err());
        assert!(jacobi(&int(3), &int(0)).is_err());
        assert!(jacobi(&int(3), &int(-7)).is_err());
    }

    #[test]
    fn jacobi_matches_brute_force_squares() {
        for m in primes_up_to(199).into_iter().filter(|&p| p > 2) {
            let sq = brute_squares(m);
            for n in 1..m {
                let j = jacobi(&int(n as i64), &int(m as i64)).unwrap();
                assert_eq!(j == 1, sq[n as usize], "({n}/{m})");
                assert_eq!(j, jacobi_u64(n, m));
            }
        }
    }

    #[test]
    fn jacobi_is_multiplicative() {
        for m in (1..=99i64).step_by(2) {
            for n1 in -50..=50i64 {
                for n2 in -50..=50i64 {
                    let lhs = jacobi(&int(n1 * n2), &int(m)).unwrap();
                    let rhs =
                        jacobi(&int(n1), &int(m)).unwrap() * jacobi(&int(n2), &int(m)).unwrap();
                    assert_eq!(lhs, rhs, "({n1}*{n2}/{m})");
                }
            }
        }
    }

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(!is_prime(91));
        assert!(is_prime(104729));
        assert!(!is_prime(0) && !is_prime(1));
        let sieve = primes_up_to(1_000_000);
        let mut it = sieve.iter().peekable();
        for n in 0..1_000_000u64 {
            let expected = it.peek().map(|&&p| p == n).unwrap_or(false);
            if expected {
                it.next();
            }
            assert_eq!(is_prime(n), expected, "{n}");
        }
    }

    #[test]
    fn trial_division_104729() {
        let n = 104729u64;
        assert!((2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d)));
    }

    #[test]
    fn factor_examples() {
        let f = factor_small(&int(-96)).unwrap();
        assert_eq!(f.sign, -1);
        assert_eq!(f.factors, BTreeMap::from([(2, 5), (3, 1)]));
        let f = factor_small(&int(1)).unwrap();
        assert_eq!((f.sign, f.factors.len()), (1, 0));
        let f = factor_small(&int(24)).unwrap();
        assert_eq!(f.factors, BTreeMap::from([(2, 3), (3, 1)]));
        assert_eq!(factor_small(&int(0)), Err(NtError::Zero));
    }

    #[test]
    fn factor_beyond_bound_is_an_error() {
        // 1009 * 1013 with bound 100: no factor <= 100, cofactor >= 100²
        let n = int(1009 * 1013);
        assert!(matches!(
            factor_small_with_bound(&n, 100),
            Err(NtError::BeyondTrialBound(_, 100))
        ));
        // a prime cofactor below bound² is accepted
        let f = factor_small_with_bound(&int(2 * 9973), 100).unwrap();
        assert_eq!(f.factors, BTreeMap::from([(2, 1), (9973, 1)]));
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_part(&int(8)).unwrap(), int(2));
        assert_eq!(squarefree_part(&int(-96)).unwrap(), int(-6));
        assert_eq!(squarefree_part(&int(1)).unwrap(), int(1));
        assert!(squarefree_part(&int(0)).is_err());
    }

    #[test]
    fn squarefree_times_square_reconstructs() {
        for n in (-10_000i64..=10_000).filter(|&n| n != 0) {
            let s = squarefree_part(&int(n)).unwrap();
            let (q, r) = int(n).div_rem(&s);
            assert!(r.is_zero());
            let t = q.sqrt();
            assert_eq!(&t * &t, q, "{n}");
            assert_eq!(s.is_negative(), n < 0);
        }
    }

    #[test]
    fn factored_value_round_trips() {
        for n in [-360i64, 1, 97, 1024, -1] {
            assert_eq!(factor_small(&int(n)).unwrap().value(), int(n));
        }
    }

    #[test]
    fn modular_helpers() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(2, 4), None);
        assert_eq!(valuation(&int(-96), 2), Some(5));
        assert_eq!(valuation(&int(0), 2), None);
    }
}
