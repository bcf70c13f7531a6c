//! Local solvability of `a x^p + b y^p + c z^p = 0` and obstruction search.
//!
//! Over `Q_ℓ` the decision uses p-th power classes: write `s = 1 + v_ℓ(p)`
//! for odd ℓ and `s = 1` for ℓ = 2. A unit of `Z_ℓ` is a p-th power iff it is
//! one modulo `ℓ^s`, and `x^p mod ℓ^s` only depends on `x mod ℓ`. Normalizing
//! one unit coordinate to 1 leaves finitely many ball-intersection tests.
//! Every positive answer carries a witness modulo `ℓ^(2e+1)` that Hensel's
//! lemma lifts, and the witness is re-checked independently.

use std::collections::BTreeSet;
use std::fmt;
use std::time::Instant;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::nt::{inv_mod, is_prime, mul_mod, pow_mod, valuation, Int};

/// Largest Weil cutoff [`obstruction_report`] will scan below.
pub const WEIL_SCAN_LIMIT: u64 = 10_000_000;

/// Default number of even multipliers tried in `q = kp + 1`.
pub const DEFAULT_K_MAX: u64 = 200;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("the exponent must be an odd prime, got {0}")]
    BadExponent(u64),
    #[error("coefficients must be nonzero")]
    ZeroCoefficient,
    #[error("q = {q} must satisfy q ≡ 1 (mod {p})")]
    NotOneModP { q: u64, p: u64 },
    #[error("q = {0} divides p·a·b·c")]
    BadPrime(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    FastSubgroup,
    HenselDescent,
    WeilBound,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::FastSubgroup => "fast_subgroup",
            Method::HenselDescent => "hensel_descent",
            Method::WeilBound => "weil_bound",
        })
    }
}

/// A primitive point modulo `ℓ^precision` that lifts to `Z_ℓ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub ell: u64,
    pub precision: u32,
    pub point: [Int; 3],
}

impl Witness {
    /// Hensel certificate: the form vanishes modulo `ℓ^N`, some coordinate is
    /// a unit, and some partial derivative has valuation `d` with `2d < N`.
    pub fn verify(&self, coeffs: &[Int; 3], p: u64) -> bool {
        let ell = Int::from(self.ell);
        let modulus = ell.pow(self.precision);
        let pe = Int::from(p);
        let reduce = |x: &Int| x.mod_floor(&modulus);
        let point: Vec<Int> = self.point.iter().map(reduce).collect();
        if point.iter().all(|x| x.is_multiple_of(&ell)) {
            return false;
        }
        let mut sum = Int::zero();
        for (a, x) in coeffs.iter().zip(&point) {
            sum += a * x.modpow(&pe, &modulus);
        }
        if !reduce(&sum).is_zero() {
            return false;
        }
        coeffs.iter().zip(&point).any(|(a, x)| {
            let d = reduce(&(&pe * a * x.modpow(&(&pe - 1u32), &modulus)));
            match valuation(&d, self.ell) {
                Some(v) => 2 * v < self.precision,
                None => false,
            }
        })
    }
}

impl Serialize for Witness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Witness", 3)?;
        st.serialize_field("ell", &self.ell)?;
        st.serialize_field("precision", &self.precision)?;
        st.serialize_field("point", &self.point.each_ref().map(ToString::to_string))?;
        st.end()
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = &self.point;
        write!(f, "({x}, {y}, {z}) mod {}^{}", self.ell, self.precision)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalSolvability {
    Solvable(Witness),
    Unsolvable,
    Undecided(String),
}

impl LocalSolvability {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            LocalSolvability::Solvable(_) => Some(true),
            LocalSolvability::Unsolvable => Some(false),
            LocalSolvability::Undecided(_) => None,
        }
    }
}

fn check_inputs(coeffs: &[Int; 3], p: u64) -> Result<(), LocalError> {
    if p == 2 || !is_prime(p) {
        return Err(LocalError::BadExponent(p));
    }
    if coeffs.iter().any(Zero::is_zero) {
        return Err(LocalError::ZeroCoefficient);
    }
    Ok(())
}

fn residue(n: &Int, m: u64) -> u64 {
    n.mod_floor(&Int::from(m)).to_u64().expect("residue fits")
}

/// Existence of an `F_q` point, for `q = kp + 1` prime not dividing `p·a·b·c`.
pub fn solvable_mod_q_fast(coeffs: &[Int; 3], p: u64, q: u64) -> Result<bool, LocalError> {
    check_inputs(coeffs, p)?;
    if !is_prime(q) {
        return Err(LocalError::NotPrime(q));
    }
    if q % p != 1 {
        return Err(LocalError::NotOneModP { q, p });
    }
    let [a, b, c] = [0, 1, 2].map(|i| residue(&coeffs[i], q));
    if p == q || a == 0 || b == 0 || c == 0 {
        return Err(LocalError::BadPrime(q));
    }
    let k = (q - 1) / p;
    let in_s = |t: u64| pow_mod(t, k, q) == 1;
    let ratio = |u: u64, v: u64| mul_mod(q - u, inv_mod(v, q).expect("unit"), q);
    if in_s(ratio(a, b)) || in_s(ratio(a, c)) || in_s(ratio(b, c)) {
        return Ok(true);
    }
    let h = subgroup_generator(p, k, q);
    let ac = mul_mod(a, inv_mod(c, q).expect("unit"), q);
    let cb = mul_mod(c, inv_mod(b, q).expect("unit"), q);
    let mut t1 = 1u64;
    for _ in 0..k {
        let t2 = mul_mod((q - 1 + q - mul_mod(ac, t1, q)) % q, cb, q);
        if t2 != 0 && in_s(t2) {
            return Ok(true);
        }
        t1 = mul_mod(t1, h, q);
    }
    Ok(false)
}

/// An element generating the p-th powers of `F_q^×`, which have order `k`.
fn subgroup_generator(p: u64, k: u64, q: u64) -> u64 {
    let k_primes: Vec<u64> = crate::nt::factor_small(&Int::from(k))
        .expect("k factors")
        .primes()
        .collect();
    (2..q)
        .map(|x| pow_mod(x, p, q))
        .find(|&h| k_primes.iter().all(|&r| pow_mod(h, k / r, q) != 1))
        .unwrap_or(1)
}

struct Coef {
    v: u32,
    res: u64,
    unit_big: Int,
}

enum ZChoice {
    Zero,
    Unit {
        i: u32,
        j: u32,
        radius: u32,
        m: u32,
        t: u64,
    },
}

enum YChoice {
    Zero,
    Power { k: u32, root: u64 },
}

struct ChartHit {
    y: YChoice,
    z: ZChoice,
}

struct Ctx {
    ell: u64,
    p: u64,
    s: u32,
    prec: u32,
    modulus: u64,
    /// `(x^p mod ℓ^s, x)` for unit classes `x mod ℓ`, one per distinct power.
    powers: Vec<(u64, u64)>,
}

impl Ctx {
    fn pw(&self, e: u32) -> u64 {
        self.ell.pow(e)
    }

    fn val(&self, mut r: u64) -> u32 {
        if r == 0 {
            return self.prec;
        }
        let mut v = 0;
        while r.is_multiple_of(self.ell) {
            r /= self.ell;
            v += 1;
        }
        v
    }

    fn is_pth_power(&self, t: u64, m: u32) -> bool {
        if m == 0 || self.ell == 2 {
            return true;
        }
        let modulus = self.pw(m);
        let phi = modulus / self.ell * (self.ell - 1);
        pow_mod(t, phi / self.p.gcd(&phi), modulus) == 1
    }

    /// Is there a p-th power `Z` with `c·Z ∈ C + ℓ^R Z_ℓ`?
    fn ball_hits(&self, center: u64, radius: u32, c: &Coef) -> Option<ZChoice> {
        let j = self.val(center);
        if j >= radius {
            return Some(ZChoice::Zero);
        }
        if j < c.v || !((j - c.v) as u64).is_multiple_of(self.p) {
            return None;
        }
        let m = (radius - j).min(self.s);
        let modulus = self.pw(m);
        let cu = (c.res / self.pw(c.v)) % modulus;
        let cu_center = (center / self.pw(j)) % modulus;
        let t = mul_mod(cu_center, inv_mod(cu, modulus)?, modulus);
        self.is_pth_power(t, m).then(|| ZChoice::Unit {
            i: (j - c.v) / self.p as u32,
            j,
            radius,
            m,
            t,
        })
    }

    fn chart(&self, a: &Coef, b: &Coef, c: &Coef) -> Option<ChartHit> {
        let neg = |x: u64| (self.modulus - x) % self.modulus;
        if let Some(z) = self.ball_hits(neg(a.res), a.v + self.s + 1, c) {
            return Some(ChartHit {
                y: YChoice::Zero,
                z,
            });
        }
        let mut k = 0u32;
        while (k as u64) * self.p + b.v as u64 <= (a.v + self.s) as u64 {
            let kp = k * self.p as u32;
            let scale = mul_mod(b.res, self.pw(kp) % self.modulus, self.modulus);
            for &(h, root) in &self.powers {
                let center = neg((a.res + mul_mod(scale, h, self.modulus)) % self.modulus);
                if let Some(z) = self.ball_hits(center, kp + self.s + b.v, c) {
                    return Some(ChartHit {
                        y: YChoice::Power { k, root },
                        z,
                    });
                }
            }
            k += 1;
        }
        None
    }

    fn root_of(&self, t: u64, m: u32) -> u64 {
        let modulus = self.pw(m);
        self.powers
            .iter()
            .find(|(h, _)| h % modulus == t % modulus)
            .map(|&(_, x)| x)
            .expect("p-th power class is tabulated")
    }
}

/// The largest radius any ball test of the three charts uses.
fn needed_precision(vs: [u32; 3], p: u64, s: u32) -> u64 {
    let mut r = 0u64;
    for i in 0..3 {
        let (va, vb) = (vs[i] as u64, vs[(i + 1) % 3].min(vs[(i + 2) % 3]) as u64);
        let vb_max = vs[(i + 1) % 3].max(vs[(i + 2) % 3]) as u64;
        r = r.max(va + s as u64 + 1);
        for v in [vb, vb_max] {
            if v <= va + s as u64 {
                let k = (va + s as u64 - v) / p;
                r = r.max(k * p + s as u64 + v);
            }
        }
    }
    r
}

/// Decide whether the equation has a nontrivial solution over `Q_ℓ`.
pub fn solvable_over_ql(
    coeffs: &[Int; 3],
    p: u64,
    ell: u64,
) -> Result<LocalSolvability, LocalError> {
    check_inputs(coeffs, p)?;
    if !is_prime(ell) {
        return Err(LocalError::NotPrime(ell));
    }
    let delta = if ell == p { 1 } else { 0 };
    let s = 1 + delta;
    let vs = [0, 1, 2].map(|i| valuation(&coeffs[i], ell).expect("nonzero"));
    let prec = needed_precision(vs, p, s);
    let fits = (ell as f64).log2() * prec as f64 <= 62.0;
    if !fits {
        return Ok(LocalSolvability::Undecided(format!(
            "working precision {ell}^{prec} exceeds 64-bit arithmetic"
        )));
    }
    let prec = prec as u32;
    let modulus = ell.pow(prec);
    let s_mod = ell.pow(s);
    let mut powers: Vec<(u64, u64)> = (1..ell).map(|x| (pow_mod(x, p, s_mod), x)).collect();
    powers.sort_unstable();
    powers.dedup_by_key(|(h, _)| *h);
    let ctx = Ctx {
        ell,
        p,
        s,
        prec,
        modulus,
        powers,
    };
    let coef = |i: usize| Coef {
        v: vs[i],
        res: residue(&coeffs[i], modulus),
        unit_big: &coeffs[i] / Int::from(ell).pow(vs[i]),
    };
    let cs = [coef(0), coef(1), coef(2)];
    for (x, y, z) in [(0, 1, 2), (1, 0, 2), (2, 0, 1)] {
        if let Some(hit) = ctx.chart(&cs[x], &cs[y], &cs[z]) {
            return Ok(match build_witness(&ctx, coeffs, &cs, [x, y, z], &hit) {
                Some(w) => LocalSolvability::Solvable(w),
                None => LocalSolvability::Undecided("witness failed its certificate".into()),
            });
        }
    }
    Ok(LocalSolvability::Unsolvable)
}

/// Lift `w` with `w^p ≡ t (mod ℓ^s)` to `w^p ≡ t (mod ℓ^target)`.
fn lift_root(ctx: &Ctx, t: &Int, w0: u64, target: u32) -> Int {
    let ell = Int::from(ctx.ell);
    let p = Int::from(ctx.p);
    let delta = ctx.s - 1;
    let p_unit = residue(&(&p / ell.pow(delta)), ctx.ell);
    let mut w = Int::from(w0);
    let mut m = 1u32;
    while m + delta < target {
        let modulus = ell.pow(m + delta + 1);
        let diff = (t - w.modpow(&p, &modulus)).mod_floor(&modulus);
        let digit = residue(&(diff / ell.pow(m + delta)), ctx.ell);
        let w1 = residue(&w, ctx.ell);
        let deriv = mul_mod(p_unit, pow_mod(w1, ctx.p - 1, ctx.ell), ctx.ell);
        let step = mul_mod(
            digit,
            inv_mod(deriv, ctx.ell).expect("unit derivative"),
            ctx.ell,
        );
        w += Int::from(step) * ell.pow(m);
        m += 1;
    }
    w
}

fn build_witness(
    ctx: &Ctx,
    coeffs: &[Int; 3],
    cs: &[Coef; 3],
    order: [usize; 3],
    hit: &ChartHit,
) -> Option<Witness> {
    let [ia, ib, ic] = order;
    let (a, b, c) = (&coeffs[ia], &coeffs[ib], &coeffs[ic]);
    let (ca, cb, cc) = (&cs[ia], &cs[ib], &cs[ic]);
    let ell = Int::from(ctx.ell);
    let p = Int::from(ctx.p);
    let e = ctx.s - 1 + ca.v;
    let n = 2 * e + 1;
    let work = ell.pow(n + cb.v + cc.v + ctx.s + 2);
    let inv = |u: &Int, m: &Int| -> Int {
        let g = u.extended_gcd(m);
        g.x.mod_floor(m)
    };

    let (y, z) = match (&hit.y, &hit.z) {
        (YChoice::Zero, ZChoice::Unit { i, .. }) => {
            let target = n - ca.v;
            let m = ell.pow(target);
            let t = (-&ca.unit_big * inv(&cc.unit_big, &m)).mod_floor(&m);
            let w0 = ctx.root_of(residue(&t, ctx.pw(ctx.s)), ctx.s);
            (Int::zero(), ell.pow(*i) * lift_root(ctx, &t, w0, target))
        }
        (YChoice::Zero, ZChoice::Zero) => return None,
        (YChoice::Power { k, root }, zc) => {
            let y0 = ell.pow(*k) * Int::from(*root);
            let z = match zc {
                ZChoice::Zero => Int::zero(),
                ZChoice::Unit { i, j, radius, m, t } => {
                    let center = (-(a + b * y0.modpow(&p, &work))).mod_floor(&work);
                    let target = radius - j;
                    let mt = ell.pow(target);
                    let u = (center / ell.pow(*j) * inv(&cc.unit_big, &mt)).mod_floor(&mt);
                    ell.pow(*i) * lift_root(ctx, &u, ctx.root_of(*t, *m), target)
                }
            };
            let d = (-(a + c * z.modpow(&p, &work))).mod_floor(&work);
            let kp = k * ctx.p as u32;
            let r = cb.v + kp;
            let y = if r >= n {
                y0
            } else {
                let target = n - r;
                let m = ell.pow(target);
                let u = (d / ell.pow(r) * inv(&cb.unit_big, &m)).mod_floor(&m);
                ell.pow(*k) * lift_root(ctx, &u, *root, target)
            };
            (y, z)
        }
    };
    let mut point = [Int::zero(), Int::zero(), Int::zero()];
    point[ia] = Int::one();
    point[ib] = y;
    point[ic] = z;
    let modulus = ell.pow(n);
    let point = point.map(|x| x.mod_floor(&modulus));
    let w = Witness {
        ell: ctx.ell,
        precision: n,
        point,
    };
    w.verify(coeffs, ctx.p).then_some(w)
}

/// Smallest `q0` with `q + 1 > (p-1)(p-2)·√q` for every `q ≥ q0`, so the
/// smooth curve of degree p has a point over every `F_q` with `q ≥ q0`.
pub fn weil_cutoff(p: u64) -> u64 {
    let two_g = ((p - 1) * (p - 2)) as u128;
    let mut lo = 1u128;
    let mut hi = two_g * two_g + 4;
    let ok = |q: u128| (q + 1) * (q + 1) > two_g * two_g * q;
    while lo < hi {
        let mid = (lo + hi) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo as u64
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeCheck {
    pub prime: u64,
    pub solvable: Option<bool>,
    pub method: Method,
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub k_max: u64,
    /// Scan every `q ≡ 1 (mod p)` below the Weil cutoff if nothing else is found.
    pub certify: bool,
    /// Keep going after the first obstruction.
    pub exhaustive: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            k_max: DEFAULT_K_MAX,
            certify: true,
            exhaustive: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub equation: [String; 3],
    pub p: u64,
    pub checks: Vec<PrimeCheck>,
    /// First obstruction in search order.
    pub obstruction: Option<u64>,
    pub obstruction_primes: Vec<u64>,
    /// Set when the absence of further obstructions is proved by the Weil bound.
    pub certified_cutoff: Option<u64>,
    pub undecided: bool,
}

impl ObstructionReport {
    pub fn method(&self) -> Option<Method> {
        match self.obstruction {
            Some(q) => self.checks.iter().find(|c| c.prime == q).map(|c| c.method),
            None => self.certified_cutoff.map(|_| Method::WeilBound),
        }
    }
}

fn bad_primes(coeffs: &[Int; 3], p: u64) -> Result<Vec<u64>, LocalError> {
    let mut out = BTreeSet::from([p]);
    for c in coeffs {
        let f = crate::nt::factor_small(c).map_err(|_| LocalError::ZeroCoefficient)?;
        out.extend(f.primes());
    }
    Ok(out.into_iter().collect())
}

fn divides_abc(coeffs: &[Int; 3], q: u64) -> bool {
    coeffs.iter().any(|c| residue(c, q) == 0)
}

/// Search for a prime without nontrivial local solutions: bad primes first,
/// then `q = kp + 1` for even `k ≤ k_max`, then (if asked and feasible) every
/// remaining `q ≡ 1 (mod p)` below the Weil cutoff.
pub fn obstruction_report(
    coeffs: &[Int; 3],
    p: u64,
    opts: SearchOptions,
) -> Result<ObstructionReport, LocalError> {
    check_inputs(coeffs, p)?;
    let mut checks = Vec::new();
    let done = |checks: &Vec<PrimeCheck>| {
        !opts.exhaustive
            && checks
                .iter()
                .any(|c: &PrimeCheck| c.solvable == Some(false))
    };
    for ell in bad_primes(coeffs, p)? {
        let r = solvable_over_ql(coeffs, p, ell)?;
        let note = match &r {
            LocalSolvability::Undecided(why) => Some(why.clone()),
            _ => None,
        };
        let witness = match &r {
            LocalSolvability::Solvable(w) => Some(w.clone()),
            _ => None,
        };
        checks.push(PrimeCheck {
            prime: ell,
            solvable: r.as_bool(),
            method: Method::HenselDescent,
            witness,
            note,
        });
        if done(&checks) {
            break;
        }
    }
    let good_q = |q: u64| is_prime(q) && q != p && !divides_abc(coeffs, q);
    let mut tried = BTreeSet::new();
    if !done(&checks) {
        for k in (2..=opts.k_max).step_by(2) {
            let q = k * p + 1;
            if !good_q(q) {
                continue;
            }
            tried.insert(q);
            let ok = solvable_mod_q_fast(coeffs, p, q)?;
            checks.push(PrimeCheck {
                prime: q,
                solvable: Some(ok),
                method: Method::FastSubgroup,
                witness: None,
                note: None,
            });
            if done(&checks) {
                break;
            }
        }
    }
    let cutoff = weil_cutoff(p);
    let mut certified_cutoff = None;
    if opts.certify && !done(&checks) && cutoff <= WEIL_SCAN_LIMIT {
        let mut q = p + 1;
        while q < cutoff {
            if good_q(q) && !tried.contains(&q) {
                let ok = solvable_mod_q_fast(coeffs, p, q)?;
                checks.push(PrimeCheck {
                    prime: q,
                    solvable: Some(ok),
                    method: Method::FastSubgroup,
                    witness: None,
                    note: None,
                });
                if done(&checks) {
                    break;
                }
            }
            q += p;
        }
        if !done(&checks) {
            certified_cutoff = Some(cutoff);
        }
    }
    let obstruction_primes: Vec<u64> = checks
        .iter()
        .filter(|c| c.solvable == Some(false))
        .map(|c| c.prime)
        .collect();
    let undecided = checks.iter().any(|c| c.solvable.is_none());
    if undecided {
        certified_cutoff = None;
    }
    Ok(ObstructionReport {
        equation: coeffs.clone().map(|c| c.to_string()),
        p,
        obstruction: obstruction_primes.first().copied(),
        obstruction_primes,
        checks,
        certified_cutoff,
        undecided,
    })
}

/// The first obstruction prime, if any is found.
pub fn has_local_obstruction(
    coeffs: &[Int; 3],
    p: u64,
    k_max: u64,
) -> Result<Option<u64>, LocalError> {
    let opts = SearchOptions {
        k_max,
        certify: true,
        exhaustive: false,
    };
    Ok(obstruction_report(coeffs, p, opts)?.obstruction)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepEntry {
    pub p: u64,
    /// First obstruction in search order, bad primes included.
    pub obstruction: Option<u64>,
    pub method: Option<Method>,
    /// First `q = kp + 1` obstruction with even `k ≤ k_max`.
    pub kp1: Option<u64>,
    pub undecided: bool,
    pub elapsed_ms: u64,
}

fn sweep_one(coeffs: &[Int; 3], p: u64, k_max: u64) -> Result<SweepEntry, LocalError> {
    let start = Instant::now();
    let opts = SearchOptions {
        k_max,
        certify: false,
        exhaustive: false,
    };
    let report = obstruction_report(coeffs, p, opts)?;
    let kp1 = match report
        .checks
        .iter()
        .find(|c| c.method == Method::FastSubgroup && c.solvable == Some(false))
    {
        Some(c) => Some(c.prime),
        None => (2..=k_max)
            .step_by(2)
            .map(|k| k * p + 1)
            .filter(|&q| is_prime(q) && q != p && !divides_abc(coeffs, q))
            .find(|&q| solvable_mod_q_fast(coeffs, p, q) == Ok(false)),
    };
    Ok(SweepEntry {
        p,
        obstruction: report.obstruction,
        method: report.method(),
        kp1,
        undecided: report.undecided,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// One entry per odd prime `p_min ≤ p ≤ p_max`, in increasing order.
pub fn sweep(
    coeffs: &[Int; 3],
    p_min: u64,
    p_max: u64,
    k_max: u64,
) -> Result<Vec<SweepEntry>, LocalError> {
    if coeffs.iter().any(Zero::is_zero) {
        return Err(LocalError::ZeroCoefficient);
    }
    let primes: Vec<u64> = (p_min.max(3)..=p_max).filter(|&p| is_prime(p)).collect();
    primes
        .par_iter()
        .map(|&p| sweep_one(coeffs, p, k_max))
        .collect()
}
