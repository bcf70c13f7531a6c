//! The candidate-curve database.
//!
//! Records are axioms: conductor, discriminant valuations, reduction types
//! and the SL₂(F₃) inertia flag at 2. Whenever a record carries Weierstrass
//! coefficients, [`verify`] recomputes everything but the inertia flag from
//! them.
//!
//! # Text format
//!
//! One record per line, `#` starts a comment, blank lines are ignored:
//!
//! ```text
//! label | conductor | sign | ℓ:v,ℓ:v,... | red2 | sl2f3 | [a1,a2,a3,a4,a6]
//! ```
//!
//! * `sign` is `+` or `-` (also `1`/`-1`), the sign of the minimal discriminant.
//! * the valuation list names every prime dividing the conductor.
//! * `red2` is one of `good`, `mult`, `add-pg`, `add-pm` and describes the
//!   reduction at 2. It may instead be a list `ℓ:kind,...` for several primes.
//!   Odd primes exactly dividing the conductor default to `mult`; any other
//!   bad prime must be listed.
//! * `sl2f3` is `yes`/`no` (or `true`/`false`).
//! * the model is optional: the seventh field may be empty or omitted.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::ecmodel::{ReductionKind, ReductionType, WeierstrassModel};
use crate::nt::{factor_small, Int};

const EMBEDDED: &str = include_str!("../data/curves.txt");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DbError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("no candidate curves recorded at level {0}")]
    UnknownLevel(u64),
}

fn parse_err(line: usize, message: impl Into<String>) -> DbError {
    DbError::Parse {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveRecord {
    pub label: String,
    pub conductor: u64,
    pub disc_sign: i8,
    pub disc_valuations: BTreeMap<u64, u32>,
    pub reduction_at: BTreeMap<u64, ReductionType>,
    pub inertia_sl2f3_at_2: bool,
    pub model: Option<WeierstrassModel>,
}

impl CurveRecord {
    pub fn valuation(&self, ell: u64) -> u32 {
        self.disc_valuations.get(&ell).copied().unwrap_or(0)
    }

    pub fn reduction(&self, ell: u64) -> ReductionType {
        self.reduction_at
            .get(&ell)
            .copied()
            .unwrap_or(ReductionType::GOOD)
    }

    pub fn bad_primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.disc_valuations.keys().copied()
    }

    /// `±∏ ℓ^v`, e.g. `-2^8·3·5`.
    pub fn discriminant_string(&self) -> String {
        let mut s = String::new();
        if self.disc_sign < 0 {
            s.push('-');
        }
        let parts: Vec<String> = self
            .disc_valuations
            .iter()
            .map(|(p, v)| {
                if *v == 1 {
                    p.to_string()
                } else {
                    format!("{p}^{v}")
                }
            })
            .collect();
        if parts.is_empty() {
            s.push('1');
        }
        s.push_str(&parts.join("·"));
        s
    }

    /// Check the record-level invariants that do not need a model.
    fn check(&self, line: usize) -> Result<(), DbError> {
        let conductor_primes =
            factor_small(&Int::from(self.conductor)).map_err(|e| parse_err(line, e.to_string()))?;
        let from_conductor: Vec<u64> = conductor_primes.primes().collect();
        let from_disc: Vec<u64> = self.bad_primes().collect();
        if from_conductor != from_disc {
            return Err(parse_err(
                line,
                format!(
                    "discriminant primes {from_disc:?} differ from conductor primes {from_conductor:?}"
                ),
            ));
        }
        if self.inertia_sl2f3_at_2 && self.reduction(2) != ReductionType::ADDITIVE_POT_GOOD {
            return Err(parse_err(
                line,
                "sl2f3 requires additive, potentially good reduction at 2",
            ));
        }
        Ok(())
    }
}

impl fmt::Display for CurveRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "label:       {}", self.label)?;
        writeln!(f, "conductor:   {}", self.conductor)?;
        writeln!(f, "discriminant: {}", self.discriminant_string())?;
        for (p, r) in &self.reduction_at {
            writeln!(f, "reduction at {p}: {r}")?;
        }
        writeln!(
            f,
            "SL2(F3) inertia at 2: {}",
            if self.inertia_sl2f3_at_2 { "yes" } else { "no" }
        )?;
        match &self.model {
            Some(m) => write!(f, "model:       {m}"),
            None => write!(f, "model:       (none)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mismatch {
    DiscSign {
        claimed: i8,
        computed: i8,
    },
    Valuation {
        prime: u64,
        claimed: u32,
        computed: u32,
    },
    Reduction {
        prime: u64,
        claimed: ReductionType,
        computed: ReductionType,
    },
    Model(String),
}

impl Mismatch {
    pub fn prime(&self) -> Option<u64> {
        match self {
            Mismatch::Valuation { prime, .. } | Mismatch::Reduction { prime, .. } => Some(*prime),
            _ => None,
        }
    }
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mismatch::DiscSign { claimed, computed } => {
                write!(
                    f,
                    "discriminant sign: claimed {claimed}, computed {computed}"
                )
            }
            Mismatch::Valuation {
                prime,
                claimed,
                computed,
            } => {
                write!(f, "v_{prime}(Δ): claimed {claimed}, computed {computed}")
            }
            Mismatch::Reduction {
                prime,
                claimed,
                computed,
            } => {
                write!(
                    f,
                    "reduction at {prime}: claimed {claimed}, computed {computed}"
                )
            }
            Mismatch::Model(msg) => write!(f, "model: {msg}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyStatus {
    Verified,
    Unverifiable,
    Mismatched(Vec<Mismatch>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub label: String,
    pub status: VerifyStatus,
}

impl VerificationReport {
    pub fn is_ok(&self) -> bool {
        self.status == VerifyStatus::Verified
    }

    pub fn mismatched_primes(&self) -> Vec<u64> {
        match &self.status {
            VerifyStatus::Mismatched(ms) => {
                let mut v: Vec<u64> = ms.iter().filter_map(Mismatch::prime).collect();
                v.dedup();
                v
            }
            _ => Vec::new(),
        }
    }
}

/// Recompute the minimal discriminant and reduction types from the record's
/// model and diff them against the claimed data.
pub fn verify(record: &CurveRecord) -> VerificationReport {
    let label = record.label.clone();
    let Some(model) = &record.model else {
        return VerificationReport {
            label,
            status: VerifyStatus::Unverifiable,
        };
    };
    let min = match model.minimal_model() {
        Ok(m) => m,
        Err(e) => {
            return VerificationReport {
                label,
                status: VerifyStatus::Mismatched(vec![Mismatch::Model(e.to_string())]),
            }
        }
    };
    let mut out = Vec::new();
    if min.disc_sign != record.disc_sign {
        out.push(Mismatch::DiscSign {
            claimed: record.disc_sign,
            computed: min.disc_sign,
        });
    }
    let mut primes: Vec<u64> = record
        .bad_primes()
        .chain(min.disc_valuations.keys().copied())
        .collect();
    primes.sort_unstable();
    primes.dedup();
    for &p in &primes {
        let (claimed, computed) = (record.valuation(p), min.valuation_at(p));
        if claimed != computed {
            out.push(Mismatch::Valuation {
                prime: p,
                claimed,
                computed,
            });
        }
        let (claimed, computed) = (record.reduction(p), min.reduction_type(p));
        if claimed != computed {
            out.push(Mismatch::Reduction {
                prime: p,
                claimed,
                computed,
            });
        }
    }
    let status = if out.is_empty() {
        VerifyStatus::Verified
    } else {
        VerifyStatus::Mismatched(out)
    };
    VerificationReport { label, status }
}

#[derive(Debug, Clone, Default)]
pub struct CurveDatabase {
    records: BTreeMap<String, CurveRecord>,
}

impl CurveDatabase {
    /// The six curves needed for the two embedded equations.
    pub fn embedded() -> Self {
        let mut db = Self::default();
        db.load(EMBEDDED).expect("embedded curve data parses");
        db
    }

    pub fn parse(text: &str) -> Result<Self, DbError> {
        let mut db = Self::default();
        db.load(text)?;
        Ok(db)
    }

    /// Add or replace records from override text.
    pub fn load(&mut self, text: &str) -> Result<(), DbError> {
        for record in parse_records(text)? {
            self.records.insert(record.label.clone(), record);
        }
        Ok(())
    }

    pub fn get(&self, label: &str) -> Result<&CurveRecord, DbError> {
        self.records
            .get(label)
            .ok_or_else(|| DbError::UnknownLabel(label.to_string()))
    }

    /// Curves of conductor `level`, in label order.
    pub fn candidates_for_level(&self, level: u64) -> Result<Vec<&CurveRecord>, DbError> {
        let out: Vec<&CurveRecord> = self
            .records
            .values()
            .filter(|r| r.conductor == level)
            .collect();
        if out.is_empty() {
            return Err(DbError::UnknownLevel(level));
        }
        Ok(out)
    }

    pub fn records(&self) -> impl Iterator<Item = &CurveRecord> {
        self.records.values()
    }

    pub fn verify_all(&self) -> Vec<VerificationReport> {
        self.records.values().map(verify).collect()
    }
}

pub fn parse_records(text: &str) -> Result<Vec<CurveRecord>, DbError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        out.push(parse_record(content, line)?);
    }
    Ok(out)
}

fn parse_record(content: &str, line: usize) -> Result<CurveRecord, DbError> {
    let fields: Vec<&str> = content.split('|').map(str::trim).collect();
    if fields.len() != 6 && fields.len() != 7 {
        return Err(parse_err(
            line,
            format!("expected 6 or 7 fields, found {}", fields.len()),
        ));
    }
    let label = fields[0];
    if label.is_empty()
        || !label
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '.' || c == '-')
    {
        return Err(parse_err(line, format!("bad label {label:?}")));
    }
    let conductor: u64 = fields[1]
        .parse()
        .ok()
        .filter(|&n: &u64| n >= 1)
        .ok_or_else(|| parse_err(line, format!("bad conductor {:?}", fields[1])))?;
    let disc_sign = match fields[2] {
        "+" | "1" | "+1" => 1,
        "-" | "-1" => -1,
        other => return Err(parse_err(line, format!("bad sign {other:?}"))),
    };
    let disc_valuations = parse_prime_map(fields[3], line, |s| {
        s.parse::<u32>().ok().filter(|&v| v > 0)
    })?;
    let conductor_exps = factor_small(&Int::from(conductor))
        .map_err(|e| parse_err(line, e.to_string()))?
        .factors;
    let reduction_at = parse_reductions(fields[4], &conductor_exps, line)?;
    let inertia_sl2f3_at_2 = match fields[5] {
        "yes" | "true" => true,
        "no" | "false" => false,
        other => return Err(parse_err(line, format!("bad sl2f3 flag {other:?}"))),
    };
    let model = match fields.get(6) {
        None | Some(&"") => None,
        Some(text) => Some(parse_model(text, line)?),
    };
    let record = CurveRecord {
        label: label.to_string(),
        conductor,
        disc_sign,
        disc_valuations,
        reduction_at,
        inertia_sl2f3_at_2,
        model,
    };
    record.check(line)?;
    Ok(record)
}

fn parse_prime_map<T>(
    text: &str,
    line: usize,
    value: impl Fn(&str) -> Option<T>,
) -> Result<BTreeMap<u64, T>, DbError> {
    let mut out = BTreeMap::new();
    if text.is_empty() {
        return Ok(out);
    }
    for item in text.split(',') {
        let (p, v) = item
            .split_once(':')
            .ok_or_else(|| parse_err(line, format!("expected ℓ:value, got {item:?}")))?;
        let p: u64 = p
            .trim()
            .parse()
            .ok()
            .filter(|&p| crate::nt::is_prime(p))
            .ok_or_else(|| parse_err(line, format!("{p:?} is not a prime")))?;
        let v = value(v.trim()).ok_or_else(|| parse_err(line, format!("bad value in {item:?}")))?;
        if out.insert(p, v).is_some() {
            return Err(parse_err(line, format!("prime {p} listed twice")));
        }
    }
    Ok(out)
}

fn parse_kind(s: &str) -> Option<ReductionType> {
    Some(match s {
        "good" => ReductionType::GOOD,
        "mult" => ReductionType::MULTIPLICATIVE,
        "add-pg" => ReductionType::ADDITIVE_POT_GOOD,
        "add-pm" => ReductionType::ADDITIVE_POT_MULT,
        _ => return None,
    })
}

fn parse_reductions(
    text: &str,
    conductor_exps: &BTreeMap<u64, u32>,
    line: usize,
) -> Result<BTreeMap<u64, ReductionType>, DbError> {
    let explicit = if text.contains(':') {
        parse_prime_map(text, line, parse_kind)?
    } else {
        let kind =
            parse_kind(text).ok_or_else(|| parse_err(line, format!("bad reduction {text:?}")))?;
        if conductor_exps.contains_key(&2) {
            BTreeMap::from([(2, kind)])
        } else if kind == ReductionType::GOOD {
            BTreeMap::new()
        } else {
            return Err(parse_err(
                line,
                "2 does not divide the conductor; red2 must be good",
            ));
        }
    };
    for p in explicit.keys() {
        if !conductor_exps.contains_key(p) {
            return Err(parse_err(
                line,
                format!("reduction given at {p}, which is not bad"),
            ));
        }
    }
    let mut out = BTreeMap::new();
    for (&p, &e) in conductor_exps {
        let kind = match explicit.get(&p) {
            Some(&k) => k,
            None if e == 1 => ReductionType::MULTIPLICATIVE,
            None => {
                return Err(parse_err(
                    line,
                    format!("reduction type at {p} must be stated"),
                ))
            }
        };
        let expect_mult = e == 1;
        if (kind.kind == ReductionKind::Multiplicative) != expect_mult
            || kind.kind == ReductionKind::Good
        {
            return Err(parse_err(
                line,
                format!("reduction {kind} at {p} contradicts conductor exponent {e}"),
            ));
        }
        out.insert(p, kind);
    }
    Ok(out)
}

fn parse_model(text: &str, line: usize) -> Result<WeierstrassModel, DbError> {
    let inner = text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| parse_err(line, "model must be [a1,a2,a3,a4,a6]"))?;
    let coeffs: Vec<Int> = inner
        .split(',')
        .map(|c| c.trim().parse::<Int>())
        .collect::<Result<_, _>>()
        .map_err(|_| parse_err(line, format!("bad coefficient in {text:?}")))?;
    let [a1, a2, a3, a4, a6]: [Int; 5] = coeffs
        .try_into()
        .map_err(|_| parse_err(line, "model needs exactly five coefficients"))?;
    let model = WeierstrassModel::new(a1, a2, a3, a4, a6);
    if model.invariants().is_err() {
        return Err(parse_err(line, "model is singular"));
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_examples() {
        let db = CurveDatabase::embedded();
        let e = db.get("168a1").unwrap();
        assert_eq!(e.disc_sign, 1);
        assert_eq!(e.disc_valuations, BTreeMap::from([(2, 4), (3, 1), (7, 1)]));
        assert!(e.inertia_sl2f3_at_2);

        let e = db.get("120a1").unwrap();
        assert_eq!(e.disc_sign, 1);
        assert_eq!(e.disc_valuations, BTreeMap::from([(2, 4), (3, 2), (5, 1)]));
        assert!(e.inertia_sl2f3_at_2);

        let e = db.get("30a1").unwrap();
        assert_eq!(e.disc_sign, -1);
        assert_eq!(e.disc_valuations, BTreeMap::from([(2, 4), (3, 3), (5, 1)]));
        for p in [2, 3, 5] {
            assert_eq!(e.reduction(p), ReductionType::MULTIPLICATIVE);
        }

        let e = db.get("42a1").unwrap();
        assert_eq!(e.reduction(2), ReductionType::MULTIPLICATIVE);
        assert_eq!(e.discriminant_string(), "-2^8·3^2·7");

        assert_eq!(db.get("120b1").unwrap().discriminant_string(), "-2^8·3·5");
        assert_eq!(
            db.get("nosuch"),
            Err(DbError::UnknownLabel("nosuch".into()))
        );
    }

    #[test]
    fn levels() {
        let db = CurveDatabase::embedded();
        let labels = |n| -> Vec<String> {
            db.candidates_for_level(n)
                .unwrap()
                .iter()
                .map(|r| r.label.clone())
                .collect()
        };
        assert_eq!(labels(42), ["42a1"]);
        assert_eq!(labels(168), ["168a1", "168b1"]);
        assert_eq!(labels(30), ["30a1"]);
        assert_eq!(labels(120), ["120a1", "120b1"]);
        assert_eq!(
            db.candidates_for_level(31).unwrap_err(),
            DbError::UnknownLevel(31)
        );
    }

    #[test]
    fn every_embedded_record_verifies() {
        for report in CurveDatabase::embedded().verify_all() {
            assert!(report.is_ok(), "{report:?}");
        }
    }

    #[test]
    fn corrupted_valuation_is_reported() {
        let mut rec = CurveDatabase::embedded().get("168a1").unwrap().clone();
        rec.disc_valuations.insert(7, 2);
        let report = verify(&rec);
        assert_eq!(report.mismatched_primes(), vec![7]);
    }

    #[test]
    fn record_without_model_is_unverifiable() {
        let db = CurveDatabase::parse("11a1 | 11 | - | 11:5 | good | no").unwrap();
        let rec = db.get("11a1").unwrap();
        assert_eq!(rec.reduction(11), ReductionType::MULTIPLICATIVE);
        assert_eq!(verify(rec).status, VerifyStatus::Unverifiable);
    }

    #[test]
    fn override_replaces_embedded_record() {
        let mut db = CurveDatabase::embedded();
        db.load("# custom\n42a1 | 42 | - | 2:8,3:2,7:1 | mult | no |\n")
            .unwrap();
        assert!(db.get("42a1").unwrap().model.is_none());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("x | 42 | - | 2:8 | mult | no", "discriminant primes"),
            ("x | 42 | * | 2:8,3:2,7:1 | mult | no", "bad sign"),
            ("x | 42 | - | 2:8,3:2,7:1 | mult", "expected 6 or 7"),
            ("x | 42 | - | 2:8,3:2,4:1 | mult | no", "not a prime"),
            ("x | 42 | - | 2:8,3:2,7:1 | mult | yes", "sl2f3 requires"),
            (
                "x | 42 | - | 2:8,3:2,7:1 | add-pg | no",
                "contradicts conductor",
            ),
            ("x | 72 | - | 2:3,3:3 | add-pg | no", "must be stated"),
            (
                "x | 42 | - | 2:8,3:2,7:1 | mult | no | [1,2,3]",
                "five coefficients",
            ),
            (
                "x | 42 | - | 2:8,3:2,7:1 | mult | no | [0,0,0,0,0]",
                "singular",
            ),
        ];
        for (text, needle) in cases {
            let err = CurveDatabase::parse(&format!("\n{text}")).unwrap_err();
            let msg = err.to_string();
            assert!(msg.starts_with("line 2:"), "{msg}");
            assert!(msg.contains(needle), "{text}: {msg}");
        }
    }

    #[test]
    fn odd_additive_primes_can_be_listed() {
        let db =
            CurveDatabase::parse("27a1 | 27 | - | 3:9 | 3:add-pg | no | [0,0,1,0,-7]").unwrap();
        let rec = db.get("27a1").unwrap();
        assert_eq!(rec.reduction(3), ReductionType::ADDITIVE_POT_GOOD);
        assert!(verify(rec).is_ok(), "{:?}", verify(rec));
    }
}
