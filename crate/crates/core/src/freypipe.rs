//! Frey-curve eliminations for `a x^p + b y^p + c z^p = 0`.
//!
//! A scenario fixes a parity case, the valuation profile of the Frey curve's
//! minimal discriminant and the level it lowers to. Every candidate curve at
//! that level is compared with the Frey curve, and the result is the
//! condition on p under which the comparison is contradictory.
//!
//! # Scenario file
//!
//! ```text
//! equation 3,8,21            # starts a block for one coefficient triple
//! floor >7                   # or >=5; optional
//! case y_odd level 168       # optional: candidates 168a1,168b1
//!   2 = 10                   # exact valuation, potentially good reduction
//!   3 ~ -2                   # valuation mod p, multiplicative reduction
//! ```
//!
//! An exact entry at 2 carries SL₂(F₃) inertia for the Frey curve.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::curvedb::{CurveDatabase, CurveRecord, DbError};
use crate::ecmodel::ReductionKind;
use crate::nt::Int;
use crate::qrsolver::{self, CongruenceClassSet, QrError, SignExpr, Simplified};
use crate::symplectic::{
    criterion_at_two, criterion_multiplicative, pairwise_consistency, AtTwo, QrConstraint, Sign,
    SymplecticError, SymplecticType, Valuation, Verdict,
};

const EMBEDDED: &str = include_str!("../data/scenarios.txt");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipeError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("no scenario for the equation {0}; supply a scenario file")]
    UnknownEquation(String),
    #[error(transparent)]
    Db(#[from] DbError),
    #[error("{case}/{label}: {source}")]
    Criterion {
        case: String,
        label: String,
        source: SymplecticError,
    },
    #[error("{case}/{label}: {message}")]
    Incompatible {
        case: String,
        label: String,
        message: String,
    },
    #[error(transparent)]
    Qr(#[from] QrError),
}

fn parse_err(line: usize, message: impl Into<String>) -> PipeError {
    PipeError::Parse {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExponentFloor {
    pub strict: bool,
    pub bound: u64,
}

impl Default for ExponentFloor {
    fn default() -> Self {
        ExponentFloor {
            strict: false,
            bound: 3,
        }
    }
}

impl ExponentFloor {
    pub fn admits(&self, p: u64) -> bool {
        if self.strict {
            p > self.bound
        } else {
            p >= self.bound
        }
    }
}

impl fmt::Display for ExponentFloor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "p {} {}",
            if self.strict { ">" } else { "≥" },
            self.bound
        )
    }
}

pub type ValuationProfile = BTreeMap<u64, Valuation>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseSpec {
    pub parity: String,
    pub level: u64,
    pub candidates: Option<Vec<String>>,
    pub profile: ValuationProfile,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationSpec {
    pub coefficients: [Int; 3],
    pub floor: ExponentFloor,
    pub cases: Vec<CaseSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreyScenario {
    pub coefficients: [Int; 3],
    pub parity: String,
    pub profile: ValuationProfile,
    pub level: u64,
    pub candidates: Vec<String>,
    pub exponent_floor: ExponentFloor,
}

#[derive(Debug, Clone, Default)]
pub struct ScenarioFile {
    equations: Vec<EquationSpec>,
}

fn triple_string(c: &[Int; 3]) -> String {
    format!("{},{},{}", c[0], c[1], c[2])
}

impl ScenarioFile {
    pub fn embedded() -> Self {
        Self::parse(EMBEDDED).expect("embedded scenarios parse")
    }

    pub fn parse(text: &str) -> Result<Self, PipeError> {
        let mut file = ScenarioFile::default();
        let mut headers: Vec<(usize, Vec<usize>)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (head, rest) = content
                .split_once(char::is_whitespace)
                .unwrap_or((content, ""));
            let rest = rest.trim();
            match head {
                "equation" => {
                    let coefficients = parse_triple(rest, line)?;
                    if file
                        .equations
                        .iter()
                        .any(|e| e.coefficients == coefficients)
                    {
                        return Err(parse_err(line, format!("equation {rest} defined twice")));
                    }
                    headers.push((line, Vec::new()));
                    file.equations.push(EquationSpec {
                        coefficients,
                        floor: ExponentFloor::default(),
                        cases: Vec::new(),
                    });
                }
                "floor" => {
                    let eq = file.current(line)?;
                    eq.floor = parse_floor(rest, line)?;
                }
                "case" => {
                    let case = parse_case(rest, line)?;
                    let eq = file.current(line)?;
                    if eq.cases.iter().any(|c| c.parity == case.parity) {
                        return Err(parse_err(
                            line,
                            format!("case {} defined twice", case.parity),
                        ));
                    }
                    eq.cases.push(case);
                    headers.last_mut().expect("equation seen").1.push(line);
                }
                _ => {
                    let case = file
                        .current(line)?
                        .cases
                        .last_mut()
                        .ok_or_else(|| parse_err(line, "valuation entry before any case"))?;
                    let (ell, val) = parse_entry(content, line)?;
                    if case.profile.insert(ell, val).is_some() {
                        return Err(parse_err(line, format!("prime {ell} listed twice")));
                    }
                }
            }
        }
        for (eq, (eq_line, case_lines)) in file.equations.iter().zip(&headers) {
            if eq.cases.is_empty() {
                return Err(parse_err(*eq_line, "equation has no cases"));
            }
            for (c, line) in eq.cases.iter().zip(case_lines) {
                if c.profile.is_empty() {
                    return Err(parse_err(
                        *line,
                        format!("case {} has an empty profile", c.parity),
                    ));
                }
            }
        }
        Ok(file)
    }

    fn current(&mut self, line: usize) -> Result<&mut EquationSpec, PipeError> {
        self.equations
            .last_mut()
            .ok_or_else(|| parse_err(line, "expected 'equation' first"))
    }

    /// Add equations from another file; later definitions replace earlier ones.
    pub fn merge(&mut self, other: ScenarioFile) {
        for eq in other.equations {
            self.equations.retain(|e| e.coefficients != eq.coefficients);
            self.equations.push(eq);
        }
    }

    pub fn equations(&self) -> &[EquationSpec] {
        &self.equations
    }

    pub fn equation(&self, coefficients: &[Int; 3]) -> Result<&EquationSpec, PipeError> {
        self.equations
            .iter()
            .find(|e| &e.coefficients == coefficients)
            .ok_or_else(|| PipeError::UnknownEquation(triple_string(coefficients)))
    }

    /// The Frey scenarios of an equation with candidates resolved in `db`.
    pub fn scenarios(
        &self,
        coefficients: &[Int; 3],
        db: &CurveDatabase,
    ) -> Result<Vec<FreyScenario>, PipeError> {
        let eq = self.equation(coefficients)?;
        eq.cases
            .iter()
            .map(|case| {
                let candidates = match &case.candidates {
                    Some(labels) => {
                        for l in labels {
                            db.get(l)?;
                        }
                        labels.clone()
                    }
                    None => db
                        .candidates_for_level(case.level)?
                        .into_iter()
                        .map(|r| r.label.clone())
                        .collect(),
                };
                Ok(FreyScenario {
                    coefficients: eq.coefficients.clone(),
                    parity: case.parity.clone(),
                    profile: case.profile.clone(),
                    level: case.level,
                    candidates,
                    exponent_floor: eq.floor,
                })
            })
            .collect()
    }
}

pub fn parse_triple(text: &str, line: usize) -> Result<[Int; 3], PipeError> {
    let parts: Vec<Int> = text
        .split(',')
        .map(|s| s.trim().parse::<Int>())
        .collect::<Result<_, _>>()
        .map_err(|_| parse_err(line, format!("bad coefficient triple {text:?}")))?;
    let triple: [Int; 3] = parts
        .try_into()
        .map_err(|_| parse_err(line, "expected three coefficients a,b,c"))?;
    if triple.iter().any(Zero::is_zero) {
        return Err(parse_err(line, "coefficients must be nonzero"));
    }
    Ok(triple)
}

fn parse_floor(text: &str, line: usize) -> Result<ExponentFloor, PipeError> {
    let (strict, num) = if let Some(n) = text.strip_prefix(">=") {
        (false, n)
    } else if let Some(n) = text.strip_prefix('>') {
        (true, n)
    } else {
        return Err(parse_err(
            line,
            format!("floor must be >N or >=N, got {text:?}"),
        ));
    };
    let bound = num
        .trim()
        .parse()
        .map_err(|_| parse_err(line, format!("bad floor {text:?}")))?;
    Ok(ExponentFloor { strict, bound })
}

fn parse_case(text: &str, line: usize) -> Result<CaseSpec, PipeError> {
    let words: Vec<&str> = text.split_whitespace().collect();
    let (parity, level, candidates) = match words.as_slice() {
        [name, "level", n] => (*name, *n, None),
        [name, "level", n, "candidates", list] => (*name, *n, Some(*list)),
        _ => {
            return Err(parse_err(
                line,
                "expected 'case NAME level N' optionally followed by 'candidates L1,L2'",
            ))
        }
    };
    if !parity
        .chars()
        .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
    {
        return Err(parse_err(line, format!("bad case name {parity:?}")));
    }
    let level = level
        .parse::<u64>()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| parse_err(line, format!("bad level {level:?}")))?;
    let candidates = candidates.map(|list| list.split(',').map(str::to_string).collect());
    Ok(CaseSpec {
        parity: parity.to_string(),
        level,
        candidates,
        profile: BTreeMap::new(),
    })
}

fn parse_entry(text: &str, line: usize) -> Result<(u64, Valuation), PipeError> {
    let (ell, exact, v) = if let Some((l, v)) = text.split_once('=') {
        (l, true, v)
    } else if let Some((l, v)) = text.split_once('~') {
        (l, false, v)
    } else {
        return Err(parse_err(
            line,
            format!("expected 'ℓ = v' or 'ℓ ~ v', got {text:?}"),
        ));
    };
    let ell: u64 = ell
        .trim()
        .parse()
        .ok()
        .filter(|&l| crate::nt::is_prime(l))
        .ok_or_else(|| parse_err(line, format!("{:?} is not a prime", ell.trim())))?;
    let v: Int = v
        .trim()
        .parse()
        .map_err(|_| parse_err(line, format!("bad valuation {:?}", v.trim())))?;
    if exact && v < Int::zero() {
        return Err(parse_err(line, "an exact valuation cannot be negative"));
    }
    Ok((
        ell,
        if exact {
            Valuation::Exact(v)
        } else {
            Valuation::ModP(v)
        },
    ))
}

/// The outcome at one shared prime within one branch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeVerdict {
    pub prime: u64,
    pub verdict: String,
    /// The verdict after substituting the branch value of `(2/p)`.
    pub reduced: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchReport {
    pub legendre_2: Sign,
    #[serde(rename = "type")]
    pub symplectic_type: SymplecticType,
    pub verdicts: Vec<PrimeVerdict>,
    /// Constraints that survive the branch; empty if the branch is contradictory.
    pub surviving: Vec<String>,
    pub contradiction: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Sl2f3AtTwo,
    Pairwise,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseReport {
    pub label: String,
    pub route: Route,
    pub branches: Vec<BranchReport>,
    pub pairwise: Vec<QrConstraint>,
    /// The condition on p under which the candidate is eliminated.
    pub condition: SignExpr,
}

impl CaseReport {
    pub fn branch(&self, legendre_2: Sign) -> Option<&BranchReport> {
        self.branches.iter().find(|b| b.legendre_2 == legendre_2)
    }
}

impl Serialize for CaseReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CaseReport", 5)?;
        st.serialize_field("label", &self.label)?;
        st.serialize_field("route", &self.route)?;
        st.serialize_field("branches", &self.branches)?;
        let pairwise: Vec<String> = self.pairwise.iter().map(ToString::to_string).collect();
        st.serialize_field("pairwise", &pairwise)?;
        st.serialize_field("condition", &self.condition.to_string())?;
        st.end()
    }
}

/// Substitute `(2/p) = eps` into a constraint.
fn reduce_under(c: &QrConstraint, eps: Sign) -> Verdict {
    let n = c.n();
    let even = (n % Int::from(2)).is_zero();
    let reduced = if even {
        QrConstraint::new(&(n / Int::from(2)), c.sign() * eps).expect("nonzero kernel")
    } else {
        c.clone()
    };
    if !reduced.is_trivial() {
        Verdict::Constraint(reduced)
    } else if reduced.sign() == Sign::Plus {
        Verdict::AlwaysConsistent
    } else {
        Verdict::Contradiction
    }
}

fn is_mult(record: &CurveRecord, ell: u64) -> bool {
    record.reduction(ell).kind == ReductionKind::Multiplicative
}

/// The condition on p under which `candidate` cannot be the curve the Frey
/// curve of `scenario` lowers to.
pub fn run_case(scenario: &FreyScenario, candidate: &CurveRecord) -> Result<CaseReport, PipeError> {
    let err = |source| PipeError::Criterion {
        case: scenario.parity.clone(),
        label: candidate.label.clone(),
        source,
    };
    let incompatible = |message: String| PipeError::Incompatible {
        case: scenario.parity.clone(),
        label: candidate.label.clone(),
        message,
    };
    if let Some(l) = candidate
        .bad_primes()
        .find(|l| !scenario.profile.contains_key(l))
    {
        return Err(incompatible(format!(
            "bad prime {l} of the candidate is not in the profile"
        )));
    }
    let frey_mult = |l: &u64| matches!(scenario.profile.get(l), Some(Valuation::ModP(_)));
    let shared: Vec<u64> = candidate.bad_primes().collect();

    if candidate.inertia_sl2f3_at_2 && scenario.profile.contains_key(&2) {
        let frey_two = AtTwo {
            v2: scenario.profile[&2].clone(),
            sl2f3: true,
        };
        let cand_two = AtTwo {
            v2: Valuation::Exact(Int::from(candidate.valuation(2))),
            sl2f3: candidate.inertia_sl2f3_at_2,
        };
        let mut branches = Vec::new();
        let mut disjuncts = Vec::new();
        for eps in [Sign::Minus, Sign::Plus] {
            let ty = criterion_at_two(&frey_two, &cand_two, eps).map_err(err)?;
            let mut verdicts = Vec::new();
            let mut surviving: Vec<QrConstraint> = Vec::new();
            let mut contradiction = false;
            for &l in shared
                .iter()
                .filter(|&&l| l != 2 && frey_mult(&l) && is_mult(candidate, l))
            {
                let v = scenario.profile[&l].residue();
                let w = Int::from(candidate.valuation(l));
                let Some(verdict) = criterion_multiplicative(v, &w, ty).map_err(err)? else {
                    continue;
                };
                let reduced = match &verdict {
                    Verdict::Constraint(c) => reduce_under(c, eps),
                    other => other.clone(),
                };
                match &reduced {
                    Verdict::Contradiction => contradiction = true,
                    Verdict::Constraint(c) if !surviving.contains(c) => surviving.push(c.clone()),
                    _ => {}
                }
                verdicts.push(PrimeVerdict {
                    prime: l,
                    verdict: verdict.to_string(),
                    reduced: reduced.to_string(),
                });
            }
            let two = SignExpr::Atom(QrConstraint::from_i64(2, eps).expect("nonzero"));
            if contradiction {
                surviving.clear();
                disjuncts.push(two);
            } else if !surviving.is_empty() {
                let violations = surviving
                    .iter()
                    .map(|c| SignExpr::Atom(c.negated()))
                    .collect();
                disjuncts.push(SignExpr::And(vec![two, SignExpr::or_all(violations)]));
            }
            branches.push(BranchReport {
                legendre_2: eps,
                symplectic_type: ty,
                verdicts,
                surviving: surviving.iter().map(ToString::to_string).collect(),
                contradiction,
            });
        }
        return Ok(CaseReport {
            label: candidate.label.clone(),
            route: Route::Sl2f3AtTwo,
            branches,
            pairwise: Vec::new(),
            condition: SignExpr::or_all(disjuncts),
        });
    }

    if let Some(l) = shared
        .iter()
        .find(|l| !frey_mult(l) || !is_mult(candidate, **l))
    {
        if *l == 2 && matches!(scenario.profile.get(l), Some(Valuation::Exact(_))) {
            return Err(err(SymplecticError::MissingSl2f3));
        }
        return Err(incompatible(format!(
            "no criterion applies at the non-multiplicative prime {l}"
        )));
    }
    let profile: Vec<(u64, Int)> = shared
        .iter()
        .map(|l| (*l, scenario.profile[l].residue().clone()))
        .collect();
    let cand: Vec<(u64, Int)> = shared
        .iter()
        .map(|l| (*l, Int::from(candidate.valuation(*l))))
        .collect();
    let pairwise = pairwise_consistency(&profile, &cand).map_err(err)?;
    let condition = match qrsolver::simplify(&pairwise)? {
        Simplified::Contradiction => SignExpr::True,
        Simplified::Consistent(cs) => {
            SignExpr::or_all(cs.iter().map(|c| SignExpr::Atom(c.negated())).collect())
        }
    };
    Ok(CaseReport {
        label: candidate.label.clone(),
        route: Route::Pairwise,
        branches: Vec::new(),
        pairwise,
        condition,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScenarioReport {
    pub parity: String,
    pub level: u64,
    pub profile: BTreeMap<String, String>,
    pub candidates: Vec<CaseReport>,
    /// Conjunction of the candidates' conditions.
    pub condition: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationReport {
    pub coefficients: [Int; 3],
    pub exponent_floor: ExponentFloor,
    pub cases: Vec<ScenarioReport>,
    pub condition: SignExpr,
    pub classes: CongruenceClassSet,
}

impl EquationReport {
    pub fn case(&self, parity: &str) -> Option<&ScenarioReport> {
        self.cases.iter().find(|c| c.parity == parity)
    }

    pub fn summary(&self) -> String {
        format!(
            "{}; density {}; valid for {}",
            self.classes,
            self.classes.density(),
            self.exponent_floor
        )
    }
}

impl Serialize for EquationReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("EquationReport", 7)?;
        let eq: Vec<String> = self.coefficients.iter().map(ToString::to_string).collect();
        st.serialize_field("equation", &eq)?;
        st.serialize_field("exponent_floor", &self.exponent_floor.to_string())?;
        st.serialize_field("cases", &self.cases)?;
        st.serialize_field("condition", &self.condition.to_string())?;
        st.serialize_field("classes", &self.classes)?;
        st.serialize_field("classes_text", &self.classes.to_string())?;
        st.serialize_field("density", &self.classes.density().to_string())?;
        st.end()
    }
}

fn profile_strings(profile: &ValuationProfile) -> BTreeMap<String, String> {
    profile
        .iter()
        .map(|(l, v)| (l.to_string(), v.to_string()))
        .collect()
}

/// Exponents p for which every scenario eliminates every candidate.
pub fn run_scenarios(
    scenarios: &[FreyScenario],
    db: &CurveDatabase,
) -> Result<(Vec<ScenarioReport>, SignExpr), PipeError> {
    let mut reports = Vec::new();
    let mut all = Vec::new();
    for sc in scenarios {
        let mut cases = Vec::new();
        for label in &sc.candidates {
            cases.push(run_case(sc, db.get(label)?)?);
        }
        let cond = SignExpr::and_all(cases.iter().map(|c| c.condition.clone()).collect());
        reports.push(ScenarioReport {
            parity: sc.parity.clone(),
            level: sc.level,
            profile: profile_strings(&sc.profile),
            candidates: cases,
            condition: cond.to_string(),
        });
        all.push(cond);
    }
    Ok((reports, SignExpr::and_all(all)))
}

pub fn run_equation(
    file: &ScenarioFile,
    db: &CurveDatabase,
    coefficients: &[Int; 3],
) -> Result<EquationReport, PipeError> {
    let scenarios = file.scenarios(coefficients, db)?;
    let floor = file.equation(coefficients)?.floor;
    let (cases, condition) = run_scenarios(&scenarios, db)?;
    let classes = qrsolver::to_classes(&condition)?;
    Ok(EquationReport {
        coefficients: coefficients.clone(),
        exponent_floor: floor,
        cases,
        condition,
        classes,
    })
}

pub fn triple(a: i64, b: i64, c: i64) -> [Int; 3] {
    [Int::from(a), Int::from(b), Int::from(c)]
}
