//! The property registry behind `tropid verify`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;
use std::time::Instant;

use rayon::prelude::*;

use super::gen::{GenConfig, Sampler};
use super::report::{FailureRecord, NamedMatrix, PropertyReport, Verdict, MAX_RECORDED_FAILURES};
use crate::dominance::{
    cycle_criterion, dominantize, potentials_for_nonneg, CycleCheck, CycleWitness,
    DominanceParams, Dominantized, PotentialsOutcome,
};
use crate::error::{Result, TropError};
use crate::factor3::{factor_rank2, lifted_identity_check, FactorFailure};
use crate::permanent::{compose, permanent_with_witnesses, sign_singular};
use crate::tropcore::{Potentials, TropMatrix, TropScalar};
use crate::words::{
    build_identity3, dominance_threshold, dominant_pair_identity, gamma, pinched_min, u_word,
    v_word, Evaluator, IdentityInstance, Letter,
};

/// Letters on each side of the 3x3 identity.
pub const IDENTITY3_SIDE_LENGTH: u64 = 1_795_308;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    PermMult,
    PermFactors,
    PowerId,
    DiagCommute,
    FactorRoundtrip,
    Lift2x2,
    Potentials,
    Dominantize,
    Dichotomy,
    CycMin,
    Pinch,
    DomIdentity,
    Identity2x2,
    Identity3x3,
    WordCount,
}

impl Suite {
    pub const ALL: [Suite; 15] = [
        Suite::PermMult,
        Suite::PermFactors,
        Suite::PowerId,
        Suite::DiagCommute,
        Suite::FactorRoundtrip,
        Suite::Lift2x2,
        Suite::Potentials,
        Suite::Dominantize,
        Suite::Dichotomy,
        Suite::CycMin,
        Suite::Pinch,
        Suite::DomIdentity,
        Suite::Identity2x2,
        Suite::Identity3x3,
        Suite::WordCount,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Suite::PermMult => "perm-mult",
            Suite::PermFactors => "perm-factors",
            Suite::PowerId => "power-id",
            Suite::DiagCommute => "diag-commute",
            Suite::FactorRoundtrip => "factor-roundtrip",
            Suite::Lift2x2 => "lift-2x2",
            Suite::Potentials => "potentials",
            Suite::Dominantize => "dominantize",
            Suite::Dichotomy => "dichotomy",
            Suite::CycMin => "cyc-min",
            Suite::Pinch => "pinch",
            Suite::DomIdentity => "dom-identity",
            Suite::Identity2x2 => "identity-2x2",
            Suite::Identity3x3 => "identity-3x3",
            Suite::WordCount => "word-count",
        }
    }

    /// Properties that only constrain instances meeting a hypothesis.
    pub fn is_conditional(self) -> bool {
        matches!(
            self,
            Suite::PermMult | Suite::PermFactors | Suite::DiagCommute | Suite::Dichotomy
        )
    }

    /// Matrix order forced by the property, if any.
    fn fixed_order(self) -> Option<usize> {
        match self {
            Suite::FactorRoundtrip | Suite::Lift2x2 | Suite::Identity3x3 | Suite::WordCount => {
                Some(3)
            }
            Suite::Identity2x2 => Some(2),
            _ => None,
        }
    }

    /// Default instance stream for the suite (seed excluded from tuning).
    pub fn default_config(self) -> GenConfig {
        let base = GenConfig::default();
        let (n, range, denom, trials) = match self {
            Suite::PermMult => (3, 10, 1, 10_000),
            Suite::PermFactors => (3, 10, 1, 10_000),
            Suite::PowerId | Suite::DiagCommute => (3, 10, 1, 1_000),
            Suite::FactorRoundtrip | Suite::Lift2x2 => (3, 10, 3, 1_000),
            Suite::Potentials => (4, 10, 1, 1_000),
            Suite::Dominantize => (3, 10, 2, 1_000),
            Suite::Dichotomy => (3, 20, 1, 1_000),
            Suite::CycMin => (3, 10, 1, 1_000),
            Suite::Pinch | Suite::DomIdentity => (3, 10, 1, 1_000),
            Suite::Identity2x2 => (2, 100, 4, 10_000),
            Suite::Identity3x3 => (3, 100, 1, 10_000),
            Suite::WordCount => (3, 0, 1, 1),
        };
        GenConfig {
            n,
            range,
            denom,
            trials,
            ..base
        }
    }

    /// Default dominance level, for suites that take one.
    pub fn default_h(self, n: usize) -> Option<TropScalar> {
        match self {
            Suite::Dominantize | Suite::Dichotomy => Some(2.into()),
            Suite::CycMin => Some(10.into()),
            Suite::Pinch | Suite::DomIdentity => {
                Some(TropScalar::from_int(dominance_threshold(n as u32) as i64))
            }
            _ => None,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Suite {
    type Err = TropError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.id() == s)
            .ok_or_else(|| {
                let known: Vec<&str> = Suite::ALL.iter().map(|s| s.id()).collect();
                TropError::Parameter(format!("unknown suite {s:?}; known: {}", known.join(", ")))
            })
    }
}

/// Resolved parameters of a suite run; everything a single trial needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteContext {
    pub suite: Suite,
    pub n: usize,
    pub h: Option<DominanceParams>,
}

impl SuiteContext {
    pub fn new(suite: Suite, n: usize, h: Option<TropScalar>) -> Result<Self> {
        let n = suite.fixed_order().unwrap_or(n);
        let enum_limit = match suite {
            // word constructions grow as n 2^n
            Suite::Pinch | Suite::DomIdentity => 4,
            _ => crate::permanent::MAX_ENUM_ORDER,
        };
        if n == 0 || n > enum_limit {
            return Err(TropError::Parameter(format!(
                "{suite} needs 1 <= n <= {enum_limit}, got {n}"
            )));
        }
        let h = match (suite.default_h(n), h) {
            (None, _) => None,
            (Some(_), Some(v)) => Some(DominanceParams::new(v)?),
            (Some(d), None) => Some(DominanceParams::new(d)?),
        };
        if suite == Suite::Dichotomy {
            let hv = h.as_ref().expect("dichotomy has a level").value();
            if !hv.is_integer() {
                return Err(TropError::Parameter("dichotomy needs an integer h".into()));
            }
        }
        Ok(SuiteContext { suite, n, h })
    }

    fn h(&self) -> &DominanceParams {
        self.h.as_ref().expect("suite takes a dominance level")
    }

    fn h_int(&self) -> u64 {
        u64::try_from(self.h().value().floor()).expect("dominance level fits in u64")
    }

    /// Names of the matrices that make up one instance, in order.
    pub fn instance_names(&self) -> &'static [&'static str] {
        match self.suite {
            Suite::PowerId | Suite::CycMin => &["A"],
            Suite::Potentials => &["M"],
            Suite::FactorRoundtrip | Suite::Lift2x2 => &["P1", "Q1", "P2", "Q2"],
            Suite::Dominantize => &["C_scrambled", "C_random"],
            Suite::WordCount => &[],
            _ => &["A", "B"],
        }
    }

    fn expected_shapes(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        match self.suite {
            Suite::FactorRoundtrip | Suite::Lift2x2 => vec![(3, 2), (2, 3), (3, 2), (2, 3)],
            _ => vec![(n, n); self.instance_names().len()],
        }
    }

    /// Draws the instance for `trial`.
    pub fn generate(&self, cfg: &GenConfig, trial: u64) -> Vec<TropMatrix> {
        let cfg = GenConfig {
            n: self.n,
            ..cfg.clone()
        };
        let mut s = Sampler::new(&cfg, trial);
        match self.suite {
            Suite::PowerId => vec![s.square()],
            Suite::CycMin => vec![s.dominant_pair(self.h()).0],
            Suite::Potentials => {
                let shift = s.nonneg_scalar();
                let m = TropMatrix::from_fn(self.n, self.n, |i, j| {
                    if i == j {
                        TropScalar::ZERO
                    } else {
                        &s.scalar() + &shift
                    }
                })
                .expect("positive order");
                vec![m]
            }
            Suite::FactorRoundtrip | Suite::Lift2x2 => {
                vec![s.matrix(3, 2), s.matrix(2, 3), s.matrix(3, 2), s.matrix(2, 3)]
            }
            Suite::Dominantize => {
                let (a, _) = s.dominant_pair(self.h());
                let scramble = s.potentials(10);
                let scrambled = a.similarity(&scramble).expect("matching order");
                vec![scrambled, s.square()]
            }
            Suite::Dichotomy => {
                let (a, b) = s.sigma_id_pair();
                vec![a, b]
            }
            Suite::Pinch | Suite::DomIdentity => {
                let (a, b) = s.dominant_pair(self.h());
                vec![a, b]
            }
            Suite::DiagCommute => {
                // half plain, half with nearly flat diagonals; plain pairs rarely meet the hypothesis
                if s.index(2) == 0 {
                    vec![s.square(), s.square()]
                } else {
                    vec![s.flat_diagonal_square(), s.flat_diagonal_square()]
                }
            }
            Suite::WordCount => vec![],
            _ => vec![s.square(), s.square()],
        }
    }

    /// Checks one instance. This is also the entry point for replaying a
    /// recorded counterexample.
    pub fn check(&self, inst: &[TropMatrix]) -> Result<TrialOutcome> {
        let shapes = self.expected_shapes();
        if inst.len() != shapes.len() || inst.iter().zip(&shapes).any(|(m, s)| m.shape() != *s) {
            let got: Vec<String> = inst.iter().map(|m| format!("{}x{}", m.rows(), m.cols())).collect();
            return Err(TropError::Parameter(format!(
                "{} expects matrices {:?} with shapes {:?}, got [{}]",
                self.suite,
                self.instance_names(),
                shapes,
                got.join(", ")
            )));
        }
        match self.suite {
            Suite::PermMult => check_perm_mult(&inst[0], &inst[1]),
            Suite::PermFactors => check_perm_factors(&inst[0], &inst[1]),
            Suite::PowerId => check_power_id(&inst[0]),
            Suite::DiagCommute => check_diag_commute(&inst[0], &inst[1]),
            Suite::FactorRoundtrip => check_factor_roundtrip(inst),
            Suite::Lift2x2 => check_lift(inst),
            Suite::Potentials => check_potentials(&inst[0]),
            Suite::Dominantize => check_dominantize(&inst[0], &inst[1], self.h()),
            Suite::Dichotomy => check_dichotomy(&inst[0], &inst[1], self.h(), self.h_int()),
            Suite::CycMin => check_cyc_min(&inst[0], self.h_int()),
            Suite::Pinch => check_pinch(&inst[0], &inst[1], self.n),
            Suite::DomIdentity => check_identity(
                &dominant_pair_identity(self.n as u32)?,
                &inst[0],
                &inst[1],
            ),
            Suite::Identity2x2 => check_identity(identity2(), &inst[0], &inst[1]),
            Suite::Identity3x3 => check_identity(identity3(), &inst[0], &inst[1]),
            Suite::WordCount => Ok(check_word_count().0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TrialOutcome {
    Pass,
    /// A pass, with labels counted in the report details.
    Tagged(Vec<&'static str>),
    /// The property's hypothesis did not hold for this instance.
    Vacuous,
    Fail { expected: String, actual: String },
}

fn fail(expected: impl Into<String>, actual: impl Into<String>) -> Result<TrialOutcome> {
    Ok(TrialOutcome::Fail {
        expected: expected.into(),
        actual: actual.into(),
    })
}

fn identity2() -> &'static IdentityInstance {
    static CELL: OnceLock<IdentityInstance> = OnceLock::new();
    CELL.get_or_init(|| IdentityInstance::new(u_word(), v_word()).expect("equal lengths"))
}

fn identity3() -> &'static IdentityInstance {
    static CELL: OnceLock<IdentityInstance> = OnceLock::new();
    CELL.get_or_init(build_identity3)
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn check_perm_mult(a: &TropMatrix, b: &TropMatrix) -> Result<TrialOutcome> {
    let ab = permanent_with_witnesses(&a.mul(b)?)?;
    if ab.sign_singular {
        return Ok(TrialOutcome::Vacuous);
    }
    let (pa, pb) = (permanent_with_witnesses(a)?, permanent_with_witnesses(b)?);
    let sum = &pa.value + &pb.value;
    if ab.value != sum {
        return fail(format!("perm(AB) = {sum}"), format!("perm(AB) = {}", ab.value));
    }
    for sigma in &pa.witnesses {
        for tau in &pb.witnesses {
            let psi = compose(tau, sigma)?;
            if !ab.contains(&psi) {
                return fail(
                    format!("tau sigma = {psi} in Sigma(AB) for sigma = {sigma}, tau = {tau}"),
                    format!("Sigma(AB) = {:?}", ab.witnesses),
                );
            }
        }
    }
    Ok(TrialOutcome::Pass)
}

fn check_perm_factors(a: &TropMatrix, b: &TropMatrix) -> Result<TrialOutcome> {
    if sign_singular(&a.mul(b)?)? {
        return Ok(TrialOutcome::Vacuous);
    }
    let (sa, sb) = (sign_singular(a)?, sign_singular(b)?);
    if sa || sb {
        fail(
            "A and B sign-nonsingular",
            format!("A singular: {sa}, B singular: {sb}"),
        )
    } else {
        Ok(TrialOutcome::Pass)
    }
}

fn check_power_id(a: &TropMatrix) -> Result<TrialOutcome> {
    let n = a.rows();
    let rep = permanent_with_witnesses(&a.pow(factorial(n))?)?;
    if rep.sign_singular || rep.contains_identity() {
        Ok(TrialOutcome::Pass)
    } else {
        fail(
            format!("A^{} sign-singular or id in Sigma", factorial(n)),
            format!("sign-nonsingular with Sigma = {:?}", rep.witnesses),
        )
    }
}

fn check_diag_commute(a: &TropMatrix, b: &TropMatrix) -> Result<TrialOutcome> {
    let k = factorial(a.rows());
    let (an, bn) = (a.pow(k)?, b.pow(k)?);
    let (ab, ba) = (an.mul(&bn)?, bn.mul(&an)?);
    if sign_singular(&ab)? || sign_singular(&ba)? {
        return Ok(TrialOutcome::Vacuous);
    }
    for i in 0..a.rows() {
        let want = an.get(i, i) + bn.get(i, i);
        if *ab.get(i, i) != want || *ba.get(i, i) != want {
            return fail(
                format!("[A^k B^k]_{0}{0} = [B^k A^k]_{0}{0} = {want}", i + 1),
                format!("{} and {}", ab.get(i, i), ba.get(i, i)),
            );
        }
    }
    Ok(TrialOutcome::Pass)
}

fn check_factor_roundtrip(inst: &[TropMatrix]) -> Result<TrialOutcome> {
    for (k, pq) in inst.chunks(2).enumerate() {
        let a = pq[0].mul(&pq[1])?;
        if !sign_singular(&a)? {
            return fail(format!("P{0}Q{0} sign-singular", k + 1), "sign-nonsingular");
        }
        match factor_rank2(&a)? {
            Ok(f) => {
                if f.p.shape() != (3, 2) || f.q.shape() != (2, 3) || f.p.mul(&f.q)? != a {
                    return fail(format!("PQ = {a:?}"), format!("P = {:?}, Q = {:?}", f.p, f.q));
                }
            }
            Err(why) => return fail("exact factorization", why.to_string()),
        }
    }
    Ok(TrialOutcome::Pass)
}

fn check_lift(inst: &[TropMatrix]) -> Result<TrialOutcome> {
    let a = inst[0].mul(&inst[1])?;
    let b = inst[2].mul(&inst[3])?;
    match lifted_identity_check(&a, &b)? {
        Ok(c) if c.holds => Ok(TrialOutcome::Pass),
        Ok(c) => fail(format!("U(AA,AB)A = {:?}", c.lhs), format!("V(AA,AB)A = {:?}", c.rhs)),
        Err(FactorFailure::NotSingular) => fail("factorizable pair", "not_singular"),
        Err(FactorFailure::NoPairFound) => fail("factorizable pair", "no_pair_found"),
    }
}

fn check_potentials(m: &TropMatrix) -> Result<TrialOutcome> {
    let n = m.rows();
    let perm_nonneg = !permanent_with_witnesses(m)?.value.is_negative();
    let tag = match potentials_for_nonneg(m)? {
        PotentialsOutcome::Found { potentials } => {
            let r = potentials.as_slice();
            if r.len() != n {
                return fail(format!("{n} potentials"), r.len().to_string());
            }
            for i in 0..n {
                for j in 0..n {
                    let v = &(m.get(i, j) + &r[i]) - &r[j];
                    if v.is_negative() {
                        return fail(
                            "M[i][j] + r_i - r_j >= 0",
                            format!("entry ({},{}) = {v} with r = {r:?}", i + 1, j + 1),
                        );
                    }
                }
            }
            if !perm_nonneg {
                return fail("no potentials when some permutation sum is negative", "potentials found");
            }
            "potentials_found"
        }
        PotentialsOutcome::NoSolution { cycle } => {
            let v = &cycle.vertices;
            let mut sorted = v.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if v.is_empty() || sorted.len() != v.len() || v.iter().any(|&k| k >= n) {
                return fail("simple cycle", format!("{v:?}"));
            }
            let mut weight = TropScalar::ZERO;
            for (l, &k) in v.iter().enumerate() {
                weight = &weight + m.get(k, v[(l + 1) % v.len()]);
            }
            if !weight.is_negative() || weight != cycle.weight {
                return fail(
                    format!("negative cycle of weight {}", cycle.weight),
                    format!("recomputed weight {weight}"),
                );
            }
            if perm_nonneg {
                return fail("potentials exist when all permutation sums are >= 0", "no_solution");
            }
            "negative_cycle"
        }
    };
    Ok(TrialOutcome::Tagged(vec![tag]))
}

/// Direct check of `C' = similarity(C, r)` and its H-dominance.
fn verify_normalized(
    c: &TropMatrix,
    r: &Potentials,
    out: &TropMatrix,
    h: &DominanceParams,
) -> Option<(String, String)> {
    let n = c.rows();
    let r = r.as_slice();
    for i in 0..n {
        for j in 0..n {
            let want = &(c.get(i, j) + &r[i]) - &r[j];
            if *out.get(i, j) != want {
                return Some((format!("C'[{}][{}] = {want}", i + 1, j + 1), out.get(i, j).to_string()));
            }
            let (di, dj) = (out.get(i, i), out.get(j, j));
            let bound = &di.max(dj) + &(h.value() * &(di - dj).abs());
            if i != j && *out.get(i, j) < bound {
                return Some((
                    format!("C'[{}][{}] >= {bound}", i + 1, j + 1),
                    out.get(i, j).to_string(),
                ));
            }
        }
    }
    None
}

fn verify_witness(c: &TropMatrix, w: &CycleWitness, h: &DominanceParams) -> Option<(String, String)> {
    let n = c.rows();
    let k = &w.cycle;
    let mut sorted = k.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if k.is_empty() || sorted.len() != k.len() || k.iter().any(|&v| v >= n) {
        return Some(("a cycle on a subset".into(), format!("{k:?}")));
    }
    let t = k.len();
    let mut sum = TropScalar::ZERO;
    let mut bound = TropScalar::ZERO;
    for l in 0..t {
        let (a, b) = (k[l], k[(l + 1) % t]);
        sum = &sum + c.get(a, b);
        let (da, db) = (c.get(a, a), c.get(b, b));
        bound = &bound + &(&TropScalar::max(da, db) + &(h.value() * &(da - db).abs()));
    }
    if sum >= bound || sum != w.cycle_sum || bound != w.bound {
        return Some((format!("violation {sum} < {bound}"), w.to_string()));
    }
    // the cycle criterion is sufficient for normalization, so it must fail too
    if cycle_criterion(c, h).ok() == Some(CycleCheck::Pass) {
        return Some(("cycle criterion violated".into(), "criterion passes".into()));
    }
    None
}

fn check_dominantize(scrambled: &TropMatrix, random: &TropMatrix, h: &DominanceParams) -> Result<TrialOutcome> {
    let mut tags = vec!["scrambled_normalized"];
    if cycle_criterion(scrambled, h)? != CycleCheck::Pass {
        tags.push("scrambled_outside_cycle_criterion");
    }
    match dominantize(scrambled, h)? {
        Dominantized::Normalized { potentials, matrix } => {
            if let Some((e, a)) = verify_normalized(scrambled, &potentials, &matrix, h) {
                return fail(e, a);
            }
        }
        Dominantized::Violated { witness } => {
            return fail("scrambled dominant matrix normalizes", witness.to_string());
        }
    }
    let problem = match dominantize(random, h)? {
        Dominantized::Normalized { potentials, matrix } => {
            tags.push("random_normalized");
            verify_normalized(random, &potentials, &matrix, h)
        }
        Dominantized::Violated { witness } => {
            tags.push("random_refuted");
            verify_witness(random, &witness, h)
        }
    };
    match problem {
        Some((e, a)) => fail(e, a),
        None => Ok(TrialOutcome::Tagged(tags)),
    }
}

fn check_dichotomy(a: &TropMatrix, b: &TropMatrix, h: &DominanceParams, h_int: u64) -> Result<TrialOutcome> {
    let c = a.hadamard_min(b)?;
    let CycleCheck::Violated(witness) = cycle_criterion(&c, h)? else {
        return Ok(TrialOutcome::Vacuous);
    };
    let g = gamma(a.rows() as u32)?;
    let word = g.eval(&a.pow(h_int + 1)?, &b.pow(h_int + 1)?)?;
    let rep = permanent_with_witnesses(&word)?;
    if rep.sign_singular {
        Ok(TrialOutcome::Pass)
    } else {
        fail(
            format!("Gamma(A^{0}, B^{0}) sign-singular given {witness}", h_int + 1),
            format!("sign-nonsingular with Sigma = {:?}", rep.witnesses),
        )
    }
}

/// Powers checked step by step; beyond this only the top power is checked.
const CYC_MIN_STEPS: u64 = 200;

fn check_cyc_min(a: &TropMatrix, h_floor: u64) -> Result<TrialOutcome> {
    // exponents k = h + 1 with h + 1 <= H
    if h_floor == 0 {
        return Ok(TrialOutcome::Vacuous);
    }
    let n = a.rows();
    let check = |p: &TropMatrix, k: u64| {
        (0..n).find_map(|i| {
            let want = a.get(i, i).times(k);
            (*p.get(i, i) != want).then(|| {
                (
                    format!("[A^{k}]_{0}{0} = {want}", i + 1),
                    p.get(i, i).to_string(),
                )
            })
        })
    };
    let mut p = a.clone();
    for k in 1..=h_floor.min(CYC_MIN_STEPS) {
        if k > 1 {
            p = p.mul(a)?;
        }
        if let Some((e, got)) = check(&p, k) {
            return fail(e, got);
        }
    }
    if h_floor > CYC_MIN_STEPS {
        if let Some((e, got)) = check(&a.pow(h_floor)?, h_floor) {
            return fail(e, got);
        }
    }
    Ok(TrialOutcome::Pass)
}

fn check_pinch(a: &TropMatrix, b: &TropMatrix, n: usize) -> Result<TrialOutcome> {
    let g = gamma(n as u32)?.pow(n as u64)?;
    let side: Vec<TropMatrix> = g
        .expand_stream()
        .map(|l| match l {
            Letter::X => a.clone(),
            Letter::Y => b.clone(),
        })
        .collect();
    let words = dominant_pair_identity(n as u32)?;
    let mut ev = Evaluator::new(a, b)?;
    for (pivot, word, name) in [(a, &words.lhs, "A"), (b, &words.rhs, "B")] {
        let full = ev.eval(word)?;
        for i in 0..n {
            for j in 0..n {
                let pinched = pinched_min(&side, pivot, &side, i, j)?;
                if pinched != *full.get(i, j) {
                    return fail(
                        format!("pivot {name}: unconstrained minimum {} at ({},{})", full.get(i, j), i + 1, j + 1),
                        format!("pinched minimum {pinched}"),
                    );
                }
            }
        }
    }
    Ok(TrialOutcome::Pass)
}

fn check_identity(id: &IdentityInstance, a: &TropMatrix, b: &TropMatrix) -> Result<TrialOutcome> {
    let (l, r) = id.eval(a, b)?;
    if l == r {
        Ok(TrialOutcome::Pass)
    } else {
        fail(format!("lhs = {l:?}"), format!("rhs = {r:?}"))
    }
}

/// Streams both sides of the 3x3 identity: counts letters and finds the first difference.
fn check_word_count() -> (TrialOutcome, Vec<(String, String)>) {
    let id = identity3();
    let lhs_count = id.lhs.expand_stream().count() as u64;
    let rhs_count = id.rhs.expand_stream().count() as u64;
    let diff = id.first_difference();
    let details = vec![
        ("lhs_length".to_string(), lhs_count.to_string()),
        ("rhs_length".to_string(), rhs_count.to_string()),
        (
            "first_difference".to_string(),
            diff.map_or_else(|| "none".to_string(), |p| (p + 1).to_string()),
        ),
    ];
    let want = IDENTITY3_SIDE_LENGTH;
    let outcome = if lhs_count != want || rhs_count != want {
        TrialOutcome::Fail {
            expected: format!("{want} letters per side"),
            actual: format!("{lhs_count} and {rhs_count}"),
        }
    } else if lhs_count != id.lhs.len() || rhs_count != id.rhs.len() {
        TrialOutcome::Fail {
            expected: "cached length equals streamed count".into(),
            actual: format!("{} and {}", id.lhs.len(), id.rhs.len()),
        }
    } else if diff.is_none() {
        TrialOutcome::Fail {
            expected: "distinct words".into(),
            actual: "identical expansions".into(),
        }
    } else {
        TrialOutcome::Pass
    };
    (outcome, details)
}

/// Runs `suite` over `cfg.trials` generated instances.
///
/// `cfg.n` is ignored by suites with a fixed order. `h` overrides the
/// suite's default dominance level.
pub fn run_suite(suite: Suite, cfg: &GenConfig, h: Option<TropScalar>) -> Result<PropertyReport> {
    cfg.validate()?;
    let ctx = SuiteContext::new(suite, cfg.n, h)?;
    let config = GenConfig {
        n: ctx.n,
        ..cfg.clone()
    };
    let start = Instant::now();
    let h_value = ctx.h.as_ref().map(|h| h.value().clone());

    if suite == Suite::WordCount {
        let (outcome, details) = check_word_count();
        let failures: Vec<FailureRecord> = match outcome {
            TrialOutcome::Fail { expected, actual } => vec![FailureRecord {
                trial: 0,
                instance: vec![],
                expected,
                actual,
            }],
            _ => vec![],
        };
        return Ok(PropertyReport {
            property_id: suite.id().to_string(),
            config: GenConfig { trials: 1, ..config },
            h: None,
            trials_run: 1,
            hypothesis_met: None,
            failure_count: failures.len() as u64,
            verdict: if failures.is_empty() { Verdict::Pass } else { Verdict::Fail },
            failures,
            details,
            elapsed: start.elapsed(),
        });
    }

    let outcomes: Vec<(u64, Vec<TropMatrix>, TrialOutcome)> = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let inst = ctx.generate(&config, t);
            let out = ctx.check(&inst)?;
            let inst = if matches!(out, TrialOutcome::Fail { .. }) {
                inst
            } else {
                Vec::new()
            };
            Ok((t, inst, out))
        })
        .collect::<Result<_>>()?;

    let mut met = 0u64;
    let mut failure_count = 0u64;
    let mut failures = Vec::new();
    let mut tag_counts: BTreeMap<&'static str, u64> = BTreeMap::new();
    for (trial, inst, out) in outcomes {
        match out {
            TrialOutcome::Pass => met += 1,
            TrialOutcome::Tagged(tags) => {
                met += 1;
                for t in tags {
                    *tag_counts.entry(t).or_default() += 1;
                }
            }
            TrialOutcome::Vacuous => {}
            TrialOutcome::Fail { expected, actual } => {
                met += 1;
                failure_count += 1;
                if failures.len() < MAX_RECORDED_FAILURES {
                    failures.push(FailureRecord {
                        trial,
                        instance: ctx
                            .instance_names()
                            .iter()
                            .zip(&inst)
                            .map(|(name, m)| NamedMatrix::new(name, m))
                            .collect(),
                        expected,
                        actual,
                    });
                }
            }
        }
    }
    let conditional = suite.is_conditional() || suite == Suite::CycMin;
    let verdict = if failure_count > 0 {
        Verdict::Fail
    } else if conditional && met == 0 {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    Ok(PropertyReport {
        property_id: suite.id().to_string(),
        config,
        h: h_value,
        trials_run: cfg.trials,
        hypothesis_met: suite.is_conditional().then_some(met),
        failure_count,
        failures,
        details: tag_counts
            .into_iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect(),
        verdict,
        elapsed: start.elapsed(),
    })
}

/// Re-runs one recorded instance (matrices in instance order).
pub fn replay(suite: Suite, n: usize, h: Option<TropScalar>, inst: &[TropMatrix]) -> Result<TrialOutcome> {
    SuiteContext::new(suite, n, h)?.check(inst)
}

/// Every suite at a small trial count; order-parametrized suites run at n = 2 and 3.
pub fn selftest(seed: u64, trials: u64) -> Result<Vec<PropertyReport>> {
    let mut reports = Vec::new();
    for suite in Suite::ALL {
        let orders: &[usize] = match suite {
            Suite::PowerId | Suite::DiagCommute | Suite::Pinch | Suite::DomIdentity | Suite::Dichotomy => {
                &[2, 3]
            }
            _ => &[suite.default_config().n],
        };
        for &n in orders {
            let cfg = GenConfig {
                seed,
                n,
                trials,
                ..suite.default_config()
            };
            reports.push(run_suite(suite, &cfg, None)?);
        }
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(suite: Suite, trials: u64) -> GenConfig {
        GenConfig {
            seed: 5,
            trials,
            ..suite.default_config()
        }
    }

    #[test]
    fn registry_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.id().parse::<Suite>().unwrap(), s);
        }
        assert!("perm".parse::<Suite>().is_err());
    }

    #[test]
    fn context_validation() {
        assert_eq!(SuiteContext::new(Suite::Identity3x3, 7, None).unwrap().n, 3);
        assert!(SuiteContext::new(Suite::Pinch, 5, None).is_err());
        assert!(SuiteContext::new(Suite::Dichotomy, 3, Some("3/2".parse().unwrap())).is_err());
        assert!(SuiteContext::new(Suite::CycMin, 3, Some(TropScalar::from_int(-1))).is_err());
        let ctx = SuiteContext::new(Suite::DomIdentity, 2, None).unwrap();
        assert_eq!(ctx.h.unwrap().value(), &TropScalar::from_int(33));
    }

    #[test]
    fn zero_instances_are_vacuous_or_trivial() {
        let cfg = GenConfig {
            range: 0,
            ..small(Suite::PermMult, 10)
        };
        let r = run_suite(Suite::PermMult, &cfg, None).unwrap();
        assert_eq!(r.hypothesis_met, Some(0));
        assert_eq!(r.verdict, Verdict::Inconclusive);

        let cfg = GenConfig {
            seed: 1,
            range: 0,
            ..small(Suite::Identity3x3, 3)
        };
        assert!(run_suite(Suite::Identity3x3, &cfg, None).unwrap().passed());
    }

    #[test]
    fn crafted_failures_are_caught() {
        let ctx = SuiteContext::new(Suite::CycMin, 2, None).unwrap();
        let bad = TropMatrix::from_ints(&[[0, -5], [-5, 0]]);
        assert!(matches!(ctx.check(&[bad]).unwrap(), TrialOutcome::Fail { .. }));

        let ctx = SuiteContext::new(Suite::Identity2x2, 2, None).unwrap();
        assert!(ctx.check(&[TropMatrix::zeros(3, 3).unwrap()]).is_err());
    }

    #[test]
    fn word_count_details() {
        let r = run_suite(Suite::WordCount, &small(Suite::WordCount, 1), None).unwrap();
        assert!(r.passed());
        assert_eq!(r.detail("lhs_length"), Some("1795308"));
        assert_eq!(r.detail("first_difference"), Some("787309"));
    }

    #[test]
    fn every_suite_runs() {
        for suite in Suite::ALL {
            let r = run_suite(suite, &small(suite, 8), None).unwrap();
            assert_ne!(r.verdict, Verdict::Fail, "{r}");
        }
    }
}
