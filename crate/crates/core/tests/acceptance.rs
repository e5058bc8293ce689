//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs sequentially (trials inside a suite still use every core) so the
//! wall-clock limits are measured without interference. `TROPID_SEED`
//! overrides the seed.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use tropid::harness::{run_suite, GenConfig, PropertyReport, Suite, SuiteContext, DEFAULT_SEED};
use tropid::words::{build_identity3, Letter};
use tropid::{TropMatrix, TropScalar};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    ok: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            ok: true,
            notes: Vec::new(),
        }
    }

    fn require(&mut self, cond: bool, what: impl Into<String>) {
        let what = what.into();
        if cond {
            self.notes.push(what);
        } else {
            self.ok = false;
            self.notes.push(format!("NOT {what}"));
        }
    }

    fn report(&mut self, r: &PropertyReport) {
        let mut s = format!("{} {} trials, {} failures", r.property_id, r.trials_run, r.failure_count);
        if let Some(met) = r.hypothesis_met {
            s.push_str(&format!(", hypothesis met {met}"));
        }
        for (k, v) in &r.details {
            s.push_str(&format!(", {k} {v}"));
        }
        self.require(r.passed(), s);
        if !r.passed() {
            eprint!("{r}");
        }
    }

    fn within(&mut self, elapsed: Duration, limit_secs: u64) {
        self.require(
            elapsed < Duration::from_secs(limit_secs),
            format!("{:.2} s < {limit_secs} s", elapsed.as_secs_f64()),
        );
    }
}

fn seed() -> u64 {
    std::env::var("TROPID_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

fn cfg(suite: Suite, n: usize, trials: u64) -> GenConfig {
    GenConfig {
        seed: seed(),
        n,
        trials,
        ..suite.default_config()
    }
}

fn run(suite: Suite, cfg: &GenConfig, h: Option<i64>) -> PropertyReport {
    run_suite(suite, cfg, h.map(TropScalar::from_int)).expect("valid configuration")
}

fn word_count() -> Outcome {
    let mut o = Outcome::new();
    let r = run(Suite::WordCount, &cfg(Suite::WordCount, 3, 1), None);
    o.report(&r);
    o.require(r.detail("lhs_length") == Some("1795308"), "lhs has 1,795,308 letters");
    o.require(r.detail("rhs_length") == Some("1795308"), "rhs has 1,795,308 letters");
    o.require(
        r.detail("first_difference").is_some_and(|d| d != "none"),
        format!("sides differ at letter {}", r.detail("first_difference").unwrap_or("?")),
    );
    o.within(r.elapsed, 1);
    o
}

/// Left-to-right product over the streamed letters, no sharing.
fn streamed_product(letters: impl Iterator<Item = Letter>, a: &TropMatrix, b: &TropMatrix) -> TropMatrix {
    let mut acc: Option<TropMatrix> = None;
    for l in letters {
        let m = if l == Letter::X { a } else { b };
        acc = Some(match acc {
            None => m.clone(),
            Some(p) => p.mul(m).expect("same order"),
        });
    }
    acc.expect("non-empty")
}

fn identity_3x3() -> Outcome {
    let mut o = Outcome::new();
    let c = cfg(Suite::Identity3x3, 3, 10_000);
    let r = run(Suite::Identity3x3, &c, None);
    o.report(&r);
    o.within(r.elapsed, 60);
    o.require(c.range == 100 && c.denom == 1, "integer entries in [-100, 100]");

    let ctx = SuiteContext::new(Suite::Identity3x3, 3, None).unwrap();
    let inst = ctx.generate(&c, 0);
    let id = build_identity3();
    let (lhs, rhs) = id.eval(&inst[0], &inst[1]).unwrap();
    let naive_l = streamed_product(id.lhs.expand_stream(), &inst[0], &inst[1]);
    let naive_r = streamed_product(id.rhs.expand_stream(), &inst[0], &inst[1]);
    o.require(
        naive_l == lhs && naive_r == rhs && naive_l == naive_r,
        "trial 0 matches naive streamed evaluation of both sides",
    );
    o
}

fn identity_2x2() -> Outcome {
    let mut o = Outcome::new();
    let c = cfg(Suite::Identity2x2, 2, 10_000);
    let r = run(Suite::Identity2x2, &c, None);
    o.report(&r);
    o.require(c.denom > 1, format!("rational entries (denominator {})", c.denom));
    o.within(r.elapsed, 10);
    o
}

fn perm_mult() -> Outcome {
    let mut o = Outcome::new();
    let r = run(Suite::PermMult, &cfg(Suite::PermMult, 3, 10_000), None);
    o.report(&r);
    o.require(r.hypothesis_met.unwrap_or(0) > 0, "hypothesis met at least once");
    o
}

fn power_diag() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    for (n, trials) in [(2, 10_000), (3, 1_000)] {
        for suite in [Suite::PowerId, Suite::DiagCommute] {
            let r = run(suite, &cfg(suite, n, trials), None);
            o.report(&r);
            o.notes.last_mut().unwrap().push_str(&format!(" at n={n}"));
        }
    }
    o.within(start.elapsed(), 30);
    o
}

fn factorization() -> Outcome {
    let mut o = Outcome::new();
    let c = cfg(Suite::FactorRoundtrip, 3, 1_000);
    let fr = SuiteContext::new(Suite::FactorRoundtrip, 3, None).unwrap();
    let lift = SuiteContext::new(Suite::Lift2x2, 3, None).unwrap();
    o.require(
        (0..c.trials).all(|t| fr.generate(&c, t) == lift.generate(&c, t)),
        "both suites see the same instances",
    );
    let r = run(Suite::FactorRoundtrip, &c, None);
    let no_pair = r.failures.iter().filter(|f| f.actual.contains("no_pair_found")).count();
    o.report(&r);
    o.require(r.failure_count == 0 && no_pair == 0, "zero no_pair_found outcomes");
    o.report(&run(Suite::Lift2x2, &c, None));
    o
}

fn dominance_machinery() -> Outcome {
    let mut o = Outcome::new();
    let r = run(Suite::Potentials, &cfg(Suite::Potentials, 4, 1_000), None);
    o.report(&r);
    let count = |r: &PropertyReport, k: &str| r.detail(k).and_then(|v| v.parse::<u64>().ok()).unwrap_or(0);
    o.require(count(&r, "negative_cycle") > 0, "negative cycles reported and verified");
    o.require(count(&r, "potentials_found") > 0, "non-negative certificates verified");
    let r = run(Suite::Dominantize, &cfg(Suite::Dominantize, 3, 1_000), None);
    o.report(&r);
    o.require(count(&r, "scrambled_normalized") == 1_000, "1,000 scrambled dominant matrices normalized");
    o.require(count(&r, "random_refuted") > 0, "refuting cycles verified");
    o
}

fn dom_identity() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    for (n, h) in [(2, 33), (3, 145)] {
        let r = run(Suite::DomIdentity, &cfg(Suite::DomIdentity, n, 1_000), Some(h));
        o.report(&r);
        o.notes.last_mut().unwrap().push_str(&format!(" at n={n} H={h}"));
    }
    o.within(start.elapsed(), 60);
    o
}

fn dichotomy() -> Outcome {
    let mut o = Outcome::new();
    for h in [2, 145] {
        let r = run(Suite::Dichotomy, &cfg(Suite::Dichotomy, 3, 1_000), Some(h));
        o.report(&r);
        o.notes.last_mut().unwrap().push_str(&format!(" at h={h}"));
        o.require(r.hypothesis_met.unwrap_or(0) >= 100, format!("at least 100 hypothesis-met instances at h={h}"));
    }
    o
}

fn supporting_checks() -> Outcome {
    let mut o = Outcome::new();
    o.report(&run(Suite::CycMin, &cfg(Suite::CycMin, 3, 1_000), None));
    o.report(&run(Suite::Pinch, &cfg(Suite::Pinch, 3, 1_000), None));
    o
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("word-count", word_count),
        ("identity-3x3", identity_3x3),
        ("identity-2x2", identity_2x2),
        ("perm-mult", perm_mult),
        ("power-id + diag-commute", power_diag),
        ("factorization", factorization),
        ("dominance machinery", dominance_machinery),
        ("dom-identity", dom_identity),
        ("dichotomy", dichotomy),
        ("cyc-min + pinch", supporting_checks),
    ];
    println!("acceptance run, seed {}", seed());
    let mut all = true;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        all &= o.ok;
        println!(
            "criterion {:>2} {name}: {} ({})",
            k + 1,
            if o.ok { "PASS" } else { "FAIL" },
            o.notes.join("; ")
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
