//! Exhaustive exact checks with structured reports, and a deterministic
//! rejection sampler for admissible parameters.
//!
//! Every check sweeps a finite box and compares rationals for equality —
//! there is no tolerance anywhere. A check ends in one of three verdicts:
//!
//!   pass          every demanded equality holds on the box
//!   fail          at least one equality is violated (witnesses say where)
//!   inadmissible  a denominator vanishes somewhere on the box, so the
//!                 identities are not defined there (poles say where)
//!
//! Inadmissibility is decided by a pre-scan before any identity is
//! evaluated, so a pole is never reported as a failure or vice versa.
//!
//! Reports render in two formats. The human format is indented prose;
//! the machine format is one record per line, first token is the record
//! type, and everything after a WITNESS/POLE keyword's cell token is
//! free text:
//!
//!   `CHECK <name> <group> <rank> <box> <verdict>`
//!   `PARAM <key=value parameter rendering>`
//!   `WITNESS <cell> expected=<value> actual=<value>`
//!   `POLE <description>`
//!
//! Cells are space-free tokens such as "i=1,0;j=0,0;order=m-mstar",
//! "N=2", "dir=ab;N=1", "link=2;N=0,1" or "i=3;j=1;kernel=mstar".
//! Neither format includes timing, so byte-identical inputs give
//! byte-identical renderings; elapsed time lives only in the report
//! struct for callers that want to log it separately.
//!
//! The sampler draws numerators and denominators bounded by a
//! configurable magnitude, rejects candidates whose denominators vanish
//! somewhere on the target box, and is seeded explicitly: the same seed
//! always yields the same draws.
//!
//! # Edge cases
//! * a check on a box containing only the origin can still fail (the
//!   origin cell demands B(0) = A(0) for a pair) but can rarely be
//!   inadmissible, since most denominators have positive subscripts;
//! * sampler bound 1 cannot produce a valid base (every candidate has
//!   magnitude 1), so drawing exhausts its attempt budget and errors
//!   rather than looping;
//! * the classical reduction compares the general machinery at rank 1
//!   against independently coded closed forms on the full square grid,
//!   including the strictly-upper cells that must be exactly zero.

use std::fmt;
use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bailey::{
    a_from_b, b_from_a, chain, lemma_admissibility, lemma_step, BaileyPair, LemmaParams,
    LemmaParamsA, LemmaParamsC, SequenceOracle,
};
use crate::error::Error;
use crate::lattice::{IndexBox, MultiIndex};
use crate::qfield::{choose2, qpoch, qpow, Rational};
use crate::transforms::{admissibility, matrix_block, Group, GroupParamsA, GroupParamsC, Params};
use crate::Result;

// ---------------------------------------------------------------------------
// Verdicts, witnesses, reports
// ---------------------------------------------------------------------------

/// Outcome of one check over one box.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Pass,
    Fail,
    Inadmissible,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inadmissible => "inadmissible",
        })
    }
}

/// One violated equality: the cell it lives at, the value the identity
/// demands there, and the value actually found.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Witness {
    pub cell: String,
    pub expected: Rational,
    pub actual: Rational,
}

/// Everything one check produced. Witnesses are present exactly when
/// the verdict is fail, poles exactly when it is inadmissible.
#[derive(Clone, Debug)]
pub struct Report {
    check: String,
    group: Group,
    rank: usize,
    bbox: IndexBox,
    params: Vec<String>,
    verdict: Verdict,
    witnesses: Vec<Witness>,
    poles: Vec<String>,
    elapsed: Duration,
}

impl Report {
    pub fn check(&self) -> &str {
        &self.check
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bbox(&self) -> &IndexBox {
        &self.bbox
    }

    /// Parameter renderings, base parameters first, lemma-step
    /// parameters after in application order.
    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn verdict(&self) -> Verdict {
        self.verdict
    }

    pub fn witnesses(&self) -> &[Witness] {
        &self.witnesses
    }

    pub fn poles(&self) -> &[String] {
        &self.poles
    }

    /// Wall-clock duration of the check; deliberately absent from both
    /// renderings so that output stays reproducible.
    pub fn elapsed(&self) -> Duration {
        self.elapsed
    }

    /// One record per line; see the module header for the grammar.
    pub fn render_machine(&self) -> String {
        let mut out = format!(
            "CHECK {} {} {} {} {}\n",
            self.check, self.group, self.rank, self.bbox, self.verdict
        );
        for p in &self.params {
            out.push_str(&format!("PARAM {p}\n"));
        }
        for w in &self.witnesses {
            out.push_str(&format!(
                "WITNESS {} expected={} actual={}\n",
                w.cell, w.expected, w.actual
            ));
        }
        for p in &self.poles {
            out.push_str(&format!("POLE {p}\n"));
        }
        out
    }

    /// Indented prose rendering of the same content.
    pub fn render_human(&self) -> String {
        let verdict = match self.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inadmissible => "INADMISSIBLE",
        };
        let mut out = format!(
            "check {} (family {}, rank {}, box {}): {verdict}\n",
            self.check, self.group, self.rank, self.bbox
        );
        for p in &self.params {
            out.push_str(&format!("  params: {p}\n"));
        }
        for w in &self.witnesses {
            out.push_str(&format!(
                "  witness {}: expected {}, actual {}\n",
                w.cell, w.expected, w.actual
            ));
        }
        for p in &self.poles {
            out.push_str(&format!("  pole: {p}\n"));
        }
        out
    }
}

/// Report skeleton filled in by each check.
struct ReportBuilder {
    check: &'static str,
    group: Group,
    rank: usize,
    bbox: IndexBox,
    params: Vec<String>,
    witnesses: Vec<Witness>,
    poles: Vec<String>,
    started: Instant,
}

impl ReportBuilder {
    fn new(check: &'static str, group: Group, bbox: &IndexBox) -> Self {
        ReportBuilder {
            check,
            group,
            rank: bbox.rank(),
            bbox: bbox.clone(),
            params: Vec::new(),
            witnesses: Vec::new(),
            poles: Vec::new(),
            started: Instant::now(),
        }
    }

    fn param(&mut self, rendering: String) -> &mut Self {
        self.params.push(rendering);
        self
    }

    fn witness(&mut self, cell: String, expected: Rational, actual: Rational) {
        self.witnesses.push(Witness {
            cell,
            expected,
            actual,
        });
    }

    fn pole(&mut self, e: &Error) {
        self.poles.push(pole_text(e));
    }

    fn poles_from(&mut self, errors: &[Error]) {
        for e in errors {
            self.pole(e);
        }
    }

    fn finish(self) -> Report {
        let verdict = if !self.poles.is_empty() {
            Verdict::Inadmissible
        } else if !self.witnesses.is_empty() {
            Verdict::Fail
        } else {
            Verdict::Pass
        };
        Report {
            check: self.check.to_string(),
            group: self.group,
            rank: self.rank,
            bbox: self.bbox,
            params: self.params,
            verdict,
            witnesses: self.witnesses,
            poles: self.poles,
            elapsed: self.started.elapsed(),
        }
    }
}

/// POLE lines carry the factor description without the "pole:" prefix
/// the error's Display adds; other errors render in full.
fn pole_text(e: &Error) -> String {
    match e {
        Error::PoleEncountered { factor } => factor.clone(),
        other => other.to_string(),
    }
}

// ---------------------------------------------------------------------------
// Checks
// ---------------------------------------------------------------------------

/// Multiplies the two matrix blocks on the box in both orders and
/// demands the identity block each time.
pub fn check_inversion(p: &Params, bbox: &IndexBox) -> Report {
    let mut rb = ReportBuilder::new("inversion", p.group(), bbox);
    rb.param(p.render());
    let poles = admissibility(p, bbox);
    if !poles.is_empty() {
        rb.poles_from(&poles);
        return rb.finish();
    }
    let (m, ms) = match matrix_block(p, bbox.upper()) {
        Ok(pair) => pair,
        Err(e) => {
            rb.pole(&e);
            return rb.finish();
        }
    };
    let d = m.dim();
    let indices = m.indices();
    for (order, left, right) in [("m-mstar", &m, &ms), ("mstar-m", &ms, &m)] {
        for row in 0..d {
            for col in 0..d {
                let mut actual = Rational::zero();
                for k in 0..d {
                    actual += left.get(row, k) * right.get(k, col);
                }
                let expected = if row == col {
                    Rational::one()
                } else {
                    Rational::zero()
                };
                if actual != expected {
                    rb.witness(
                        format!("i={};j={};order={order}", indices[row], indices[col]),
                        expected,
                        actual,
                    );
                }
            }
        }
    }
    rb.finish()
}

/// Demands B(N) = sum_{y <= N} M(N; y) A(y) at every box index.
pub fn check_bailey_pair(pair: &BaileyPair) -> Report {
    let mut rb = ReportBuilder::new("pair", pair.group(), pair.domain());
    rb.param(pair.params().render());
    for step in pair.history() {
        rb.param(step.render());
    }
    let poles = admissibility(pair.params(), pair.domain());
    if !poles.is_empty() {
        rb.poles_from(&poles);
        return rb.finish();
    }
    for n in pair.domain().iter() {
        let expected = match b_from_a(pair.a(), &n, pair.params()) {
            Ok(v) => v,
            Err(e) => {
                rb.pole(&e);
                return rb.finish();
            }
        };
        let actual = pair.b().get(&n).expect("index from own domain").clone();
        if actual != expected {
            rb.witness(format!("N={n}"), expected, actual);
        }
    }
    rb.finish()
}

/// Pushes one sequence through both transforms and back, in both
/// directions: A → B → A and B → A → B must each return to the start.
pub fn check_roundtrip(p: &Params, seq: &SequenceOracle) -> Report {
    let mut rb = ReportBuilder::new("roundtrip", p.group(), seq.domain());
    rb.param(p.render());
    let poles = admissibility(p, seq.domain());
    if !poles.is_empty() {
        rb.poles_from(&poles);
        return rb.finish();
    }
    let domain = seq.domain().clone();
    // A-side start: seq plays A, demand a_from_b(b_from_a(A)) = A
    match SequenceOracle::try_from_fn(domain.clone(), |n| b_from_a(seq, n, p)) {
        Ok(b) => {
            for n in domain.iter() {
                match a_from_b(&b, &n, p) {
                    Ok(actual) => {
                        let expected = seq.get(&n).expect("index from own domain").clone();
                        if actual != expected {
                            rb.witness(format!("dir=ab;N={n}"), expected, actual);
                        }
                    }
                    Err(e) => {
                        rb.pole(&e);
                        return rb.finish();
                    }
                }
            }
        }
        Err(e) => {
            rb.pole(&e);
            return rb.finish();
        }
    }
    // B-side start: seq plays B, demand b_from_a(a_from_b(B)) = B
    match SequenceOracle::try_from_fn(domain.clone(), |n| a_from_b(seq, n, p)) {
        Ok(a) => {
            for n in domain.iter() {
                match b_from_a(&a, &n, p) {
                    Ok(actual) => {
                        let expected = seq.get(&n).expect("index from own domain").clone();
                        if actual != expected {
                            rb.witness(format!("dir=ba;N={n}"), expected, actual);
                        }
                    }
                    Err(e) => {
                        rb.pole(&e);
                        return rb.finish();
                    }
                }
            }
        }
        Err(e) => {
            rb.pole(&e);
            return rb.finish();
        }
    }
    rb.finish()
}

/// Demands that the seed satisfies the pair relation on the step
/// domain and that one lemma step preserves it there.
pub fn check_lemma(pair: &BaileyPair, lp: &LemmaParams, domain: &IndexBox) -> Report {
    let mut rb = ReportBuilder::new("lemma", pair.group(), domain);
    rb.param(pair.params().render());
    for step in pair.history() {
        rb.param(step.render());
    }
    rb.param(lp.render());
    let mut poles = admissibility(pair.params(), domain);
    poles.extend(lemma_admissibility(pair.params(), lp, domain));
    if !poles.is_empty() {
        rb.poles_from(&poles);
        return rb.finish();
    }
    let stepped = match lemma_step(pair, lp, domain) {
        Ok(stepped) => stepped,
        Err(e) => {
            rb.pole(&e);
            return rb.finish();
        }
    };
    for (side, candidate) in [("seed", pair), ("stepped", &stepped)] {
        for n in domain.iter() {
            let expected = match b_from_a(candidate.a(), &n, pair.params()) {
                Ok(v) => v,
                Err(e) => {
                    rb.pole(&e);
                    return rb.finish();
                }
            };
            let actual = match candidate.b().get(&n) {
                Ok(v) => v.clone(),
                Err(e) => {
                    rb.pole(&e);
                    return rb.finish();
                }
            };
            if actual != expected {
                rb.witness(format!("side={side};N={n}"), expected, actual);
            }
        }
    }
    rb.finish()
}

/// Runs the whole chain and pair-checks every link on the domain.
pub fn check_chain(seed: &BaileyPair, steps: &[LemmaParams], domain: &IndexBox) -> Report {
    let mut rb = ReportBuilder::new("chain", seed.group(), domain);
    rb.param(seed.params().render());
    for lp in steps {
        rb.param(lp.render());
    }
    let mut poles = admissibility(seed.params(), domain);
    for lp in steps {
        poles.extend(lemma_admissibility(seed.params(), lp, domain));
    }
    if !poles.is_empty() {
        rb.poles_from(&poles);
        return rb.finish();
    }
    let links = match chain(seed, steps, domain) {
        Ok(links) => links,
        Err(e) => {
            rb.pole(&e);
            return rb.finish();
        }
    };
    for (k, link) in links.iter().enumerate() {
        for n in domain.iter() {
            let expected = match b_from_a(link.a(), &n, seed.params()) {
                Ok(v) => v,
                Err(e) => {
                    rb.pole(&e);
                    return rb.finish();
                }
            };
            let actual = link.b().get(&n).expect("domain is enclosed").clone();
            if actual != expected {
                rb.witness(format!("link={k};N={n}"), expected, actual);
            }
        }
    }
    rb.finish()
}

/// Classical closed forms the rank-1 family-A entries must reduce to:
///
///   m(i, j)  = 1 / ((q; q)_(i-j) (a q; q)_(i+j))
///   m*(i, j) = (1 - a q^(2i)) (a q; q)_(i+j-1) / (q; q)_(i-j)
///            * (-1)^(i-j) q^(binom(i-j, 2))
///
/// for 0 <= j <= i, and exactly zero above the diagonal. The general
/// entries are compared against these on the whole (bound+1)^2 grid.
pub fn check_classical_reduction(q: &Rational, a: &Rational, bound: i64) -> Report {
    let bbox = IndexBox::new(MultiIndex::new(vec![bound]).expect("nonnegative bound"));
    let mut rb = ReportBuilder::new("classical", Group::A, &bbox);
    let p = match GroupParamsA::new(q.clone(), a.clone(), vec![Rational::one()]) {
        Ok(p) => Params::A(p),
        Err(e) => {
            rb.param(format!("q={q} a={a}"));
            rb.pole(&e);
            return rb.finish();
        }
    };
    rb.param(p.render());
    let poles = admissibility(&p, &bbox);
    if !poles.is_empty() {
        rb.poles_from(&poles);
        return rb.finish();
    }
    for i in 0..=bound {
        for j in 0..=bound {
            let iv = MultiIndex::new(vec![i]).expect("nonnegative");
            let jv = MultiIndex::new(vec![j]).expect("nonnegative");
            let cases: [(&str, Result<Rational>, Result<Rational>); 2] = [
                ("m", classical_m(q, a, i, j), p.m_entry(&iv, &jv)),
                ("mstar", classical_mstar(q, a, i, j), p.mstar_entry(&iv, &jv)),
            ];
            for (kernel, expected, actual) in cases {
                let (expected, actual) = match (expected, actual) {
                    (Ok(e), Ok(a)) => (e, a),
                    (Err(e), _) | (_, Err(e)) => {
                        rb.pole(&e);
                        return rb.finish();
                    }
                };
                if expected != actual {
                    rb.witness(format!("i={i};j={j};kernel={kernel}"), expected, actual);
                }
            }
        }
    }
    rb.finish()
}

fn classical_m(q: &Rational, a: &Rational, i: i64, j: i64) -> Result<Rational> {
    if j > i {
        return Ok(Rational::zero());
    }
    let den = qpoch(q, q, i - j)? * qpoch(&(a * q), q, i + j)?;
    if den.is_zero() {
        return Err(Error::PoleEncountered {
            factor: format!("classical m(i={i}, j={j}): denominator vanishes"),
        });
    }
    Rational::one().checked_div(&den)
}

fn classical_mstar(q: &Rational, a: &Rational, i: i64, j: i64) -> Result<Rational> {
    if j > i {
        return Ok(Rational::zero());
    }
    let bracket = Rational::one() - a * qpow(q, 2 * i)?;
    let den = qpoch(q, q, i - j)?;
    if den.is_zero() {
        return Err(Error::PoleEncountered {
            factor: format!("classical m*(i={i}, j={j}): denominator vanishes"),
        });
    }
    let d = i - j;
    let sign = if d % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    };
    let value = bracket * qpoch(&(a * q), q, i + j - 1)?.checked_div(&den)?
        * sign
        * qpow(q, choose2(d))?;
    Ok(value)
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

/// Knobs of the rejection sampler.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SamplerConfig {
    /// Stream seed; equal seeds give equal draw sequences.
    pub seed: u64,
    /// Numerators are drawn from [-bound, bound], denominators from
    /// [1, bound].
    pub bound: i64,
    /// Rejection budget per call before giving up with an error.
    pub max_attempts: u32,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            seed: 0,
            bound: 9,
            max_attempts: 1000,
        }
    }
}

impl SamplerConfig {
    pub fn with_seed(seed: u64) -> Self {
        SamplerConfig {
            seed,
            ..SamplerConfig::default()
        }
    }
}

/// Seeded source of admissible parameters, lemma parameters, and
/// sequences. Rejection is driven by the same admissibility scans the
/// checks use, so anything this produces is safe on its target box.
pub struct ParamSampler {
    rng: ChaCha8Rng,
    cfg: SamplerConfig,
}

impl ParamSampler {
    pub fn new(cfg: SamplerConfig) -> Self {
        ParamSampler {
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            cfg,
        }
    }

    pub fn from_seed(seed: u64) -> Self {
        ParamSampler::new(SamplerConfig::with_seed(seed))
    }

    pub fn config(&self) -> &SamplerConfig {
        &self.cfg
    }

    /// One bounded rational; numerator zero is excluded unless allowed.
    pub fn rational(&mut self, allow_zero: bool) -> Rational {
        let bound = self.cfg.bound;
        let numer = loop {
            let n = self.rng.random_range(-bound..=bound);
            if allow_zero || n != 0 {
                break n;
            }
        };
        let denom = self.rng.random_range(1..=bound);
        Rational::new(numer, denom).expect("denominator is positive")
    }

    /// One base value q outside {0, 1, -1}.
    pub fn next_base(&mut self) -> Result<Rational> {
        for _ in 0..self.cfg.max_attempts {
            let q = self.rational(false);
            if !q.is_one() && !(-&q).is_one() {
                return Ok(q);
            }
        }
        Err(Error::ExhaustedAttempts {
            attempts: self.cfg.max_attempts,
        })
    }

    /// One parameter set admissible on the given box: every denominator
    /// of both matrices is nonzero there.
    pub fn next_params(&mut self, group: Group, bbox: &IndexBox) -> Result<Params> {
        for _ in 0..self.cfg.max_attempts {
            let q = self.next_base()?;
            let x: Vec<Rational> = (0..bbox.rank()).map(|_| self.rational(false)).collect();
            let candidate = match group {
                Group::A => {
                    let a = self.rational(true);
                    match GroupParamsA::new(q, a, x) {
                        Ok(p) => Params::A(p),
                        Err(_) => continue,
                    }
                }
                Group::C => match GroupParamsC::new(q, x) {
                    Ok(p) => Params::C(p),
                    Err(_) => continue,
                },
            };
            if admissibility(&candidate, bbox).is_empty() {
                return Ok(candidate);
            }
        }
        Err(Error::ExhaustedAttempts {
            attempts: self.cfg.max_attempts,
        })
    }

    /// One lemma parameter pair admissible for the given base
    /// parameters on the given box.
    pub fn next_lemma_params(&mut self, p: &Params, bbox: &IndexBox) -> Result<LemmaParams> {
        for _ in 0..self.cfg.max_attempts {
            let first = self.rational(false);
            let second = self.rational(false);
            let candidate = match p.group() {
                Group::A => LemmaParams::A(LemmaParamsA::new(first, second)?),
                Group::C => LemmaParams::C(LemmaParamsC::new(first, second)?),
            };
            if lemma_admissibility(p, &candidate, bbox).is_empty() {
                return Ok(candidate);
            }
        }
        Err(Error::ExhaustedAttempts {
            attempts: self.cfg.max_attempts,
        })
    }

    /// One arbitrary sequence on the domain (zeros allowed).
    pub fn next_sequence(&mut self, domain: &IndexBox) -> SequenceOracle {
        let values = (0..domain.card()).map(|_| self.rational(true)).collect();
        SequenceOracle::from_values(domain.clone(), values).expect("lengths match by construction")
    }

    /// One valid pair: a random A side with the B side it determines.
    /// The parameters must already be admissible on the domain.
    pub fn next_pair(&mut self, p: &Params, domain: &IndexBox) -> Result<BaileyPair> {
        let a = self.next_sequence(domain);
        let b = SequenceOracle::try_from_fn(domain.clone(), |n| b_from_a(&a, n, p))?;
        BaileyPair::from_oracles(p.clone(), a, b)
    }
}

// ---------------------------------------------------------------------------
