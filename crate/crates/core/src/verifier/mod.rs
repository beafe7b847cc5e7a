//! Executable checks of the group-theoretic statements behind the
//! local-global divisibility argument, run over seeded corpora of subgroups.
//!
//! Field-theoretic hypotheses are translated into group conditions in one
//! place, [`dictionary`]. Every check evaluates one group at a time, so any
//! witness can be replayed from its generators alone.

mod checks;
pub mod dictionary;
pub mod families;
pub mod micro;

use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{
    classify_g1, contains_nontrivial_scalar, cyclic_subgroups, diagonal_part, h_dimension,
    invariant_line_vectors, is_cyclic, reduction_split, Classification,
};
use crate::cohomology::{Cohomology, GModule};
use crate::error::{Error, Result};
use crate::gl2::Gl2;
use crate::group::{MatrixGroup, DEFAULT_CAP};
use crate::ring::Ring;

pub use checks::REGISTRY;
pub use families::{Sample, SampleSizes};

/// Limits for one check. Groups beyond `max_groups` are not visited; once
/// `max_seconds` have elapsed the check stops and reports
/// `inconclusive-budget`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Budget {
    pub max_groups: usize,
    pub max_seconds: f64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_groups: 5000,
            max_seconds: 60.0,
        }
    }
}

/// What a single check was asked to do; echoed in its report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckSpec {
    pub id: String,
    pub p: u32,
    /// Highest level examined (groups mod `p` and, for 2, their lifts mod `p^2`).
    pub n: u32,
    pub family: String,
    pub seed: u64,
    pub budget: Budget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Verdict {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "inconclusive-budget")]
    InconclusiveBudget,
    #[serde(rename = "fail")]
    Fail,
}

impl Verdict {
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::InconclusiveBudget => 2,
        }
    }
}

/// A group together with the data that made it interesting.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub family: String,
    pub modulus: u32,
    pub generators: Vec<String>,
    pub order: usize,
    pub reason: String,
    pub data: serde_json::Value,
    #[serde(skip)]
    key: Vec<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictReport {
    pub spec: CheckSpec,
    pub statement: &'static str,
    /// Groups visited in the check's corpora.
    pub groups_sampled: u64,
    /// Groups meeting the check's hypotheses.
    pub groups_tested: u64,
    pub coverage: BTreeMap<String, u64>,
    pub failures: Vec<Witness>,
    /// Findings that do not count as failures: hypothesis-level violations on
    /// groups that may not occur as Galois images, and translation mismatches.
    pub flagged: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub caveat: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_secs: Option<f64>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub p: u32,
    pub seed: u64,
    pub reports: Vec<VerdictReport>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub p: u32,
    pub n: u32,
    pub seed: u64,
    pub cap: usize,
    pub budget: Budget,
    pub sizes: SampleSizes,
    /// Worker threads; `None` uses the available parallelism.
    pub workers: Option<usize>,
    /// Include wall-clock time in reports (breaks byte-identical output).
    pub timings: bool,
}

impl VerifyConfig {
    pub fn new(p: u32, seed: u64) -> VerifyConfig {
        VerifyConfig {
            p,
            n: 2,
            seed,
            cap: DEFAULT_CAP,
            budget: Budget::default(),
            sizes: SampleSizes::default(),
            workers: None,
            timings: false,
        }
    }
}

/// Structural and cohomological data of one group, computed once per session.
#[derive(Debug, Clone)]
pub struct Profile {
    pub order: usize,
    pub h1: Vec<u64>,
    /// Empty whenever `h1` is.
    pub h1_loc: Vec<u64>,
    /// Reduction mod `p` (the group itself at level 1).
    pub g1: MatrixGroup,
    /// Kernel of reduction and its `F_p`-dimension, level 2 only.
    pub h: Option<MatrixGroup>,
    pub dim_h: Option<u32>,
    pub lines: Vec<[u32; 2]>,
    pub classification: Classification,
    pub g1_cyclic: bool,
    pub g1_scalar: Option<Gl2>,
    pub gd_cyclic: bool,
    pub g1_fixed_vector: bool,
    /// `p` divides the order of the determinant image mod `p^2` (level 2).
    pub det_hypothesis: bool,
}

pub fn profile(g: &MatrixGroup) -> Result<Profile> {
    let ring = g.ring();
    let m = GModule::new(ring);
    let coh = Cohomology::new(g, &m)?;
    let h1 = coh.h1()?.invariants;
    let h1_loc = if h1.is_empty() {
        Vec::new()
    } else {
        coh.h1_loc()?.invariants
    };
    let (g1, h) = if ring.n() == 2 {
        let (g1, h) = reduction_split(g)?;
        (g1, Some(h))
    } else {
        (g.clone(), None)
    };
    let dim_h = h.as_ref().map(h_dimension).transpose()?;
    let lines = invariant_line_vectors(&g1);
    let classification = classify_g1(&g1);
    Ok(Profile {
        order: g.order(),
        h1,
        h1_loc,
        g1_cyclic: is_cyclic(&g1),
        g1_scalar: contains_nontrivial_scalar(&g1),
        gd_cyclic: is_cyclic(&diagonal_part(&g1)),
        g1_fixed_vector: dictionary::has_rational_point_of_order_p(&g1),
        det_hypothesis: ring.n() == 2 && dictionary::excludes_degree_p_subfield(g)?,
        g1,
        h,
        dim_h,
        lines,
        classification,
    })
}

/// The group corpora of one run, built on first use and shared by all checks.
pub struct Session {
    config: VerifyConfig,
    level_one: OnceLock<Result<Corpus>>,
    level_two: OnceLock<Result<Corpus>>,
    cyclic: OnceLock<Result<Corpus>>,
}

pub(crate) struct Corpus {
    pub samples: Vec<Sample>,
    pub cap_skips: usize,
    profiles: Vec<OnceLock<std::result::Result<Profile, Error>>>,
}

impl Corpus {
    fn new(samples: Vec<Sample>, cap_skips: usize) -> Corpus {
        let profiles = (0..samples.len()).map(|_| OnceLock::new()).collect();
        Corpus {
            samples,
            cap_skips,
            profiles,
        }
    }

    pub fn profile(&self, i: usize) -> &std::result::Result<Profile, Error> {
        self.profiles[i].get_or_init(|| profile(&self.samples[i].group))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum CorpusKind {
    LevelOne,
    LevelTwo,
    Cyclic,
}

impl Session {
    pub fn new(config: VerifyConfig) -> Result<Session> {
        Ring::new(config.p, 1)?;
        Ok(Session {
            config,
            level_one: OnceLock::new(),
            level_two: OnceLock::new(),
            cyclic: OnceLock::new(),
        })
    }

    pub fn config(&self) -> &VerifyConfig {
        &self.config
    }

    fn level_one(&self) -> Result<&Corpus> {
        self.level_one
            .get_or_init(|| {
                let c = &self.config;
                let l = families::level_one(c.p, c.seed, &c.sizes, c.cap)?;
                Ok(Corpus::new(l.samples, l.cap_skips))
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    fn level_two(&self) -> Result<&Corpus> {
        self.level_two
            .get_or_init(|| {
                let base = self.level_one()?;
                let c = &self.config;
                let l = families::level_two(&base.samples, c.seed, &c.sizes, c.cap)?;
                Ok(Corpus::new(l.samples, l.cap_skips))
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Every cyclic subgroup of `GL2(F_p)` followed by seeded cyclic
    /// subgroups of `GL2(Z/p^2 Z)`.
    fn cyclic(&self) -> Result<&Corpus> {
        self.cyclic
            .get_or_init(|| {
                let c = &self.config;
                let ring = Ring::new(c.p, 1)?;
                let full = MatrixGroup::close(ring, &families_gl2(ring), c.cap)?;
                let mut samples: Vec<Sample> = cyclic_subgroups(&full)
                    .into_iter()
                    .map(|group| Sample {
                        family: "cyclic-gl2".into(),
                        group,
                    })
                    .collect();
                samples.extend(families::random_cyclic_lifts(
                    c.p,
                    c.seed,
                    c.sizes.cyclic_lifts,
                    c.cap,
                )?);
                Ok(Corpus::new(samples, 0))
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    pub(crate) fn corpus(&self, kind: CorpusKind) -> Result<&Corpus> {
        match kind {
            CorpusKind::LevelOne => self.level_one(),
            CorpusKind::LevelTwo => self.level_two(),
            CorpusKind::Cyclic => self.cyclic(),
        }
    }

    fn pool(&self) -> rayon::ThreadPool {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(w) = self.config.workers {
            b = b.num_threads(w.max(1));
        }
        b.build().expect("thread pool")
    }

    /// Runs one registered check.
    pub fn run(&self, id: &str) -> Result<VerdictReport> {
        let check = checks::lookup(id)?;
        self.pool().install(|| self.run_check(check))
    }

    /// Runs the given checks in registry order of `ids`.
    pub fn run_all(&self, ids: &[&str]) -> Result<SuiteReport> {
        let checks: Vec<_> = ids
            .iter()
            .map(|id| checks::lookup(id))
            .collect::<Result<_>>()?;
        let pool = self.pool();
        let reports: Vec<VerdictReport> = pool.install(|| {
            checks
                .into_iter()
                .map(|c| self.run_check(c))
                .collect::<Result<_>>()
        })?;
        let verdict = reports
            .iter()
            .map(|r| r.verdict)
            .max()
            .unwrap_or(Verdict::Pass);
        Ok(SuiteReport {
            p: self.config.p,
            seed: self.config.seed,
            reports,
            verdict,
        })
    }

    fn run_check(&self, check: &checks::Check) -> Result<VerdictReport> {
        let start = Instant::now();
        let budget = self.config.budget;
        let mut acc = Accumulator::default();
        let mut out_of_time = false;

        if let Some(extra) = check.extra {
            acc.absorb(extra(self.config.p), None);
        }

        'corpora: for &kind in check.corpora {
            if kind == CorpusKind::LevelTwo && self.config.n < 2 {
                continue;
            }
            let corpus = self.corpus(kind)?;
            *acc.coverage
                .entry(format!("{}:cap_skipped", kind.label()))
                .or_default() += corpus.cap_skips as u64;
            let limit = corpus.samples.len().min(budget.max_groups);
            const CHUNK: usize = 64;
            for lo in (0..limit).step_by(CHUNK) {
                if start.elapsed().as_secs_f64() > budget.max_seconds {
                    out_of_time = true;
                    break 'corpora;
                }
                let hi = (lo + CHUNK).min(limit);
                let outcomes: Vec<Outcome> = (lo..hi)
                    .into_par_iter()
                    .map(|i| {
                        let sample = &corpus.samples[i];
                        match corpus.profile(i) {
                            Ok(pr) => (check.eval)(sample, pr),
                            Err(e) => Outcome::from_error(e),
                        }
                    })
                    .collect();
                for (i, o) in (lo..hi).zip(outcomes) {
                    acc.sampled += 1;
                    acc.absorb(o, Some(&corpus.samples[i]));
                }
            }
        }

        acc.failures.sort_by(|a, b| a.key.cmp(&b.key));
        acc.flagged.sort_by(|a, b| a.key.cmp(&b.key));
        let verdict = if !acc.failures.is_empty() {
            Verdict::Fail
        } else if out_of_time {
            Verdict::InconclusiveBudget
        } else {
            Verdict::Pass
        };
        Ok(VerdictReport {
            spec: CheckSpec {
                id: check.id.to_string(),
                p: self.config.p,
                n: self.config.n,
                family: "structured+seeded".to_string(),
                seed: self.config.seed,
                budget,
            },
            statement: check.statement,
            groups_sampled: acc.sampled,
            groups_tested: acc.tested,
            coverage: acc.coverage,
            failures: acc.failures,
            flagged: acc.flagged,
            caveat: check.caveat,
            elapsed_secs: self.config.timings.then(|| start.elapsed().as_secs_f64()),
            verdict,
        })
    }
}

fn families_gl2(ring: Ring) -> Vec<Gl2> {
    let r = families::primitive_root(ring);
    vec![
        Gl2::unipotent(ring),
        Gl2::new(ring, 1, 0, 1, 1).expect("unit det"),
        Gl2::diag(ring, r as i64, 1).expect("unit"),
    ]
}

impl CorpusKind {
    fn label(&self) -> &'static str {
        match self {
            CorpusKind::LevelOne => "level1",
            CorpusKind::LevelTwo => "level2",
            CorpusKind::Cyclic => "cyclic",
        }
    }
}

/// Result of evaluating one check on one group.
#[derive(Debug, Default)]
pub(crate) struct Outcome {
    pub applicable: bool,
    pub coverage: Vec<String>,
    pub failures: Vec<(String, serde_json::Value)>,
    pub flagged: Vec<(String, serde_json::Value)>,
}

impl Outcome {
    pub fn skip() -> Outcome {
        Outcome::default()
    }

    pub fn tested() -> Outcome {
        Outcome {
            applicable: true,
            ..Outcome::default()
        }
    }

    pub fn count(&mut self, key: impl Into<String>) {
        self.coverage.push(key.into());
    }

    pub fn fail(&mut self, reason: impl Into<String>, data: serde_json::Value) {
        self.failures.push((reason.into(), data));
    }

    pub fn flag(&mut self, reason: impl Into<String>, data: serde_json::Value) {
        self.flagged.push((reason.into(), data));
    }

    fn from_error(e: &Error) -> Outcome {
        let mut o = Outcome::tested();
        match e {
            Error::CapExceeded { .. } | Error::LinearBudgetExceeded { .. } => {
                o.applicable = false;
                o.count("skipped_budget");
            }
            _ => o.fail("error", serde_json::json!({ "error": e.to_string() })),
        }
        o
    }
}

#[derive(Default)]
struct Accumulator {
    sampled: u64,
    tested: u64,
    coverage: BTreeMap<String, u64>,
    failures: Vec<Witness>,
    flagged: Vec<Witness>,
}

impl Accumulator {
    fn absorb(&mut self, o: Outcome, sample: Option<&Sample>) {
        if o.applicable {
            self.tested += 1;
            if let Some(s) = sample {
                *self
                    .coverage
                    .entry(format!("family:{}", s.family))
                    .or_default() += 1;
            }
        }
        for k in o.coverage {
            *self.coverage.entry(k).or_default() += 1;
        }
        for (reason, data) in o.failures {
            self.failures.push(witness(sample, reason, data));
        }
        for (reason, data) in o.flagged {
            self.flagged.push(witness(sample, reason, data));
        }
    }
}

fn witness(sample: Option<&Sample>, reason: String, data: serde_json::Value) -> Witness {
    match sample {
        Some(s) => Witness {
            family: s.family.clone(),
            modulus: s.group.ring().modulus(),
            generators: s.group.generator_literals(),
            order: s.group.order(),
            reason,
            data,
            key: s.group.canonical_key(),
        },
        None => Witness {
            family: "identity".into(),
            modulus: 0,
            generators: Vec::new(),
            order: 0,
            reason,
            data,
            key: Vec::new(),
        },
    }
}

/// Result of one check on one group.
#[derive(Debug, Clone)]
pub struct Evaluation {
    /// The group met the check's hypotheses.
    pub applicable: bool,
    pub failures: Vec<Witness>,
    pub flagged: Vec<Witness>,
}

/// Re-evaluates `id` on the group described by a witness.
pub fn replay(id: &str, w: &Witness) -> Result<Evaluation> {
    let check = checks::lookup(id)?;
    let ring = Ring::from_modulus(w.modulus)?;
    let gens: Vec<Gl2> = w
        .generators
        .iter()
        .map(|g| Gl2::parse(&format!("{g} mod {}", w.modulus)))
        .collect::<Result<_>>()?;
    let group = MatrixGroup::close(ring, &gens, DEFAULT_CAP)?;
    let sample = Sample {
        family: w.family.clone(),
        group,
    };
    let o = match profile(&sample.group) {
        Ok(pr) => (check.eval)(&sample, &pr),
        Err(e) => Outcome::from_error(&e),
    };
    let applicable = o.applicable;
    let mut acc = Accumulator::default();
    acc.absorb(o, Some(&sample));
    Ok(Evaluation {
        applicable,
        failures: acc.failures,
        flagged: acc.flagged,
    })
}

/// Evaluates `id` on a single group, outside any corpus.
pub fn evaluate(id: &str, family: &str, group: &MatrixGroup) -> Result<Evaluation> {
    let w = Witness {
        family: family.to_string(),
        modulus: group.ring().modulus(),
        generators: group.generator_literals(),
        order: group.order(),
        reason: String::new(),
        data: serde_json::Value::Null,
        key: Vec::new(),
    };
    replay(id, &w)
}
