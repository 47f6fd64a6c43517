//! Batch experiments behind the `mgroups` binary. Every command returns its
//! report as a string so that output assembly stays single-threaded and
//! ordered; parallel work is confined to per-item computations collected in
//! input order.

use std::fmt;

use marked_groups::circle_product::{verify_minimality, MinimalityReport, SSpec, Variant};
use marked_groups::grigorchuk::{limit_trivial, LimitVerdict, OmegaWord, SpinTables};
use marked_groups::lamplighter::{
    dictionary_holds, eval_abcd_word_with, metabelian_violations, structure_report_with, Check, LampElement, Twist,
    ALPHA,
};
use marked_groups::marked_space::{
    agree_radius, find_separating_word, growth_csv, growth_sequence, Agreement, MarkedGroupHandle, Separator,
};
use marked_groups::words::{klein_reduce, FreeWord, Gen, GenWord};
use marked_groups::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub const SCHEMA: u32 = 1;
pub const DEFAULT_SEED: u64 = 42;

/// Upper bounds on user-supplied sizes.
pub mod caps {
    pub const RADIUS: usize = 10;
    pub const AGREE_RADIUS: usize = 8;
    pub const PREFIX: usize = 40;
    pub const SEPARATOR_LEN: usize = 24;
    pub const WORD_LEN: usize = 64;
    pub const SAMPLES: usize = 1_000_000;
    pub const LIMIT_K: usize = 40;
    pub const MODULUS: u32 = 16;
    pub const M: u32 = 32;
    pub const WINDOW: i64 = 200;
    pub const STRUCTURE_WINDOW: i64 = 500;
}

/// Failure of a command, mapped to a process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Exit 1: a checked property does not hold.
    Violation(String),
    /// Exit 2: unparsable input or an argument outside its bounds.
    Usage(String),
    /// Exit 3: input outside the supported domain.
    Unsupported(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Violation(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Unsupported(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Violation(m) | CliError::Usage(m) | CliError::Unsupported(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::UnsupportedOmega(_) | Error::EventuallyConstant(_) => CliError::Unsupported(e.to_string()),
            Error::ParseOmega { .. }
            | Error::ParseWord { .. }
            | Error::InvalidArgument(_)
            | Error::BadModulus(_)
            | Error::RankMismatch(..)
            | Error::GeneratorOutOfRange { .. } => CliError::Usage(e.to_string()),
            other => CliError::Violation(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// A finished report. `violation` selects exit code 1 after the report has
/// been written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub body: String,
    pub violation: bool,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Outcome { body, violation: false }
    }
}

fn cap<T: PartialOrd + fmt::Display>(name: &str, value: T, lo: T, hi: T) -> CliResult<T> {
    if value < lo || value > hi {
        return Err(CliError::Usage(format!("{name} = {value} outside {lo}..={hi}")));
    }
    Ok(value)
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

/// Tables and the lamplighter dictionary must be intact before any
/// experiment runs.
pub fn startup_check() -> CliResult<()> {
    if !SpinTables::verify() {
        return Err(CliError::Violation("spin tables do not match (a,a,e), (a,e,a), (e,a,a)".into()));
    }
    if !dictionary_holds(ALPHA) {
        return Err(CliError::Violation("lamplighter dictionary violates a defining relation".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Family {
    /// `G_ω` on `a, b, c, d`.
    Grig,
    /// `L_ω = ⟨d, ab⟩` on `x, y`.
    L,
    /// `ℤ_n ≀ ℤ` on `s, t`.
    Lamp,
    /// Free group on `x, y, …`.
    Free,
    /// Limit of `G_{0^k (012)^∞}` decided over a window of `k`.
    Limit,
}

pub fn parse_omega(s: &str) -> CliResult<OmegaWord> {
    let om: OmegaWord = s.parse()?;
    if om.is_constant() {
        eprintln!("note: constant omega {om} routed to the lamplighter model");
    }
    Ok(om)
}

fn need_omega(omega: Option<&str>) -> CliResult<OmegaWord> {
    parse_omega(omega.ok_or_else(|| CliError::Usage("--omega is required for this family".into()))?)
}

pub fn handle(family: Family, omega: Option<&str>, modulus: u32, rank: usize) -> CliResult<MarkedGroupHandle> {
    Ok(match family {
        Family::Grig => MarkedGroupHandle::grigorchuk(&need_omega(omega)?)?,
        Family::L => MarkedGroupHandle::grigorchuk_l(&need_omega(omega)?)?,
        Family::Lamp => MarkedGroupHandle::lamplighter(cap("modulus", modulus, 2, caps::MODULUS)?)?,
        Family::Free => MarkedGroupHandle::free(cap("rank", rank, 1, 8)?),
        Family::Limit => return Err(CliError::Usage("the limit family only supports wp".into())),
    })
}

/// Word problem: prints `trivial`, `nontrivial` or `unstable`.
pub fn wp(family: Family, omega: Option<&str>, word: &str, modulus: u32, rank: usize) -> CliResult<Outcome> {
    let word: String = word.chars().filter(|c| !c.is_whitespace()).collect();
    let verdict = match family {
        Family::Limit => {
            let w = klein_reduce(&GenWord::parse(&word)?);
            cap("word length", w.len(), 0, caps::WORD_LEN)?;
            let window = marked_groups::grigorchuk::default_limit_window(&w);
            match limit_trivial(&w, window)? {
                LimitVerdict::Trivial => "trivial",
                LimitVerdict::Nontrivial => "nontrivial",
                LimitVerdict::Unstable => "unstable",
            }
        }
        _ => {
            let h = handle(family, omega, modulus, rank)?;
            let w = h.parse_word(&word)?;
            if h.is_trivial(&w)? {
                "trivial"
            } else {
                "nontrivial"
            }
        }
    };
    Ok(Outcome::ok(format!("{verdict}\n")))
}

/// Growth table `n,gamma` for `n = 0..=n_max`.
pub fn growth(family: Family, omega: Option<&str>, modulus: u32, rank: usize, n_max: usize) -> CliResult<Outcome> {
    cap("n-max", n_max, 0, caps::RADIUS)?;
    let h = handle(family, omega, modulus, rank)?;
    Ok(Outcome::ok(growth_csv(&growth_sequence(&h, n_max)?)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ConvergeFamily {
    /// `L_{0^j (012)^∞}` against `L_{000…}`.
    L,
    /// `G_{0^j (012)^∞}` against `G_{000…}`.
    Grig,
}

/// Agreement radii of the approximants `0^j (012)^∞` with the constant
/// limit, one row per `j`. The CSV has columns `j,agree_N,exact`.
pub fn converge_rows(family: ConvergeFamily, j_from: usize, j_to: usize, n_max: usize) -> CliResult<Vec<(usize, Agreement)>> {
    cap("j-to", j_to, j_from, caps::PREFIX)?;
    cap("n-max", n_max, 0, caps::AGREE_RADIUS)?;
    let build = |om: &OmegaWord| match family {
        ConvergeFamily::L => MarkedGroupHandle::grigorchuk_l(om),
        ConvergeFamily::Grig => MarkedGroupHandle::grigorchuk(om),
    };
    let limit = build(&OmegaWord::constant(0))?;
    let rows: Result<Vec<_>, Error> = (j_from..=j_to)
        .into_par_iter()
        .map(|j| Ok((j, agree_radius(&build(&OmegaWord::zeros_then_012(j))?, &limit, n_max)?)))
        .collect();
    Ok(rows?)
}

pub fn converge(family: ConvergeFamily, j_from: usize, j_to: usize, n_max: usize) -> CliResult<Outcome> {
    let rows = converge_rows(family, j_from, j_to, n_max)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["j", "agree_N", "exact"]).expect("in-memory write");
    for (j, a) in rows {
        w.serialize((j, a.radius_value(), a.exact)).expect("in-memory write");
    }
    Ok(Outcome::ok(String::from_utf8(w.into_inner().expect("flush")).expect("ascii")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeparatorReport {
    pub word: String,
    pub length: usize,
    pub is_square: bool,
    /// `"first"` or `"second"`: the group where the word is trivial.
    pub trivial_in: &'static str,
    pub oracle_verified: bool,
    /// The word's fingerprint equals the identity's exactly in the group
    /// where it is trivial.
    pub fingerprint_verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeparateReport {
    pub schema: u32,
    pub omega1: String,
    pub omega2: String,
    pub l_max: usize,
    pub four_generator: Option<SeparatorReport>,
    pub two_generator: Option<SeparatorReport>,
}

fn fingerprint_check(h1: &MarkedGroupHandle, h2: &MarkedGroupHandle, s: &Separator, l_max: usize) -> CliResult<bool> {
    let len = 2 * l_max + 2;
    let identity = FreeWord::empty(h1.rank());
    let is_id = |h: &MarkedGroupHandle| -> CliResult<Option<bool>> {
        Ok(match (h.fingerprint(&s.word, len)?, h.fingerprint(&identity, len)?) {
            (Some((a, _)), Some((b, _))) => Some(a == b),
            _ => None,
        })
    };
    let (f1, f2) = (is_id(h1)?, is_id(h2)?);
    Ok(f1 == Some(s.trivial_in_first) && f2 == Some(!s.trivial_in_first))
}

fn separator_report(h1: &MarkedGroupHandle, h2: &MarkedGroupHandle, l_max: usize) -> CliResult<Option<SeparatorReport>> {
    let Some(s) = find_separating_word(h1, h2, l_max)? else { return Ok(None) };
    let word = s.word.display(h1.alphabet()).to_string();
    Ok(Some(SeparatorReport {
        word,
        length: s.word.len(),
        is_square: s.is_square,
        trivial_in: if s.trivial_in_first { "first" } else { "second" },
        oracle_verified: s.verified,
        fingerprint_verified: fingerprint_check(h1, h2, &s, l_max)?,
    }))
}

/// Shortest separating words for `G_{ω₁}, G_{ω₂}` and for `L_{ω₁}, L_{ω₂}`.
pub fn separate(omega1: &str, omega2: &str, l_max: usize) -> CliResult<Outcome> {
    cap("l-max", l_max, 0, caps::SEPARATOR_LEN)?;
    let (o1, o2) = (parse_omega(omega1)?, parse_omega(omega2)?);
    let (g1, g2) = (MarkedGroupHandle::grigorchuk(&o1)?, MarkedGroupHandle::grigorchuk(&o2)?);
    let (l1, l2) = (MarkedGroupHandle::grigorchuk_l(&o1)?, MarkedGroupHandle::grigorchuk_l(&o2)?);
    let (four, two) = rayon::join(|| separator_report(&g1, &g2, l_max), || separator_report(&l1, &l2, l_max));
    let report = SeparateReport {
        schema: SCHEMA,
        omega1: o1.to_string(),
        omega2: o2.to_string(),
        l_max,
        four_generator: four?,
        two_generator: two?,
    };
    let bad = [&report.four_generator, &report.two_generator]
        .into_iter()
        .flatten()
        .any(|s| !s.oracle_verified || !s.fingerprint_verified);
    Ok(Outcome { body: json(&report), violation: bad })
}

/// A Klein-reduced word of length `1..=max_len`: `a` alternates with letters
/// drawn uniformly from `b, c, d`, starting with either kind.
pub fn random_alternating(rng: &mut ChaCha8Rng, max_len: usize) -> GenWord {
    let len = rng.gen_range(1..=max_len);
    let a_first: bool = rng.gen();
    GenWord(
        (0..len)
            .map(|i| if (i % 2 == 0) == a_first { Gen::A } else { Gen::BCD[rng.gen_range(0..3)] })
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WordVerdict {
    pub word: String,
    pub limit: LimitVerdict,
    /// Verdict over the deeper window, for words unstable at first.
    pub rerun: Option<LimitVerdict>,
    pub model_trivial: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Thm2Report {
    pub schema: u32,
    pub max_len: usize,
    pub samples: usize,
    pub seed: u64,
    pub k_window: [usize; 2],
    pub rerun_window: [usize; 2],
    pub agreements: usize,
    pub disagreements: usize,
    /// Sampled words that are trivial in the model.
    pub trivial_in_model: usize,
    pub unstable: usize,
    pub unstable_resolved: usize,
    pub unstable_fraction: f64,
    pub fixed: Vec<WordVerdict>,
    pub disagreement_examples: Vec<WordVerdict>,
}

fn judge(w: &GenWord, ks: std::ops::RangeInclusive<usize>, rerun: std::ops::RangeInclusive<usize>) -> CliResult<WordVerdict> {
    let limit = limit_trivial(w, ks)?;
    let rerun = match limit {
        LimitVerdict::Unstable => Some(limit_trivial(w, rerun)?),
        _ => None,
    };
    Ok(WordVerdict {
        word: w.to_string(),
        limit,
        rerun,
        model_trivial: eval_abcd_word_with(w, Gen::D, ALPHA).is_identity(),
    })
}

fn agrees(v: &WordVerdict) -> bool {
    let decided = match v.limit {
        LimitVerdict::Unstable => v.rerun.unwrap_or(LimitVerdict::Unstable),
        other => other,
    };
    match decided {
        LimitVerdict::Trivial => v.model_trivial,
        LimitVerdict::Nontrivial => !v.model_trivial,
        LimitVerdict::Unstable => false,
    }
}

/// Compares triviality in the limit of `G_{0^k (012)^∞}` with evaluation in
/// `L ⋊ ℤ₂` on random Klein-reduced words.
pub fn thm2_check(max_len: usize, samples: usize, seed: u64, k_min: usize, k_max: usize) -> CliResult<Outcome> {
    cap("max-len", max_len, 1, caps::WORD_LEN)?;
    cap("samples", samples, 1, caps::SAMPLES)?;
    cap("k-min", k_min, 0, caps::LIMIT_K)?;
    cap("k-max", k_max, k_min + 2, caps::LIMIT_K)?;
    let ks = k_min..=k_max;
    let rerun = k_max + 1..=k_max + 1 + (k_max - k_min).max(4);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words: Vec<GenWord> = (0..samples).map(|_| random_alternating(&mut rng, max_len)).collect();
    let verdicts: Vec<WordVerdict> =
        words.par_iter().map(|w| judge(w, ks.clone(), rerun.clone())).collect::<CliResult<_>>()?;
    let fixed = ["bcd", "d", "adad", "abab"]
        .iter()
        .map(|s| judge(&GenWord::parse(s).expect("static word"), ks.clone(), rerun.clone()))
        .collect::<CliResult<Vec<_>>>()?;

    let unstable = verdicts.iter().filter(|v| v.limit == LimitVerdict::Unstable).count();
    let disagreeing: Vec<&WordVerdict> = verdicts.iter().chain(&fixed).filter(|v| !agrees(v)).collect();
    let unstable_resolved = verdicts.iter().filter(|v| v.limit == LimitVerdict::Unstable && agrees(v)).count();
    let report = Thm2Report {
        schema: SCHEMA,
        max_len,
        samples,
        seed,
        k_window: [k_min, k_max],
        rerun_window: [*rerun.start(), *rerun.end()],
        agreements: verdicts.len() - verdicts.iter().filter(|v| !agrees(v)).count(),
        disagreements: disagreeing.len(),
        trivial_in_model: verdicts.iter().filter(|v| v.model_trivial).count(),
        unstable,
        unstable_resolved,
        unstable_fraction: unstable as f64 / samples as f64,
        disagreement_examples: disagreeing.iter().take(10).map(|&v| v.clone()).collect(),
        fixed,
    };
    Ok(Outcome { violation: report.disagreements > 0, body: json(&report) })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalityOutput {
    pub schema: u32,
    #[serde(flatten)]
    pub report: MinimalityReport,
}

pub fn minimality(n: u32, m: u32, window: i64, variant: Variant) -> CliResult<Outcome> {
    cap("n", n, 2, caps::MODULUS)?;
    cap("m", m, 1, caps::M)?;
    cap("window", window, m as i64 + 1, caps::WINDOW)?;
    let report = verify_minimality(n, &SSpec::new(m, variant)?, window)?;
    Ok(Outcome { violation: !report.pass(), body: json(&MinimalityOutput { schema: SCHEMA, report }) })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub relator: &'static str,
    pub dead: char,
    pub trivial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureOutput {
    pub schema: u32,
    pub window: i64,
    pub negative_control: bool,
    pub checks: Vec<Check>,
    pub relations: Vec<RelationCheck>,
    pub metabelian_violations: usize,
    pub all_pass: bool,
    /// With the negative control: whether the broken twist was caught.
    pub induced_failure_detected: Option<bool>,
}

fn no_twist(u: &LampElement) -> LampElement {
    u.clone()
}

/// Structure of `D` and `K` inside the model, the five defining relations
/// under every relabeling, and metabelian identities. The negative control
/// replaces the twist by the identity, which must be detected.
pub fn structure(window: i64, negative_control: bool, seed: u64) -> CliResult<Outcome> {
    cap("window", window, 0, caps::STRUCTURE_WINDOW)?;
    let twist: Twist = if negative_control { no_twist } else { ALPHA };
    let report = structure_report_with(window, twist);
    let relations: Vec<RelationCheck> = ["aa", "bb", "cc", "dd", "bcd"]
        .iter()
        .flat_map(|&r| {
            Gen::BCD.iter().map(move |&dead| RelationCheck {
                relator: r,
                dead: dead.as_char(),
                trivial: eval_abcd_word_with(&GenWord::parse(r).expect("static word"), dead, twist).is_identity(),
            })
        })
        .collect();
    let metabelian = metabelian_violations(1000, 2, seed) + metabelian_violations(1000, 3, seed);
    let all_pass = report.all_pass() && relations.iter().all(|r| r.trivial) && metabelian == 0;
    let out = StructureOutput {
        schema: SCHEMA,
        window,
        negative_control,
        checks: report.checks,
        relations,
        metabelian_violations: metabelian,
        all_pass,
        induced_failure_detected: negative_control.then_some(!all_pass),
    };
    let violation = if negative_control { all_pass } else { !all_pass };
    Ok(Outcome { violation, body: json(&out) })
}
