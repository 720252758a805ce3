//! Command definitions and dispatch.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use covol_core::bounds::{
    brauer_siegel_class_bound, class_number_bound, friedman_regulator_lower, ideal_count_upper,
    maximal_chain, minimal_chain, odlyzko_check, vigneras_chain, BoundsConfig, ChainReport,
};
use covol_core::covolume::{
    covolume_floor, covolume_gamma1, index_bound_gamma, minimal_covolume_lower,
};
use covol_core::interval::BoundedValue;
use covol_core::numfield::{class_number_oracle, count_ideals, dedekind_zeta, NumberField};
use covol_core::quatalg::QuaternionAlgebra;

use crate::corpus::{ingest_corpus, IngestError, ValidatedCorpus};
use crate::report::{chain_to_value, interval, num, OutputFormat, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_HARD_ERROR: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_CHAIN_FAILURE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "covol",
    version,
    about = "Covolumes, class-number bounds, and counting-chain verification for quaternion-algebra lattices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: TopCommand,
    /// Output format for the report.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: OutputFormat,
    /// Reject unknown corpus keys; fail the run on any chain-link failure.
    #[arg(long, global = true)]
    pub strict: bool,
}

#[derive(Debug, Subcommand)]
pub enum TopCommand {
    /// Number-field records: validation and zeta values.
    Field {
        #[command(subcommand)]
        cmd: FieldCmd,
    },
    /// Integral-ideal counting.
    Ideals {
        #[command(subcommand)]
        cmd: IdealsCmd,
    },
    /// Quaternion-algebra level quantities.
    Algebra {
        #[command(subcommand)]
        cmd: AlgebraCmd,
    },
    /// Class-number and discriminant bounds; counting-chain verifiers.
    Bounds {
        #[command(subcommand)]
        cmd: BoundsCmd,
    },
    /// Corpus maintenance.
    Corpus {
        #[command(subcommand)]
        cmd: CorpusCmd,
    },
}

#[derive(Debug, Subcommand)]
pub enum FieldCmd {
    /// Validate one field and emit its invariant table.
    Info {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        label: String,
    },
    /// Rigorous enclosure of zeta_k(2) from the truncated Euler product.
    Zeta {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        label: String,
        #[arg(long = "prime-bound", default_value_t = 10_000)]
        prime_bound: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum IdealsCmd {
    /// Exact number of integral ideals of norm at most --max-norm.
    Count {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        label: String,
        #[arg(long = "max-norm")]
        max_norm: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum AlgebraCmd {
    /// Covolume of the unit-norm lattice, with floor and index bounds.
    Covolume {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        algebra: String,
        #[arg(long = "prime-bound", default_value_t = 10_000)]
        prime_bound: u64,
    },
    /// Type-number upper bounds.
    Typebound {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        algebra: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum BoundsCmd {
    /// Class-number bounds (discriminant form and Brauer-Siegel form)
    /// plus the Friedman regulator check, per field.
    Lemma31 {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        label: Option<String>,
        #[arg(long = "prime-bound", default_value_t = 10_000)]
        prime_bound: u64,
    },
    /// Discriminant lower-bound diagnostic: per-field minimal C.
    Odlyzko {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        label: Option<String>,
        #[arg(long = "constant-C", default_value_t = 4.5)]
        constant_c: f64,
    },
    /// Type-number counting chain (V^2 family bound).
    Vigneras(ChainArgs),
    /// Minimal-covolume counting chain (V^18 family bound).
    Minimal(ChainArgs),
    /// Maximal-lattice counting chain (V^20 family bound).
    Maximal(ChainArgs),
}

#[derive(Debug, clap::Args)]
pub struct ChainArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// Algebra label; all algebras when omitted.
    #[arg(long)]
    pub algebra: Option<String>,
    /// Volume V; defaults to the upper endpoint of covolume_gamma1.
    #[arg(long)]
    pub volume: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    #[arg(long = "constant-C", default_value_t = 4.5)]
    pub constant_c: f64,
    #[arg(long = "prime-bound", default_value_t = 10_000)]
    pub prime_bound: u64,
}

#[derive(Debug, Subcommand)]
pub enum CorpusCmd {
    /// Validate every corpus entry and emit the normalized corpus.
    Verify {
        #[arg(long)]
        corpus: PathBuf,
    },
}

/// A fully rendered run: what to print where, and the exit code.
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn hard_error(message: String) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
            code: EXIT_HARD_ERROR,
        }
    }
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not errors.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_HARD_ERROR,
            };
            let rendered = e.render().to_string();
            return if code == EXIT_OK {
                Outcome {
                    stdout: rendered,
                    stderr: String::new(),
                    code,
                }
            } else {
                Outcome {
                    stdout: String::new(),
                    stderr: rendered,
                    code,
                }
            };
        }
    };
    execute(cli)
}

fn execute(cli: Cli) -> Outcome {
    let format = cli.format;
    let strict = cli.strict;
    let result = match &cli.command {
        TopCommand::Field { cmd } => match cmd {
            FieldCmd::Info { corpus, label } => with_corpus(corpus, strict, |c, warn| {
                field_info(c, label).map(|r| (r, warn))
            }),
            FieldCmd::Zeta {
                corpus,
                label,
                prime_bound,
            } => with_corpus(corpus, strict, |c, warn| {
                field_zeta(c, label, *prime_bound).map(|r| (r, warn))
            }),
        },
        TopCommand::Ideals { cmd } => match cmd {
            IdealsCmd::Count {
                corpus,
                label,
                max_norm,
            } => with_corpus(corpus, strict, |c, warn| {
                ideals_count(c, label, *max_norm).map(|r| (r, warn))
            }),
        },
        TopCommand::Algebra { cmd } => match cmd {
            AlgebraCmd::Covolume {
                corpus,
                algebra,
                prime_bound,
            } => with_corpus(corpus, strict, |c, warn| {
                algebra_covolume(c, algebra, *prime_bound).map(|r| (r, warn))
            }),
            AlgebraCmd::Typebound { corpus, algebra } => {
                with_corpus(corpus, strict, |c, warn| {
                    algebra_typebound(c, algebra).map(|r| (r, warn))
                })
            }
        },
        TopCommand::Bounds { cmd } => match cmd {
            BoundsCmd::Lemma31 {
                corpus,
                label,
                prime_bound,
            } => with_corpus(corpus, strict, |c, warn| {
                bounds_lemma31(c, label.as_deref(), *prime_bound).map(|r| (r, warn))
            }),
            BoundsCmd::Odlyzko {
                corpus,
                label,
                constant_c,
            } => with_corpus(corpus, strict, |c, warn| {
                bounds_odlyzko(c, label.as_deref(), *constant_c).map(|r| (r, warn))
            }),
            BoundsCmd::Vigneras(args) => with_corpus(&args.corpus, strict, |c, warn| {
                bounds_chain(c, args, ChainKind::Vigneras).map(|r| (r, warn))
            }),
            BoundsCmd::Minimal(args) => with_corpus(&args.corpus, strict, |c, warn| {
                bounds_chain(c, args, ChainKind::Minimal).map(|r| (r, warn))
            }),
            BoundsCmd::Maximal(args) => with_corpus(&args.corpus, strict, |c, warn| {
                bounds_chain(c, args, ChainKind::Maximal).map(|r| (r, warn))
            }),
        },
        TopCommand::Corpus { cmd } => match cmd {
            CorpusCmd::Verify { corpus } => corpus_verify(corpus, strict),
        },
    };

    match result {
        Ok((mut report, warnings)) => {
            if strict && report.has_link_failures() {
                report.status = EXIT_CHAIN_FAILURE;
            }
            let code = report.status;
            Outcome {
                stdout: report.render(format),
                stderr: warnings
                    .iter()
                    .map(|w| format!("warning: {w}\n"))
                    .collect(),
                code,
            }
        }
        Err(outcome) => outcome,
    }
}

type CommandResult = Result<(Report, Vec<String>), Outcome>;

fn with_corpus<F>(path: &Path, strict: bool, f: F) -> CommandResult
where
    F: FnOnce(&ValidatedCorpus, Vec<String>) -> CommandResult,
{
    match ingest_corpus(path, strict) {
        Ok(corpus) => {
            let warnings = corpus.warnings.clone();
            let mut result = f(&corpus, warnings);
            if let Ok((report, _)) = &mut result {
                report.arg("corpus", path.display());
            }
            result
        }
        Err(IngestError::Hard(e)) => Err(Outcome::hard_error(e.to_string())),
        Err(IngestError::Validation(failures)) => {
            let mut report = Report::new("corpus validation");
            report.arg("corpus", path.display());
            for failure in &failures {
                report.items.push(json!({
                    "location": failure.location,
                    "label": failure.label,
                    "violations": failure.messages,
                }));
                report.summary.errors += failure.messages.len();
            }
            report.status = EXIT_VALIDATION;
            Ok((report, vec![]))
        }
    }
}

fn lookup_field<'a>(
    corpus: &'a ValidatedCorpus,
    label: &str,
) -> Result<&'a NumberField, Outcome> {
    corpus
        .fields
        .get(label)
        .ok_or_else(|| Outcome::hard_error(format!("no field labeled {label:?} in the corpus")))
}

fn lookup_algebra<'a>(
    corpus: &'a ValidatedCorpus,
    label: &str,
) -> Result<&'a QuaternionAlgebra, Outcome> {
    corpus
        .algebras
        .get(label)
        .ok_or_else(|| Outcome::hard_error(format!("no algebra labeled {label:?} in the corpus")))
}

fn zeta2_for(
    field: &NumberField,
    prime_bound: u64,
) -> Result<BoundedValue, Outcome> {
    dedekind_zeta(field, 2.0, prime_bound)
        .map_err(|e| Outcome::hard_error(format!("zeta({}): {e}", field.label())))
}

fn field_info(corpus: &ValidatedCorpus, label: &str) -> Result<Report, Outcome> {
    let field = lookup_field(corpus, label)?;
    let mut report = Report::new("field info");
    report.arg("label", label);

    let mut checks = vec![
        json!({"name": "signature (Sturm count)", "pass": true}),
        json!({"name": "discriminant sign (-1)^r2", "pass": true}),
        json!({"name": "|disc(f)| = index^2 * d_k", "pass": true}),
        json!({"name": "certified scalars (h_k, omega_k, Reg_k)", "pass": true}),
    ];
    let mut oracle = Value::Null;
    if field.is_imaginary_quadratic() {
        let h = class_number_oracle(field.signed_discriminant())
            .map_err(|e| Outcome::hard_error(format!("class number oracle: {e}")))?;
        checks.push(json!({
            "name": "class number oracle (reduced forms)",
            "pass": h == field.h_k(),
        }));
        oracle = json!(h);
    }
    for c in &checks {
        report.tally_check(c["pass"].as_bool().unwrap_or(false));
    }

    let disc = covol_core::poly::poly_discriminant(field.poly()).expect("validated");
    let mut item = serde_json::Map::new();
    item.insert("label".into(), json!(field.label()));
    item.insert("degree".into(), json!(field.degree()));
    item.insert("r1".into(), json!(field.r1()));
    item.insert("r2".into(), json!(field.r2()));
    item.insert("d_k".into(), json!(field.d_k()));
    item.insert("h_k".into(), json!(field.h_k()));
    item.insert("reg_k".into(), num(field.reg_k()));
    item.insert("omega_k".into(), json!(field.omega_k()));
    item.insert(
        "poly".into(),
        json!(field.poly().iter().map(|c| c.to_string()).collect::<Vec<_>>()),
    );
    item.insert("poly_discriminant".into(), json!(disc.to_string()));
    item.insert("index".into(), json!(field.index().to_string()));
    item.insert("index_sq".into(), json!(field.index_sq().to_string()));
    item.insert(
        "signed_discriminant".into(),
        json!(field.signed_discriminant()),
    );
    if !oracle.is_null() {
        item.insert("class_number_oracle".into(), oracle);
    }
    item.insert("checks".into(), json!(checks));
    report.items.push(Value::Object(item));
    Ok(report)
}

fn field_zeta(corpus: &ValidatedCorpus, label: &str, prime_bound: u64) -> Result<Report, Outcome> {
    let field = lookup_field(corpus, label)?;
    let zeta = zeta2_for(field, prime_bound)?;
    let mut report = Report::new("field zeta");
    report.arg("label", label);
    report.arg("prime-bound", prime_bound);
    report.items.push(json!({
        "label": field.label(),
        "s": 2,
        "prime_bound": prime_bound,
        "zeta": interval(&zeta),
        "width": num(zeta.width()),
    }));
    Ok(report)
}

fn ideals_count(corpus: &ValidatedCorpus, label: &str, max_norm: f64) -> Result<Report, Outcome> {
    let field = lookup_field(corpus, label)?;
    let count = count_ideals(field, max_norm)
        .map_err(|e| Outcome::hard_error(format!("ideal count: {e}")))?;
    let bound = ideal_count_upper(field.degree(), max_norm);
    let within = (count as f64) <= bound;
    let mut report = Report::new("ideals count");
    report.arg("label", label);
    report.arg("max-norm", max_norm);
    report.tally_check(within);
    report.items.push(json!({
        "label": field.label(),
        "max_norm": num(max_norm),
        "count": count,
        "ideal_count_upper": num(bound),
        "within_bound": within,
    }));
    Ok(report)
}

fn algebra_covolume(
    corpus: &ValidatedCorpus,
    label: &str,
    prime_bound: u64,
) -> Result<Report, Outcome> {
    let alg = lookup_algebra(corpus, label)?;
    let zeta = zeta2_for(alg.field(), prime_bound)?;
    let result = covolume_gamma1(alg, &zeta);
    let floor = covolume_floor(alg.field());
    let floor_holds = floor.lo <= result.value.lo + 1e-12 * result.value.lo.max(1.0);
    let min = minimal_covolume_lower(alg, &zeta);
    let mut report = Report::new("algebra covolume");
    report.arg("algebra", label);
    report.arg("prime-bound", prime_bound);
    report.tally_check(floor_holds);
    report.items.push(json!({
        "algebra": alg.label(),
        "field": alg.field().label(),
        "prime_bound": prime_bound,
        "zeta2": interval(&zeta),
        "covolume_gamma1": interval(&result.value),
        "formula_inputs": {
            "d_k": result.inputs.d_k,
            "s": result.inputs.s,
            "r1": result.inputs.r1,
            "r2": result.inputs.r2,
            "phi": result.inputs.phi.to_string(),
        },
        "covolume_floor": interval(&floor),
        "floor_below_covolume": floor_holds,
        "index_bound": index_bound_gamma(alg).to_string(),
        "minimal_covolume_lower": {
            "exact_form": interval(&min.exact_form),
            "simplified": num(min.simplified),
        },
    }));
    Ok(report)
}

fn algebra_typebound(corpus: &ValidatedCorpus, label: &str) -> Result<Report, Outcome> {
    let alg = lookup_algebra(corpus, label)?;
    let field = alg.field();
    let bound = alg.type_number_bound();
    // coarse <= refined is expected once d_k >= exp(4 r1 - 4.5); both
    // sides are reported, the comparison is not assumed.
    let threshold = (4.0 * field.r1() as f64 - 4.5).exp();
    let threshold_met = field.d_k() as f64 >= threshold;
    let coarse_f64 = num_traits::ToPrimitive::to_f64(&bound.coarse).unwrap_or(f64::INFINITY);
    let mut report = Report::new("algebra typebound");
    report.arg("algebra", label);
    report.tally_check(!threshold_met || coarse_f64 <= bound.refined);
    report.items.push(json!({
        "algebra": alg.label(),
        "field": field.label(),
        "coarse_2r1_hk": bound.coarse.to_string(),
        "refined_242_d34": num(bound.refined),
        "discriminant_threshold": num(threshold),
        "discriminant_threshold_met": threshold_met,
        "coarse_le_refined": coarse_f64 <= bound.refined,
        "omega2": alg.omega2(),
        "phi_discriminant": alg.phi_discriminant().to_string(),
    }));
    Ok(report)
}

fn bounds_lemma31(
    corpus: &ValidatedCorpus,
    label: Option<&str>,
    prime_bound: u64,
) -> Result<Report, Outcome> {
    let mut report = Report::new("bounds lemma31");
    if let Some(l) = label {
        report.arg("label", l);
    }
    report.arg("prime-bound", prime_bound);
    let s = BoundsConfig::default().brauer_siegel_s;
    for (name, field) in &corpus.fields {
        if label.is_some_and(|l| l != name) {
            continue;
        }
        let disc_bound = class_number_bound(field);
        let disc_holds = field.h_k() as f64 <= disc_bound;
        let zeta = dedekind_zeta(field, s, prime_bound)
            .map_err(|e| Outcome::hard_error(format!("zeta({name}): {e}")))?;
        let bs = brauer_siegel_class_bound(field, s, &zeta)
            .map_err(|e| Outcome::hard_error(format!("brauer-siegel({name}): {e}")))?;
        let bs_holds = field.h_k() as f64 <= bs.hi;
        let friedman = friedman_regulator_lower(field);
        report.tally_check(disc_holds);
        report.tally_check(bs_holds);
        report.tally_check(friedman.holds);
        report.items.push(json!({
            "label": name,
            "h_k": field.h_k(),
            "discriminant_bound": num(disc_bound),
            "discriminant_bound_holds": disc_holds,
            "brauer_siegel_s": num(s),
            "brauer_siegel": interval(&bs),
            "brauer_siegel_holds": bs_holds,
            "friedman": {
                "lower_bound": num(friedman.lower_bound),
                "reg_k": num(friedman.reg_k),
                "holds": friedman.holds,
            },
        }));
    }
    if let Some(wanted) = label {
        if report.items.is_empty() {
            return Err(Outcome::hard_error(format!(
                "no field labeled {wanted:?} in the corpus"
            )));
        }
    }
    Ok(report)
}

fn bounds_odlyzko(
    corpus: &ValidatedCorpus,
    label: Option<&str>,
    constant_c: f64,
) -> Result<Report, Outcome> {
    let config = BoundsConfig::with_c(constant_c);
    config
        .validate()
        .map_err(|e| Outcome::hard_error(e.to_string()))?;
    let mut report = Report::new("bounds odlyzko");
    if let Some(l) = label {
        report.arg("label", l);
    }
    report.arg("constant-C", constant_c);
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut failing: Vec<&str> = Vec::new();
    for (name, field) in &corpus.fields {
        if label.is_some_and(|l| l != name) {
            continue;
        }
        let check = odlyzko_check(field, &config);
        report.tally_check(check.holds);
        if !check.holds {
            failing.push(name);
        }
        worst = worst.max(check.minimal_c);
        report.items.push(json!({
            "label": name,
            "minimal_c": num(check.minimal_c),
            "holds_at_configured_c": check.holds,
        }));
    }
    if let Some(wanted) = label {
        if report.items.is_empty() {
            return Err(Outcome::hard_error(format!(
                "no field labeled {wanted:?} in the corpus"
            )));
        }
    }
    report.details = json!({
        "configured_c": num(constant_c),
        "minimal_valid_c_over_corpus": num(worst),
        "fields_failing_at_configured_c": failing,
    });
    Ok(report)
}

enum ChainKind {
    Vigneras,
    Minimal,
    Maximal,
}

impl ChainKind {
    fn name(&self) -> &'static str {
        match self {
            ChainKind::Vigneras => "bounds vigneras",
            ChainKind::Minimal => "bounds minimal",
            ChainKind::Maximal => "bounds maximal",
        }
    }
}

fn bounds_chain(corpus: &ValidatedCorpus, args: &ChainArgs, kind: ChainKind) -> Result<Report, Outcome> {
    let config = BoundsConfig::with_c(args.constant_c).with_epsilon(args.epsilon);
    config
        .validate()
        .map_err(|e| Outcome::hard_error(e.to_string()))?;
    let mut report = Report::new(kind.name());
    if let Some(a) = &args.algebra {
        report.arg("algebra", a);
    }
    if let Some(v) = args.volume {
        report.arg("volume", v);
    }
    report.arg("epsilon", args.epsilon);
    report.arg("constant-C", args.constant_c);
    report.arg("prime-bound", args.prime_bound);

    let selected: Vec<&QuaternionAlgebra> = match &args.algebra {
        Some(label) => vec![lookup_algebra(corpus, label)?],
        None => corpus.algebras.values().collect(),
    };

    for alg in selected {
        let zeta = zeta2_for(alg.field(), args.prime_bound)?;
        let (volume, source) = match args.volume {
            Some(v) => (v, "user"),
            None => (
                covolume_gamma1(alg, &zeta).value.hi,
                "computed: covolume_gamma1 upper endpoint",
            ),
        };
        let chain: ChainReport = match kind {
            ChainKind::Vigneras => vigneras_chain(alg, volume, &config),
            ChainKind::Minimal => minimal_chain(alg, &zeta, volume, &config),
            ChainKind::Maximal => maximal_chain(alg, &zeta, volume, &config),
        }
        .map_err(|e| Outcome::hard_error(format!("{}: {e}", alg.label())))?;
        report.tally_chain(&chain);
        report.items.push(json!({
            "algebra": alg.label(),
            "volume_source": source,
            "chain": chain_to_value(&chain),
        }));
    }
    Ok(report)
}

fn corpus_verify(path: &Path, strict: bool) -> CommandResult {
    let corpus = match ingest_corpus(path, strict) {
        Ok(c) => c,
        Err(IngestError::Hard(e)) => return Err(Outcome::hard_error(e.to_string())),
        Err(IngestError::Validation(failures)) => {
            let mut report = Report::new("corpus verify");
            report.arg("corpus", path.display());
            for failure in &failures {
                report.items.push(json!({
                    "location": failure.location,
                    "label": failure.label,
                    "ok": false,
                    "violations": failure.messages,
                }));
                report.summary.errors += failure.messages.len();
            }
            report.status = EXIT_VALIDATION;
            return Ok((report, vec![]));
        }
    };
    let warnings = corpus.warnings.clone();
    let mut report = Report::new("corpus verify");
    report.arg("corpus", path.display());
    for label in corpus.fields.keys() {
        report.tally_check(true);
        report
            .items
            .push(json!({"label": label, "kind": "field", "ok": true}));
    }
    for label in corpus.algebras.keys() {
        report.tally_check(true);
        report
            .items
            .push(json!({"label": label, "kind": "algebra", "ok": true}));
    }
    report.details = json!({
        "normalized": serde_json::to_value(&corpus.normalized).expect("corpus serialization"),
    });
    Ok((report, warnings))
}
