use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use varsel::data::{load_csv, profile, DatasetProfile, LoadOptions, PredictionKind, ProfileOptions, TabularDataset};
use varsel::dsl;
use varsel::fm::{
    enumerate_configurations, to_dot, validate_model, Configuration, ValidationResult, DEFAULT_ENUMERATION_CAP,
};
use varsel::metrics::MetricId;
use varsel::pipeline::{
    audit, parse_triggers, render_instance, run_pipeline, AuditReport, Comparator, PipelineError, QualityCriterion,
    Settings,
};
use varsel::selector::{explain, recommend, MethodQueue, SelectorThresholds};

#[derive(Parser)]
#[command(name = "varsel", version, about = "Variability-aware ML algorithm selection with fairness auditing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Profile a CSV dataset.
    Profile(DataArgs),
    /// Recommend a candidate queue with rule traces.
    Select {
        #[command(flatten)]
        data: DataArgs,
        /// Pretend the dataset has this many samples.
        #[arg(long)]
        sample_size: Option<usize>,
    },
    /// Run the full selection pipeline.
    Run(RunArgs),
    /// Audit a predictions file (row_id,y_true,y_pred,group).
    Audit(AuditArgs),
    /// Feature-model tools.
    Fm {
        #[command(subcommand)]
        command: FmCommand,
    },
}

#[derive(Subcommand)]
enum FmCommand {
    /// Check a .fm file for syntax and structural errors.
    Validate(FmArgs),
    /// List every valid configuration.
    Enumerate {
        #[command(flatten)]
        fm: FmArgs,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: usize,
    },
    /// Emit Graphviz DOT.
    Render {
        #[command(flatten)]
        fm: FmArgs,
        /// Comma-separated feature ids to highlight.
        #[arg(long, value_delimiter = ',')]
        highlight: Option<Vec<String>>,
    },
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DataArgs {
    csv: PathBuf,
    /// Settings file (TOML); defaults to the bundled heart-failure scenario.
    #[arg(long)]
    settings: Option<PathBuf>,
    /// Target column. Defaults to the settings target when the file has it.
    #[arg(long)]
    target: Option<String>,
    /// Sensitive column. Defaults to the settings column when the file has it.
    #[arg(long)]
    sensitive: Option<String>,
    /// Columns holding free text.
    #[arg(long = "text-column")]
    text_columns: Vec<String>,
    #[arg(long)]
    positive_label: Option<String>,
    /// CATEGORY, QUANTITY, JUST_LOOKING or NONE.
    #[arg(long)]
    prediction: Option<PredictionKind>,
    #[arg(long)]
    known_categories: Option<usize>,
    #[arg(long)]
    thresholds_file: Option<PathBuf>,
    #[arg(long)]
    min_samples: Option<usize>,
    #[arg(long)]
    large_dataset: Option<usize>,
    #[arg(long)]
    clustering_large: Option<usize>,
    #[arg(long)]
    few_features: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    protected_value: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Criterion metric; combined with --threshold.
    #[arg(long)]
    metric: Option<String>,
    #[arg(long)]
    threshold: Option<f64>,
    /// Accept when the metric is at most the threshold.
    #[arg(long)]
    at_most: bool,
    #[arg(long)]
    test_fraction: Option<f64>,
    #[arg(long)]
    triggers_file: Option<PathBuf>,
    /// Also write the accepted configuration as Graphviz DOT.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct AuditArgs {
    predictions: PathBuf,
    #[arg(long)]
    protected_value: String,
    #[arg(long)]
    positive_label: String,
    /// Group column name, `group` by default.
    #[arg(long)]
    group_column: Option<String>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct FmArgs {
    file: PathBuf,
    #[command(flatten)]
    output: Output,
}

enum CliError {
    Input(String),
    Internal(String),
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Internal(e.to_string())
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn emit(output: &Output, text: &str) -> Result<(), CliError> {
    match &output.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

impl DataArgs {
    fn settings(&self) -> Result<Settings, CliError> {
        let mut s = match &self.settings {
            Some(p) => Settings::from_toml(&read(p)?).map_err(input)?,
            None => Settings::default(),
        };
        if let Some(p) = &self.thresholds_file {
            s.thresholds = SelectorThresholds::from_toml(&read(p)?).map_err(input)?;
        }
        let t = &mut s.thresholds;
        for (flag, slot) in [
            (self.min_samples, &mut t.min_samples),
            (self.large_dataset, &mut t.large_dataset),
            (self.clustering_large, &mut t.clustering_large),
            (self.few_features, &mut t.few_features),
        ] {
            if let Some(v) = flag {
                *slot = v;
            }
        }
        s.thresholds.validate().map_err(input)?;
        if self.positive_label.is_some() {
            s.positive_label = self.positive_label.clone();
        }
        if self.prediction.is_some() {
            s.prediction_kind = self.prediction;
        }
        Ok(s)
    }

    /// Loads the CSV. Explicit column flags must exist; settings defaults
    /// apply only when the file has the column.
    fn load(&self, settings: &Settings) -> Result<TabularDataset, CliError> {
        let opts = LoadOptions {
            target: self.target.clone(),
            sensitive: self.sensitive.clone(),
            text_columns: self.text_columns.clone(),
        };
        let mut ds = load_csv(&self.csv, &opts).map_err(input)?;
        if self.target.is_none() {
            ds.target = settings.target.clone().filter(|t| ds.column_index(t).is_some());
        }
        if self.sensitive.is_none() {
            ds.sensitive = settings.sensitive.clone().filter(|s| ds.column_index(s).is_some());
        }
        Ok(ds)
    }

    fn profile(&self, settings: &Settings, ds: &TabularDataset) -> Result<DatasetProfile, CliError> {
        let opts = ProfileOptions {
            prediction_kind: settings.prediction_kind,
            positive_label: settings.positive_label.clone().filter(|_| ds.target.is_some()),
            known_category_count: self.known_categories,
        };
        profile(ds, &opts, &settings.thresholds).map_err(input)
    }
}

fn profile_text(p: &DatasetProfile) -> String {
    let opt = |v: Option<String>| v.unwrap_or_else(|| "n/a".into());
    format!(
        "sample_size: {}\nfeature_count: {}\nlabeled: {}\nprediction_kind: {}\ntext_data: {}\nfew_features: {}\npositive_fraction: {}\nknown_category_count: {}\n",
        p.sample_size,
        p.feature_count,
        p.labeled,
        p.prediction_kind,
        p.text_data,
        p.few_features,
        opt(p.positive_fraction.map(|x| format!("{x:.4}"))),
        opt(p.known_category_count.map(|x| x.to_string())),
    )
}

#[derive(Serialize)]
struct Selection<'a> {
    profile: &'a DatasetProfile,
    queue: &'a MethodQueue,
}

fn cmd_profile(args: &DataArgs) -> Result<(), CliError> {
    let settings = args.settings()?;
    let ds = args.load(&settings)?;
    let p = args.profile(&settings, &ds)?;
    let text = match args.output.format {
        Format::Json => json(&p),
        Format::Text => profile_text(&p),
    };
    emit(&args.output, &text)
}

fn cmd_select(args: &DataArgs, sample_size: Option<usize>) -> Result<(), CliError> {
    let settings = args.settings()?;
    let ds = args.load(&settings)?;
    let mut p = args.profile(&settings, &ds)?;
    if let Some(n) = sample_size {
        p.sample_size = n;
    }
    let queue = recommend(&p, &settings.thresholds);
    let text = match args.output.format {
        Format::Json => json(&Selection { profile: &p, queue: &queue }),
        Format::Text => {
            let mut s = String::new();
            for (i, (item, why)) in queue.items.iter().zip(explain(&queue)).enumerate() {
                s.push_str(&format!("{}. {item}\n   {why}\n", i + 1));
            }
            s
        }
    };
    emit(&args.output, &text)
}

fn cmd_run(args: &RunArgs) -> Result<(), CliError> {
    let mut settings = args.data.settings()?;
    if let Some(v) = &args.protected_value {
        settings.protected_value = Some(v.clone());
    }
    if let Some(seed) = args.seed {
        settings.seed = seed;
    }
    if let Some(f) = args.test_fraction {
        settings.test_fraction = f;
    }
    if args.metric.is_some() || args.threshold.is_some() || args.at_most {
        let metric = match &args.metric {
            Some(m) => m.parse::<MetricId>().map_err(input)?,
            None => settings.criterion.metric,
        };
        let comparator = if args.at_most { Comparator::AtMost } else { Comparator::AtLeast };
        let threshold = args.threshold.unwrap_or(settings.criterion.threshold);
        settings.criterion = QualityCriterion::new(metric, comparator, threshold).map_err(input)?;
    }
    if let Some(p) = &args.triggers_file {
        settings.triggers = parse_triggers(&read(p)?).map_err(input)?;
    }
    let ds = args.data.load(&settings)?;
    let report = run_pipeline(&ds, &settings)?;
    if let Some(path) = &args.dot {
        let dot = render_instance(&report)?;
        std::fs::write(path, dot).map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))?;
    }
    let text = match args.data.output.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    emit(&args.data.output, &text)
}

fn audit_text(r: &AuditReport) -> String {
    let o = |v: Option<f64>| v.map_or("n/a".to_string(), |x| format!("{x:.4}"));
    let p = &r.performance;
    format!(
        "confusion: tp={} fp={} fn={} tn={}\naccuracy: {}\nsensitivity: {}\nspecificity: {}\nbalanced_accuracy: {}\nf1: {}\nmcc: {}\neoo: {}\ndi: {}\nabad: {}\n",
        r.confusion.tp,
        r.confusion.fp,
        r.confusion.fn_,
        r.confusion.tn,
        o(p.accuracy),
        o(p.sensitivity),
        o(p.specificity),
        o(p.balanced_accuracy),
        o(p.f1),
        o(p.mcc),
        o(Some(r.fairness.eoo)),
        o(r.fairness.di),
        o(Some(r.fairness.abad)),
    )
}

fn cmd_audit(args: &AuditArgs) -> Result<(), CliError> {
    let r = audit(&args.predictions, &args.protected_value, &args.positive_label, args.group_column.as_deref())?;
    let text = match args.output.format {
        Format::Json => json(&r),
        Format::Text => audit_text(&r),
    };
    emit(&args.output, &text)
}

fn load_model(args: &FmArgs) -> Result<varsel::fm::FeatureModel, CliError> {
    let text = read(&args.file)?;
    let model = dsl::parse(&text).map_err(|e| CliError::Input(format!("{}:{e}", args.file.display())))?;
    if let ValidationResult::Violations(v) = validate_model(&model) {
        let lines: Vec<String> = v.iter().map(ToString::to_string).collect();
        return Err(CliError::Input(format!("{}: invalid model\n{}", args.file.display(), lines.join("\n"))));
    }
    Ok(model)
}

fn cmd_fm(command: &FmCommand) -> Result<(), CliError> {
    match command {
        FmCommand::Validate(args) => {
            let model = load_model(args)?;
            let text = match args.output.format {
                Format::Json => json(&serde_json::json!({ "valid": true, "features": model.len() })),
                Format::Text => format!("valid: {} features, {} constraints\n", model.len(), model.constraints.len()),
            };
            emit(&args.output, &text)
        }
        FmCommand::Enumerate { fm, cap } => {
            let model = load_model(fm)?;
            let configs = enumerate_configurations(&model, *cap).map_err(input)?;
            let text = match fm.output.format {
                Format::Json => json(&configs.iter().map(|c| c.iter().collect::<Vec<_>>()).collect::<Vec<_>>()),
                Format::Text => configs.iter().map(|c| format!("{c}\n")).collect(),
            };
            emit(&fm.output, &text)
        }
        FmCommand::Render { fm, highlight } => {
            let model = load_model(fm)?;
            let config =
                highlight.as_ref().map(|ids| ids.iter().map(|s| s.trim().to_string()).collect::<Configuration>());
            let dot = to_dot(&model, config.as_ref()).map_err(input)?;
            emit(&fm.output, &dot)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Profile(args) => cmd_profile(args),
        Command::Select { data, sample_size } => cmd_select(data, *sample_size),
        Command::Run(args) => cmd_run(args),
        Command::Audit(args) => cmd_audit(args),
        Command::Fm { command } => cmd_fm(command),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(CliError::Input(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Ok(Err(CliError::Internal(msg))) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
        Err(_) => ExitCode::from(2),
    }
}
