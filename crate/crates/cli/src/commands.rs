use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nullform_core::diagnostics::{residual_diagnostics, residual_gaps};
use nullform_core::linmodel::{self, DesignMatrix, FCriticalValues, NestedSpec};
use nullform_core::montecarlo::{self, Scenario, SimConfig};
use nullform_core::plot::emit_residual_plots;
use nullform_core::proportion::{self, Alternative, ProportionData};
use nullform_core::ttest::{self, TCriticalValues};
use nullform_core::{DecisionPair, Sample};
use sha2::{Digest, Sha256};

use crate::dataset::{ingest_csv, CsvOptions, Dataset};
use crate::error::CliError;
use crate::report::{Analysis, AnalysisReport, Critical, Gap, KsCheck, TOOL_VERSION};

#[derive(Debug, Parser)]
#[command(name = "nullform", version, about = "Traditional and null-form t, F and proportion tests")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Significance level.
    #[arg(long, global = true, default_value_t = 0.05)]
    alpha: f64,
    /// Print the report as JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// CSV input file.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Seed for simulations.
    #[arg(long, global = true, env = "NULLFORM_SEED", default_value_t = 1)]
    seed: u64,
    /// CSV field delimiter.
    #[arg(long, global = true, default_value = ",")]
    delimiter: String,
    /// The CSV has no header row; columns are named col1, col2, ...
    #[arg(long, global = true)]
    no_header: bool,
    /// Comma-separated columns to replace by their natural log.
    #[arg(long, global = true, default_value = "")]
    log: String,
    /// Text column holding observation labels.
    #[arg(long, global = true)]
    label_column: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// One-sample t test in both forms.
    Ttest {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        mu0: f64,
        /// Column to test; defaults to the first numeric column.
        #[arg(long)]
        column: Option<String>,
    },
    /// One-sample proportion test with Wald and null-variance statistics.
    Proptest {
        #[arg(long)]
        successes: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p0: f64,
        #[arg(long, value_enum, default_value_t = AltArg::TwoSided)]
        alternative: AltArg,
    },
    /// Nested-model F test in both forms.
    Ftest {
        /// Comma-separated reduced-model columns (may be empty).
        #[arg(long, default_value = "")]
        reduced_cols: String,
        /// Comma-separated full-model columns; must contain the reduced ones.
        #[arg(long)]
        full_cols: String,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Indicator-augmentation outlier test for every observation.
    Outliers {
        /// Comma-separated predictors; defaults to every other numeric column.
        #[arg(long)]
        predictors: Option<String>,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Size and power of both forms by simulation.
    Simulate {
        #[arg(long, value_enum, default_value_t = ScenarioArg::T)]
        scenario: ScenarioArg,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        effect: f64,
        #[arg(long, default_value_t = 10_000)]
        replicates: u64,
        /// Reduced-model columns, intercept included (F scenario).
        #[arg(long, default_value_t = 2)]
        p1: usize,
        /// Tested columns (F scenario).
        #[arg(long, default_value_t = 2)]
        p2: usize,
        /// Null proportion (proportion scenario).
        #[arg(long, default_value_t = 0.5)]
        p0: f64,
        /// Also compare the simulated null law with its Beta reference.
        #[arg(long)]
        null_law: bool,
    },
    /// Residual plots as a 2x2 SVG grid.
    Plot {
        #[arg(long)]
        predictors: Option<String>,
        /// SVG destination; the SVG goes to standard output when absent.
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        model: ModelArgs,
    },
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Response column; defaults to the first numeric column not used as a
    /// predictor.
    #[arg(long)]
    response: Option<String>,
    /// Leave the intercept out of the design.
    #[arg(long)]
    no_intercept: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AltArg {
    TwoSided,
    Greater,
    Less,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScenarioArg {
    T,
    F,
    Proportion,
}

/// Parses `args` (program name first), runs the command and writes the
/// report to `out`. Returns the process exit code.
pub fn run_command<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let echo = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(cli, echo, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "nullform: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, command: Vec<String>, out: &mut dyn Write) -> Result<(), CliError> {
    let common = &cli.common;
    if !(common.alpha > 0.0 && common.alpha < 1.0) {
        return Err(CliError::Usage(format!("--alpha must lie in (0, 1), got {}", common.alpha)));
    }
    let mut input = None;
    let mut svg = None;

    let analysis = match cli.command {
        Command::Ttest { mu0, column } => {
            let data = load(common)?;
            let column = column.unwrap_or_else(|| data.names[0].clone());
            let y = Sample::new(data.column(&column)?.to_vec())?;
            let result = ttest::t_test(&y, mu0)?;
            let critical = TCriticalValues::new(common.alpha, y.len())?;
            let decision = critical.decide(&result);
            let theta = ttest::geometry(&y, mu0).ok().map(|g| g.theta);
            input = Some(data.provenance);
            Analysis::TTest {
                column,
                result,
                theta,
                critical: Critical { traditional: critical.t, null_form: critical.t0 },
                decision,
            }
        }
        Command::Proptest { successes, n, p0, alternative } => {
            if !(p0 > 0.0 && p0 < 1.0) {
                return Err(CliError::Usage(format!("--p0 must lie in (0, 1), got {p0}")));
            }
            let data = ProportionData::new(successes, n).map_err(|e| CliError::Usage(e.to_string()))?;
            let alternative = match alternative {
                AltArg::TwoSided => Alternative::TwoSided,
                AltArg::Greater => Alternative::Greater,
                AltArg::Less => Alternative::Less,
            };
            let result = proportion::proportion_test_with(data, p0, common.alpha, alternative)?;
            let decision = DecisionPair {
                reject_traditional: result.p_value_wald <= common.alpha,
                reject_null_form: result.p_value_null <= common.alpha,
            };
            Analysis::Proportion { result, decision }
        }
        Command::Ftest { reduced_cols, full_cols, model } => {
            let data = load(common)?;
            let reduced = split_list(&reduced_cols);
            let full = split_list(&full_cols);
            if let Some(c) = reduced.iter().find(|c| !full.contains(c)) {
                return Err(CliError::Usage(format!("reduced column '{c}' is not in --full-cols")));
            }
            // reduced columns first, then the tested block in the order given
            let mut ordered = reduced.clone();
            ordered.extend(full.iter().filter(|c| !reduced.contains(c)).cloned());
            let response = pick_response(&data, model.response, &ordered)?;
            let y = Sample::new(data.column(&response)?.to_vec())?;
            let x = design(&data, &ordered, !model.no_intercept)?;
            let p1 = reduced.len() + usize::from(!model.no_intercept);
            if x.ncols() == p1 {
                return Err(CliError::Usage("--full-cols adds no columns to the reduced model".into()));
            }
            if x.ncols() >= x.nrows() {
                return Err(CliError::Data(format!(
                    "{} observations cannot support {} columns",
                    x.nrows(),
                    x.ncols()
                )));
            }
            let spec = NestedSpec::new(x, p1)?;
            let result = linmodel::nested_f_test(&spec, &y)?;
            let theta = linmodel::f_geometry(&spec, &y)?.theta;
            let critical = FCriticalValues::new(common.alpha, result.dims)?;
            let decision = critical.decide(&result);
            input = Some(data.provenance);
            Analysis::FTest {
                response,
                reduced_columns: reduced,
                full_columns: ordered,
                result,
                theta,
                critical: Critical { traditional: critical.f_trad, null_form: critical.f_null },
                decision,
            }
        }
        Command::Outliers { predictors, model } => {
            let data = load(common)?;
            let (response, columns, x, y) = regression(&data, predictors, model)?;
            let table = residual_diagnostics(&x, &y)?;
            let flagged = table.outliers(common.alpha).map(|r| r.index).collect();
            let gaps = residual_gaps(&table)
                .into_iter()
                .map(|(index, gap)| Gap { index, label: data.labels[index].clone(), gap })
                .collect();
            let labels = data.labels.clone();
            input = Some(data.provenance);
            Analysis::Outliers { response, columns, labels, table, flagged, gaps }
        }
        Command::Simulate { scenario, n, effect, replicates, p1, p2, p0, null_law } => {
            let scenario = match scenario {
                ScenarioArg::T => Scenario::OneSampleT,
                ScenarioArg::F => Scenario::NestedF { p1, p2 },
                ScenarioArg::Proportion => Scenario::Proportion { p0 },
            };
            let config = SimConfig { replicates, seed: common.seed, n, effect, alpha: common.alpha, scenario };
            let outcome = montecarlo::simulate_size_power(&config)?;
            let null_law = if null_law {
                Some(KsCheck {
                    statistic: montecarlo::null_law_check(&config)?,
                    critical_1pct: montecarlo::ks_critical_1pct(replicates),
                    replicates,
                })
            } else {
                None
            };
            Analysis::Simulate { config, outcome, null_law }
        }
        Command::Plot { predictors, output, model } => {
            let data = load(common)?;
            let (response, columns, x, y) = regression(&data, predictors, model)?;
            let table = residual_diagnostics(&x, &y)?;
            let doc = emit_residual_plots(&table, &data.labels, common.alpha)?;
            let labeled = doc.matches("class=\"outlier\"").count() / 4;
            let analysis = Analysis::Plot {
                response,
                columns,
                output: output.as_ref().map_or_else(|| "-".to_owned(), |p| p.display().to_string()),
                svg_sha256: hex::encode(Sha256::digest(doc.as_bytes())),
                points: table.n,
                labeled,
            };
            input = Some(data.provenance);
            match &output {
                Some(path) => std::fs::write(path, &doc)
                    .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?,
                None => svg = Some(doc),
            }
            analysis
        }
    };

    if let Some(doc) = svg {
        return out.write_all(doc.as_bytes()).map_err(|e| CliError::Data(e.to_string()));
    }
    let report = AnalysisReport { command, tool_version: TOOL_VERSION.to_owned(), input, alpha: common.alpha, analysis };
    let text = if common.json {
        let mut s = report.to_json().map_err(|e| CliError::Numeric(e.to_string()))?;
        s.push('\n');
        s
    } else {
        report.render_human()
    };
    out.write_all(text.as_bytes()).map_err(|e| CliError::Data(e.to_string()))
}

fn load(common: &Common) -> Result<Dataset, CliError> {
    let path = common.input.as_ref().ok_or_else(|| CliError::Usage("--input <path> is required".into()))?;
    let delimiter = match common.delimiter.as_str() {
        "\\t" | "tab" => b'\t',
        d if d.len() == 1 => d.as_bytes()[0],
        d => return Err(CliError::Usage(format!("delimiter must be a single byte, got '{d}'"))),
    };
    let options = CsvOptions {
        delimiter,
        has_header: !common.no_header,
        log_columns: split_list(&common.log),
        label_column: common.label_column.clone(),
    };
    ingest_csv(path, &options)
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|c| !c.is_empty()).map(str::to_owned).collect()
}

fn pick_response(data: &Dataset, given: Option<String>, predictors: &[String]) -> Result<String, CliError> {
    match given {
        Some(r) => Ok(r),
        None => data
            .names
            .iter()
            .find(|n| !predictors.contains(n))
            .cloned()
            .ok_or_else(|| CliError::Usage("no column left for the response; pass --response".into())),
    }
}

fn design(data: &Dataset, columns: &[String], intercept: bool) -> Result<DesignMatrix, CliError> {
    let n = data.nrows();
    let mut x = if intercept { DesignMatrix::intercept(n) } else { DesignMatrix::empty(n) };
    for c in columns {
        x = x.with_column(c.clone(), data.column(c)?)?;
    }
    Ok(x)
}

fn regression(
    data: &Dataset,
    predictors: Option<String>,
    model: ModelArgs,
) -> Result<(String, Vec<String>, DesignMatrix, Sample), CliError> {
    let (response, columns) = match (model.response, predictors) {
        (r, Some(p)) => {
            let cols = split_list(&p);
            (pick_response(data, r, &cols)?, cols)
        }
        (Some(r), None) => {
            let cols = data.names.iter().filter(|n| **n != r).cloned().collect();
            (r, cols)
        }
        (None, None) => {
            let r = data.names[0].clone();
            (r, data.names[1..].to_vec())
        }
    };
    if columns.contains(&response) {
        return Err(CliError::Usage(format!("'{response}' is both response and predictor")));
    }
    let y = Sample::new(data.column(&response)?.to_vec())?;
    let x = design(data, &columns, !model.no_intercept)?;
    if x.ncols() == 0 {
        return Err(CliError::Usage("the design has no columns".into()));
    }
    Ok((response, columns, x, y))
}
