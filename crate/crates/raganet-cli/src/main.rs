//! Command-line front end: train and sweep networks on a raga corpus,
//! replay saved models, and drive the Markov baseline.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use raganet::model::{table2_model, ModelMetadata, SavedModel};
use raganet::notation::{
    load_corpus, load_sequence_file, parse_sequence, render_csv, validate_against_raga,
    RagaProfile,
};
use raganet::selection::{
    fit_and_score, run_sweep, score_model, table1c_grid, write_sweep_csv, GridEntry,
};
use raganet::util::sig6;
use raganet::{
    markov, Activation, Error, NetworkConfig, NoteSequence, PitchValue, Scaler, ScalingMode,
    SplitSpec, TrainConfig,
};

#[derive(Parser)]
#[command(name = "raganet", version, about = "Raga note-sequence modeling: autoregressive neural nets and a Markov baseline")]
struct Cli {
    /// Human-readable output instead of key=value lines.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

/// Where the note sequence comes from.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct CorpusArgs {
    /// Corpus file: swara text or `sr,pitch` CSV.
    #[arg(long, value_name = "FILE")]
    corpus: Option<PathBuf>,
    /// Use the embedded 240-note Bageshree corpus.
    #[arg(long)]
    builtin_corpus: bool,
}

impl CorpusArgs {
    fn load(&self) -> raganet::Result<NoteSequence> {
        match &self.corpus {
            Some(path) => load_sequence_file(path),
            None => Ok(load_corpus()),
        }
    }
}

/// Training hyperparameters shared by `train` and `sweep`.
#[derive(Args)]
struct TrainArgs {
    /// Learning rate.
    #[arg(long, default_value_t = 0.05)]
    eta: f64,
    /// Momentum coefficient in [0, 1].
    #[arg(long, default_value_t = 0.9)]
    delta: f64,
    /// Epoch cap per restart.
    #[arg(long, default_value_t = 5000, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    epochs: usize,
    /// Epochs without improvement before stopping.
    #[arg(long, default_value_t = 200)]
    patience: usize,
    /// Smallest loss decrease that counts as improvement.
    #[arg(long, default_value_t = 1e-8)]
    min_improvement: f64,
    /// Independent restarts; the best final loss wins.
    #[arg(long, default_value_t = 10, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    restarts: usize,
}

impl TrainArgs {
    fn config(&self, seed: u64) -> raganet::Result<TrainConfig<f64>> {
        if self.eta <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "learning rate must be positive, got {}",
                self.eta
            )));
        }
        if !(0.0..=1.0).contains(&self.delta) {
            return Err(Error::InvalidArgument(format!(
                "momentum must lie in [0, 1], got {}",
                self.delta
            )));
        }
        Ok(TrainConfig {
            eta: self.eta,
            delta: self.delta,
            max_epochs: self.epochs,
            patience: self.patience,
            min_improvement: self.min_improvement,
            seed,
            restarts: self.restarts,
        })
    }
}

/// Input/target preprocessing shared by `train` and `sweep`.
#[derive(Args)]
struct ScalingArgs {
    /// Scaling mode: `minmax` or `none`.
    #[arg(long, default_value = "minmax")]
    scaling: ScalingMode,
    /// Fraction of rows held out from the tail for evaluation.
    #[arg(long, default_value_t = 0.0)]
    holdout: f64,
}

impl ScalingArgs {
    fn split(&self) -> raganet::Result<SplitSpec> {
        SplitSpec::new(self.holdout)
    }
}

/// Which saved model to replay or predict with.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct ModelArgs {
    /// Model file written by `train -o`.
    #[arg(long, value_name = "FILE")]
    model: Option<PathBuf>,
    /// Use the bundled published N^{2-4-1} parameter set.
    #[arg(long)]
    builtin_table2: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Train one network and report RMSE/MAE in raw pitch units.
    Train {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Input lags (autoregressive order).
        #[arg(long, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
        p: usize,
        /// Hidden units.
        #[arg(long, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
        q: usize,
        /// Hidden activation: identity, tanh or sigmoid.
        #[arg(long, default_value = "tanh")]
        hidden: Activation,
        /// Output activation: identity, tanh or sigmoid.
        #[arg(long, default_value = "identity")]
        output: Activation,
        #[command(flatten)]
        train: TrainArgs,
        #[command(flatten)]
        scaling: ScalingArgs,
        /// Base seed for weight initialization.
        #[arg(long, env = "RAGA_SEED", default_value_t = 1)]
        seed: u64,
        /// Write the trained model here as JSON.
        #[arg(short, long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Write the winning restart's per-epoch loss as `epoch,mse` CSV.
        #[arg(long, value_name = "FILE")]
        loss_csv: Option<PathBuf>,
    },
    /// Train every architecture in a grid and rank by RMSE.
    Sweep {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Use the bundled 38-row published grid.
        #[arg(long, conflicts_with = "grid")]
        table1c: bool,
        /// Custom grid: JSON array of {p, q, hidden_act, output_act, ...}.
        #[arg(long, value_name = "FILE")]
        grid: Option<PathBuf>,
        #[command(flatten)]
        scaling: ScalingArgs,
        /// Base seed; cell k trains with seed ⊕ k.
        #[arg(long, env = "RAGA_SEED", default_value_t = 1)]
        seed: u64,
        /// Worker threads (never affects the result).
        #[arg(long, default_value_t = 1, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
        jobs: usize,
        /// Record wall-clock training times in the CSV (breaks byte-for-byte
        /// reproducibility of the report).
        #[arg(long)]
        timings: bool,
        /// Report CSV path.
        #[arg(short, long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Run a saved model over a corpus and emit `t,observed,predicted` rows.
    Replay {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        model: ModelArgs,
        /// Hidden activation for the bundled parameter set (its source
        /// table does not state one).
        #[arg(long, default_value = "tanh", value_parser = clap::builder::PossibleValuesParser::new(["tanh", "sigmoid"]), requires = "builtin_table2")]
        table2_hidden: String,
        /// Ignore the model's scalers and feed raw pitch values.
        #[arg(long)]
        raw: bool,
        /// Replay CSV path.
        #[arg(short, long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Predict the next note from a context of recent notes.
    Predict {
        #[command(flatten)]
        model: ModelArgs,
        /// Recent notes, oldest first, in swara or integer notation
        /// (at least p values; the last p are used).
        #[arg(long, value_name = "NOTES")]
        context: String,
        #[arg(long, default_value = "tanh", value_parser = clap::builder::PossibleValuesParser::new(["tanh", "sigmoid"]), requires = "builtin_table2")]
        table2_hidden: String,
    },
    /// Estimate the first-order transition matrix of a corpus.
    MarkovFit {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Matrix CSV path.
        #[arg(short, long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Simulate a note sequence from the fitted transition matrix.
    MarkovGen {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Starting note (swara token or integer); must occur in the corpus.
        #[arg(long, value_name = "NOTE")]
        start: String,
        /// Notes to generate, including the start.
        #[arg(long, default_value_t = 240, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
        length: usize,
        #[arg(long, env = "RAGA_SEED", default_value_t = 1)]
        seed: u64,
        /// Write the sequence as swara text.
        #[arg(long, value_name = "FILE")]
        out_text: Option<PathBuf>,
        /// Write the sequence as `sr,pitch` CSV.
        #[arg(long, value_name = "FILE")]
        out_csv: Option<PathBuf>,
    },
    /// Check a corpus against the Bageshree profile.
    Validate {
        #[command(flatten)]
        corpus: CorpusArgs,
    },
    /// Emit a corpus as swara text or `sr,pitch` CSV.
    ExportCorpus {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Output layout: `text` or `csv`.
        #[arg(long, default_value = "text", value_parser = clap::builder::PossibleValuesParser::new(["text", "csv"]))]
        format: String,
        /// Output path; standard output when omitted.
        #[arg(short, long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

/// Custom sweep-grid row: architecture plus optional hyperparameter
/// overrides (defaults match `train`).
#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct GridFileEntry {
    p: usize,
    q: usize,
    hidden_act: Activation,
    output_act: Activation,
    #[serde(default)]
    note: String,
    eta: Option<f64>,
    delta: Option<f64>,
    max_epochs: Option<usize>,
    patience: Option<usize>,
    min_improvement: Option<f64>,
    restarts: Option<usize>,
}

fn load_grid(path: &PathBuf) -> raganet::Result<Vec<GridEntry<f64>>> {
    let text = std::fs::read_to_string(path)?;
    let entries: Vec<GridFileEntry> = serde_json::from_str(&text)?;
    if entries.is_empty() {
        return Err(Error::EmptyData("sweep grid"));
    }
    entries
        .into_iter()
        .map(|e| {
            let net = NetworkConfig::new(e.p, e.q, e.hidden_act, e.output_act)?;
            let defaults = TrainConfig::<f64>::default();
            let train = TrainConfig {
                eta: e.eta.unwrap_or(defaults.eta),
                delta: e.delta.unwrap_or(defaults.delta),
                max_epochs: e.max_epochs.unwrap_or(defaults.max_epochs),
                patience: e.patience.unwrap_or(defaults.patience),
                min_improvement: e.min_improvement.unwrap_or(defaults.min_improvement),
                seed: defaults.seed,
                restarts: e.restarts.unwrap_or(defaults.restarts),
            };
            Ok(GridEntry { net, train, note: e.note })
        })
        .collect()
}

fn load_model(args: &ModelArgs, table2_hidden: &str) -> raganet::Result<SavedModel> {
    match &args.model {
        Some(path) => SavedModel::load(path),
        None => {
            let hidden: Activation = table2_hidden.parse()?;
            Ok(table2_model(hidden))
        }
    }
}

fn parse_start(token: &str) -> raganet::Result<PitchValue> {
    let seq = parse_sequence(token)?;
    seq.at(1)
        .ok_or_else(|| Error::InvalidArgument("empty start note".into()))
}

fn run(cli: Cli) -> raganet::Result<()> {
    match cli.command {
        Command::Train {
            corpus,
            p,
            q,
            hidden,
            output,
            train,
            scaling,
            seed,
            out,
            loss_csv,
        } => {
            let seq = corpus.load()?;
            let net = NetworkConfig::new(p, q, hidden, output)?;
            let cfg = train.config(seed)?;
            let outcome = fit_and_score(&net, &cfg, &seq, scaling.scaling, scaling.split()?)?;
            if let Some(path) = out {
                let model = SavedModel::new(
                    net,
                    &outcome.weights,
                    &outcome.scaler_in,
                    &outcome.scaler_out,
                    ModelMetadata {
                        seed: outcome.train.best_restart_seed,
                        epochs: outcome.train.epochs_run,
                        final_rmse: Some(outcome.metrics.rmse),
                    },
                )?;
                model.save(path)?;
            }
            if let Some(path) = loss_csv {
                let mut csv = String::from("epoch,mse\n");
                for (i, loss) in outcome.train.loss_history.iter().enumerate() {
                    csv.push_str(&format!("{},{}\n", i + 1, sig6(*loss)));
                }
                std::fs::write(path, csv)?;
            }
            if cli.pretty {
                println!("{} trained on {} notes", net.label(), seq.len());
                println!("  RMSE  {}", sig6(outcome.metrics.rmse));
                println!("  MAE   {}", sig6(outcome.metrics.mae));
                println!(
                    "  restart seed {} stopped after {} epochs",
                    outcome.train.best_restart_seed, outcome.train.epochs_run
                );
            } else {
                println!(
                    "rmse={} mae={}",
                    sig6(outcome.metrics.rmse),
                    sig6(outcome.metrics.mae)
                );
            }
        }
        Command::Sweep {
            corpus,
            table1c,
            grid,
            scaling,
            seed,
            jobs,
            timings,
            out,
        } => {
            let seq = corpus.load()?;
            let entries = match (&grid, table1c) {
                (Some(path), false) => load_grid(path)?,
                (None, true) => table1c_grid::<f64>(),
                (None, false) => {
                    return Err(Error::InvalidArgument(
                        "choose a grid: --table1c or --grid <FILE>".into(),
                    ))
                }
                (Some(_), true) => unreachable!("clap forbids --table1c with --grid"),
            };
            let report = run_sweep(&entries, &seq, scaling.scaling, scaling.split()?, seed, jobs)?;
            std::fs::write(&out, write_sweep_csv(&report, timings))?;
            let best = report.best_cell();
            if cli.pretty {
                println!(
                    "{} cells swept; best is row {} ({}, {}/{})",
                    report.cells.len(),
                    best.row,
                    best.net.label(),
                    best.net.hidden,
                    best.net.output
                );
                if let Some(m) = best.metrics {
                    println!("  RMSE  {}", sig6(m.rmse));
                    println!("  MAE   {}", sig6(m.mae));
                }
                println!("report written to {}", out.display());
            } else {
                println!("best={}", best.net.label());
            }
        }
        Command::Replay { corpus, model, table2_hidden, raw, out } => {
            let seq = corpus.load()?;
            let doc = load_model(&model, &table2_hidden)?;
            let weights = doc.weights::<f64>();
            let (mut scaler_in, mut scaler_out) = doc.scalers::<f64>();
            if raw {
                scaler_in = Scaler::None;
                scaler_out = Scaler::None;
            }
            let (preds, metrics) =
                score_model(&weights, &doc.config, &seq, &scaler_in, &scaler_out)?;
            let mut csv = String::from("t,observed,predicted\n");
            for pr in &preds {
                csv.push_str(&format!(
                    "{},{},{}\n",
                    pr.t,
                    sig6(pr.observed),
                    sig6(pr.predicted)
                ));
            }
            std::fs::write(&out, csv)?;
            if cli.pretty {
                println!(
                    "{} replayed over {} notes ({} predictions)",
                    doc.config.label(),
                    seq.len(),
                    preds.len()
                );
                println!("  RMSE  {}", sig6(metrics.rmse));
                println!("  MAE   {}", sig6(metrics.mae));
                println!("series written to {}", out.display());
            } else {
                println!("rmse={} mae={}", sig6(metrics.rmse), sig6(metrics.mae));
            }
        }
        Command::Predict { model, context, table2_hidden } => {
            let doc = load_model(&model, &table2_hidden)?;
            let notes = parse_sequence(&context)?;
            let p = doc.config.p;
            if notes.len() < p {
                return Err(Error::InsufficientData {
                    context: "prediction context",
                    needed: p,
                    got: notes.len(),
                });
            }
            let weights = doc.weights::<f64>();
            let (scaler_in, scaler_out) = doc.scalers::<f64>();
            // input slots want y_{t-1} first, i.e. the context reversed
            let input: Vec<f64> = notes
                .notes()
                .iter()
                .rev()
                .take(p)
                .map(|v| scaler_in.apply(v.value() as f64))
                .collect();
            let trace = raganet::network::forward(&weights, &doc.config, &input)?;
            let predicted = scaler_out.invert(trace.output);
            let pitch = (predicted.round() as i64).clamp(-12, 23) as i32;
            let swara = PitchValue::new(pitch).expect("clamped to range").swara();
            if cli.pretty {
                println!(
                    "{} predicts {} (pitch {}, raw {})",
                    doc.config.label(),
                    swara,
                    pitch,
                    sig6(predicted)
                );
            } else {
                println!("predicted={} pitch={} swara={}", sig6(predicted), pitch, swara);
            }
        }
        Command::MarkovFit { corpus, out } => {
            let seq = corpus.load()?;
            let tm = markov::estimate_transitions::<f64>(&seq)?;
            std::fs::write(&out, markov::write_matrix_csv(&tm))?;
            let absorbing = tm.absorbing.iter().filter(|&&a| a).count();
            if cli.pretty {
                println!(
                    "{}x{} transition matrix ({} absorbing) written to {}",
                    tm.len(),
                    tm.len(),
                    absorbing,
                    out.display()
                );
            } else {
                println!("states={} absorbing={}", tm.len(), absorbing);
            }
        }
        Command::MarkovGen { corpus, start, length, seed, out_text, out_csv } => {
            let seq = corpus.load()?;
            let tm = markov::estimate_transitions::<f64>(&seq)?;
            let start = parse_start(&start)?;
            let sim = markov::simulate(&tm, start, length, seed)?;
            let to_file = out_text.is_some() || out_csv.is_some();
            if let Some(path) = out_text {
                std::fs::write(path, sim.render() + "\n")?;
            }
            if let Some(path) = out_csv {
                std::fs::write(path, render_csv(&sim))?;
            }
            if to_file {
                let report = validate_against_raga(&sim, &RagaProfile::bageshree());
                if cli.pretty {
                    println!(
                        "{} notes generated, {} outside the Bageshree set",
                        report.total_notes, report.vivadi_count
                    );
                } else {
                    println!("notes={} vivadi={}", report.total_notes, report.vivadi_count);
                }
            } else {
                println!("{}", sim.render());
            }
        }
        Command::Validate { corpus } => {
            let seq = corpus.load()?;
            let report = validate_against_raga(&seq, &RagaProfile::bageshree());
            if cli.pretty {
                if report.conforms() {
                    println!(
                        "all {} notes stay within the Bageshree set",
                        report.total_notes
                    );
                } else {
                    println!(
                        "{} of {} notes are vivadi (positions {})",
                        report.vivadi_count,
                        report.total_notes,
                        join_positions(&report.vivadi_positions)
                    );
                }
            } else if report.conforms() {
                println!("total={} vivadi=0", report.total_notes);
            } else {
                println!(
                    "total={} vivadi={} positions={}",
                    report.total_notes,
                    report.vivadi_count,
                    join_positions(&report.vivadi_positions)
                );
            }
        }
        Command::ExportCorpus { corpus, format, out } => {
            let seq = corpus.load()?;
            let text = match format.as_str() {
                "csv" => render_csv(&seq),
                _ => seq.render() + "\n",
            };
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
        }
    }
    Ok(())
}

fn join_positions(positions: &[usize]) -> String {
    positions
        .iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Divergence { .. } | Error::SweepAllDiverged(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
