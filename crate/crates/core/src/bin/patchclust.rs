use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use patchclust::io::{
    load_config, read_dataset, to_json, write_dataset, write_json, write_merges_csv,
};
use patchclust::pipeline::{interval_union, FeatureSelectionConfig, InterstitialConfig};
use patchclust::synth::{self, Sampling, TwoClusterModel};
use patchclust::{
    dendrogram_svg, detect_interstices, prune_and_contract, relevance_with, select_features,
    single_linkage_slice, slice_population_histogram, Dataset, OccurrenceRule, Result, Slice1D,
    SvgOptions,
};

#[derive(Parser)]
#[command(name = "patchclust", version, about = "Cluster relevance of 1D slices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset as CSV plus a JSON sidecar.
    Gen(GenArgs),
    /// Single-linkage dendrogram and relevance of one column.
    Dendro(DendroArgs),
    /// Rank features by occurrences x mean relevance over slices.
    SelectFeatures(PipelineArgs),
    /// Mark interstices on slices along one axis.
    DetectInterstices(PipelineArgs),
    /// Histogram of retained slice populations.
    SliceHist(PipelineArgs),
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    model: Model,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// CSV output path; the sidecar goes next to it with a `.json` extension.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Model {
    /// Homogeneous Poisson scatter on [lo, hi).
    PoissonUniform {
        #[arg(long, default_value_t = 500.0)]
        lambda: f64,
        #[arg(long, default_value_t = 0.0)]
        lo: f64,
        #[arg(long, default_value_t = 1.0)]
        hi: f64,
    },
    /// Fixed number of uniform points on [lo, hi).
    UniformFixed {
        #[arg(long, default_value_t = 500)]
        count: usize,
        #[arg(long, default_value_t = 0.0)]
        lo: f64,
        #[arg(long, default_value_t = 1.0)]
        hi: f64,
    },
    Normal {
        #[arg(long, default_value_t = 500)]
        count: usize,
        #[arg(long, default_value_t = 0.0)]
        mu: f64,
        #[arg(long, default_value_t = 0.1)]
        sigma: f64,
    },
    /// Two dense intervals around a sparse interstice [x1, x2).
    TwoCluster {
        #[arg(long, default_value_t = 0.4)]
        x1: f64,
        #[arg(long, default_value_t = 0.6)]
        x2: f64,
        #[arg(long, default_value_t = 140.0)]
        lambda1: f64,
        #[arg(long, default_value_t = 20.0)]
        lambda2: f64,
        #[arg(long, default_value_t = 120.0)]
        lambda3: f64,
        /// Draw round(lambda * length) points per interval instead of a Poisson count.
        #[arg(long)]
        fixed_count: bool,
    },
    /// Circles and squares described by five shape features.
    Shapes {
        #[arg(long, default_value_t = 5000)]
        count: usize,
        /// Number of circles; defaults to half of `count`.
        #[arg(long)]
        circles: Option<usize>,
    },
    /// Two vertical bands in the unit square split by an empty band.
    Elongated {
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 0.2)]
        gap: f64,
    },
    /// One isotropic Gaussian cluster in 2D.
    Blob {
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 0.5)]
        cx: f64,
        #[arg(long, default_value_t = 0.5)]
        cy: f64,
        #[arg(long, default_value_t = 0.15)]
        sd: f64,
    },
}

#[derive(Args)]
struct DendroArgs {
    csv: PathBuf,
    /// Column name or 0-based index.
    #[arg(long, default_value = "0")]
    column: String,
    #[arg(long, default_value_t = 4.0)]
    alpha: f64,
    #[arg(long, value_enum, default_value = "root-split")]
    occurrence: RuleArg,
    /// Print the relevance report as JSON, or write it to the given path.
    #[arg(long, num_args = 0..=1, default_missing_value = "-")]
    json: Option<String>,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Write the merge list as CSV.
    #[arg(long)]
    merges: Option<PathBuf>,
}

#[derive(Args)]
struct PipelineArgs {
    csv: PathBuf,
    /// JSON or TOML config; omitted fields take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum RuleArg {
    RootSplit,
    AnySplit,
}

impl From<RuleArg> for OccurrenceRule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::RootSplit => OccurrenceRule::RootSplit,
            RuleArg::AnySplit => OccurrenceRule::AnySplit,
        }
    }
}

fn column_dataset(name: &str, x: Vec<f64>) -> Result<Dataset> {
    let n = x.len();
    Dataset::from_flat(vec![name.to_string()], x, n, None)
}

fn generate(model: &Model, seed: u64) -> Result<(Dataset, Value, Value)> {
    Ok(match *model {
        Model::PoissonUniform { lambda, lo, hi } => (
            column_dataset("x", synth::gen_poisson_uniform(lambda, lo, hi, seed)?)?,
            json!({"model": "poisson-uniform", "lambda": lambda, "lo": lo, "hi": hi}),
            json!({"mean_gap": 1.0 / lambda}),
        ),
        Model::UniformFixed { count, lo, hi } => (
            column_dataset("x", synth::gen_uniform_fixed(count, lo, hi, seed)?)?,
            json!({"model": "uniform-fixed", "count": count, "lo": lo, "hi": hi}),
            Value::Null,
        ),
        Model::Normal { count, mu, sigma } => (
            column_dataset("x", synth::gen_normal(count, mu, sigma, seed)?)?,
            json!({"model": "normal", "count": count, "mu": mu, "sigma": sigma}),
            Value::Null,
        ),
        Model::TwoCluster {
            x1,
            x2,
            lambda1,
            lambda2,
            lambda3,
            fixed_count,
        } => {
            let model = TwoClusterModel {
                x1,
                x2,
                lambda1,
                lambda2,
                lambda3,
            };
            let sampling = if fixed_count {
                Sampling::FixedCount
            } else {
                Sampling::Process
            };
            let x = synth::gen_two_cluster_model_with(&model, sampling, seed)?;
            (
                column_dataset("x", x)?,
                json!({"model": "two-cluster", "params": model, "sampling": sampling}),
                json!({
                    "interstice": [x1, x2],
                    "intervals": model.intervals().map(|(lambda, lo, hi)| json!({"lambda": lambda, "lo": lo, "hi": hi})),
                    "expected_counts": model.expected_counts(),
                }),
            )
        }
        Model::Shapes { count, circles } => {
            let circles = circles.unwrap_or(count / 2);
            let squares = count.checked_sub(circles).ok_or_else(|| {
                patchclust::Error::InvalidParameter(format!(
                    "{circles} circles exceed count {count}"
                ))
            })?;
            (
                synth::gen_shapes_split(circles, squares, seed)?,
                json!({"model": "shapes", "count": count, "circles": circles, "squares": squares}),
                json!({"labels": {"circle": 0, "square": 1}}),
            )
        }
        Model::Elongated { count, gap } => {
            let (ds, truth) = synth::gen_elongated_2d(count, gap, seed)?;
            (
                ds,
                json!({"model": "elongated", "count": count, "gap": gap}),
                json!(truth),
            )
        }
        Model::Blob { count, cx, cy, sd } => (
            synth::gen_gaussian_blob_2d(count, (cx, cy), sd, seed)?,
            json!({"model": "blob", "count": count, "center": [cx, cy], "sd": sd}),
            Value::Null,
        ),
    })
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, format!("{text}\n"))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn run_gen(args: &GenArgs) -> Result<()> {
    let (ds, params, truth) = generate(&args.model, args.seed)?;
    match &args.out {
        Some(path) => {
            write_dataset(&ds, path)?;
            let sidecar = json!({
                "seed": args.seed,
                "rows": ds.n_rows(),
                "columns": ds.names(),
                "params": params,
                "truth": truth,
            });
            write_json(&sidecar, path.with_extension("json"))?;
            eprintln!("wrote {} rows to {}", ds.n_rows(), path.display());
        }
        None => patchclust::io::write_dataset_csv(&ds, std::io::stdout().lock())?,
    }
    Ok(())
}

fn run_dendro(args: &DendroArgs) -> Result<()> {
    let ds = read_dataset(&args.csv)?;
    let col = ds.resolve_column(&args.column)?;
    let slice = Slice1D::from_signal(ds.column(col))?;
    let tree = single_linkage_slice(&slice);
    let report = relevance_with(&tree, args.alpha, args.occurrence.into())?;

    if let Some(path) = &args.svg {
        let pruned = prune_and_contract(&tree, args.alpha)?;
        let opts = SvgOptions {
            title: Some(format!("{}  rho = {:.4}", ds.names()[col], report.rho)),
            ..Default::default()
        };
        std::fs::write(path, dendrogram_svg(&tree, Some(&pruned), &opts))?;
    }
    if let Some(path) = &args.merges {
        write_merges_csv(&tree, std::io::BufWriter::new(std::fs::File::create(path)?))?;
    }
    match args.json.as_deref() {
        Some("-") => println!("{}", to_json(&report)?),
        Some(path) => write_json(&report, path)?,
        None => {
            println!("column     {}", ds.names()[col]);
            println!("points     {}", tree.n_leaves());
            println!("H          {}", report.h);
            println!("threshold  {}", report.threshold);
            println!("branches   {}", report.branches.len());
            println!("occurred   {}", report.occurred);
            println!("rho        {}", report.rho);
        }
    }
    Ok(())
}

fn config_or_default<T: serde::de::DeserializeOwned + Default>(path: Option<&Path>) -> Result<T> {
    path.map_or_else(|| Ok(T::default()), load_config)
}

fn run_select(args: &PipelineArgs) -> Result<()> {
    let ds = read_dataset(&args.csv)?;
    let cfg: FeatureSelectionConfig = config_or_default(args.config.as_deref())?;
    let rows = select_features(&ds, &cfg)?;
    emit(&to_json(&rows)?, args.out.as_deref())
}

fn run_interstices(args: &PipelineArgs) -> Result<()> {
    let ds = read_dataset(&args.csv)?;
    let cfg: InterstitialConfig = config_or_default(args.config.as_deref())?;
    let patches = detect_interstices(&ds, &cfg)?;
    let union = interval_union(patches.iter().map(|p| (p.xa, p.xb)));
    let report = json!({"patches": patches, "interval_union": union});
    emit(&to_json(&report)?, args.out.as_deref())
}

fn run_hist(args: &PipelineArgs) -> Result<()> {
    let ds = read_dataset(&args.csv)?;
    let cfg: FeatureSelectionConfig = config_or_default(args.config.as_deref())?;
    let hist = slice_population_histogram(&ds, &cfg)?;
    emit(&to_json(&hist)?, args.out.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gen(a) => run_gen(a),
        Command::Dendro(a) => run_dendro(a),
        Command::SelectFeatures(a) => run_select(a),
        Command::DetectInterstices(a) => run_interstices(a),
        Command::SliceHist(a) => run_hist(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
