use std::path::{Path, PathBuf};

use clap::Parser;
use serde_json::json;
use tsimg::classify::{baseline_1nn, classify_dataset, compound_image, SelectionGrid, SvmConfig};
use tsimg::gaf::{encode_gaf_batch, FieldKind};
use tsimg::impute::{
    evaluate_model, preprocess, run_seeds, train_model, CorruptionSpec, ExperimentConfig, ImputationReport, Pipeline,
};
use tsimg::ingest::{gen_synthetic_split, parse_ucr, Dataset, Generator};
use tsimg::io::{
    fmt_real, load_model, read_matrix_csv, render_compound_png, render_png, save_model, write_matrix_csv, write_ucr,
};
use tsimg::mtf::encode_mtf_batch;
use tsimg::reconstruct::reconstruct_series;
use tsimg::series::{PaaConfig, TimeSeries};
use tsimg::{Error, Result};

use crate::args::*;
use crate::manifest::{beside, RunManifest};
use crate::report::Report;

/// Runs one parsed command. `argv` excludes the program name and is stored
/// verbatim in the manifest.
pub fn dispatch(cli: Cli, argv: &[String]) -> Result<()> {
    match cli.command {
        Command::Encode(a) => encode(&a, argv),
        Command::Decode(a) => decode(&a, argv),
        Command::ImputeTrain(a) => impute_train(&a, argv),
        Command::ImputeEval(a) => impute_eval(&a, argv),
        Command::Classify(a) => classify(&a, argv),
        Command::Baseline(a) => baseline(&a, argv),
        Command::Synth(a) => synth(&a, argv),
        Command::Replay(a) => replay(&a),
    }
}

fn params<T: serde::Serialize>(args: &T) -> serde_json::Value {
    serde_json::to_value(args).expect("arguments serialize")
}

fn series_len(series: &[TimeSeries]) -> Result<usize> {
    let n = series.first().map(TimeSeries::len).unwrap_or(0);
    for ts in series {
        if ts.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: ts.len(),
            });
        }
    }
    Ok(n)
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into())
}

fn encode(a: &EncodeArgs, argv: &[String]) -> Result<()> {
    let series = parse_ucr(&a.input)?;
    let n = series_len(&series)?;
    let mode = a.rescale.into();
    std::fs::create_dir_all(&a.out_dir).map_err(|e| Error::io(&a.out_dir, e))?;

    let (size, uses_bins) = match a.encoding {
        Encoding::Gasf | Encoding::Gadf => (a.paa.or(a.image_size).unwrap_or(n), false),
        Encoding::Mtf | Encoding::Compound => (a.image_size.or(a.paa).unwrap_or(n), true),
    };
    let mut outputs = Vec::new();
    let file = |i: usize, suffix: &str| a.out_dir.join(format!("series{i:04}{suffix}"));

    match a.encoding {
        Encoding::Gasf | Encoding::Gadf | Encoding::Mtf => {
            let fields = match a.encoding {
                Encoding::Gasf => encode_gaf_batch(&series, mode, PaaConfig::new(size), FieldKind::Gasf)?,
                Encoding::Gadf => encode_gaf_batch(&series, mode, PaaConfig::new(size), FieldKind::Gadf)?,
                _ => encode_mtf_batch(&series, a.quantiles, size)?,
            };
            for (i, m) in fields.iter().enumerate() {
                let kind = m.kind.name().to_lowercase();
                let csv = file(i, &format!("_{kind}.csv"));
                write_matrix_csv(m, &csv)?;
                outputs.push(csv);
                if a.png {
                    let png = file(i, &format!("_{kind}.png"));
                    render_png(m, &png)?;
                    outputs.push(png);
                }
            }
        }
        Encoding::Compound => {
            for (i, ts) in series.iter().enumerate() {
                let img = compound_image(ts, size, a.quantiles, mode)?;
                for m in &img.channels {
                    let csv = file(i, &format!("_{}.csv", m.kind.name().to_lowercase()));
                    write_matrix_csv(m, &csv)?;
                    outputs.push(csv);
                }
                if a.png {
                    let png = file(i, ".png");
                    render_compound_png(&img, &png)?;
                    outputs.push(png);
                }
            }
        }
    }

    let mut p = params(a);
    p["size"] = json!(size);
    if !uses_bins {
        p["quantiles"] = serde_json::Value::Null;
    }
    let mut manifest = RunManifest::new("encode", argv, p);
    manifest.inputs.push(a.input.clone());
    manifest.outputs = outputs;
    manifest.write(&a.out_dir.join("manifest.json"))?;

    let mut r = Report::default();
    r.line(format!(
        "encoded {} series of length {n} as {:?} images of size {size}",
        series.len(),
        a.encoding
    ));
    r.kv("series", series.len());
    r.kv("length", n);
    r.kv("size", size);
    r.kv("files", manifest.outputs.len());
    r.emit(None)
}

fn decode(a: &DecodeArgs, argv: &[String]) -> Result<()> {
    let mut rows = Vec::with_capacity(a.input.len());
    for path in &a.input {
        let field = read_matrix_csv(path)?;
        rows.push(TimeSeries::labeled(reconstruct_series(&field)?.values, 0));
    }
    write_ucr(&rows, &a.out)?;

    let mut manifest = RunManifest::new("decode", argv, params(a));
    manifest.inputs = a.input.clone();
    manifest.outputs.push(a.out.clone());
    manifest.write(&beside(&a.out))?;

    let mut r = Report::default();
    r.line(format!("decoded {} series into {}", rows.len(), a.out.display()));
    r.kv("series", rows.len());
    r.emit(None)
}

fn read_pool(paths: &[PathBuf]) -> Result<Vec<TimeSeries>> {
    let mut pool = Vec::new();
    for p in paths {
        pool.extend(parse_ucr(p)?);
    }
    series_len(&pool)?;
    Ok(pool)
}

fn impute_train(a: &ImputeTrainArgs, argv: &[String]) -> Result<()> {
    let train = read_pool(&a.train)?;
    let pipeline: Pipeline = a.pipeline.into();
    let n = a.paa.unwrap_or(train[0].len());
    let mut cfg = ExperimentConfig::new(pipeline, n);
    cfg.rate = a.noise_rate;
    cfg.hidden = a.hidden;
    cfg.train.batch_size = a.batch;
    cfg.train.max_epochs = a.max_epochs;
    if let Some(lr) = a.lr {
        cfg.train.learning_rate = lr;
    }
    if let Some(tol) = a.tol {
        cfg.train.tolerance = tol;
    }
    cfg.runs = 1;
    cfg.seed = a.seed;
    cfg.paa = a.paa;

    let (init_seed, corruption_seed, _) = run_seeds(a.seed);
    let (model, outcome) = train_model(&train, &cfg, init_seed, corruption_seed, |epoch, mse| {
        eprintln!("epoch={epoch} mse={}", fmt_real(mse));
    })?;
    save_model(&model, &a.model_out)?;

    let mut p = params(a);
    p["lr"] = json!(cfg.train.learning_rate);
    p["tol"] = json!(cfg.train.tolerance);
    let mut manifest = RunManifest::new("impute-train", argv, p);
    manifest.seeds = vec![a.seed, init_seed, corruption_seed];
    manifest.inputs = a.train.clone();
    manifest.outputs.push(a.model_out.clone());
    manifest.write(&beside(&a.model_out))?;

    let final_mse = outcome.history.last().copied().unwrap_or(outcome.initial_mse);
    let mut r = Report::default();
    r.line(format!(
        "{} autoencoder {}-{}-{}: {} epochs, MSE {:.6} -> {:.6}{}",
        pipeline.name(),
        model.input_dim(),
        model.hidden_dim(),
        model.input_dim(),
        outcome.history.len(),
        outcome.initial_mse,
        final_mse,
        if outcome.converged {
            ""
        } else {
            " (epoch limit reached)"
        }
    ));
    r.kv("pipeline", pipeline.name());
    r.kv("series", train.len());
    r.kv("input_dim", model.input_dim());
    r.kv("hidden", model.hidden_dim());
    r.kv("learning_rate", cfg.train.learning_rate);
    r.kv("tolerance", cfg.train.tolerance);
    r.kv("epochs", outcome.history.len());
    r.kv("initial_mse", outcome.initial_mse);
    r.kv("final_mse", final_mse);
    r.kv("converged", outcome.converged);
    r.emit(None)
}

fn impute_eval(a: &ImputeEvalArgs, argv: &[String]) -> Result<()> {
    let model = load_model(&a.model)?;
    let test = preprocess(&parse_ucr(&a.test)?, a.paa)?;
    series_len(&test)?;
    let pipeline: Pipeline = a.pipeline.into();
    if a.runs == 0 {
        return Err(Error::InvalidConfig("--runs must be at least 1".into()));
    }
    let mut seeds = Vec::with_capacity(a.runs);
    let mut per_run = Vec::with_capacity(a.runs);
    for k in 0..a.runs as u64 {
        let (_, _, test_seed) = run_seeds(a.seed.wrapping_add(k));
        seeds.push(test_seed);
        let spec = CorruptionSpec {
            rate: a.noise_rate,
            seed: test_seed,
        };
        per_run.push(evaluate_model(&model, &test, &spec, pipeline)?);
    }
    let report = ImputationReport::from_runs(pipeline, per_run, a.paa);

    let mut r = Report::default();
    r.line(format!(
        "{} pipeline over {} runs: full MSE {:.5}, imputation MSE {:.5}, gap {:.5}",
        pipeline.name(),
        report.runs,
        report.full_mse,
        report.imputation_mse,
        report.gap()
    ));
    r.kv("pipeline", pipeline.name());
    r.kv("runs", report.runs);
    r.kv("full_mse", report.full_mse);
    r.kv("imputation_mse", report.imputation_mse);
    r.kv("gap", report.gap());
    for (k, s) in report.per_run.iter().enumerate() {
        r.record(&[
            ("run", k.to_string()),
            ("seed", a.seed.wrapping_add(k as u64).to_string()),
            ("full_mse", s.full_mse.to_string()),
            ("imputation_mse", s.imputation_mse.to_string()),
        ]);
    }
    r.emit(a.report.as_deref())?;

    if let Some(out) = &a.report {
        let mut manifest = RunManifest::new("impute-eval", argv, params(a));
        manifest.seeds = seeds;
        manifest.inputs = vec![a.model.clone(), a.test.clone()];
        manifest.outputs.push(out.clone());
        manifest.write(&beside(out))?;
    }
    Ok(())
}

fn classify(a: &ClassifyArgs, argv: &[String]) -> Result<()> {
    let name = a.name.clone().unwrap_or_else(|| stem(&a.train));
    let dataset = Dataset::new(name, parse_ucr(&a.train)?, parse_ucr(&a.test)?)?;
    let grid = SelectionGrid {
        sizes: a.sizes.clone(),
        quantiles: a.quantiles.clone(),
        penalties: a.penalties.clone(),
        folds: a.folds,
        mode: a.rescale.into(),
        svm: SvmConfig { epochs: a.epochs },
    };
    let (report, selection) = classify_dataset(&dataset, &grid, a.seed)?;

    let mut r = Report::default();
    r.line("dataset\terror (S, Q)\tpenalty\ttrain CV error");
    r.line(report.to_string());
    r.kv("dataset", &report.dataset);
    r.kv("size", report.size);
    r.kv("quantiles", report.quantiles);
    r.kv("penalty", report.penalty);
    r.kv("train_cv_error", report.train_cv_error);
    r.kv("test_error", report.test_error);
    for g in &selection.evaluated {
        r.record(&[
            ("grid_size", g.size.to_string()),
            ("grid_quantiles", g.quantiles.to_string()),
            ("grid_penalty", g.penalty.to_string()),
            ("grid_cv_error", g.cv_error.to_string()),
        ]);
    }
    r.emit(a.report.as_deref())?;

    if let Some(out) = &a.report {
        let mut manifest = RunManifest::new("classify", argv, params(a));
        manifest.seeds.push(a.seed);
        manifest.inputs = vec![a.train.clone(), a.test.clone()];
        manifest.outputs.push(out.clone());
        manifest.write(&beside(out))?;
    }
    Ok(())
}

fn baseline(a: &BaselineArgs, argv: &[String]) -> Result<()> {
    let dataset = Dataset::new(stem(&a.train), parse_ucr(&a.train)?, parse_ucr(&a.test)?)?;
    let error = baseline_1nn(&dataset.train, &dataset.test)?;

    let mut r = Report::default();
    r.line(format!("{}\t1NN-Euclidean error {:.3}", dataset.name, error));
    r.kv("dataset", &dataset.name);
    r.kv("test_error", error);
    r.emit(a.report.as_deref())?;

    if let Some(out) = &a.report {
        let mut manifest = RunManifest::new("baseline", argv, params(a));
        manifest.inputs = vec![a.train.clone(), a.test.clone()];
        manifest.outputs.push(out.clone());
        manifest.write(&beside(out))?;
    }
    Ok(())
}

fn synth(a: &SynthArgs, argv: &[String]) -> Result<()> {
    let generator = match a.family {
        Family::Sin2 => Generator::SIN2,
        Family::Cbf => Generator::Cbf,
    };
    let data = gen_synthetic_split(&generator, a.count, a.test_count.unwrap_or(0), a.length, a.seed)?;
    write_ucr(&data.train, &a.out)?;
    let mut manifest = RunManifest::new("synth", argv, params(a));
    manifest.seeds.push(a.seed);
    manifest.outputs.push(a.out.clone());
    if let Some(test_out) = &a.test_out {
        write_ucr(&data.test, test_out)?;
        manifest.outputs.push(test_out.clone());
    }
    manifest.write(&beside(&a.out))?;

    let mut r = Report::default();
    r.line(format!(
        "generated {} + {} {} series of length {}",
        data.train.len(),
        data.test.len(),
        generator.name(),
        a.length
    ));
    r.kv("family", generator.name());
    r.kv("train", data.train.len());
    r.kv("test", data.test.len());
    r.kv("length", a.length);
    r.emit(None)
}

fn replay(a: &ReplayArgs) -> Result<()> {
    let manifest = RunManifest::read(&a.manifest)?;
    let argv: Vec<String> = std::iter::once("tsimg".to_string())
        .chain(manifest.argv.iter().cloned())
        .collect();
    let cli = Cli::try_parse_from(&argv).map_err(|e| Error::InvalidConfig(format!("manifest arguments: {e}")))?;
    if matches!(cli.command, Command::Replay(_)) {
        return Err(Error::InvalidConfig("a manifest cannot replay another manifest".into()));
    }
    dispatch(cli, &manifest.argv)
}
