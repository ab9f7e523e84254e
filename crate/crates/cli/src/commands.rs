use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

use akshar_core::classifier::{load_model, save_model};
use akshar_core::dataset::{
    generate_synthetic, load_dataset, prototype_names, split, write_dataset, write_manifest,
    LabeledSample, SplitSpec,
};
use akshar_core::netpbm::{read_netpbm, write_pbm, PbmFormat};
use akshar_core::pipeline::{
    evaluate_classifier, featurize_raster, predict_raster, preprocess, to_binary, train_classifier,
    PipelineConfig,
};
use akshar_core::raster::BinaryRaster;
use akshar_core::thinning::thin_observed;

use crate::{DataArgs, EvalArgs, GenArgs, InspectArgs, PredictArgs, TrainArgs};

fn load_samples(
    data: &DataArgs,
    cfg: &PipelineConfig,
    seed: u64,
) -> Result<(Vec<LabeledSample>, Vec<String>)> {
    if let Some(root) = &data.root {
        let (samples, names) =
            load_dataset(root, cfg.binarize_threshold).context("loading dataset")?;
        Ok((samples, names))
    } else if data.synthetic {
        let samples =
            generate_synthetic(data.classes, data.per_class, seed).context("generating corpus")?;
        Ok((samples, prototype_names(data.classes)))
    } else {
        bail!("no data source: pass --root DIR or --synthetic");
    }
}

fn split_spec(data: &DataArgs, seed: u64) -> SplitSpec {
    SplitSpec {
        train_per_class: data.train_per_class,
        test_per_class: data.test_per_class,
        seed,
    }
}

pub fn train(args: TrainArgs) -> Result<()> {
    let cfg = args.pipeline.to_config();
    let (samples, names) = load_samples(&args.data, &cfg, args.pipeline.seed)?;
    let n_classes = names.len();
    let (train_set, _) = split(&samples, &split_spec(&args.data, args.pipeline.seed))
        .context("splitting dataset")?;

    let (model, trace) = train_classifier(&train_set, n_classes, &cfg).context("training")?;
    save_model(&args.out, &model).context("writing model")?;

    let eval = evaluate_classifier(&model, &train_set, &cfg).context("evaluating")?;
    let last = trace.last().expect("trace is never empty");
    let mut report = String::new();
    let _ = writeln!(report, "samples {}", train_set.len());
    let _ = writeln!(report, "classes {n_classes}");
    let _ = writeln!(report, "features {}", cfg.feature_len());
    let _ = writeln!(report, "hidden {}", cfg.hidden_width());
    let _ = writeln!(report, "iterations {}", last.iter);
    let _ = writeln!(report, "final_loss {:.6e}", last.loss);
    let _ = writeln!(report, "grad_norm {:.6e}", last.grad_norm);
    let _ = writeln!(report, "train_accuracy {:.4}", eval.accuracy);
    print!("{report}");
    if let Some(path) = &args.report {
        fs::write(path, &report).context("writing report")?;
    }
    if let Some(path) = &args.names_out {
        fs::write(path, names.join("\n") + "\n").context("writing names")?;
    }
    Ok(())
}

pub fn eval(args: EvalArgs) -> Result<()> {
    let cfg = args.pipeline.to_config();
    let model = load_model(&args.model).context("loading model")?;
    let (samples, names) = load_samples(&args.data, &cfg, args.pipeline.seed)?;
    let subset = match args.split.as_str() {
        "all" => samples,
        side => {
            let (train_set, test_set) =
                split(&samples, &split_spec(&args.data, args.pipeline.seed))
                    .context("splitting dataset")?;
            if side == "train" {
                train_set
            } else {
                test_set
            }
        }
    };
    let eval = evaluate_classifier(&model, &subset, &cfg).context("evaluating")?;
    println!("accuracy {:.4}", eval.accuracy);
    if let Some(path) = &args.confusion {
        write_confusion(path, &eval.confusion, &names)?;
    }
    Ok(())
}

fn write_confusion(path: &Path, confusion: &[Vec<usize>], names: &[String]) -> Result<()> {
    let mut out = String::from("true_class");
    for i in 0..confusion.len() {
        let _ = write!(out, ",{}", names.get(i).map(String::as_str).unwrap_or("?"));
    }
    out.push('\n');
    for (t, row) in confusion.iter().enumerate() {
        let _ = write!(out, "{}", names.get(t).map(String::as_str).unwrap_or("?"));
        for count in row {
            let _ = write!(out, ",{count}");
        }
        out.push('\n');
    }
    fs::write(path, out).context("writing confusion matrix")?;
    Ok(())
}

pub fn predict(args: PredictArgs) -> Result<()> {
    let cfg = args.pipeline.to_config();
    let model = load_model(&args.model).context("loading model")?;
    let img = read_image(&args.image, &cfg)?;
    let (class, score) = predict_raster(&model, &img, &cfg).context("classifying")?;
    let name = match &args.names {
        Some(path) => {
            let text = fs::read_to_string(path).context("reading names")?;
            text.lines()
                .nth(class)
                .map(str::to_string)
                .unwrap_or_else(|| format!("class_{class}"))
        }
        None => format!("class_{class}"),
    };
    println!("{class} {name} {score:.4}");
    Ok(())
}

fn read_image(path: &Path, cfg: &PipelineConfig) -> Result<BinaryRaster> {
    let parsed = read_netpbm(path).context("reading image")?;
    Ok(to_binary(parsed, cfg.binarize_threshold)?)
}

pub fn inspect(args: InspectArgs) -> Result<()> {
    let cfg = args.pipeline.to_config();
    let img = read_image(&args.image, &cfg)?;
    fs::create_dir_all(&args.out_dir).context("creating output directory")?;
    let stages = preprocess(&img).context("preprocessing")?;

    let dir = &args.out_dir;
    write_pbm(&dir.join("binarized.pbm"), &stages.binarized, PbmFormat::Ascii)?;
    write_pbm(&dir.join("cropped.pbm"), &stages.cropped, PbmFormat::Ascii)?;
    write_pbm(&dir.join("scaled.pbm"), &stages.scaled, PbmFormat::Ascii)?;
    if args.passes {
        let mut result = Ok(());
        thin_observed(&stages.scaled, |pass, state| {
            if result.is_ok() {
                result = write_pbm(
                    &dir.join(format!("thin_pass_{pass:03}.pbm")),
                    state,
                    PbmFormat::Ascii,
                );
            }
        });
        result?;
    }
    write_pbm(&dir.join("thinned.pbm"), &stages.thinned, PbmFormat::Ascii)?;
    write_pbm(&dir.join("pruned.pbm"), &stages.pruned, PbmFormat::Ascii)?;

    // feature dump: gc row-major, intersections, shirorekha F/P/N, spine E/M/N
    let fv = featurize_raster(&img, &cfg).context("extracting features")?;
    let line = fv
        .to_vec()
        .iter()
        .map(|v| format!("{v:.6}"))
        .collect::<Vec<_>>()
        .join(",");
    fs::write(dir.join("features.txt"), line + "\n").context("writing features")?;
    Ok(())
}

pub fn gen(args: GenArgs) -> Result<()> {
    let samples = generate_synthetic(args.classes, args.per_class, args.seed)
        .context("generating corpus")?;
    let names = prototype_names(args.classes);
    write_dataset(&args.out_dir, &samples, &names).context("writing dataset")?;
    if let Some(path) = &args.manifest {
        write_manifest(path, &samples, &names).context("writing manifest")?;
    }
    println!(
        "wrote {} samples across {} classes to {}",
        samples.len(),
        args.classes,
        args.out_dir.display()
    );
    Ok(())
}
