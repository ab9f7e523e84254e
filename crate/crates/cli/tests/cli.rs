//! End-to-end tests of the `akshar` binary: each subcommand's contract, exit
//! codes, and output determinism.

use std::path::Path;
use std::process::{Command, Output};

use akshar_core::netpbm::{parse_netpbm, NetpbmImage};
use akshar_core::BinaryRaster;

fn akshar(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_akshar"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Small synthetic setup shared by most tests: 3 classes, 8 samples each.
fn train_small_model(dir: &Path, grid: &str, out: &str) -> Output {
    akshar(
        &[
            "train",
            "--synthetic",
            "--classes",
            "3",
            "--per-class",
            "8",
            "--train-per-class",
            "6",
            "--test-per-class",
            "2",
            "--grid",
            grid,
            "--max-iters",
            "50",
            "--seed",
            "5",
            "--out",
            out,
            "--names-out",
            "names.txt",
        ],
        dir,
    )
}

#[test]
fn train_writes_model_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = train_small_model(dir.path(), "3", "model.txt");
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let report = stdout(&out);
    for key in ["final_loss", "iterations", "train_accuracy"] {
        assert!(report.contains(key), "report missing {key}:\n{report}");
    }
    let model_text = std::fs::read_to_string(dir.path().join("model.txt")).unwrap();
    assert!(model_text.starts_with("MLPCG 1\n"));
    assert_eq!(
        std::fs::read_to_string(dir.path().join("names.txt")).unwrap(),
        "ka\nkha\nga\n"
    );
}

#[test]
fn identical_seeds_give_byte_identical_models() {
    let dir = tempfile::tempdir().unwrap();
    assert!(train_small_model(dir.path(), "3", "a.txt").status.success());
    assert!(train_small_model(dir.path(), "3", "b.txt").status.success());
    let a = std::fs::read(dir.path().join("a.txt")).unwrap();
    let b = std::fs::read(dir.path().join("b.txt")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn eval_prints_accuracy_and_confusion_csv() {
    let dir = tempfile::tempdir().unwrap();
    assert!(train_small_model(dir.path(), "3", "model.txt").status.success());
    let out = akshar(
        &[
            "eval",
            "--model",
            "model.txt",
            "--synthetic",
            "--classes",
            "3",
            "--per-class",
            "8",
            "--train-per-class",
            "6",
            "--test-per-class",
            "2",
            "--split",
            "test",
            "--grid",
            "3",
            "--seed",
            "5",
            "--confusion",
            "conf.csv",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let acc_line = text.lines().find(|l| l.starts_with("accuracy ")).unwrap();
    let value = acc_line.strip_prefix("accuracy ").unwrap();
    assert_eq!(value.split('.').nth(1).unwrap().len(), 4, "{acc_line}");
    let csv = std::fs::read_to_string(dir.path().join("conf.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 4); // header + one row per class
    assert_eq!(lines[0], "true_class,ka,kha,ga");
    assert!(lines[1..]
        .iter()
        .all(|l| l.split(',').count() == 4));
}

#[test]
fn eval_grid_mismatch_names_both_lengths() {
    let dir = tempfile::tempdir().unwrap();
    assert!(train_small_model(dir.path(), "4", "model.txt").status.success());
    let out = akshar(
        &[
            "eval",
            "--model",
            "model.txt",
            "--synthetic",
            "--classes",
            "3",
            "--per-class",
            "8",
            "--grid",
            "5",
            "--seed",
            "5",
        ],
        dir.path(),
    );
    assert!(!out.status.success());
    let err = stderr(&out);
    // model expects 23 features (grid 4), the flags produce 32 (grid 5)
    assert!(err.contains("23") && err.contains("32"), "stderr: {err}");
}

#[test]
fn predict_is_deterministic_with_score_in_unit_interval() {
    let dir = tempfile::tempdir().unwrap();
    assert!(train_small_model(dir.path(), "3", "model.txt").status.success());
    let gen = akshar(
        &[
            "gen", "--out-dir", "data", "--classes", "3", "--per-class", "2", "--seed", "5",
        ],
        dir.path(),
    );
    assert!(gen.status.success());
    let args = [
        "predict",
        "--model",
        "model.txt",
        "--names",
        "names.txt",
        "--grid",
        "3",
        "data/ka/0000.pbm",
    ];
    let first = akshar(&args, dir.path());
    assert!(first.status.success(), "stderr: {}", stderr(&first));
    let line = stdout(&first);
    let fields: Vec<&str> = line.split_whitespace().collect();
    assert_eq!(fields.len(), 3, "line: {line}");
    let score: f64 = fields[2].parse().unwrap();
    assert!(score > 0.0 && score < 1.0);
    let second = akshar(&args, dir.path());
    assert_eq!(stdout(&first), stdout(&second));
}

#[test]
fn predict_blank_image_reports_blank() {
    let dir = tempfile::tempdir().unwrap();
    assert!(train_small_model(dir.path(), "3", "model.txt").status.success());
    std::fs::write(dir.path().join("blank.pbm"), "P1\n4 4\n0000\n0000\n0000\n0000\n").unwrap();
    let out = akshar(
        &["predict", "--model", "model.txt", "--grid", "3", "blank.pbm"],
        dir.path(),
    );
    assert!(!out.status.success());
    assert!(stderr(&out).contains("blank image"), "stderr: {}", stderr(&out));
}

#[test]
fn inspect_writes_five_stages_and_features() {
    let dir = tempfile::tempdir().unwrap();
    let gen = akshar(
        &[
            "gen", "--out-dir", "data", "--classes", "1", "--per-class", "1", "--seed", "3",
        ],
        dir.path(),
    );
    assert!(gen.status.success());
    let out = akshar(
        &[
            "inspect",
            "data/ka/0000.pbm",
            "--out-dir",
            "stages",
            "--grid",
            "4",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let mut entries: Vec<String> = std::fs::read_dir(dir.path().join("stages"))
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    entries.sort();
    assert_eq!(
        entries,
        vec![
            "binarized.pbm",
            "cropped.pbm",
            "features.txt",
            "pruned.pbm",
            "scaled.pbm",
            "thinned.pbm",
        ]
    );
    // every stage file parses back through the raster I/O
    for name in entries.iter().filter(|n| n.ends_with(".pbm")) {
        let bytes = std::fs::read(dir.path().join("stages").join(name)).unwrap();
        match parse_netpbm(&bytes).unwrap() {
            NetpbmImage::Bitmap(_) => {}
            NetpbmImage::Graymap(_) => panic!("{name} is not a bitmap"),
        }
    }
    let features = std::fs::read_to_string(dir.path().join("stages/features.txt")).unwrap();
    let values: Vec<f64> = features
        .trim()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(values.len(), 23); // grid 4: 16 + 1 + 3 + 3
    assert!(values.iter().all(|v| (0.0..=1.0).contains(v)));
}

#[test]
fn inspect_thinned_output_is_a_fixpoint() {
    let dir = tempfile::tempdir().unwrap();
    // width-1 diagonal cross spanning the full canonical frame: cropping and
    // scaling are identities for it and it is already a thinning fixpoint
    let side = 140usize;
    let mut pixels = vec![0u8; side * side];
    for i in 0..side {
        pixels[i * side + i] = 1;
        pixels[i * side + (side - 1 - i)] = 1;
    }
    let cross = BinaryRaster::from_pixels(side, side, pixels).unwrap();
    akshar_core::netpbm::write_pbm(
        &dir.path().join("cross.pbm"),
        &cross,
        akshar_core::netpbm::PbmFormat::Ascii,
    )
    .unwrap();

    let first = akshar(
        &["inspect", "cross.pbm", "--out-dir", "s1"],
        dir.path(),
    );
    assert!(first.status.success(), "stderr: {}", stderr(&first));
    let again = akshar(
        &["inspect", "s1/thinned.pbm", "--out-dir", "s2"],
        dir.path(),
    );
    assert!(again.status.success(), "stderr: {}", stderr(&again));
    let a = std::fs::read(dir.path().join("s1/thinned.pbm")).unwrap();
    let b = std::fs::read(dir.path().join("s2/thinned.pbm")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn inspect_passes_flag_emits_per_pass_rasters() {
    let dir = tempfile::tempdir().unwrap();
    let gen = akshar(
        &[
            "gen", "--out-dir", "data", "--classes", "1", "--per-class", "1", "--seed", "8",
        ],
        dir.path(),
    );
    assert!(gen.status.success());
    let out = akshar(
        &[
            "inspect",
            "data/ka/0000.pbm",
            "--out-dir",
            "stages",
            "--passes",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let passes: Vec<String> = std::fs::read_dir(dir.path().join("stages"))
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.starts_with("thin_pass_"))
        .collect();
    assert!(!passes.is_empty());
}

#[test]
fn gen_dataset_round_trips_through_loader() {
    let dir = tempfile::tempdir().unwrap();
    let out = akshar(
        &[
            "gen",
            "--out-dir",
            "data",
            "--classes",
            "4",
            "--per-class",
            "3",
            "--seed",
            "11",
            "--manifest",
            "manifest.csv",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let (samples, names) = akshar_core::dataset::load_dataset(&dir.path().join("data"), 128).unwrap();
    assert_eq!(samples.len(), 12);
    assert_eq!(names.len(), 4);
    let manifest = std::fs::read_to_string(dir.path().join("manifest.csv")).unwrap();
    assert!(manifest.starts_with("source_id,class_index,class_name\n"));
    assert_eq!(manifest.lines().count(), 13);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad_grid = akshar(
        &["train", "--synthetic", "--grid", "7", "--out", "m.txt"],
        dir.path(),
    );
    assert_eq!(bad_grid.status.code(), Some(2));
    assert!(stderr(&bad_grid).contains("unsupported grid"));

    let no_out = akshar(&["train", "--synthetic"], dir.path());
    assert_eq!(no_out.status.code(), Some(2));

    let no_source = akshar(&["train", "--out", "m.txt"], dir.path());
    assert_eq!(no_source.status.code(), Some(1));
    assert!(stderr(&no_source).contains("no data source"));
}
