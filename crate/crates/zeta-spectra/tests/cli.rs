//! End-to-end checks of the command-line surface: artifacts, manifests,
//! exit codes, and the output-directory lock.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use zeta_spectra::cli::{
    Cli, CloudArgs, Command, CommonArgs, EigencheckArgs, FetchArgs, FitArgs, NestedArgs,
    PerturbArgs, TransformArgs, ZRecursionArgs,
};

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/zeros_10000.txt");

fn common(n: usize, dir: &Path) -> CommonArgs {
    CommonArgs {
        input: PathBuf::from(DATA),
        n,
        output_dir: dir.to_path_buf(),
    }
}

fn read_manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn transform_emits_rows_and_valid_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let code = zeta_spectra::cli::run(Cli {
        command: Command::Transform(TransformArgs {
            common: common(100, dir.path()),
            convention: zeta_spectra::cli::ConventionArg::MeanForward,
        }),
    });
    assert_eq!(code, 0);
    let csv = fs::read_to_string(dir.path().join("fourier_coefs.csv")).unwrap();
    let data_rows = csv.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(data_rows, 101); // header + 100 coefficients
    assert!(csv.lines().next().unwrap().starts_with("# zeta-spectra"));

    // manifest digests match the emitted bytes
    let manifest = read_manifest(dir.path());
    let outputs = manifest["outputs"].as_array().unwrap();
    assert!(!outputs.is_empty());
    for out in outputs {
        let rel = out["path"].as_str().unwrap();
        let bytes = fs::read(dir.path().join(rel)).unwrap();
        assert_eq!(
            out["sha256"].as_str().unwrap(),
            hex::encode(Sha256::digest(&bytes)),
            "digest mismatch for {rel}"
        );
        assert_eq!(out["bytes"].as_u64().unwrap(), bytes.len() as u64);
    }
    assert!(manifest["input"]["sha256"].as_str().unwrap().len() == 64);
    // no lock left behind
    assert!(!dir.path().join(".lock").exists());
}

#[test]
fn eigencheck_breach_exits_4_but_keeps_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let code = zeta_spectra::cli::run(Cli {
        command: Command::Eigencheck(EigencheckArgs {
            common: common(64, dir.path()),
            tol: 0.0, // nothing passes a zero tolerance
        }),
    });
    assert_eq!(code, 4);
    assert!(dir.path().join("eigen.csv").exists());
    assert!(dir.path().join("manifest.json").exists());
    assert!(!dir.path().join(".lock").exists());
}

#[test]
fn eigencheck_passes_at_spec_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let code = zeta_spectra::cli::run(Cli {
        command: Command::Eigencheck(EigencheckArgs {
            common: common(64, dir.path()),
            tol: 1e-7,
        }),
    });
    assert_eq!(code, 0);
}

#[test]
fn validation_error_exits_2_and_cleans_up() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let code = zeta_spectra::cli::run(Cli {
        command: Command::Perturb(PerturbArgs {
            common: common(100, &out),
            fraction: 1.5,
        }),
    });
    assert_eq!(code, 2);
    // no partial artifacts, no manifest, no lock
    assert!(!out.join("manifest.json").exists());
    assert!(!out.join(".lock").exists());
    assert!(!out.join("modified_spectrum.csv").exists());
}

#[test]
fn transport_error_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let code = zeta_spectra::cli::run(Cli {
        command: Command::Fetch(FetchArgs {
            url: "http://127.0.0.1:9/zeros.txt".into(),
            cache_dir: Some(cache),
            limit: None,
            output_dir: dir.path().join("out"),
        }),
    });
    assert_eq!(code, 3);
}

#[test]
fn locked_output_dir_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join(".lock"), b"").unwrap();
    let code = zeta_spectra::cli::run(Cli {
        command: Command::Transform(TransformArgs {
            common: common(50, dir.path()),
            convention: zeta_spectra::cli::ConventionArg::MeanForward,
        }),
    });
    assert_eq!(code, 2);
}

#[test]
fn fit_im_accepts_slice_override() {
    let dir = tempfile::tempdir().unwrap();
    let code = zeta_spectra::cli::run(Cli {
        command: Command::FitIm(FitArgs {
            common: common(1000, dir.path()),
            window_d: None,
            stride: 1,
            slice: Some("125:500".into()),
        }),
    });
    assert_eq!(code, 0);
    let summary = read_manifest(dir.path());
    assert_eq!(summary["command"].as_str().unwrap(), "fit-im");
    let fit: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("fit_im.json")).unwrap())
            .unwrap();
    assert_eq!(fit["slice_lo"].as_u64().unwrap(), 125);
    assert!(fit["p"].as_f64().unwrap() > 1.0);
}

#[test]
fn bad_slice_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    for bad in ["banana", "10", "500:125", "1:500"] {
        let out = dir.path().join(bad.replace(':', "_"));
        let code = zeta_spectra::cli::run(Cli {
            command: Command::FitIm(FitArgs {
                common: common(1000, &out),
                window_d: None,
                stride: 1,
                slice: Some(bad.into()),
            }),
        });
        assert_eq!(code, 2, "slice {bad:?}");
    }
}

#[test]
fn cloud_and_nested_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let code = zeta_spectra::cli::run(Cli {
        command: Command::Cloud(CloudArgs {
            common: common(1000, &dir.path().join("cloud")),
            window_d: None,
            stride: 1,
        }),
    });
    assert_eq!(code, 0);
    let cloud: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("cloud/cloud.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(cloud["m"].as_u64().unwrap(), 125);

    let code = zeta_spectra::cli::run(Cli {
        command: Command::Nested(NestedArgs {
            common: common(1000, &dir.path().join("nested")),
            depth: 3,
        }),
    });
    assert_eq!(code, 0);
    for name in ["root.csv", "r.csv", "ii.csv", "rri.csv", "heads.json"] {
        assert!(
            dir.path().join("nested/tree").join(name).exists(),
            "{name} missing"
        );
    }
}

#[test]
fn z_recursion_error_csv_has_expected_shape() {
    let dir = tempfile::tempdir().unwrap();
    let code = zeta_spectra::cli::run(Cli {
        command: Command::ZRecursion(ZRecursionArgs {
            input: PathBuf::from(DATA),
            n_max: 60,
            seed: 10,
            override_exact: false,
            output_dir: dir.path().to_path_buf(),
        }),
    });
    assert_eq!(code, 0);
    let csv = fs::read_to_string(dir.path().join("z_recursion_errors.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "n,rel_error");
    assert_eq!(rows.len(), 1 + 50); // n = 11..=60
    assert!(rows[1].starts_with("11,"));
}
