use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ncint::linalg::{eigvalsh, DenseHermitian, Matrix, C64};
use serde_json::Value;

fn ncint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncint"))
        .args(args)
        .output()
        .expect("spawn ncint")
}

fn ok(args: &[&str]) -> Output {
    let out = ncint(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn p(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

fn s(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn load_matrix(path: &Path) -> (Matrix, Value) {
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let n = v["n"].as_u64().unwrap() as usize;
    let re: Vec<f64> = v["re"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    let im: Vec<f64> = v["im"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    let data = re.iter().zip(&im).map(|(&r, &i)| C64::new(r, i)).collect();
    (Matrix::from_vec(n, n, data).unwrap(), v)
}

fn load_curve(path: &Path) -> Vec<(f64, f64)> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,value"));
    lines
        .map(|l| {
            let (x, y) = l.split_once(',').unwrap();
            (x.parse().unwrap(), y.parse().unwrap())
        })
        .collect()
}

#[test]
fn dirac_spectrum_is_recoverable() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "d.json");
    ok(&["build", "dirac1d", "--n", "8", "--out", s(&out)]);
    let (m, v) = load_matrix(&out);
    assert_eq!(v["meta"]["kind"], "dirac1d");
    let eig = eigvalsh(&DenseHermitian::new(m).unwrap()).unwrap();
    for (e, want) in eig.iter().zip(-3..=4) {
        assert!((e - want as f64).abs() < 1e-10, "{eig:?}");
    }
}

#[test]
fn harmonic_model_diagonal() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "h.json");
    ok(&[
        "build",
        "model-diagonal",
        "--model",
        "harmonic",
        "--n",
        "3",
        "--out",
        s(&out),
    ]);
    let (m, v) = load_matrix(&out);
    assert!(v.get("weights").is_none());
    let d: Vec<f64> = m.diagonal().iter().map(|z| z.re).collect();
    assert_eq!(d, vec![1.0, 0.5, 1.0 / 3.0]);
}

#[test]
fn counterexample_square_is_doubled_diagonal() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "c.json");
    ok(&[
        "build",
        "counterexample",
        "--diag",
        "1,4,9",
        "--out",
        s(&out),
    ]);
    let (m, _) = load_matrix(&out);
    assert_eq!(m.rows(), 6);
    let sq = &m * &m;
    let want = Matrix::from_diag(&[1.0, 4.0, 9.0, 1.0, 4.0, 9.0]);
    assert!(sq.max_abs_diff(&want) < 1e-12);
}

#[test]
fn g_from_dirac_has_expected_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let (d, g) = (p(dir.path(), "d.json"), p(dir.path(), "g.json"));
    ok(&["build", "dirac1d", "--n", "8", "--out", s(&d)]);
    ok(&[
        "build",
        "g-from-d",
        "--input",
        s(&d),
        "--p",
        "1",
        "--out",
        s(&g),
    ]);
    let (m, _) = load_matrix(&g);
    let eig = eigvalsh(&DenseHermitian::new(m).unwrap()).unwrap();
    let mut want: Vec<f64> = (-3..=4)
        .map(|k: i32| 1.0 / (1.0 + (k * k) as f64).sqrt())
        .collect();
    want.sort_by(f64::total_cmp);
    for (e, w) in eig.iter().zip(&want) {
        assert!((e - w).abs() < 1e-10);
    }
}

#[test]
fn zeta_curve_matches_direct_sum() {
    let dir = tempfile::tempdir().unwrap();
    let (g, c) = (p(dir.path(), "g.json"), p(dir.path(), "z.csv"));
    ok(&["build", "model-diagonal", "--n", "50", "--out", s(&g)]);
    ok(&[
        "curve",
        "zeta",
        "--g",
        s(&g),
        "--grid",
        "1.1:2:3",
        "--out",
        s(&c),
    ]);
    let rows = load_curve(&c);
    assert_eq!(rows.len(), 3);
    for (x, y) in rows {
        let direct: f64 = (1..=50).map(|k| (k as f64).powf(-x)).sum();
        assert!((y - direct).abs() <= 1e-12 * direct, "{x}: {y} vs {direct}");
    }
}

#[test]
fn heat_curve_is_nonnegative() {
    let dir = tempfile::tempdir().unwrap();
    let (g, c) = (p(dir.path(), "g.json"), p(dir.path(), "h.csv"));
    ok(&["build", "model-diagonal", "--n", "40", "--out", s(&g)]);
    ok(&[
        "curve",
        "heat",
        "--g",
        s(&g),
        "--grid",
        "0.5:1e4:25:log",
        "--out",
        s(&c),
    ]);
    let rows = load_curve(&c);
    assert_eq!(rows.len(), 25);
    assert!(rows.iter().all(|&(_, y)| y >= 0.0));
}

#[test]
fn cesaro_of_constant_is_constant() {
    let dir = tempfile::tempdir().unwrap();
    let (input, out) = (p(dir.path(), "const.csv"), p(dir.path(), "m.csv"));
    let mut text = String::from("x,value\n");
    for k in 0..20 {
        text.push_str(&format!("{},2.5\n", 10f64.powf(k as f64 / 4.0)));
    }
    std::fs::write(&input, text).unwrap();
    ok(&["curve", "cesaro", "--input", s(&input), "--out", s(&out)]);
    let rows = load_curve(&out);
    assert_eq!(rows.len(), 19);
    assert!(rows.iter().all(|&(_, y)| (y - 2.5).abs() < 1e-14));
}

#[test]
fn sigma_ratio_of_harmonic_diagonal() {
    let dir = tempfile::tempdir().unwrap();
    let (t, c) = (p(dir.path(), "t.json"), p(dir.path(), "s.csv"));
    ok(&["build", "model-diagonal", "--n", "64", "--out", s(&t)]);
    ok(&[
        "curve",
        "sigma-ratio",
        "--t",
        s(&t),
        "--grid",
        "1:64:7:log",
        "--out",
        s(&c),
    ]);
    for (x, y) in load_curve(&c) {
        let k = x.round() as usize;
        let h: f64 = (1..=k).map(|j| 1.0 / j as f64).sum();
        assert!((y - h / x.ln_1p()).abs() < 1e-12, "{x}");
    }
}

#[test]
fn malformed_grid_and_mismatched_factors_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let (g, a, c) = (
        p(dir.path(), "g.json"),
        p(dir.path(), "a.json"),
        p(dir.path(), "c.csv"),
    );
    ok(&["build", "model-diagonal", "--n", "4", "--out", s(&g)]);
    ok(&["build", "model-diagonal", "--n", "5", "--out", s(&a)]);
    assert_eq!(
        code(&ncint(&[
            "curve",
            "zeta",
            "--g",
            s(&g),
            "--grid",
            "2:1:3",
            "--out",
            s(&c)
        ])),
        2
    );
    assert_eq!(
        code(&ncint(&[
            "curve",
            "zeta",
            "--g",
            s(&g),
            "--a",
            s(&a),
            "--grid",
            "1.1:2:3",
            "--out",
            s(&c)
        ])),
        2
    );
    assert!(!c.exists());
}

#[test]
fn unknown_kind_and_unwritable_path() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&ncint(&[
            "build",
            "torus",
            "--n",
            "4",
            "--out",
            s(&p(dir.path(), "x.json"))
        ])),
        2
    );
    let missing = p(dir.path(), "no/such/dir/x.json");
    assert_eq!(
        code(&ncint(&[
            "build",
            "dirac1d",
            "--n",
            "4",
            "--out",
            s(&missing)
        ])),
        3
    );
}

#[test]
fn files_reload_bit_identically() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (p(dir.path(), "m.json"), p(dir.path(), "g.json"));
    ok(&[
        "build",
        "multiplication",
        "--n",
        "16",
        "--length",
        "7.3",
        "--function",
        "gaussian",
        "--out",
        s(&a),
    ]);
    ok(&[
        "build",
        "g-from-d",
        "--input",
        s(&a),
        "--p",
        "1.5",
        "--variant",
        "absolute",
        "--out",
        s(&b),
    ]);
    let (m, _) = load_matrix(&a);
    let g = m
        .diagonal()
        .iter()
        .map(|z| (1.0 + z.re.abs()).powf(-1.5))
        .collect::<Vec<_>>();
    let (gm, _) = load_matrix(&b);
    for (x, y) in gm.diagonal().iter().zip(&g) {
        assert!((x.re - y).abs() < 1e-14);
    }
}

#[test]
fn non_hermitian_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let (bad, c) = (p(dir.path(), "bad.json"), p(dir.path(), "c.csv"));
    std::fs::write(
        &bad,
        r#"{"n":2,"storage":"dense-rowmajor","re":[1,1,0,1],"im":[0,0,0,0]}"#,
    )
    .unwrap();
    assert_eq!(
        code(&ncint(&[
            "curve",
            "zeta",
            "--g",
            s(&bad),
            "--grid",
            "1.5:2:2",
            "--out",
            s(&c)
        ])),
        2
    );
}

#[test]
fn identity_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "r.json");
    ok(&["verify", "--suite", "identity", "--out", s(&out)]);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["suite"], "identity");
    assert_eq!(v["pass"], true);
    for c in v["checks"].as_array().unwrap() {
        assert!(c["worst_margin"].as_f64().unwrap() < 1e-8);
    }
    let csv = ok(&["report", "--input", s(&out), "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("suite,check,kind,instances,passes,worst_margin,warnings,pass\n"));
}

#[test]
fn negative_tolerance_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = p(dir.path(), "cfg.json");
    std::fs::write(&cfg, r#"{"suite":"identity","tolerance":-1}"#).unwrap();
    assert_eq!(
        code(&ncint(&[
            "verify",
            "--config",
            s(&cfg),
            "--out",
            s(&p(dir.path(), "r.json"))
        ])),
        2
    );
    std::fs::write(&cfg, r#"{"suite":"nonsense"}"#).unwrap();
    assert_eq!(code(&ncint(&["verify", "--config", s(&cfg)])), 2);
}

#[test]
fn coarse_geometry_suite_warns_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let (cfg, out) = (p(dir.path(), "cfg.json"), p(dir.path(), "r.json"));
    std::fs::write(
        &cfg,
        r#"{"suite":"geometry","checks":["spectral-dimension"],"dimension_sites":[64,96]}"#,
    )
    .unwrap();
    ok(&["verify", "--config", s(&cfg), "--out", s(&out)]);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("InsufficientResolution"), "{text}");
}

#[test]
fn reports_are_deterministic_up_to_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = p(dir.path(), "cfg.json");
    std::fs::write(&cfg, r#"{"suite":"inequality","trials":3,"dims":[4,6]}"#).unwrap();
    let strip = |path: &Path| -> String {
        let mut v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("generated_unix");
        serde_json::to_string(&v).unwrap()
    };
    let (r1, r2) = (p(dir.path(), "r1.json"), p(dir.path(), "r2.json"));
    ok(&[
        "verify",
        "--config",
        s(&cfg),
        "--seed",
        "11",
        "--out",
        s(&r1),
    ]);
    let out = Command::new(env!("CARGO_BIN_EXE_ncint"))
        .args([
            "verify",
            "--config",
            s(&cfg),
            "--seed",
            "11",
            "--out",
            s(&r2),
        ])
        .env("NCI_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(strip(&r1), strip(&r2));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&r1).unwrap()).unwrap();
    assert_eq!(v["seed"], 11);
}

#[test]
fn invalid_thread_count_is_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_ncint"))
        .args(["verify", "--suite", "identity"])
        .env("NCI_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}
