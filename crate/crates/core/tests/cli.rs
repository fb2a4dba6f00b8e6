use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn vilenkin(args: &[&str], out: &Path, threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_vilenkin"));
    cmd.args(args).arg("--out").arg(out);
    match threads {
        Some(t) => cmd.env("VILENKIN_THREADS", t),
        None => cmd.env_remove("VILENKIN_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn verify_passes_with_exit_zero() {
    let dir = TempDir::new().unwrap();
    let out = vilenkin(
        &["verify", "--generator", "cycle:2,3,4", "--depth", "5"],
        dir.path(),
        None,
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = read(dir.path(), "verify.csv");
    assert!(csv.starts_with("name,params,"));
    assert!(!csv.contains('\r'));
    assert!(dir.path().join("summary.txt").exists());
}

#[test]
fn usage_and_config_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    for args in [
        vec!["verify", "--generator", "1,2"],
        vec!["verify", "--depth", "23"],
        vec!["lebesgue", "--nmax", "99999", "--depth", "4"],
        vec!["counterexample", "--phi", "const:0.5"],
        vec!["transmogrify"],
        vec!["verify", "--tol", "nope"],
    ] {
        let out = vilenkin(&args, dir.path(), None);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = vilenkin(&["verify"], dir.path(), Some("zero"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn infeasible_alpha_budget_exits_one() {
    let dir = TempDir::new().unwrap();
    let out = vilenkin(
        &["counterexample", "--depth", "7", "--alphas", "greedy:3"],
        dir.path(),
        None,
    );
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("only 1 of 3"), "{err}");
}

#[test]
fn config_file_values_are_overridden_by_flags() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("run.cfg");
    fs::write(
        &config,
        "# lebesgue run\ngenerator = const:3\ndepth = 3\nnmax = 5\n",
    )
    .unwrap();
    let cfg = config.to_str().unwrap();

    let out = vilenkin(&["lebesgue", "--config", cfg], dir.path(), None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(read(dir.path(), "lebesgue.csv").lines().count(), 1 + 5);

    let out = vilenkin(
        &["lebesgue", "--config", cfg, "--nmax", "2"],
        dir.path(),
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(read(dir.path(), "lebesgue.csv").lines().count(), 1 + 2);

    fs::write(&config, "colour = red\n").unwrap();
    let out = vilenkin(&["lebesgue", "--config", cfg], dir.path(), None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn walsh_lebesgue_rows() {
    let dir = TempDir::new().unwrap();
    let out = vilenkin(
        &["lebesgue", "--depth", "4", "--nmax", "4"],
        dir.path(),
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let csv = read(dir.path(), "lebesgue.csv");
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "n,lebesgue");
    assert_eq!(rows[2], "2,1.0000000000000000e0");
    assert_eq!(rows[3], "3,1.5000000000000000e0");
    assert_eq!(rows[4], "4,1.0000000000000000e0");
}

#[test]
fn empty_ranges_write_headers_only() {
    let dir = TempDir::new().unwrap();
    let out = vilenkin(
        &["kernels", "--depth", "3", "--nmax", "0"],
        dir.path(),
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(read(dir.path(), "dirichlet.csv"), "n,index,real,imag\n");
    assert_eq!(read(dir.path(), "fejer.csv"), "n,index,real,imag\n");
}

#[test]
fn reruns_and_thread_counts_give_identical_files() {
    let runs: [(&[&str], &[&str]); 3] = [
        (
            &["counterexample", "--depth", "10", "--alphas", "4..9"],
            &["counterexample.csv"],
        ),
        (
            &["variation", "--generator", "cycle:2,3", "--depth", "8"],
            &["variation.csv"],
        ),
        (
            &["kernels", "--generator", "const:3", "--depth", "3"],
            &["dirichlet.csv", "fejer.csv"],
        ),
    ];
    for (args, files) in runs {
        let dirs: Vec<TempDir> = (0..3).map(|_| TempDir::new().unwrap()).collect();
        for (dir, threads) in dirs.iter().zip([Some("1"), Some("1"), Some("8")]) {
            let out = vilenkin(args, dir.path(), threads);
            assert_eq!(out.status.code(), Some(0), "{args:?}");
        }
        for name in files.iter().chain(&["summary.txt"]) {
            let first = fs::read(dirs[0].path().join(name)).unwrap();
            for other in &dirs[1..] {
                assert_eq!(
                    first,
                    fs::read(other.path().join(name)).unwrap(),
                    "{args:?} {name}"
                );
            }
        }
    }
}

#[test]
fn counterexample_reports_divergence_for_constant_phi() {
    let dir = TempDir::new().unwrap();
    let out = vilenkin(
        &["counterexample", "--depth", "12", "--alphas", "4..11"],
        dir.path(),
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let summary = String::from_utf8_lossy(&out.stdout);
    assert!(summary.contains("growth: divergent"), "{summary}");
    let csv = read(dir.path(), "counterexample.csv");
    assert_eq!(
        csv.lines().next().unwrap(),
        "k,alpha_k,M_alpha,lambda_k,n,T_n,v_mean,norm_sigma"
    );
    assert_eq!(csv.lines().count(), 1 + 8);
}
