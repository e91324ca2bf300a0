//! End-to-end checks of the `posmap` binary: exit codes, file formats, seeding.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use posmap::matkernel::{partial_transpose, ComplexMatrix, C64};
use posmap::report::ClassificationReport;
use posmap::suite::Fixture;
use posmap::{io, rng};
use tempfile::TempDir;

fn posmap() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_posmap"));
    cmd.env_remove("POSMAP_SEED");
    cmd
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tang(dir: &Path, stage: &str, mu: &str, eps: &str) -> PathBuf {
    let path = dir.join(format!("tang-{stage}.json"));
    let out = run(posmap().args(["tang", "--mu", mu, "--eps", eps, "--stage", stage, "--out"]).arg(&path));
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn fixture_matrix(dir: &Path, name: &str) -> PathBuf {
    let fx_dir = dir.join("fixtures");
    assert_eq!(code(&run(posmap().arg("fixtures").arg("--out").arg(&fx_dir))), 0);
    let fx: Fixture = io::read_json(&fx_dir.join(format!("{name}.json"))).unwrap();
    let path = dir.join(format!("{name}-matrix.json"));
    io::write_json(&path, &fx.matrix).unwrap();
    path
}

#[test]
fn tang_rejects_parameters_outside_the_admissible_range() {
    for (mu, eps) in [("0.9", "0.2"), ("-1", "0.1"), ("0.5", "0")] {
        let out = run(posmap().args(["tang", "--mu", mu, "--eps", eps]));
        assert_eq!(code(&out), 2, "mu = {mu}, eps = {eps}");
    }
}

#[test]
fn tang_raw_matrix_has_the_expected_entries() {
    let dir = TempDir::new().unwrap();
    let (mu, eps) = (0.9, 0.12);
    let m = io::read_matrix(&tang(dir.path(), "raw", "0.9", "0.12")).unwrap();
    assert_eq!((m.rows(), m.cols()), (8, 8));
    assert_eq!(m[(0, 0)], C64::new(1.0 - eps, 0.0));
    assert_eq!(m[(0, 5)], C64::new(-1.0, 0.0));
    assert_eq!(m[(2, 4)], C64::new(mu, 0.0));
    assert_eq!(m[(4, 4)], C64::new(mu * mu, 0.0));
}

#[test]
fn tang_normalized_map_is_unital() {
    let dir = TempDir::new().unwrap();
    let m = io::read_matrix(&tang(dir.path(), "normalized", "0.9", "0.12")).unwrap();
    // phi(I) is the sum of the two diagonal blocks.
    let d = m.rows() / 2;
    for i in 0..d {
        for j in 0..d {
            let v = m[(i, j)] + m[(d + i, d + j)];
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((v - C64::new(want, 0.0)).norm() <= 1e-9, "phi(I)[{i},{j}] = {v}");
        }
    }
}

#[test]
fn malformed_inputs_exit_with_code_three() {
    let dir = TempDir::new().unwrap();
    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    let odd = dir.path().join("odd.json");
    io::write_json(&odd, &ComplexMatrix::identity(3)).unwrap();
    let missing = dir.path().join("missing.json");
    for path in [&garbage, &odd, &missing] {
        let out = run(posmap().arg("decompose").arg(path));
        assert_eq!(code(&out), 3, "{}", path.display());
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
}

#[test]
fn matrix_files_round_trip_with_the_same_digest() {
    let dir = TempDir::new().unwrap();
    let path = tang(dir.path(), "normalized", "0.3", "0.01");
    let m = io::read_matrix(&path).unwrap();
    let copy = dir.path().join("copy.json");
    io::write_json(&copy, &m).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&copy).unwrap());
    assert_eq!(io::input_digest(&io::read_matrix(&copy).unwrap()), io::input_digest(&m));
}

#[test]
fn classification_is_reproducible_under_a_seed() {
    let dir = TempDir::new().unwrap();
    let input = fixture_matrix(dir.path(), "equality-ccp");
    let report = |name: &str, cmd: &mut Command| {
        let out_path = dir.path().join(name);
        let out = run(cmd.arg("classify").arg(&input).args(["--restarts", "8", "--witness-restarts", "2", "--out"]).arg(&out_path));
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        io::read_json::<ClassificationReport>(&out_path).unwrap().without_timings()
    };
    let a = report("a.json", posmap().args(["--seed", "5"]));
    let b = report("b.json", posmap().args(["--seed", "5", "--sequential"]));
    let c = report("c.json", posmap().env("POSMAP_SEED", "5"));
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert_eq!(a.seed, 5);
    assert_eq!(a.input_digest, io::input_digest(&io::read_matrix(&input).unwrap()));
}

#[test]
fn canonical_accepts_equality_maps_and_rejects_others() {
    let dir = TempDir::new().unwrap();
    let eq = fixture_matrix(dir.path(), "equality-case");
    let out = run(posmap().arg("canonical").arg(&eq));
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("\"basis_change\""));

    let tang = tang(dir.path(), "normalized", "0.9", "0.12");
    assert_eq!(code(&run(posmap().arg("canonical").arg(&tang))), 1);
}

#[test]
fn decompose_finds_a_split_of_a_decomposable_map() {
    let dir = TempDir::new().unwrap();
    let mut r = rng::stream(3, "cli-decompose", 0);
    let a = rng::psd(&mut r, 6, 6);
    let b = rng::psd(&mut r, 6, 6);
    let h = &a + &partial_transpose(&b, 3).unwrap();
    let input = dir.path().join("split.json");
    io::write_json(&input, &h).unwrap();
    let out = run(posmap().arg("decompose").arg(&input));
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn verify_paper_passes_on_a_small_grid() {
    let out = run(posmap().args(["verify-paper", "--grid", "1"]));
    let text = stdout(&out);
    assert_eq!(code(&out), 0, "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 11);
}

#[test]
fn verify_paper_reports_every_broken_fixture() {
    let dir = TempDir::new().unwrap();
    let fx_dir = dir.path().join("fixtures");
    assert_eq!(code(&run(posmap().arg("fixtures").arg("--out").arg(&fx_dir))), 0);
    std::fs::write(fx_dir.join("tang-raw.json"), "[1, 2").unwrap();
    // Flip an expectation so that the classification disagrees with it.
    let path = fx_dir.join("random-psd.json");
    let mut fx: Fixture = io::read_json(&path).unwrap();
    fx.expect.cp = Some(false);
    io::write_json(&path, &fx).unwrap();

    let out = run(posmap().args(["verify-paper", "--grid", "1", "--fixtures"]).arg(&fx_dir));
    let text = stdout(&out);
    assert_eq!(code(&out), 1, "{text}");
    let failed: Vec<&str> = text.lines().filter(|l| l.starts_with("[FAIL]")).collect();
    assert_eq!(failed.len(), 2, "{text}");
    assert!(failed.iter().any(|l| l.contains("tang-raw")));
    assert!(failed.iter().any(|l| l.contains("random-psd")));
}
