//! End-to-end tests of the binary: exit codes, JSON output, reproducibility.

use std::io::Write;
use std::process::{Command, Output};

fn toda() -> Command {
    Command::new(env!("CARGO_BIN_EXE_toda"))
}

fn run(args: &[&str]) -> Output {
    toda().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

#[test]
fn eval_upsilon_at_half_q_is_one() {
    let out = run(&["eval", "upsilon", "--z", "0.5q", "--gamma", "1.0"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert!(v["value_log_abs"].as_f64().unwrap().abs() < 1e-13);
    assert_eq!(v["sign"], 1);
}

#[test]
fn eval_upsilon_at_zero_reports_exact_zero() {
    let out = run(&["eval", "upsilon", "--z", "0", "--gamma", "1.0"]);
    assert_eq!(out.status.code(), Some(2), "zero lattice exits with the report code");
    let v = stdout_json(&out);
    assert_eq!(v["tri"], "Zero");
}

#[test]
fn eval_usage_errors_exit_64() {
    let out = run(&["eval", "upsilon", "--gamma", "1.0"]);
    assert_eq!(out.status.code(), Some(64), "missing --z");
    let out = run(&["eval", "nosuchkind", "--z", "1"]);
    assert_eq!(out.status.code(), Some(64));
    // malformed weight JSON
    let out = run(&[
        "eval",
        "fali",
        "--gamma",
        "1.0",
        "--weights",
        "{\"alpha0\": {\"basis\": \"mystery\", \"coords\": [0, 0]}, \"kappa\": 1, \"alphainf\": {\"basis\": \"root\", \"coords\": [0, 0]}}",
    ]);
    assert_eq!(out.status.code(), Some(64));
}

fn weights_json(a0: (f64, f64), kappa: f64, ainf: (f64, f64)) -> String {
    format!(
        "{{\"alpha0\": {{\"basis\": \"root\", \"coords\": [{}, {}]}}, \"kappa\": {kappa}, \"alphainf\": {{\"basis\": \"root\", \"coords\": [{}, {}]}}}}",
        a0.0, a0.1, ainf.0, ainf.1
    )
}

#[test]
fn eval_fali_weyl_identity_through_the_cli() {
    // F(alpha0) = R_s(alpha0) F(s_hat alpha0) composed from three invocations
    let q = 3.0f64; // gamma = 1
    let a0 = (q - 0.36, q - 0.27);
    let ainf = (q - 0.31, q - 0.42);
    let kappa = 1.31;

    let direct = stdout_json(&run(&[
        "eval", "fali", "--gamma", "1.0", "--weights", &weights_json(a0, kappa, ainf),
    ]));

    // shifted s1 action on alpha0 in root coordinates:
    // s1(c1 e1 + c2 e2) = (c2 - c1) e1 + c2 e2, recentered at Q = q(e1 + e2)
    let b = (a0.0 - q, a0.1 - q);
    let reflected = (q + b.1 - b.0, q + b.1);

    let at_reflected = stdout_json(&run(&[
        "eval", "fali", "--gamma", "1.0", "--weights", &weights_json(reflected, kappa, ainf),
    ]));
    let r = stdout_json(&run(&[
        "eval",
        "reflection",
        "--gamma",
        "1.0",
        "--element",
        "s1",
        "--weights",
        &weights_json(a0, kappa, ainf),
    ]));
    let lhs = direct["value_log_abs"].as_f64().unwrap();
    let rhs = at_reflected["value_log_abs"].as_f64().unwrap() + r["value_log_abs"].as_f64().unwrap();
    assert!(
        (lhs - rhs).abs() < 1e-9,
        "log F = {lhs} vs log(R F(reflected)) = {rhs}"
    );
    let sgn = direct["sign"].as_i64().unwrap();
    let sgn_rhs = at_reflected["sign"].as_i64().unwrap() * r["sign"].as_i64().unwrap();
    assert_eq!(sgn, sgn_rhs);
}

#[test]
fn verify_exit_codes() {
    let out = run(&["verify", "upsilon", "--trials", "40"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS"));
    let out = run(&["verify", "nosuchsuite"]);
    assert_eq!(out.status.code(), Some(64));
}

fn mc_config(dir: &std::path::Path, n_samples: usize, seed: u64) -> std::path::PathBuf {
    let path = dir.join("mc.toml");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(
        f,
        r#"kind = "liouville"
gamma = 1.4
mu = [1.0, 1.0]
weights = [1.0643, 1.0643, 1.1707]
n_samples = {n_samples}
seed = {seed}

[grid]
levels = 1
r_cut = 10.0
points_per_level = [220]
"#
    )
    .unwrap();
    path
}

#[test]
fn mc_reruns_are_byte_identical() {
    let dir = std::env::temp_dir().join(format!("toda-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = mc_config(&dir, 256, 77);
    let out_a = dir.join("a.jsonl");
    let out_b = dir.join("b.jsonl");
    let s1 = run(&["mc", "--config", cfg.to_str().unwrap(), "--out", out_a.to_str().unwrap(), "--compare", "dozz"]);
    assert_eq!(s1.status.code(), Some(0), "{}", String::from_utf8_lossy(&s1.stderr));
    let s2 = run(&["mc", "--config", cfg.to_str().unwrap(), "--out", out_b.to_str().unwrap(), "--compare", "dozz"]);
    assert_eq!(s2.status.code(), Some(0));
    let strip_manifest = |p: &std::path::Path| -> Vec<String> {
        std::fs::read_to_string(p)
            .unwrap()
            .lines()
            .filter(|l| !l.contains("\"manifest\""))
            .map(String::from)
            .collect()
    };
    assert_eq!(strip_manifest(&out_a), strip_manifest(&out_b));
    // every line parses as JSON and the level rows carry provenance
    let mut saw_level = false;
    let mut saw_compare = false;
    for line in std::fs::read_to_string(&out_a).unwrap().lines() {
        let v: serde_json::Value = serde_json::from_str(line).expect("valid JSON line");
        if v.get("level").is_some() {
            saw_level = true;
            assert!(v.get("config_hash").is_some());
        }
        if v.get("compare").is_some() {
            saw_compare = true;
            assert!(v.get("z_score").is_some());
        }
    }
    assert!(saw_level && saw_compare);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn mc_bad_config_exits_65() {
    let dir = std::env::temp_dir().join(format!("toda-cli-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.toml");
    std::fs::write(&path, "kind = \"liouville\"\ngamma = 1.4\nn_samples = 10\nseed = 1\n[grid]\nlevels = 2\nr_cut = 10.0\npoints_per_level = [100]\n").unwrap();
    let out = run(&["mc", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(65));
    let out = run(&["mc", "--config", dir.join("missing.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(65));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn interrupted_mc_leaves_valid_json_lines() {
    // SIGINT mid-run: every line already on disk must still parse
    let dir = std::env::temp_dir().join(format!("toda-cli-int-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = mc_config(&dir, 4_000_000, 3);
    let out_path = dir.join("partial.jsonl");
    let mut child = toda()
        .args(["mc", "--config", cfg.to_str().unwrap(), "--out", out_path.to_str().unwrap()])
        .spawn()
        .unwrap();
    std::thread::sleep(std::time::Duration::from_millis(700));
    unsafe {
        libc::kill(child.id() as i32, libc::SIGINT);
    }
    let _ = child.wait();
    // the manifest line is flushed before sampling starts
    let text = std::fs::read_to_string(&out_path).unwrap_or_default();
    assert!(!text.is_empty(), "manifest line must be flushed before the run");
    for line in text.lines() {
        let _: serde_json::Value = serde_json::from_str(line).expect("valid JSON line");
    }
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn blocks_csv_real_grid() {
    let out = run(&[
        "blocks", "--a", "0.31,-0.42,0.77", "--b", "1.21,0.65", "--grid", "0.05,0.85,0.05",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("z_re,z_im,H0_re"));
    assert!(header.contains("crossing"));
    let mut rows = 0;
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 13, "row: {line}");
        assert_eq!(cols[12], "ok");
        // residual columns below the block tolerance
        for c in &cols[9..12] {
            assert!(c.parse::<f64>().unwrap() < 1e-6, "row: {line}");
        }
        rows += 1;
    }
    assert_eq!(rows, 17);
}

#[test]
fn blocks_csv_ring_is_conjugation_symmetric() {
    let out = run(&[
        "blocks", "--a", "0.31,-0.42,0.77", "--b", "1.21,0.65", "--grid", "0,0,1",
        "--ring", "0.5", "--ring-points", "8",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| {
            l.split(',')
                .take(12)
                .map(|c| c.parse::<f64>().unwrap())
                .collect()
        })
        .collect();
    assert_eq!(rows.len(), 8);
    // ring points come in conjugate pairs (theta, 2pi - theta): the crossing
    // column (index 8) must agree within numerical noise
    for i in 0..4 {
        let j = 7 - i;
        assert!((rows[i][1] + rows[j][1]).abs() < 1e-12, "conjugate z");
        let (a, b) = (rows[i][8], rows[j][8]);
        assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "crossing {a} vs {b}");
    }
}
