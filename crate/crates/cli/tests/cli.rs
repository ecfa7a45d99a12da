use std::path::Path;
use std::process::Command;

const SMALL: &str = r#"
[scenario]
drops = 6
strategies = ["best", "random"]

[scenario.quadrature]
panels = 16
rtol = 1e-4

[sweep]
lambdas = [0.3, 0.7]
sigmas = [0.0, 0.05]

[thresholds]
c_thr_bps = [0.0, 1e10, 3e10]
"#;

fn sim() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sim"));
    cmd.env_remove("SIM_THREADS");
    cmd
}

fn write_scenario(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("scenario.toml");
    std::fs::write(&path, text).unwrap();
    path
}

fn read(path: impl AsRef<Path>) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn sweep_writes_tables_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let scenario = write_scenario(tmp.path(), SMALL);
    let out = tmp.path().join("out");
    let status = sim()
        .args(["sweep", "--scenario"])
        .arg(&scenario)
        .arg("--out")
        .arg(&out)
        .args(["--threads", "2"])
        .status()
        .unwrap();
    assert!(status.success());

    let throughput = read(out.join("throughput.csv"));
    let mut lines = throughput.lines();
    assert_eq!(
        lines.next().unwrap(),
        "lambda,sigma_s,strategy,successful_drops,failed_drops,mean_throughput_bps,stderr_bps"
    );
    assert_eq!(lines.count(), 2 * 2 * 2);

    let cdf = read(out.join("cdf.csv"));
    assert_eq!(cdf.lines().next().unwrap(), "lambda,sigma_s,strategy,C_thr_bps,P_C");
    assert_eq!(cdf.lines().count(), 1 + 2 * 2 * 2 * 3);

    let manifest: serde_json::Value = serde_json::from_str(&read(out.join("manifest.json"))).unwrap();
    assert_eq!(manifest["command"], "sweep");
    assert_eq!(manifest["master_seed"], 1);
    assert_eq!(manifest["threads"], 2);
    assert_eq!(manifest["cells"].as_array().unwrap().len(), 4);
    assert_eq!(manifest["scenario"]["scenario"]["drops"], 6);
    assert!(manifest["timestamp_unix"].as_u64().unwrap() > 0);
    let summary: serde_json::Value = serde_json::from_str(&read(out.join("summary.json"))).unwrap();
    assert_eq!(summary.as_array().unwrap().len(), 4);
    assert_eq!(manifest["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let scenario = write_scenario(tmp.path(), SMALL);
    let mut outputs = Vec::new();
    for (i, threads) in ["1", "3", "1"].iter().enumerate() {
        let out = tmp.path().join(format!("out{i}"));
        let status = sim()
            .args(["figure2", "--scenario"])
            .arg(&scenario)
            .arg("--out")
            .arg(&out)
            .env("SIM_THREADS", threads)
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push(read(out.join("figure2.csv")));
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
    let header = outputs[0].lines().next().unwrap();
    assert_eq!(header, "lambda,sigma_s,strategy,mean_throughput_bps,stderr_bps");
    // two lambdas, three fixed jitter values, two strategies
    assert_eq!(outputs[0].lines().count(), 1 + 2 * 3 * 2);
}

#[test]
fn seed_and_drops_override_the_scenario() {
    let tmp = tempfile::tempdir().unwrap();
    let scenario = write_scenario(tmp.path(), SMALL);
    let run = |seed: &str, name: &str| {
        let out = tmp.path().join(name);
        let status = sim()
            .args(["run", "--scenario"])
            .arg(&scenario)
            .arg("--out")
            .arg(&out)
            .args(["--seed", seed, "--drops", "3"])
            .status()
            .unwrap();
        assert!(status.success());
        (read(out.join("throughput.csv")), read(out.join("manifest.json")))
    };
    let (a, manifest) = run("11", "a");
    let (b, _) = run("12", "b");
    assert_ne!(a, b);
    assert!(a.lines().nth(1).unwrap().starts_with("0.3,0,best,3,0,"));
    let manifest: serde_json::Value = serde_json::from_str(&manifest).unwrap();
    assert_eq!(manifest["master_seed"], 11);
}

#[test]
fn figure3_reports_cdf_at_two_densities() {
    let tmp = tempfile::tempdir().unwrap();
    let scenario = write_scenario(tmp.path(), SMALL);
    let out = tmp.path().join("out");
    let status = sim()
        .args(["figure3", "--scenario"])
        .arg(&scenario)
        .arg("--out")
        .arg(&out)
        .args(["--drops", "2"])
        .status()
        .unwrap();
    assert!(status.success());
    let csv = read(out.join("figure3.csv"));
    assert_eq!(csv.lines().next().unwrap(), "lambda,sigma_s,strategy,C_thr_bps,P_C");
    let lambdas: std::collections::BTreeSet<&str> =
        csv.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(lambdas.into_iter().collect::<Vec<_>>(), ["0.3", "1.5"]);
}

#[test]
fn validate_prints_defaults_that_parse_back() {
    let tmp = tempfile::tempdir().unwrap();
    let scenario = write_scenario(tmp.path(), "");
    let output = sim()
        .args(["validate", "--scenario"])
        .arg(&scenario)
        .output()
        .unwrap();
    assert!(output.status.success());
    let echoed = String::from_utf8(output.stdout).unwrap();
    let again = write_scenario(tmp.path(), &echoed);
    let second = sim()
        .args(["validate", "--scenario"])
        .arg(&again)
        .output()
        .unwrap();
    assert!(second.status.success());
    assert_eq!(String::from_utf8(second.stdout).unwrap(), echoed);
}

#[test]
fn invalid_scenario_names_the_key() {
    let tmp = tempfile::tempdir().unwrap();
    let scenario = write_scenario(tmp.path(), "[scenario]\np_e = 1.4\n");
    let output = sim()
        .args(["run", "--scenario"])
        .arg(&scenario)
        .arg("--out")
        .arg(tmp.path().join("out"))
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("scenario.p_e"), "{stderr}");
    assert!(!tmp.path().join("out").exists());
}

#[test]
fn unknown_key_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let scenario = write_scenario(tmp.path(), "[scenario]\nlamda = 0.3\n");
    let output = sim().args(["validate", "--scenario"]).arg(&scenario).output().unwrap();
    assert!(!output.status.success());
    assert!(String::from_utf8(output.stderr).unwrap().contains("lamda"));
}

#[test]
fn total_failure_exits_nonzero_but_keeps_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    // bodies cannot be packed at this density
    let scenario = write_scenario(
        tmp.path(),
        "[scenario]\nlambda = 20.0\ndrops = 2\nmax_rejections = 50\n",
    );
    let out = tmp.path().join("out");
    let output = sim()
        .args(["run", "--scenario"])
        .arg(&scenario)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(!output.status.success());
    let manifest: serde_json::Value = serde_json::from_str(&read(out.join("manifest.json"))).unwrap();
    assert_eq!(manifest["cells"][0]["failed_drops"], 2);
    assert!(manifest["cells"][0]["error"].is_string());
    assert_eq!(read(out.join("throughput.csv")).lines().count(), 1);
}

#[test]
fn missing_output_directory_is_an_error() {
    let tmp = tempfile::tempdir().unwrap();
    let scenario = write_scenario(tmp.path(), SMALL);
    let output = sim().args(["run", "--scenario"]).arg(&scenario).output().unwrap();
    assert!(!output.status.success());
    assert!(String::from_utf8(output.stderr).unwrap().contains("--out"));
}
