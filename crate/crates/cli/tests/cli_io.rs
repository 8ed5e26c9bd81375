//! CLI surface tests: file formats, flags, exit codes and JSON output.

use std::io::Write;
use std::process::Command;

fn write_graph(dir: &std::path::Path, name: &str, body: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(body.as_bytes()).unwrap();
    path
}

fn pscub() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pscub"))
}

fn tmpdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("pscub-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

const FIG_GRAPH: &str = r#"{
  "polymers": ["a","b","c","d","e"],
  "incompatible": [["a","b"],["b","c"],["a","d"],["b","e"],["c","e"]]
}"#;

#[test]
fn ursell_values_from_files() {
    let dir = tmpdir();
    let graph = write_graph(&dir, "fig.json", FIG_GRAPH);
    // Single vertex.
    let out = pscub()
        .args(["ursell", "--graph"])
        .arg(&graph)
        .args(["--xi", "a", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ursell"], 1.0);
    // Disconnected vector: a and c are compatible.
    let out = pscub()
        .args(["ursell", "--graph"])
        .arg(&graph)
        .args(["--xi", "a,c", "--json"])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ursell"], 0.0);
    assert_eq!(v["connected"], false);
    // Triangle via reflexivity: (a, b, a).
    let out = pscub()
        .args(["ursell", "--graph"])
        .arg(&graph)
        .args(["--xi", "a,b,a", "--json"])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ursell"], 2.0);
    assert_eq!(v["singleton_trees"]["greedy"], 2);
    assert_eq!(v["singleton_trees"]["returning"], 2);
}

#[test]
fn ursell_xi_from_json_array_file() {
    let dir = tmpdir();
    let graph = write_graph(&dir, "figx.json", FIG_GRAPH);
    let xi = write_graph(&dir, "xi.json", r#"["a","a","b","c","a","d","c","e"]"#);
    let out = pscub()
        .args(["ursell", "--graph"])
        .arg(&graph)
        .arg("--xi")
        .arg(format!("@{}", xi.display()))
        .arg("--json")
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ursell"], -108.0);
}

#[test]
fn scub_with_rho_file_and_certify() {
    let dir = tmpdir();
    let graph = write_graph(&dir, "fig2.json", FIG_GRAPH);
    let rho = write_graph(
        &dir,
        "rho.json",
        r#"{"a": 0.05, "b": 0.04, "c": 0.05, "d": 0.06, "e": 0.05}"#,
    );
    let out = pscub()
        .args(["scub", "--graph"])
        .arg(&graph)
        .args(["--kind", "fp", "--rho"])
        .arg(&rho)
        .args(["--certify", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["holds"], true);
    assert_eq!(v["certified_disc"], true);
    assert!(v["witness_mu"]["a"].as_f64().unwrap() > 0.0);
}

#[test]
fn scub_homogeneous_zero_holds_trivially() {
    let dir = tmpdir();
    let graph = write_graph(&dir, "fig3.json", FIG_GRAPH);
    let out = pscub()
        .args(["scub", "--graph"])
        .arg(&graph)
        .args(["--kind", "dob", "--homogeneous", "0", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["holds"], true);
    let mu = v["witness_mu"]["a"].as_f64().unwrap();
    assert_eq!(mu, 0.0);
}

#[test]
fn scub_failure_exits_nonzero() {
    let dir = tmpdir();
    let graph = write_graph(&dir, "fig4.json", FIG_GRAPH);
    let out = pscub()
        .args(["scub", "--graph"])
        .arg(&graph)
        .args(["--kind", "dob", "--homogeneous", "0.15"])
        .output()
        .unwrap();
    // Above the joint critical point of the example system the iteration
    // escapes and the command signals failure.
    assert!(!out.status.success());
}

#[test]
fn scub_optimal_matches_table() {
    // The hexagonal interior neighbourhood as a graph file: the optimal
    // Dobrushin rho at the centre equals the table value.
    let dir = tmpdir();
    let graph = write_graph(
        &dir,
        "hexnb.json",
        r#"{"polymers": ["g","n1","n2","n3"],
            "incompatible": [["g","n1"],["g","n2"],["g","n3"]]}"#,
    );
    let out = pscub()
        .args(["scub", "--graph"])
        .arg(&graph)
        .args(["--kind", "dob", "--optimal", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["gamma"], "g");
    let opt = v["optimal_rho"].as_f64().unwrap();
    assert!((opt - 27.0 / 256.0).abs() < 1e-6);
}

#[test]
fn tree_command_star_values() {
    let out = pscub()
        .args(["tree", "--degree", "3", "--star", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["rho_star"].as_f64().unwrap() - 4.0 / 27.0).abs() < 1e-15);
    assert!((v["alpha"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
    assert!(v["derivative_near_star"].as_f64().unwrap().abs() > 1e3);

    let out = pscub()
        .args(["tree", "--degree", "2", "--star", "--json"])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["rho_star"].as_f64().unwrap() - 0.25).abs() < 1e-15);
    assert!((v["alpha"].as_f64().unwrap() - 0.5).abs() < 1e-12);

    let out = pscub()
        .args(["tree", "--degree", "3", "--rho", "0"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("alpha(0) = 1"));
}

#[test]
fn hex_patch_tracks_interior_optimum() {
    // Just below the interior optimum 27/256 the patch fixpoint holds;
    // above it the interior drives divergence.
    let dir = tmpdir();
    let out = pscub()
        .args(["lattice", "--kind", "hexagonal", "--rows", "8", "--cols", "8"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let path = dir.join("hex88.json");
    std::fs::write(&path, &out.stdout).unwrap();
    let run = |r: &str| {
        pscub()
            .args(["scub", "--graph"])
            .arg(&path)
            .args(["--kind", "dob", "--homogeneous", r])
            .output()
            .unwrap()
            .status
            .success()
    };
    assert!(run("0.105"));
    assert!(!run("0.12"));
}

#[test]
fn lattice_output_feeds_back_in() {
    let dir = tmpdir();
    let out = pscub()
        .args(["lattice", "--kind", "hexagonal", "--rows", "4", "--cols", "4"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let path = dir.join("hex.json");
    std::fs::write(&path, &out.stdout).unwrap();
    let check = pscub()
        .args(["scub", "--graph"])
        .arg(&path)
        .args(["--kind", "fp", "--homogeneous", "0.05", "--json"])
        .output()
        .unwrap();
    assert!(check.status.success());
    let v: serde_json::Value = serde_json::from_slice(&check.stdout).unwrap();
    assert_eq!(v["holds"], true);
}

#[test]
fn verify_is_deterministic_per_seed() {
    let run = || {
        pscub()
            .args([
                "verify", "--scheme", "syn", "--trials", "15", "--max-len", "4", "--seed", "9",
            ])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn parse_errors_exit_code_two() {
    let dir = tmpdir();
    let bad = write_graph(&dir, "bad.json", "{ not json ");
    let out = pscub()
        .args(["ursell", "--graph"])
        .arg(&bad)
        .args(["--xi", "a"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let graph = write_graph(&dir, "ok.json", FIG_GRAPH);
    let out = pscub()
        .args(["ursell", "--graph"])
        .arg(&graph)
        .args(["--xi", "a,zz"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn enum_cap_env_is_honoured() {
    let dir = tmpdir();
    let graph = write_graph(&dir, "fig5.json", FIG_GRAPH);
    // The 8-vertex anatomy cluster has 15 induced edges; a cap of 10
    // must make the enumeration refuse.
    let out = pscub()
        .env("PSCUB_ENUM_CAP", "10")
        .args(["ursell", "--graph"])
        .arg(&graph)
        .args(["--xi", "a,a,b,c,a,d,c,e"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = pscub()
        .args(["ursell", "--graph"])
        .arg(&graph)
        .args(["--xi", "a,a,b,c,a,d,c,e", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ursell"], -108.0);
    assert_eq!(v["singleton_trees"]["pen"], 108);
}
