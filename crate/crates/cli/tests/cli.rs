use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_dimer-coamoeba"));
    c.env_remove("DIMER_COAMOEBA_OUT_DIR");
    c
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("dimer-coamoeba-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn paper_suite_reports_every_criterion() {
    let dir = scratch("suite");
    let out = run(&["paper-suite", "--out-dir", dir.to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).collect();
    assert_eq!(lines.len(), 12, "{text}");
    let report: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("paper_suite.json")).unwrap()).unwrap();
    assert_eq!(report["schema"], 1);
    let all = report["all_passed"].as_bool().unwrap();
    assert_eq!(out.status.code(), Some(if all { 0 } else { 1 }));
    for fig in ["03", "04", "08", "09", "10", "11", "14", "17", "20"] {
        let found = std::fs::read_dir(&dir).unwrap().filter_map(|e| e.ok()).any(|e| {
            let name = e.file_name().to_string_lossy().to_string();
            name.starts_with(&format!("fig{fig}"))
                && std::fs::read_to_string(e.path()).unwrap().contains(&format!("Fig. {}:", fig.trim_start_matches('0')))
        });
        assert!(found, "figure {fig}");
    }
}

#[test]
fn hv_square_writes_fixture_and_svg() {
    let dir = scratch("hv");
    let d = dir.to_str().unwrap();
    let v = json_of(&run(&["hv", "square", "--out-dir", d]));
    assert_eq!(v["admissible_classes"], 1);
    assert_eq!((v["white_nodes"].as_u64(), v["black_nodes"].as_u64(), v["edges"].as_u64()), (Some(1), Some(1), Some(4)));
    let fixture = std::fs::read_to_string(dir.join("square.dimer")).unwrap();
    let m = json_of(&run(&["dimer", "matchings", dir.join("square.dimer").to_str().unwrap()]));
    assert_eq!(m["count"], 4);
    assert!(!fixture.is_empty());
    assert!(std::fs::read_to_string(dir.join("square_hv.svg")).unwrap().contains("<metadata>schema 1; Fig. 4"));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = scratch("det");
    let d = dir.to_str().unwrap();
    let grab = |tag: &str| {
        let svg = dir.join(format!("{tag}.svg"));
        let json = dir.join(format!("{tag}.json"));
        let out = run(&[
            "coamoeba",
            "x*y + x - y + 1",
            "--grid",
            "60,16",
            "--svg",
            svg.to_str().unwrap(),
            "--report",
            json.to_str().unwrap(),
            "--out-dir",
            d,
        ]);
        assert!(out.status.success());
        (std::fs::read(svg).unwrap(), std::fs::read(json).unwrap())
    };
    assert_eq!(grab("a"), grab("b"));
    let f1 = run(&["fibration", "report", "--collection", "ec2", "--steps", "64"]).stdout;
    let f2 = run(&["fibration", "report", "--collection", "ec2", "--steps", "64"]).stdout;
    assert_eq!(f1, f2);
}

#[test]
fn fibration_report_counts_triangles() {
    let dir = scratch("fib");
    let v = json_of(&run(&["fibration", "report", "--collection", "ec2", "--svg-dir", dir.to_str().unwrap()]));
    assert_eq!(v["census"]["polygons"]["3"], 8);
    assert_eq!(v["contracted_nodes"], 8);
    assert_eq!(v["projection"]["base_points"], 2);
    assert!(dir.join("fig17_s_plane_graph.svg").exists());
    let ec = json_of(&run(&["fibration", "report", "--collection", "ec"]));
    assert_eq!(ec["census"]["polygons"]["4"], 4);
    assert_eq!(ec["surface_euler_characteristic"], 0);
}

#[test]
fn bundles_commands() {
    let v = json_of(&run(&["bundles", "check", "(0,0) (1,0) (1,1) (2,1)"]));
    assert_eq!(v["strong_exceptional"], true);
    assert_eq!(v["full"], true);
    assert_eq!(v["dims"]["1,4"][0], 6);
    let m = json_of(&run(&["bundles", "mutate", "--at", "last", "--preset", "paper"]));
    assert_eq!(m["output"]["text"], "(O(0,0), O(1,0), O(0,1), O(1,1))");
    let back = json_of(&run(&["bundles", "mutate", "(0,0) (1,0) (0,1) (1,1)", "--direction", "right"]));
    assert_eq!(back["output"]["text"], "(O(0,0), O(1,0), O(1,1), O(2,1))");
    let bad = json_of(&run(&["bundles", "check", "(0,0) (2,0)"]));
    assert_eq!(bad["strong_exceptional"], false);
}

#[test]
fn dimer_commands_on_bundled_fixtures() {
    assert_eq!(json_of(&run(&["dimer", "matchings", "fig11"]))["count"], 8);
    assert_eq!(json_of(&run(&["dimer", "isoradial", "fig11"]))["feasible"], true);
    let f24 = json_of(&run(&["dimer", "isoradial", "fig24"]));
    assert_eq!(f24["feasible"], false);
    assert_eq!(f24["euler"], serde_json::json!([8, 12, 4, 0]));
    let cp = json_of(&run(&["dimer", "charpoly", "square"]));
    assert_eq!(cp["newton_polygon_centered"].as_array().unwrap().len(), 4);
}

#[test]
fn parameter_binding_and_config_file() {
    let dir = scratch("cfg");
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "# small run\ngrid = 40,16\nparam.t = 0.25\n").unwrap();
    let v = json_of(&run(&[
        "coamoeba",
        "x + (2*t-1)*x^-1 + y + (t+1)*y^-1",
        "--config",
        cfg.to_str().unwrap(),
    ]));
    assert_eq!(v["grid"], serde_json::json!([40, 16]));
    assert!(v["samples"].as_u64().unwrap() > 0);
    // flag wins over the config file
    let v = json_of(&run(&[
        "coamoeba",
        "x + (2*t-1)*x^-1 + y + (t+1)*y^-1",
        "--config",
        cfg.to_str().unwrap(),
        "--grid",
        "20,8",
        "-p",
        "t=0.1",
    ]));
    assert_eq!(v["grid"], serde_json::json!([20, 8]));
}

#[test]
fn out_dir_from_environment() {
    let dir = scratch("env");
    let out = bin().args(["hv", "square"]).env("DIMER_COAMOEBA_OUT_DIR", &dir).output().unwrap();
    assert!(out.status.success());
    assert!(dir.join("square.dimer").exists());
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["frobnicate"],
        vec!["coamoeba", "x +"],
        vec!["coamoeba", "0*x"],
        vec!["coamoeba", "x*y + 1", "--grid", "4"],
        vec!["fibration", "report", "--collection", "ec3"],
        vec!["dimer", "matchings", "/nonexistent/fixture.dimer"],
        vec!["bundles", "mutate", "--preset", "other"],
        vec!["hv", "(0,0) (2,0) (0,1)"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
