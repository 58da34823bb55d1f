use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const CHOI_ANGLE: &str = "1.0471975511965976";

fn ballmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ballmap")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn matrix(v: &Value) -> Vec<Vec<f64>> {
    serde_json::from_value(v["re"].clone()).unwrap()
}

#[test]
fn ball_reports_radius_and_tangency() {
    let dir = TempDir::new().unwrap();
    let mm = write(&dir, "mm.json", r#""maximally_mixed""#);
    let out = ballmap(&["ball", "--state", s(&mm)]);
    assert!(out.status.success());
    let v = json(&out);
    assert!((v["r_max"].as_f64().unwrap() - 0.408_248_290_463_863).abs() < 1e-12);

    let sk = write(&dir, "sk.json", r#"{"dim":3,"re":[[0.5,0,0],[0,0.3333333333333333,0],[0,0,0.16666666666666666]]}"#);
    let v = json(&ballmap(&["ball", "--state", s(&sk)]));
    assert!((v["r_max"].as_f64().unwrap() - 0.204_124_145_231_931_5).abs() < 1e-12);
    let alpha: Vec<f64> = serde_json::from_value(v["alpha_star"].clone()).unwrap();
    assert!((alpha[0] - 7.0 / 12.0).abs() < 1e-12 && (alpha[1] - 5.0 / 12.0).abs() < 1e-12);
}

#[test]
fn invalid_input_exits_2_with_json_error() {
    let dir = TempDir::new().unwrap();
    let not_psd = write(&dir, "bad.json", r#"{"dim":2,"re":[[1.2,0],[0,-0.2]]}"#);
    let out = ballmap(&["ball", "--state", s(&not_psd)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["error"].as_str().unwrap().contains("faithful"));

    let unknown = write(&dir, "cfg.json", r#"{"state":"maximally_mixed","mu":0.1,"extra":true}"#);
    let out = ballmap(&["map", "--config", s(&unknown)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out).get("error").is_some());

    let missing = dir.path().join("nope.json");
    assert_eq!(ballmap(&["ball", "--state", s(&missing)]).status.code(), Some(2));
    assert_eq!(ballmap(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn map_at_choi_angle_gives_choi_action() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "choi.json",
        &format!(r#"{{"state":"maximally_mixed","mu":"max","affine":{{"kind":"rotation_alpha","alpha":{CHOI_ANGLE}}}}}"#),
    );
    let v = json(&ballmap(&["map", "--config", s(&cfg)]));
    assert_eq!(v["certified_positive"], Value::Bool(true));
    let action = v["action"].as_array().unwrap();
    assert_eq!(action.len(), 9);
    let choi = [[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.5, 0.0, 0.5]];
    for entry in action {
        let (i, j) = (entry["i"].as_u64().unwrap() as usize, entry["j"].as_u64().unwrap() as usize);
        let m = matrix(&entry["image"]);
        for (k, row) in m.iter().enumerate() {
            for (l, &x) in row.iter().enumerate() {
                let expected = match (i == j, k == l) {
                    (true, true) => choi[i][k],
                    (false, _) if (k, l) == (i, j) => -0.5,
                    _ => 0.0,
                };
                assert!((x - expected).abs() < 1e-12, "e_{i}{j} -> ({k},{l}) = {x}");
            }
        }
    }
}

#[test]
fn map_certify_reports_cp_for_small_mu_and_warns_beyond_mu_max() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "small.json", r#"{"state":"maximally_mixed","mu":0.1}"#);
    let v = json(&ballmap(&["map", "--config", s(&cfg), "--certify", "--samples", "1024", "--restarts", "2"]));
    assert_eq!(v["certificates"]["cp"]["kind"], "CP");
    assert_eq!(v["certificates"]["positivity"]["kind"], "positive-sampled");
    assert_eq!(v["certificates"]["ball_image"]["certificate"]["kind"], "positive-sampled");

    let cfg = write(&dir, "big.json", r#"{"state":"maximally_mixed","mu":0.9}"#);
    let out = ballmap(&["map", "--config", s(&cfg)]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["certified_positive"], Value::Bool(false));
    assert!(v["warning"].is_string());
}

#[test]
fn strict_mode_exits_3_on_violation_only() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", r#"{"state":"maximally_mixed","mu":-1.0}"#);
    let args = ["verify", "--config", s(&bad), "--samples", "1024", "--restarts", "2"];
    assert_eq!(ballmap(&args).status.code(), Some(0));
    let mut strict = args.to_vec();
    strict.push("--strict");
    let out = ballmap(&strict);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["positivity"]["kind"], "violated");

    // not-CP alone is not a violation
    let choi = write(
        &dir,
        "choi.json",
        &format!(r#"{{"state":"maximally_mixed","mu":"max","affine":{{"kind":"rotation_alpha","alpha":{CHOI_ANGLE}}}}}"#),
    );
    let out = ballmap(&["--strict", "verify", "--config", s(&choi), "--samples", "1024", "--restarts", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["cp"]["kind"], "not-CP");
}

#[test]
fn choi_command_emits_family_data() {
    let v = json(&ballmap(&["choi", "--alpha", "-0.4"]));
    let eta: Vec<f64> = serde_json::from_value(v["eta"].clone()).unwrap();
    let xi: Vec<f64> = serde_json::from_value(v["xi"].clone()).unwrap();
    assert!(eta.iter().sum::<f64>().abs() < 1e-14);
    assert!((xi.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    assert!((v["mu_max"].as_f64().unwrap() - 0.5).abs() < 1e-15);
    assert_eq!(v["action"].as_array().unwrap().len(), 9);
}

#[test]
fn witness_build_detect_and_coeffs() {
    let dir = TempDir::new().unwrap();
    let out = ballmap(&["witness", "build", "--alpha", CHOI_ANGLE, "--certify", "--restarts", "10"]);
    assert!(out.status.success());
    let built = json(&out);
    assert_eq!(built["witness"]["entanglement_witness"], Value::Bool(true));
    assert!(built["witness"]["min_eigenvalue"].as_f64().unwrap() < -0.49);
    let w = write(&dir, "w.json", &String::from_utf8_lossy(&out.stdout));

    let mut p = vec![vec![0.0; 9]; 9];
    for i in 0..3 {
        for j in 0..3 {
            p[4 * i][4 * j] = 1.0 / 3.0;
        }
    }
    let rho = write(&dir, "p.json", &serde_json::json!({"dim": 9, "re": p}).to_string());
    let v = json(&ballmap(&["witness", "detect", "--witness", s(&w), "--rho", s(&rho)]));
    assert!((v["value"].as_f64().unwrap() + 0.5).abs() < 1e-12);
    assert_eq!(v["verdict"], "entangled");

    let mut id = vec![vec![0.0; 9]; 9];
    for (k, row) in id.iter_mut().enumerate() {
        row[k] = 1.0 / 9.0;
    }
    let mixed = write(&dir, "i.json", &serde_json::json!({"dim": 9, "re": id}).to_string());
    let v = json(&ballmap(&["witness", "detect", "--witness", s(&w), "--rho", s(&mixed)]));
    assert_eq!(v["verdict"], "not detected");

    let v = json(&ballmap(&["witness", "coeffs", "--alpha", "0.8"]));
    let inv = v["inverse_mu_max"].as_f64().unwrap();
    for sum in v["cyclic_sums"].as_array().unwrap() {
        assert!((sum.as_f64().unwrap() - inv).abs() < 1e-12);
    }
    assert_eq!(v["witness_not_positive"], Value::Bool(true));
}

#[test]
fn witness_from_map_output_equals_direct_build() {
    let dir = TempDir::new().unwrap();
    let sk = write(&dir, "sk.json", r#"{"dim":3,"re":[[0.5,0.05,0],[0.05,0.3,0],[0,0,0.2]],"im":[[0,0.02,0],[-0.02,0,0],[0,0,0]]}"#);
    let state: Value = serde_json::from_str(&fs::read_to_string(&sk).unwrap()).unwrap();
    let cfg = serde_json::json!({"state": state, "mu": "max", "affine": {"kind": "rotation_alpha", "alpha": 0.9}});
    let cfg = write(&dir, "cfg.json", &cfg.to_string());
    let map_out = ballmap(&["map", "--config", s(&cfg)]);
    let map_file = write(&dir, "map.json", &String::from_utf8_lossy(&map_out.stdout));

    let via_map = json(&ballmap(&["witness", "build", "--from-map", s(&map_file)]));
    let direct = json(&ballmap(&["witness", "build", "--alpha", "0.9", "--state", s(&sk)]));
    let a = matrix(&via_map["witness"]["matrix"]);
    let b = matrix(&direct["witness"]["matrix"]);
    let diff = a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(diff < 1e-12, "{diff}");
}

#[test]
fn verify_witness_document() {
    let dir = TempDir::new().unwrap();
    let out = ballmap(&["witness", "build", "--alpha", "2.0"]);
    let w = write(&dir, "w.json", &String::from_utf8_lossy(&out.stdout));
    let v = json(&ballmap(&["verify", "--witness", s(&w), "--restarts", "8"]));
    assert_eq!(v["block_positivity"]["kind"], "block-positive-sampled");
    assert_eq!(v["entanglement_witness"], Value::Bool(true));
}

#[test]
fn figure_points_for_both_signs_of_mu() {
    let dir = TempDir::new().unwrap();
    let mm = write(&dir, "mm.json", r#""maximally_mixed""#);
    for (mu, sign) in [("max", 1.0), ("-max", -1.0)] {
        let v = json(&ballmap(&["figure", "--state", s(&mm), "--mu", mu]));
        let verts: Vec<[f64; 2]> = serde_json::from_value(v["vertices"].clone()).unwrap();
        let imgs: Vec<[f64; 2]> = serde_json::from_value(v["images"].clone()).unwrap();
        assert_eq!(v["circle"].as_array().unwrap().len(), 64);
        for (p, q) in verts.iter().zip(&imgs) {
            // centre is the origin; images are μ-scaled vertices
            assert!((q[0] - sign * 0.5 * p[0]).abs() < 1e-12 && (q[1] - sign * 0.5 * p[1]).abs() < 1e-12);
        }
    }
    let qubit = write(&dir, "q.json", r#"{"dim":2,"re":[[0.6,0],[0,0.4]]}"#);
    assert_eq!(ballmap(&["figure", "--state", s(&qubit)]).status.code(), Some(2));
}

#[test]
fn out_flag_writes_the_same_document() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("choi.json");
    let out = ballmap(&["--out", s(&target), "choi", "--alpha", "0.25"]);
    assert!(out.status.success());
    assert_eq!(fs::read(&target).unwrap(), out.stdout);
}
