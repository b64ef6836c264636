use std::path::PathBuf;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_genus-forge");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("GENUS_FORGE_CATALOG")
        .output()
        .expect("spawn genus-forge")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// Compares against `tests/golden/<name>.json`; set UPDATE_GOLDEN=1 to rewrite.
fn golden(name: &str, args: &[&str]) {
    let got = stdout(args);
    serde_json::from_str::<serde_json::Value>(&got).expect("valid JSON");
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &got).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
    assert_eq!(got, want, "{name}");
}

#[test]
fn golden_outputs() {
    golden("compute_k3_signature", &["--json", "compute", "--manifold", "K3", "--genus", "signature"]);
    golden("compute_cp3_todd", &["--json", "compute", "--manifold", "CP3", "--genus", "todd"]);
    golden("elliptic_k3_witten", &["--json", "elliptic", "--manifold", "K3", "--kind", "witten", "--order", "4"]);
    golden("elliptic_hp2_ell1", &["--json", "elliptic", "--manifold", "HP2", "--kind", "ell1", "--order", "2"]);
    golden("indices_k3_b", &["--json", "indices", "--manifold", "K3", "--family", "B", "--max", "4"]);
    golden("modular_fit_k3xk3", &["--json", "modular", "fit", "--manifold", "K3xK3", "--order", "4"]);
    golden("cover_diam", &["--json", "cover", "diam", "--k", "1", "--base", "3", "--factor", "2"]);
    golden("cover_tower", &["--json", "cover", "tower", "--k", "2", "--depth", "4"]);
    golden("cover_l2", &["--json", "cover", "l2", "--k", "2", "--p", "1", "--depth", "3"]);
    golden("bound_index", &[
        "--json", "bound", "index", "--m", "4", "--p", "5", "--lambda", "0", "--diam", "1", "--b", "1",
    ]);
}

#[test]
fn text_output() {
    assert_eq!(stdout(&["compute", "--manifold", "CP3", "--genus", "todd"]).trim_end().rsplit(' ').next(), Some("1"));
    let sharp = stdout(&["compute", "--manifold", "T2xS6_sharp_HP2", "--genus", "signature"]);
    assert!(sharp.trim_end().ends_with('1'), "{sharp}");
    let list = stdout(&["catalog", "list"]);
    assert!(list.contains("K3") && list.contains("HP2xT4"), "{list}");
}

#[test]
fn modular_check_passes() {
    let out = stdout(&["--json", "modular", "check", "--manifold", "HP2", "--tau-im", "1.5"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["pass"], true);
    assert!(v["abs_error"].as_f64().unwrap() < 1e-8);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| run(args).status.code();
    assert_eq!(code(&["--help"]), Some(0));
    assert_eq!(code(&["frobnicate"]), Some(1));
    assert_eq!(code(&["compute", "--manifold", "K3"]), Some(1));
    assert_eq!(code(&["compute", "--manifold", "NoSuchThing", "--genus", "ahat"]), Some(2));
    assert_eq!(code(&["elliptic", "--manifold", "S6", "--kind", "ell2"]), Some(2));
    assert_eq!(code(&["modular", "check", "--manifold", "K3", "--tau-im", "0.9"]), Some(3));
    assert_eq!(code(&["bound", "index", "--m", "4", "--p", "1.5", "--lambda", "0", "--diam", "1", "--b", "1"]), Some(2));
}

#[test]
fn catalog_env_override() {
    let dir = std::env::temp_dir().join(format!("genus-forge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();

    let good = dir.join("good.json");
    std::fs::write(
        &good,
        r#"{
  "schema_version": 1,
  "entries": [
    { "name": "Mine", "real_dim": 4, "pontryagin_numbers": { "1": 3 }, "spin": false, "string": false }
  ]
}
"#,
    )
    .unwrap();
    let out = Command::new(BIN)
        .args(["catalog", "list"])
        .env("GENUS_FORGE_CATALOG", &good)
        .output()
        .unwrap();
    let listing = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(listing.contains("Mine") && !listing.contains("K3"), "{listing}");

    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\n  \"schema_version\": 1,\n  \"entries\": [\n    { \"nme\": 3 }\n  ]\n}\n").unwrap();
    let out = Command::new(BIN)
        .args(["catalog", "list"])
        .env("GENUS_FORGE_CATALOG", &bad)
        .output()
        .unwrap();
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(out.status.code(), Some(2));
    assert!(err.contains("line 4"), "{err}");

    std::fs::remove_dir_all(&dir).ok();
}
