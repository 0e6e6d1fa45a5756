use std::path::PathBuf;
use std::process::{Command, Output};

fn weylinv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weylinv")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn sp4_pair_json() {
    let o = weylinv(&["invariants", "--spec", "(Sp(4) x Sp(4))/mu(2)", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["inv_ind"]["factors"], serde_json::json!([2]));
    assert_eq!(v["inv_sd"]["factors"], serde_json::json!([2]));
    assert_eq!(stdout(&o), golden("sp4_sp4.json"));
}

#[test]
fn simply_connected_is_trivial() {
    let o = weylinv(&["invariants", "--spec", "SL(2)"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("Inv_ind  []  0"), "{text}");
    assert!(text.contains("Inv_sd   []  0"), "{text}");
}

#[test]
fn family_goldens() {
    for (family, file) in [("propB", "propB.tsv"), ("Ddiagonal", "Ddiagonal.tsv"), ("prop:typeE", "prop_typeE.tsv")] {
        let o = weylinv(&["table", "--family", family, "--tsv"]);
        assert_eq!(o.status.code(), Some(0), "{family}");
        assert_eq!(stdout(&o), golden(file), "{family}");
    }
}

#[test]
fn mismatching_family_exits_two() {
    let o = weylinv(&["table", "--family", "cor:typeA", "--tsv"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o), golden("cor_typeA.tsv"));
}

#[test]
fn pgo8_check_golden() {
    let o = weylinv(&["pgo8-check", "--cases", "20", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("pgo8_check.txt"));
}

#[test]
fn same_seed_same_bytes() {
    for args in [
        &["fuzz-syzygy", "--cases", "40", "--seed", "11"][..],
        &["pgo8-check", "--cases", "8", "--seed", "5", "--json"][..],
        &["generators", "--spec", "(Sp(4) x Sp(4))/mu(2)"][..],
    ] {
        let a = weylinv(args);
        let b = weylinv(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn parse_errors_exit_one_with_position() {
    let o = weylinv(&["invariants", "--spec", "SL(3) x"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("position 7"), "{err}");
}

#[test]
fn reduce_round_trip() {
    let dir = std::env::temp_dir().join(format!("weylinv-reduce-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("tuple.json");
    // f = (0, x1^2) against (ρ1, ρ2) on PGSp(4).
    std::fs::write(&input, r#"["0", "x1^2"]"#).unwrap();
    let o = weylinv(&["reduce", "--spec", "PGSp(4)", "--input", input.to_str().unwrap(), "--json"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["combination"], serde_json::json!({"h3,2": "1 * x1^2"}));
    std::fs::remove_dir_all(&dir).ok();
}
