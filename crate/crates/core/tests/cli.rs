use std::process::{Command, Output};

fn cubiclab(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cubiclab"));
    cmd.args(args).env_remove("CUBICLAB_THREADS");
    if let Some(n) = threads {
        cmd.env("CUBICLAB_THREADS", n);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn scan_is_byte_stable_across_thread_counts() {
    let args = ["scan", "--b-min", "1", "--b-max", "30", "--checks", "root-number,family-point,identities,doubling"];
    let one = cubiclab(&args, Some("1"));
    let many = cubiclab(&args, Some("6"));
    assert!(one.status.success() && many.status.success());
    assert_eq!(one.stdout, many.stdout);
    let text = stdout(&one);
    assert_eq!(text.lines().count(), 31);
    assert!(text.starts_with("b\tm\tfactorization\t"));
}

#[test]
fn empty_range_is_header_only() {
    let o = cubiclab(&["scan", "--b-min", "5", "--b-max", "4"], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().count(), 1);
}

#[test]
fn config_errors_exit_nonzero() {
    for args in [
        &["scan", "--format", "xml"][..],
        &["scan", "--checks", "nonsense"],
        &["scan", "--b-min", "0"],
        &["hcf", "--m", "11", "--alpha", "9,-4"],
        &["factor"],
    ] {
        let o = cubiclab(args, None);
        assert!(!o.status.success(), "{args:?} succeeded");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn scan_with_findings_still_succeeds() {
    // b = 19 has m divisible by 5^3, recorded in the row
    let o = cubiclab(&["scan", "--b-min", "19", "--b-max", "19", "--checks", "all"], None);
    assert!(o.status.success());
    assert!(stdout(&o).contains("5^3 * 439"));
}

#[test]
fn factor_and_certificate_subcommands() {
    let o = cubiclab(&["factor", "--b", "419"], None);
    assert!(stdout(&o).contains("5^2 * 11^2 * 227 * 857"));
    let o = cubiclab(&["hcf", "--m", "11", "--alpha", "9,-4,0"], None);
    let cert: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(cert["valid"], true);
    assert_eq!(cert["minpoly_display"], "x^6 - 27x^4 + 243x^2 - 25");
    let o = cubiclab(&["hcf", "--m", "219", "--format", "json"], None);
    let got: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(got["outcome"], "certified");
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("cubiclab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ids.json");
    let o = cubiclab(&["identities", "--b-max", "3", "--format", "json", "--out", path.to_str().unwrap()], None);
    assert!(o.status.success() && o.stdout.is_empty());
    let rows: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 3);
    std::fs::remove_dir_all(dir).unwrap();
}
