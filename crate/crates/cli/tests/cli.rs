use std::io::Write;
use std::process::{Command, Output, Stdio};

const LABELS: [&str; 21] = [
    "o0", "o1", "o2", "o3", "o4", "o4T", "o5", "o6", "o7", "o7T", "o8", "o9", "o10", "o11", "o11T", "o12", "o13",
    "o14", "o15", "o16", "o17",
];

fn tok(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tok"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn canonical_round_trip() {
    for q in ["2", "3", "4", "5"] {
        let mut doc = String::new();
        for label in LABELS {
            doc += &stdout(&tok(&["canonical", "--orbit", label, "--q", q], ""));
        }
        let out = stdout(&tok(&["classify", "--input", "-"], &doc));
        let got: Vec<&str> = out.lines().map(|l| l.split_whitespace().next().unwrap()).collect();
        let want: Vec<String> = LABELS.iter().map(|l| format!("H={l}")).collect();
        assert_eq!(got, want, "q={q}");
    }
}

#[test]
fn o5_example() {
    let line = stdout(&tok(&["canonical", "--orbit", "o5", "--q", "3"], ""));
    let out = stdout(&tok(&["classify"], &line));
    assert!(out.starts_with("H=o5 G=o5 rd=[2,2,0]"), "{out}");
}

#[test]
fn zero_tensor_from_file() {
    let path = std::env::temp_dir().join(format!("tok-zero-{}.txt", std::process::id()));
    std::fs::write(&path, format!("# zero\nq=2; a=0{}\n", ",0".repeat(17))).unwrap();
    let out = stdout(&tok(&["classify", "--input", path.to_str().unwrap()], ""));
    std::fs::remove_file(&path).unwrap();
    assert!(out.starts_with("H=o0 G=o0 "), "{out}");
}

#[test]
fn transposed_label_projects_in_g() {
    let line = stdout(&tok(&["canonical", "--orbit", "o11T", "--q", "3"], ""));
    let out = stdout(&tok(&["classify"], &line));
    assert!(out.starts_with("H=o11T G=o11 "), "{out}");
}

#[test]
fn non_prime_field_has_header() {
    let out = stdout(&tok(&["canonical", "--orbit", "o17", "--q", "9"], ""));
    assert_eq!(out.lines().next(), Some("# F_9 = F_3[x]/(x^2+1)"));
    let classified = stdout(&tok(&["classify"], &out));
    assert!(classified.starts_with("H=o17 G=o17 rd=[0,0,10]"), "{classified}");
}

#[test]
fn json_classify_has_all_fields() {
    let line = stdout(&tok(&["canonical", "--orbit", "o14", "--q", "5"], ""));
    let out = stdout(&tok(&["--json", "classify"], &line));
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["H"], "o14");
    assert_eq!(v["G"], "o14");
    assert_eq!(v["rd"], serde_json::json!([0, 3, 3]));
    assert_eq!(v["dims"], serde_json::json!([2, 3, 3]));
    assert_eq!(v["det"], "three-distinct-linear");
    assert_eq!(v["nurmiev"], 9);
    assert_eq!(v["q"], 5);
}

#[test]
fn shape_223() {
    let line = stdout(&tok(&["canonical", "--orbit", "o2", "--q", "2", "--shape", "223"], ""));
    assert_eq!(line.trim().split(',').count(), 12);
    let out = stdout(&tok(&["classify", "--shape", "223"], &line));
    assert!(out.starts_with("H=o2 G=o4 "), "{out}");
    let out = stdout(&tok(&["--json", "census", "--q", "2", "--shape", "223"], ""));
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!((v["h_orbits"].as_u64(), v["g_orbits"].as_u64()), (Some(10), Some(9)));
    assert!(!tok(&["canonical", "--orbit", "o17", "--q", "2", "--shape", "223"], "").status.success());
}

#[test]
fn verify_q2() {
    let out = stdout(&tok(&["verify", "--q", "2", "--full-census", "--bfs-cross-check", "--threads", "2"], ""));
    assert!(out.contains("21 H-orbits / 18 G-orbits"), "{out}");
    assert!(out.trim_end().ends_with("PASS"));
}

#[test]
fn pencil_orbits() {
    let out = stdout(&tok(&["--json", "pencil-orbits", "--q", "3"], ""));
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["irreducible_cubics"], 8);
    assert_eq!(v["orbits"], 1);
    assert_eq!(v["stabilizer_orders"], serde_json::json!([3]));
}

#[test]
fn usage_errors_exit_2() {
    let cases: [(&[&str], &str); 5] = [
        (&["verify", "--q", "5"], ""),
        (&["canonical", "--orbit", "o99", "--q", "2"], ""),
        (&["canonical", "--orbit", "o1", "--q", "6"], ""),
        (&["classify"], "q=2; a=1,0\n"),
        (&["frobnicate"], ""),
    ];
    for (args, input) in cases {
        assert_eq!(tok(args, input).status.code(), Some(2), "{args:?}");
    }
}
