#[allow(dead_code)]
#[path = "../src/report.rs"]
mod report;

use std::path::PathBuf;
use std::process::{Command, Output};

use serde::de::DeserializeOwned;
use serde::Serialize;

use report::*;

const BIN: &str = env!("CARGO_BIN_EXE_isoslope");

fn doc(name: &str, text: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-docs");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("ISOSLOPE_PRECISION")
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

/// Parse stdout as `T`, and check that re-serializing reproduces it byte for byte.
fn parse<T: DeserializeOwned + Serialize>(out: &Output) -> T {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let value: T = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    assert_eq!(serde_json::to_string_pretty(&value).unwrap() + "\n", text);
    value
}

const D12: &str = r#"{"p": 3, "f": 1, "precision": 20,
  "frobenius": [["0","3"],["1","0"]],
  "filtration": [{"degree": 0, "basis": [["1","0"],["0","1"]]}, {"degree": 1, "basis": [["1","0"]]}]}"#;

const DIAG_BAD: &str = r#"{"p": 2, "f": 1, "precision": 20,
  "frobenius": [["1","0"],["0","2"]],
  "filtration": [{"degree": 0, "basis": [["1","0"],["0","1"]]}, {"degree": 1, "basis": [["1","0"]]}]}"#;

const DIAG_OK: &str = r#"{"p": 2, "f": 1, "precision": 20,
  "frobenius": [["1","0"],["0","2"]],
  "filtration": [{"degree": 0, "basis": [["1","0"],["0","1"]]}, {"degree": 1, "basis": [["1","1"]]}]}"#;

const REPEATED: &str = r#"{"p": 2, "f": 1, "precision": 20,
  "frobenius": [["1","0"],["0","1"]],
  "filtration": [{"degree": 0, "basis": [["1","0"],["0","1"]]}]}"#;

#[test]
fn slopes_of_simple_object() {
    let f = doc("d12.json", D12);
    let out = run(&["slopes", f.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let rep: SlopesReport = parse(&out);
    assert_eq!(rep.rank, 2);
    assert_eq!(rep.newton_number, 1);
    assert_eq!(rep.slopes, ["1/2", "1/2"]);
    assert_eq!(rep.dm_type.len(), 1);
    assert_eq!((rep.dm_type[0].d, rep.dm_type[0].h, rep.dm_type[0].m), (1, 2, 1));
    assert!(rep.effective);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("N Newton: 1/2 x2"), "{stderr}");
}

#[test]
fn slopes_of_diagonal() {
    let f = doc("diag.json", DIAG_BAD);
    let out = run(&["slopes", f.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let rep: SlopesReport = parse(&out);
    assert_eq!(rep.slopes, ["0", "1"]);
    assert_eq!(rep.newton_polygon.vertices, [(0, 0), (1, 0), (2, 1)]);
}

#[test]
fn slopes_over_extension() {
    let f = doc(
        "f2.json",
        r#"{"p": 3, "f": 2, "precision": 16,
            "frobenius": [[["0","0"],["9","0"]],[["1","0"],["0","0"]]]}"#,
    );
    let out = run(&["slopes", f.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let rep: SlopesReport = parse(&out);
    assert_eq!(rep.newton_number, 2);
    assert_eq!(rep.slopes, ["1", "1"]);
}

#[test]
fn weakadm_verdicts() {
    let ok = doc("wa.json", DIAG_OK);
    let out = run(&["weakadm", ok.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let rep: WeakadmReport = parse(&out);
    assert!(rep.weakly_admissible);
    assert_eq!(serde_json::to_value(rep.mode).unwrap(), "exact");
    assert_eq!((rep.hodge_number, rep.newton_number), (1, 1));
    assert!(rep.witness.is_none());

    let bad = doc("nwa.json", DIAG_BAD);
    let out = run(&["weakadm", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let rep: WeakadmReport = parse(&out);
    assert!(!rep.weakly_admissible);
    let w = rep.witness.unwrap();
    assert_eq!(w.subspace.dim, 1);
    assert_eq!(serde_json::to_string(&w.subspace.basis).unwrap(), r#"[["1","0"]]"#);
    assert_eq!((w.hodge_number, w.newton_number), (1, 0));
}

#[test]
fn repeated_factors_need_monte_carlo() {
    let f = doc("rep.json", REPEATED);
    let path = f.to_str().unwrap();
    let out = run(&["weakadm", path]);
    assert_eq!(code(&out), 4);
    let err: ErrorReport = parse(&out);
    assert_eq!(err.error, "enumeration_unavailable");
    assert!(String::from_utf8(out.stderr).unwrap().contains("simple"));

    let out = run(&["weakadm", path, "--mode", "mc", "--samples", "16"]);
    assert_eq!(code(&out), 0);
    let rep: WeakadmReport = parse(&out);
    assert!(rep.weakly_admissible);
    assert_eq!(serde_json::to_value(rep.mode).unwrap(), "probabilistic");

    assert_eq!(code(&run(&["hn", path])), 4);
}

#[test]
fn hn_report() {
    let f = doc("hn.json", DIAG_BAD);
    let out = run(&["hn", f.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let rep: HnReport = parse(&out);
    assert_eq!(rep.slopes, ["1", "-1"]);
    assert!(!rep.semistable);
    assert_eq!(rep.steps[0].subspace.dim, 1);
    assert_eq!(rep.steps[1].subspace.dim, 2);
    assert_eq!(rep.steps[1].graded.degree, -1);

    let f = doc("hn-ok.json", DIAG_OK);
    let rep: HnReport = parse(&run(&["hn", f.to_str().unwrap()]));
    assert!(rep.semistable);
    assert_eq!(rep.slopes, ["0"]);
}

#[test]
fn hn_without_filtration_uses_trivial_one() {
    let f = doc("hn-triv.json", r#"{"p": 5, "f": 1, "precision": 20, "frobenius": [["1","0"],["0","5"]]}"#);
    let rep: HnReport = parse(&run(&["hn", f.to_str().unwrap()]));
    // t_H = 0 everywhere: the slope-0 line comes first
    assert_eq!(rep.slopes, ["0", "-1"]);
}

#[test]
fn bc_ledger() {
    let f = doc("bc.json", DIAG_OK);
    let out = run(&["bc", f.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let rep: BcReport = parse(&out);
    assert_eq!((rep.e.dim, rep.e.ht), (1, 2));
    assert_eq!((rep.m.dim, rep.m.ht), (1, 0));
    assert_eq!(rep.decomposition, "E_{1,1} + Q_p^1");
    assert!(rep.ledger.balanced);
    assert_eq!(rep.ledger.verdict, LedgerVerdictReport::Admissible { coker_dim: 0, v_dim: 2 });
    let slopes: Vec<&str> = rep.slope_filtration.iter().map(|l| l.slope.as_str()).collect();
    assert_eq!(slopes, ["1", "0"]);
    assert_eq!(rep.slope_filtration[0].multiplicity, Some(1));

    let f = doc("bc-nwa.json", DIAG_BAD);
    let out = run(&["bc", f.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let rep: BcReport = parse(&out);
    assert!(matches!(rep.ledger.verdict, LedgerVerdictReport::NotWeaklyAdmissible { .. }));
    assert!(rep.ledger.steps.iter().all(|s| s.sequence.is_none()));
}

#[test]
fn bc_rejects_non_effective_and_negative_degrees() {
    let f = doc("neg-slope.json", r#"{"p": 2, "f": 1, "precision": 20, "frobenius": [["1/2"]]}"#);
    let out = run(&["bc", f.to_str().unwrap()]);
    assert_eq!(code(&out), 5);
    assert_eq!(parse::<ErrorReport>(&out).error, "not_effective");

    let f = doc(
        "neg-fil.json",
        r#"{"p": 2, "f": 1, "precision": 20, "frobenius": [["1"]],
            "filtration": [{"degree": -1, "basis": [["1"]]}]}"#,
    );
    let out = run(&["bc", f.to_str().unwrap()]);
    assert_eq!(code(&out), 5);
    assert_eq!(parse::<ErrorReport>(&out).error, "negative_filtration");
}

#[test]
fn malformed_input_exits_2() {
    let cases = [
        ("nonsquare.json", r#"{"p": 3, "f": 1, "precision": 20, "frobenius": [["1","0"]]}"#),
        ("badnum.json", r#"{"p": 3, "f": 1, "precision": 20, "frobenius": [["one"]]}"#),
        ("notjson.json", "{"),
        ("notprime.json", r#"{"p": 6, "f": 1, "precision": 20, "frobenius": [["1"]]}"#),
        (
            "basis-len.json",
            r#"{"p": 3, "f": 1, "precision": 20, "frobenius": [["1","0"],["0","1"]],
                "filtration": [{"degree": 0, "basis": [["1"]]}]}"#,
        ),
        (
            "degrees.json",
            r#"{"p": 3, "f": 1, "precision": 20, "frobenius": [["1","0"],["0","3"]],
                "filtration": [{"degree": 1, "basis": [["1","0"],["0","1"]]},
                               {"degree": 0, "basis": [["1","0"]]}]}"#,
        ),
    ];
    for (name, text) in cases {
        let f = doc(name, text);
        let out = run(&["slopes", f.to_str().unwrap()]);
        assert_eq!(code(&out), 2, "{name}");
        parse::<ErrorReport>(&out);
    }
    assert_eq!(code(&run(&["slopes", "/nonexistent/doc.json"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["weakadm", "x.json", "--mode", "fast"])), 2);

    let nofil = doc("nofil.json", r#"{"p": 3, "f": 1, "precision": 20, "frobenius": [["3"]]}"#);
    assert_eq!(code(&run(&["weakadm", nofil.to_str().unwrap()])), 2);
}

#[test]
fn uncertifiable_input_exits_3() {
    let f = doc("singular.json", r#"{"p": 3, "f": 1, "precision": 20, "frobenius": [["1","0"],["0","0"]]}"#);
    let out = run(&["slopes", f.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert_eq!(parse::<ErrorReport>(&out).error, "precision");

    // t_N = 30 cannot be seen at precision 20
    let f = doc("deep.json", r#"{"p": 2, "f": 1, "precision": 20, "frobenius": [["1073741824"]]}"#);
    assert_eq!(code(&run(&["slopes", f.to_str().unwrap()])), 3);
    let out = Command::new(BIN)
        .args(["slopes", f.to_str().unwrap()])
        .env("ISOSLOPE_PRECISION", "40")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let rep: SlopesReport = parse(&out);
    assert_eq!((rep.precision, rep.newton_number), (40, 30));
}

#[test]
fn bad_precision_variable_exits_2() {
    let f = doc("envp.json", D12);
    let out = Command::new(BIN)
        .args(["slopes", f.to_str().unwrap()])
        .env("ISOSLOPE_PRECISION", "lots")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn output_is_deterministic() {
    let f = doc("det.json", DIAG_OK);
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = f.to_str().unwrap();
    for cmd in ["slopes", "weakadm", "hn", "bc"] {
        let svg1 = dir.join(format!("{cmd}-1.svg"));
        let svg2 = dir.join(format!("{cmd}-2.svg"));
        let a = run(&[cmd, path, "--svg", svg1.to_str().unwrap()]);
        let b = run(&[cmd, path, "--svg", svg2.to_str().unwrap()]);
        assert_eq!(a.stdout, b.stdout, "{cmd}");
        assert_eq!(a.stderr, b.stderr, "{cmd}");
        let (s1, s2) = (std::fs::read(&svg1).unwrap(), std::fs::read(&svg2).unwrap());
        assert_eq!(s1, s2);
        let svg = String::from_utf8(s1).unwrap();
        assert!(svg.contains(r#"version="1.1""#) && svg.trim_end().ends_with("</svg>"));
    }
    let f = doc("det-mc.json", REPEATED);
    let args = ["weakadm", f.to_str().unwrap(), "--mode", "mc", "--samples", "12", "--seed", "7"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn svg_annotates_fractions() {
    let f = doc("svg.json", D12);
    let svg = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("d12.svg");
    let out = run(&["slopes", f.to_str().unwrap(), "--svg", svg.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(svg).unwrap();
    assert!(text.contains(">1/2</text>"));
}
