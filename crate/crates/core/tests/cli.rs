use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use twistalex::presentation::GroupPresentation;
use twistalex::torus::{FreeAutomorphism, NielsenMove};

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistalex")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn check_exit_codes() {
    let tref = run(&["check", &corpus("trefoil.pres"), "--max-order", "24"]);
    assert_eq!(tref.status.code(), Some(0), "{}", stderr(&tref));
    assert!(stdout(&tref).contains("verdict: CONSISTENT_WITH_FIBERED"));

    let knot = run(&["check", &corpus("5_2.pres")]);
    assert_eq!(knot.status.code(), Some(2));
    let text = stdout(&knot);
    assert!(text.contains("verdict: NOT_FIBERED"));
    assert!(text.contains("witness: 0"));
    assert!(text.contains("status: FAIL_NONMONIC"));
    assert!(text.contains("delta1: 2t^2 - 3t + 2"));
}

#[test]
fn check_rejects_invalid_input() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.pres");
    fs::write(&broken, "group broken\ngens a b\nrel aab\nphi a 1\nphi b 0\nnorm 1\n").unwrap();
    let out = run(&["check", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("aab"), "{}", stderr(&out));

    let missing = run(&["check", dir.path().join("nope.pres").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(1));
    let zero = run(&["check", &corpus("trefoil.pres"), "--max-order", "0"]);
    assert_eq!(zero.status.code(), Some(1));
}

#[test]
fn norm_free_input_gives_no_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.pres");
    let text = fs::read_to_string(corpus("figure8.pres")).unwrap().replace("norm 1", "");
    fs::write(&path, text).unwrap();
    let out = run(&["check", path.to_str().unwrap(), "--max-order", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("verdict: NO_VERDICT"));
    assert!(text.contains("lower_bound: 1"));
}

#[test]
fn custom_catalog_directory() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c3.grp"), "group C3\ndegree 3\nsolvable 1\ngen (1 2 3)\n").unwrap();
    let out = run(&["check", &corpus("trefoil.pres"), "--catalog", dir.path().to_str().unwrap(), "--report", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let groups: Vec<&str> = v["quotients"].as_array().unwrap().iter().map(|q| q["group"].as_str().unwrap()).collect();
    assert_eq!(groups, ["C3", "C3"]);
}

fn text_keys(text: &str) -> (BTreeSet<String>, BTreeSet<String>) {
    let mut top = BTreeSet::new();
    let mut quotient = BTreeSet::new();
    for line in text.lines() {
        let Some((key, _)) = line.split_once(':') else { continue };
        if let Some(k) = key.strip_prefix("  ") {
            quotient.insert(k.to_string());
        } else {
            top.insert(key.to_string());
        }
    }
    (top, quotient)
}

#[test]
fn text_and_json_have_the_same_fields() {
    let base = ["check", &corpus("trefoil.pres"), "--max-order", "6"];
    let text = stdout(&run(&base));
    let json: Value = serde_json::from_str(&stdout(&run(&[&base[..], &["--report", "json"]].concat()))).unwrap();
    let (top, quotient) = text_keys(&text);
    let json_top: BTreeSet<String> = json.as_object().unwrap().keys().cloned().collect();
    let json_quotient: BTreeSet<String> = json["quotients"][0].as_object().unwrap().keys().cloned().collect();
    assert_eq!(top, json_top);
    assert_eq!(quotient, json_quotient);
}

#[test]
fn json_coefficients_are_exact_integers() {
    let out = run(&["check", &corpus("figure8.pres"), "--max-order", "5", "--report", "json"]);
    let raw = stdout(&out);
    let v: Value = serde_json::from_str(&raw).unwrap();
    for q in v["quotients"].as_array().unwrap() {
        for c in q["delta1"]["coeffs"].as_array().unwrap() {
            assert!(c.is_i64() && !c.to_string().contains('.'), "non-integer coefficient {c}");
        }
    }
    assert_eq!(v["manifold"], "4_1");
    assert_eq!(v["phi"]["a"], 1);
    assert_eq!(v["norm"], 1);
    assert_eq!(v["b3"], 0);
    assert_eq!(v["bound"], 5);
    assert_eq!(v["solvable_only"], false);
    let q0 = &v["quotients"][0];
    assert_eq!(q0["group"], "trivial");
    assert_eq!(q0["delta1"]["min_exp"], 0);
    let coeffs: Vec<i64> = q0["delta1"]["coeffs"].as_array().unwrap().iter().map(|c| c.as_i64().unwrap()).collect();
    assert_eq!(coeffs, [1, -3, 1]);
    assert_eq!(q0["status"], "PASS");
}

#[test]
fn reports_identical_across_worker_counts() {
    for report in ["text", "json"] {
        let outs: Vec<Vec<u8>> = ["1", "3", "8"]
            .iter()
            .map(|w| {
                run(&[
                    "check",
                    &corpus("figure8.pres"),
                    "--exhaustive",
                    "--retarget",
                    "--report",
                    report,
                    "--workers",
                    w,
                ])
                .stdout
            })
            .collect();
        assert!(!outs[0].is_empty());
        assert!(outs.iter().all(|o| *o == outs[0]), "{report} report differs across workers");
    }
}

#[test]
fn alex_command() {
    let out = run(&["alex", &corpus("trefoil.pres")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("delta1: t^2 - t + 1\n"));

    let out = run(&["alex", &corpus("trefoil.pres"), "--group", "Z2", "--hom", "a=(1 2),b=(1 2)"]);
    let text = stdout(&out);
    assert!(text.contains("delta1: t^4 + t^2 + 1\n"), "{text}");
    assert!(text.contains("div: 2\n"));
    assert!(text.contains("delta0: t^2 - 1\n"));

    let bad = run(&["alex", &corpus("trefoil.pres"), "--group", "Z2", "--hom", "a=(1 2)"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr(&bad).contains("abaBAB"), "{}", stderr(&bad));
}

#[test]
fn alex_with_group_file() {
    let dir = tempfile::tempdir().unwrap();
    let grp = dir.path().join("s3.grp");
    fs::write(&grp, "group Sym3\ndegree 3\nsolvable 1\ngen (1 2)\ngen (1 2 3)\n").unwrap();
    let out = run(&[
        "alex",
        &corpus("trefoil.pres"),
        "--group",
        grp.to_str().unwrap(),
        "--hom",
        "a=(1 2),b=(2 3)",
        "--report",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["group"], "Sym3");
    assert_eq!(v["surjective"], true);
    assert_eq!(v["span"], 8);
    assert_eq!(v["monic"], true);
}

#[test]
fn homs_command_counts() {
    let out = run(&["homs", &corpus("trefoil.pres"), "--group", "Z3"]);
    let text = stdout(&out);
    assert!(text.contains("homs: 3\nepis: 2\n"), "{text}");
    // Z3 is abelian, so inner automorphisms identify nothing
    assert!(text.contains("epi_classes: 2\n"));
    let out = run(&["homs", &corpus("trefoil.pres"), "--group", "Z2", "--epi-only"]);
    let text = stdout(&out);
    assert!(text.contains("homs: 2\nepis: 1\n"));
    assert_eq!(text.lines().filter(|l| l.contains("surjective=")).count(), 1);
}

#[test]
fn torus_command_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.pres");
    let out = run(&["torus", "--rank", "2", "--moves", "x1<-x1x2; swap x1 x2", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let parsed = GroupPresentation::parse(&fs::read_to_string(&path).unwrap()).unwrap();
    let moves = NielsenMove::parse_list("x1<-x1x2; swap x1 x2").unwrap();
    let expected = FreeAutomorphism::compose_nielsen(&moves, 2).unwrap().mapping_torus().unwrap();
    assert_eq!(parsed.relators(), expected.relators());
    assert_eq!(parsed.phi(), expected.phi());
    assert_eq!(parsed.thurston_norm, Some(1));

    let ident = run(&["torus", "--rank", "2"]);
    let p = GroupPresentation::parse(&stdout(&ident)).unwrap();
    assert_eq!((p.gen_count(), p.relators().len()), (3, 2));

    assert_eq!(run(&["torus", "--rank", "26"]).status.code(), Some(1));
    assert_eq!(run(&["torus", "--rank", "2", "--moves", "x1<-x2x1"]).status.code(), Some(1));
}
