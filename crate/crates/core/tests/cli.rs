use std::process::Command;

use anick_model::cli::{execute, Cli};
use clap::Parser;

const BIN: &str = env!("CARGO_BIN_EXE_anick-model");

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}.txt", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(BIN).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn chains_listing() {
    let (code, out) = run(&["chains", &fixture("t4"), "-w", "9"]);
    assert_eq!(code, 0);
    assert!(out.contains("[t|t3|t|t3|t] len=4 wt=9"));

    let (_, out) = run(&["chains", &fixture("x2_xy"), "-w", "1"]);
    let names: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(names, ["[x] len=0 wt=1", "[y] len=0 wt=1"]);

    let (_, out) = run(&["chains", &fixture("x2_xy"), "-w", "3", "--format", "csv"]);
    assert_eq!(out.lines().filter(|l| l.contains(",2,3,")).count(), 2);
}

#[test]
fn betti_model_and_ext_tables() {
    let (_, out) = run(&["betti", &fixture("t4"), "-w", "9", "--format", "csv"]);
    assert_eq!(out, "n,w,count\n1,1,1\n2,4,1\n3,5,1\n4,8,1\n5,9,1\n");

    let (_, out) = run(&["model", &fixture("t4"), "-w", "5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let gen = v.as_array().unwrap().iter().find(|g| g["generator"] == "[t|t3|t]").unwrap();
    let terms: Vec<(i64, Vec<String>)> = gen["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| (t["sign"].as_i64().unwrap(), serde_json::from_value(t["parts"].clone()).unwrap()))
        .collect();
    assert!(terms.contains(&(1, vec!["[t|t3]".into(), "[t]".into()])));
    assert!(terms.contains(&(-1, vec!["[t]".into(), "[t|t3]".into()])));

    let (_, out) = run(&["ext", &fixture("x2_xy"), "-w", "6", "-n", "2"]);
    assert!(out.contains("μ2([x]^∨, [x]^∨) = -[x|x]^∨"));
}

#[test]
fn hh_engines_print_the_same_table() {
    let args = |engine: &'static str| {
        let f = fixture("t2");
        let (code, out) = run(&["hh", &f, "-d", "3", "-w", "0..6", "--format", "csv", "--engine", engine]);
        assert_eq!(code, 0);
        out
    };
    let twisted = args("twisted");
    assert!(twisted.starts_with("degree,weight,dim\n"));
    assert_eq!(twisted, args("classical"));
}

#[test]
fn exit_codes() {
    for f in ["t2", "t3", "t4", "x2_xy", "xyx", "a3"] {
        let (code, out) = run(&["verify", &fixture(f), "-w", "7", "-n", "4"]);
        assert_eq!(code, 0, "{f}: {out}");
    }
    let (code, out) = run(&["verify", &fixture("t4"), "-w", "8", "--sabotage"]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL b-squared"));
    assert!(out.contains("chain [t|t3|t] arity 5"));

    let (code, _) = run(&["verify", &fixture("xyx"), "-w", "8", "--cap", "5"]);
    assert_eq!(code, 2);
    let (code, _) = run(&["hh", &fixture("x2_xy"), "--engine", "classical"]);
    assert_eq!(code, 3);

    let dir = std::env::temp_dir().join(format!("anick-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.txt");
    std::fs::write(&bad, "arrows x; relations x x, x x x\n").unwrap();
    let (code, _) = run(&["chains", bad.to_str().unwrap()]);
    assert_eq!(code, 3);
    let (code, _) = run(&["chains", &fixture("t2"), "--format", "yaml"]);
    assert_eq!(code, 3);

    let target = dir.join("betti.csv");
    let (code, out) = run(&["betti", &fixture("t3"), "-w", "6", "--format", "csv", "-o", target.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, ""));
    assert!(std::fs::read_to_string(&target).unwrap().starts_with("n,w,count\n"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let commands: Vec<Vec<String>> = [
        vec!["verify", "xyx", "-w", "7", "--format", "json"],
        vec!["verify", "t4", "-w", "9", "--sabotage", "--format", "csv"],
        vec!["model", "x2_xy", "-w", "7"],
        vec!["ext", "t4", "-w", "9", "-n", "5", "--format", "csv"],
        vec!["hh", "a3", "-d", "3", "--engine", "classical", "--format", "csv"],
    ]
    .iter()
    .map(|c| {
        let mut v = vec!["anick-model".to_string(), c[0].to_string(), fixture(c[1])];
        v.extend(c[2..].iter().map(|s| s.to_string()));
        v
    })
    .collect();
    let render = |threads: usize| -> Vec<String> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            commands
                .iter()
                .map(|args| execute(&Cli::try_parse_from(args).unwrap()).unwrap().0)
                .collect()
        })
    };
    let one = render(1);
    assert_eq!(one, render(4));
    assert_eq!(one, render(1));
}
