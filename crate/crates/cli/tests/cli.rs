use std::process::Command as Proc;

use clap::Parser;

use boxcluster_cli::cli::{run, Cli};

fn exec(args: &[&str]) -> (String, i32) {
    let cli = Cli::try_parse_from(std::iter::once("boxcluster").chain(args.iter().copied())).unwrap();
    let out = run(&cli.command).unwrap();
    (out.stdout, out.code)
}

fn binary(args: &[&str]) -> (String, i32) {
    let out = Proc::new(env!("CARGO_BIN_EXE_boxcluster")).args(args).output().unwrap();
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap())
}

#[test]
fn tsystem_prints_relation_and_kr_label() {
    let (out, code) = exec(&["tsystem", "--type", "A3", "--box=-2,0"]);
    assert_eq!(code, 0);
    assert_eq!(out, "[M[0]][M[-2]] = [M[-2,0]] + [M[-1]]\n[-2,0] = W^{(3)}_{2,(−q)^{−2}}\n");
}

#[test]
fn boxmove_follows_the_worked_example() {
    assert_eq!(exec(&["boxmove", "--chain", "0:LL", "--at", "1"]).0, "-1:RL\n");
    let (out, _) = exec(&["boxmove", "--chain", "0:LL", "--at", "1,2", "--type", "A3"]);
    assert_eq!(out, "-1:LR\n([-1],[-2],[-2,0])\n");
}

#[test]
fn mutate_reports_the_exchange() {
    let (out, code) = exec(&["mutate", "--type", "A3", "--chain", "0:LL", "--at", "1"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next().unwrap(), "1\tμ1\t(x[-2,0] + x[-1])/x[0]");
    let cli = Cli::try_parse_from(["boxcluster", "mutate", "--type", "A3", "--chain", "0:LL", "--at", "2"]).unwrap();
    assert!(run(&cli.command).unwrap_err().to_string().contains("frozen"));
}

#[test]
fn seed_json_matches_range_form() {
    let a: serde_json::Value = serde_json::from_str(&exec(&["seed", "--type", "A3", "--chain", "0:LL"]).0).unwrap();
    let b: serde_json::Value = serde_json::from_str(&exec(&["seed", "--type", "A3", "--range=-2,0"]).0).unwrap();
    assert_eq!(a, b);
    assert_eq!(a["chain"], serde_json::json!({"a": 0, "code": "LL"}));
    assert_eq!(a["frozen"], serde_json::json!([2, 3]));
}

#[test]
fn validate_flags_bad_heights() {
    let (out, code) = exec(&["validate", "--type", "A3", "--xi", "0,5,2"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("FAIL"));
    assert_eq!(exec(&["validate", "--type", "A3", "--xi", "0,1,2"]), ("PASS\n".into(), 0));
    assert_eq!(exec(&["validate", "--type", "B3"]).1, 0);
}

#[test]
fn export_dot_has_three_arrows() {
    let (out, _) = exec(&["export-dot", "--type", "A3", "--window=-2,0"]);
    assert!(out.starts_with("digraph"));
    assert_eq!(out.matches("->").count(), 3);
}

#[test]
fn binary_exit_codes() {
    let (out, code) = binary(&["verify", "--suite", "hl-eq-gls", "--type", "B2", "--window=-20,20"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("PASS hl-eq-gls"));
    assert_eq!(binary(&["validate", "--type", "A3", "--xi", "0,5,2"]).1, 1);
    assert_eq!(binary(&["boxmove", "--chain", "0:LL"]).1, 2);
    assert_eq!(binary(&["verify", "--suite", "nope"]).1, 2);
    assert_eq!(binary(&["boxmove", "--chain", "0:LL", "--at", "2"]).1, 2);
}
