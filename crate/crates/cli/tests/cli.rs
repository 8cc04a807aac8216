use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric-apery"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn exit_codes() {
    let cases: [(&[&str], i32); 7] = [
        (&["catalog"], 0),
        (&["periods", "x + * y"], 2),
        (&["run", "V12", "--ansatz", "banana"], 2),
        (&["tempered", "x^2+y+z+1/(x*y*z)"], 3),
        (&["pfop", "V12", "--ansatz", "1x1"], 4),
        (&["apery", "x+1/x+y+1/y+z+1/z"], 5),
        (&["check-v16", "--digits", "12", "--perturb", "1/1000"], 6),
    ];
    for (args, code) in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        &["run", "R1"][..],
        &["singular", "V18"][..],
        &["catalog"][..],
        &["check-v16", "--digits", "15"][..],
    ] {
        let first = run(args);
        let second = run(args);
        assert!(first.status.success());
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}

#[test]
fn periods_of_the_tetrahedron() {
    let v = json(&["periods", "x+y+z+1/(x*y*z)", "--terms", "8", "--oracle"]);
    let a: Vec<&str> = v["a"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    // (4k)! / k!^4 at n = 4k
    assert_eq!(a, ["1", "0", "0", "0", "24", "0", "0", "0", "2520"]);
}

#[test]
fn run_reports_every_stage() {
    let v = json(&["run", "V16", "--timings"]);
    assert_eq!(v["symbol"], "t^2 - 24*t + 16");
    assert_eq!(v["involution"]["M"], "16");
    assert_eq!(v["apery"]["recognized"]["coefficient"], "7/32");
    assert_eq!(v["polytope"]["reflexive"], true);
    assert_eq!(v["temperedness"]["passed"], true);
    assert!(v["timings"]["periods"].is_number());
    assert!(json(&["run", "V16"]).get("timings").is_none());
}

#[test]
fn periods_only_stops_early() {
    let v = json(&["run", "V12", "--periods-only", "--terms", "5"]);
    let a: Vec<&str> = v["periods"]["a"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert_eq!(a, ["1", "5", "73", "1445", "33001", "819005"]);
    assert!(v["operator"].is_null());
}
