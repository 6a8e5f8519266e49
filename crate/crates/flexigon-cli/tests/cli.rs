//! End-to-end checks of the `flexigon` binary: the documented exit codes,
//! the stability of the machine-readable output, and agreement between the
//! command surface and the library it fronts.

use std::process::{Command, Output};

use flexigon_core::algebra::{Cocycle, RingTag};
use serde_json::Value;

fn flexigon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flexigon"))
        .args(args)
        .output()
        .expect("binary launches")
}

fn json(args: &[&str]) -> Value {
    let out = flexigon(args);
    assert!(
        out.status.success(),
        "`flexigon {}` failed: {}",
        args.join(" "),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn exit_code(args: &[&str]) -> i32 {
    flexigon(args).status.code().expect("exited normally")
}

#[test]
fn eval_matches_worked_examples() {
    let v = json(&[
        "eval", "--lengths", "3,1,1,1,1", "--monomial", "1:1,2:1", "--format", "json",
    ]);
    assert_eq!(v["schema"], "flexigon/eval/v1");
    assert_eq!(v["value"], -1);
    // the echoed vector is the realized (perturbed) one
    assert_eq!(v["lengths"][0], "385/128");

    let v = json(&[
        "eval", "--lengths", "1,1,1,1,1", "--monomial", "e:2", "--ring", "z2", "--format", "json",
    ]);
    assert_eq!(v["value"], 1);

    let v = json(&[
        "eval", "--lengths", "1,1,1,1,1,1,1", "--monomial", "1:4", "--format", "json",
    ]);
    assert_eq!(v["value"], 10);

    let out = flexigon(&["eval", "--lengths", "3,1,1,1,1", "--monomial", "1:1,2:1"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("value: -1"), "human output: {text}");

    // an open polygon has an empty moduli space; everything evaluates to 0
    let v = json(&[
        "eval", "--lengths", "6,1,1,1,1", "--monomial", "1:1,2:1", "--format", "json",
    ]);
    assert_eq!(v["value"], 0);
}

#[test]
fn exit_codes_follow_the_contract() {
    // 2: malformed or non-positive lengths
    assert_eq!(
        exit_code(&["eval", "--lengths", "0,1,1,1,1", "--monomial", "1:2"]),
        2
    );
    assert_eq!(
        exit_code(&["chamber", "--lengths", "1,1,oops,1,1"]),
        2
    );
    // 3: a representation override that breaks transversality
    assert_eq!(
        exit_code(&[
            "expand", "--lengths", "3,1,1,1,1", "--monomial", "1:1,2:1", "--reps", "1=2,2=1",
        ]),
        3
    );
    // 4: bad monomials, degrees, and the pairwise table off a pentagon
    assert_eq!(exit_code(&["table", "--lengths", "1,1,1,1,1,1"]), 4);
    assert_eq!(
        exit_code(&["eval", "--lengths", "3,1,1,1,1", "--monomial", "1:3"]),
        4
    );
    assert_eq!(
        exit_code(&["eval", "--lengths", "3,1,1,1,1", "--monomial", "bogus"]),
        4
    );
    assert_eq!(
        exit_code(&[
            "expand", "--lengths", "3,1,1,1,1", "--monomial", "e:2", "--ring", "z2", "--reps",
            "1=4",
        ]),
        4
    );
}

#[test]
fn table_matches_the_frozen_pentagon() {
    let v = json(&["table", "--lengths", "3,1,1,1,1", "--format", "json"]);
    assert_eq!(v["schema"], "flexigon/table/v1");
    assert_eq!(v["kind"], "pairwise");
    let want = [
        [1, -1, -1, -1, -1],
        [-1, 1, 1, 1, 1],
        [-1, 1, 1, 1, 1],
        [-1, 1, 1, 1, 1],
        [-1, 1, 1, 1, 1],
    ];
    for i in 0..5 {
        for j in 0..5 {
            assert_eq!(v["entries"][i][j], want[i][j], "entry ({i}, {j})");
        }
    }
}

#[test]
fn table_all_lists_every_top_monomial() {
    let v = json(&["table", "--lengths", "1,1,1,1,1,1", "--all", "--format", "json"]);
    assert_eq!(v["kind"], "all");
    let rows = v["rows"].as_array().expect("rows");
    // weak compositions of 3 over 6 edges
    assert_eq!(rows.len(), 56);
    assert_eq!(rows[0]["monomial"], "1:3");
    // spot-check rows against independent eval invocations
    for row in [&rows[0], &rows[20], &rows[55]] {
        let monomial = row["monomial"].as_str().expect("monomial string");
        let e = json(&[
            "eval", "--lengths", "1,1,1,1,1,1", "--monomial", monomial, "--format", "json",
        ]);
        assert_eq!(e["value"], row["value"], "monomial {monomial}");
    }
}

#[test]
fn expanded_cocycles_round_trip() {
    let cases: [(&str, &str, &str, RingTag, usize); 4] = [
        ("3,1,1,1,1", "1:1,2:1", "z", RingTag::Z, 5),
        ("1,1,1,1,1,1", "1:2,2:1", "z", RingTag::Z, 6),
        ("1,1,1,1,1,1", "e:2", "z2", RingTag::Z2, 6),
        ("2,1,1,1,eps", "1:1,5:1", "z", RingTag::Z, 5),
    ];
    for (lengths, monomial, ring_flag, ring, n) in cases {
        let v = json(&[
            "expand", "--lengths", lengths, "--monomial", monomial, "--ring", ring_flag,
            "--format", "json",
        ]);
        let s = v["cocycle"].as_str().expect("cocycle string");
        let c = Cocycle::parse(s, ring, n).expect("emitted cocycle reparses");
        assert_eq!(c.to_string(), s, "round trip for {monomial} on ({lengths})");
        assert_eq!(c.num_terms() as u64, v["terms"].as_u64().expect("terms"));
    }
    // the planar square display keeps all four terms on a generic hexagon
    let v = json(&[
        "expand", "--lengths", "1,1,1,1,1,1", "--monomial", "e:2", "--ring", "z2", "--format",
        "json",
    ]);
    assert_eq!(v["terms"], 4);
    assert_eq!(v["degree"], 2);
}

#[test]
fn triangle_signs_sum_to_the_value() {
    let t = json(&[
        "triangles", "--lengths", "3,2,2,1,1", "--monomial", "4:1,5:1", "--format", "json",
    ]);
    assert_eq!(t["schema"], "flexigon/triangles/v1");
    assert_eq!(t["count"], 3);
    assert_eq!(t["value"], 3);
    let signs: i64 = t["configurations"]
        .as_array()
        .expect("configurations")
        .iter()
        .map(|c| c["sign"].as_i64().expect("sign"))
        .sum();
    assert_eq!(signs, 3);
    let e = json(&[
        "eval", "--lengths", "3,2,2,1,1", "--monomial", "4:1,5:1", "--format", "json",
    ]);
    assert_eq!(e["value"], t["value"]);

    // parity listing over Z2: an odd number of configurations, value 1
    let t = json(&[
        "triangles", "--lengths", "1,1,1,1,1", "--monomial", "e:2", "--ring", "z2", "--format",
        "json",
    ]);
    assert_eq!(t["value"], 1);
    assert_eq!(t["count"].as_u64().expect("count") % 2, 1);

    // open polygon: no configurations at all
    let t = json(&[
        "triangles", "--lengths", "6,1,1,1,1", "--monomial", "1:1,2:1", "--format", "json",
    ]);
    assert_eq!(t["count"], 0);
    assert_eq!(t["value"], 0);
}

#[test]
fn chamber_fingerprint_is_scale_invariant() {
    let a = json(&["chamber", "--lengths", "1,1,1,1,1", "--format", "json"]);
    let b = json(&["chamber", "--lengths", "2,2,2,2,2", "--format", "json"]);
    assert_eq!(a["schema"], "flexigon/chamber/v1");
    assert_eq!(a["fingerprint"], b["fingerprint"]);
    assert_eq!(a["walls"], 16);
    let c = json(&["chamber", "--lengths", "3,1,1,1,1", "--format", "json"]);
    assert_ne!(a["fingerprint"], c["fingerprint"]);

    // three heavy edges: their classes vanish, the light ones survive
    let d = json(&["chamber", "--lengths", "1,1,1,eps,eps,eps", "--format", "json"]);
    let statuses: Vec<&str> = d["chern"]
        .as_array()
        .expect("per-edge list")
        .iter()
        .map(|e| e["status"].as_str().expect("status"))
        .collect();
    assert_eq!(statuses, ["zero", "zero", "zero", "nonzero", "nonzero", "nonzero"]);
}

#[test]
fn verify_is_deterministic_and_gates_on_failures() {
    let args = [
        "verify", "--trials", "40", "--seed", "11", "--nmax", "7", "--format", "json",
    ];
    let first = flexigon(&args);
    let second = flexigon(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "identical runs must match bytewise");

    let v: Value = serde_json::from_slice(&first.stdout).expect("report is JSON");
    assert_eq!(v["passed"], true);
    for p in v["properties"].as_array().expect("properties") {
        assert_eq!(p["failures"], 0, "property {}", p["name"]);
    }

    // no trials, nothing to fail
    assert_eq!(exit_code(&["verify", "--trials", "0"]), 0);

    // a fixed pentagon in a frozen chamber is held to its table
    let v = json(&[
        "verify", "--lengths", "3,2,2,1,1", "--trials", "5", "--format", "json",
    ]);
    let fixed = v["properties"]
        .as_array()
        .expect("properties")
        .iter()
        .find(|p| p["name"] == "fixed-vector")
        .expect("fixed-vector runs when lengths are given");
    assert_eq!(fixed["failures"], 0);
    assert!(
        fixed["note"]
            .as_str()
            .expect("note")
            .contains("frozen 5x5 table"),
        "note: {}",
        fixed["note"]
    );
}
