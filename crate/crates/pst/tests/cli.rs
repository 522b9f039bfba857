use std::process::{Command, Output};

use pstwalk::parse_graph;
use serde_json::Value;

fn pst(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pst"))
        .args(args)
        .output()
        .expect("run pst")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn scan_finds_weak_product_transfer() {
    let o = pst(&[
        "scan",
        "--expr",
        "weak(Q:2,K:4)",
        "--from",
        "0",
        "--to",
        "12",
        "--tmax",
        "6.2832",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!((v["t_star"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-6);
    assert!(v["fmax"].as_f64().unwrap() >= 1.0 - 1e-9);
    assert_eq!(v["verdict"], "pst");
}

#[test]
fn certify_hypercube() {
    let o = pst(&["certify", "--expr", "Q:3", "--from", "0", "--to", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["verdict"], "yes");
    assert_eq!(v["time_exact"]["a"], 1);
    assert_eq!(v["time_exact"]["b"], 2);
    assert_eq!(v["time_exact"]["scale"], 1.0);
    for key in ["time_num", "support", "signs", "reason"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let labelled = json(&pst(&[
        "certify", "--expr", "Q:3", "--from", "000", "--to", "111",
    ]));
    assert_eq!(labelled["verdict"], "yes");
}

#[test]
fn certify_without_transfer() {
    let v = json(&pst(&[
        "certify", "--expr", "K:3", "--from", "0", "--to", "1",
    ]));
    assert_eq!(v["verdict"], "no");
    assert!(v["time_exact"].is_null());
}

#[test]
fn fidelity_csv_and_json() {
    let o = pst(&[
        "fidelity",
        "--expr",
        "P:2",
        "--from",
        "0",
        "--to",
        "1",
        "--tmax",
        "0.5",
        "--steps",
        "3",
        "--pi-units",
    ]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,re,im,abs"));
    let last: Vec<f64> = lines
        .last()
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    assert!((last[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    assert!((last[3] - 1.0).abs() < 1e-12);

    let v = json(&pst(&[
        "fidelity", "--expr", "P:2", "--from", "0", "--to", "1", "--tmax", "1", "--steps", "5",
        "--format", "json",
    ]));
    assert_eq!(v.as_array().unwrap().len(), 5);
    for key in ["t", "re", "im", "abs"] {
        assert!(v[0].get(key).is_some(), "missing {key}");
    }
}

#[test]
fn build_writes_files_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let o = pst(&[
        "build",
        "--expr",
        "gluedcone(circ:15:1,2,4 ; circ:15:1,2,4,7)",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let g = parse_graph(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(g.n(), 32);
    let leftovers = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(leftovers, 1);

    let file_expr = format!("file:{}", path.display());
    let v = json(&pst(&[
        "certify", "--expr", &file_expr, "--from", "0", "--to", "31",
    ]));
    assert_eq!(v["verdict"], "yes");
    assert_eq!(v["time_exact"]["b"], 4);
}

#[test]
fn spectrum_formats() {
    let v = json(&pst(&["spectrum", "--expr", "C:4"]));
    assert_eq!(v["n"], 4);
    assert_eq!(v["integral"], true);
    let csv = stdout(&pst(&["spectrum", "--expr", "C:4", "--format", "csv"]));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn collapse_prints_cells_and_quotient() {
    let o = pst(&[
        "collapse",
        "--expr",
        "join(Kbar:2, K:3)",
        "--from",
        "0",
        "--to",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(
        text.contains("cell 0: 0\ncell 1: 2 3 4\ncell 2: 1\n"),
        "{text}"
    );
    let quotient: String = text
        .lines()
        .filter(|l| !l.starts_with("cell ") && !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    let q = parse_graph(&quotient).unwrap();
    assert_eq!(q.n(), 3);
    assert_eq!(q.weight(1, 1), 2.0);

    let v = json(&pst(&[
        "collapse", "--expr", "Q:3", "--from", "0", "--to", "7", "--format", "json",
    ]));
    assert_eq!(v["cells"].as_array().unwrap().len(), 4);
    assert!(v["max_deviation"].as_f64().unwrap() < 1e-9);

    let o = pst(&["collapse", "--expr", "P:3", "--from", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let o = pst(&["collapse", "--expr", "join(P:2, Kbar:1)", "--from", "2"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn conditions() {
    let cases: [(&[&str], bool); 9] = [
        (
            &[
                "condition",
                "weak",
                "--expr",
                "Q:2",
                "--with",
                "K:4",
                "--time",
                "0.5",
                "--pi-units",
            ],
            true,
        ),
        (
            &[
                "condition",
                "lex-clique",
                "--expr",
                "Q:2",
                "--with",
                "Q:2",
                "--time",
                "0.5",
                "--pi-units",
            ],
            true,
        ),
        (
            &[
                "condition",
                "lex-std",
                "--expr",
                "K:2",
                "--with",
                "Q:2",
                "--time",
                "0.5",
                "--pi-units",
            ],
            true,
        ),
        (
            &["condition", "doublecone", "--expr", "scale(K:3; sqrt(2))"],
            true,
        ),
        (
            &["condition", "doublecone", "--expr", "K:3", "--b", "1"],
            false,
        ),
        (
            &[
                "condition",
                "gluedcone",
                "--n",
                "15",
                "--k",
                "6",
                "--gamma",
                "8",
            ],
            true,
        ),
        (&["condition", "gluedcone", "--family", "5"], true),
        (&["condition", "p4", "--gamma", "1.1547005383792515"], true),
        (&["condition", "p4", "--gamma", "1"], false),
    ];
    for (args, holds) in cases {
        let o = pst(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert_eq!(json(&o)["holds"], holds, "{args:?}");
    }
    let v = json(&pst(&[
        "condition",
        "cylcone",
        "--n",
        "3",
        "--k",
        "2",
        "--m",
        "2",
    ]));
    assert_eq!(v["verdict"], "no");
}

#[test]
fn table_exit_code() {
    let o = pst(&["table"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 8);
    let v = json(&pst(&["table", "--format", "json"]));
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 8);
    for key in [
        "verdict",
        "time_num",
        "time_exact",
        "support",
        "signs",
        "reason",
    ] {
        assert!(rows[0].get(key).is_some(), "missing {key}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(
        pst(&["certify", "--expr", "weak(Q:2", "--from", "0", "--to", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(pst(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(pst(&["scan", "--expr", "K:3"]).status.code(), Some(2));
    assert_eq!(
        pst(&["certify", "--expr", "K:3", "--from", "0", "--to", "9"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        pst(&[
            "certify",
            "--expr",
            "file:/nonexistent/graph",
            "--from",
            "0",
            "--to",
            "1"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        pst(&["collapse", "--expr", "P:4", "--from", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        pst(&["condition", "cylcone", "--n", "3", "--k", "3", "--m", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        pst(&["condition", "doublecone", "--lambda0", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        pst(&["scan", "--expr", "K:2", "--from", "0", "--to", "1", "--tmax=0"])
            .status
            .code(),
        Some(1)
    );
}
