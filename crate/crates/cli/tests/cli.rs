use std::process::Command;

use titop::assembly::assemble;
use titop::modal_frequencies;
use titop_cli::config::parse;
use titop_cli::output::{EquilibriumReport, ModalReport};
use titop_cli::tables::{generate, table_beam, TableKind};
use titop_cli::{load_scenario, parse_channel, parse_grid, run_scenario, BUILTINS};

fn titop(args: &[&str], dir: &std::path::Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_titop")).args(args).env(titop_cli::OUTPUT_ENV, dir).output().unwrap()
}

fn tmp(tag: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("titop-cli-{tag}-{}", std::process::id()))
}

fn row<'a>(csv: &'a str, eta: &str) -> Vec<&'a str> {
    csv.lines().find(|l| l.starts_with(eta)).unwrap().split(',').collect()
}

#[test]
fn builtins_parse() {
    for (name, _) in BUILTINS {
        let cfg = load_scenario(name).unwrap();
        assert_eq!(cfg.name, name);
        cfg.graph().unwrap();
    }
}

#[test]
fn unknown_keys_are_rejected() {
    let text = r#"{"name":"x","spin":{"nominal":0.0,"jitter":1},"topology":{"root":"a"}}"#;
    assert!(parse(text).is_err());
    let text = r#"{"name":"x","spin":{"nominal":0.0},"topology":{"root":"missing"}}"#;
    assert!(parse(text).is_err());
}

#[test]
fn table_columns() {
    let t1 = generate(&table_beam(), TableKind::T1, None, false).unwrap();
    assert_eq!(&row(&t1, "0.0000")[1..5], ["3.5160", "22.1578", "63.3466", "281.5963"]);
    assert!(t1.starts_with("eta,In-plane bending 1st,In-plane bending 2nd"));

    let t2 = generate(&table_beam(), TableKind::T2, None, false).unwrap();
    let r = row(&t2, "10.0000");
    assert_eq!(r[5], "16.6442");

    let t3 = generate(&table_beam(), TableKind::T3, None, false).unwrap();
    assert!(t3.lines().next().unwrap().contains("Traction published (normalization unresolved)"));
    let r = row(&t3, "0.0000");
    assert_eq!((r[9], r[11]), ("0.8660", "866.0300"));

    let t4 = generate(&table_beam(), TableKind::T4, Some(5), true).unwrap();
    let r = row(&t4, "3.0000");
    assert_eq!(r[5], "4.7973");
    assert_eq!(r.len(), 13);
}

#[test]
fn modal_json_round_trip() {
    let cfg = load_scenario("thor-like").unwrap();
    let g = cfg.graph().unwrap().graph;
    let m = assemble(&g, cfg.spin.nominal).unwrap();
    let r = modal_frequencies(&m.block.ss).unwrap();
    let report = ModalReport::new(&cfg.name, cfg.spin.nominal, m.block.ss.nstates(), &r);
    let back: ModalReport = serde_json::from_str(&titop_cli::output::to_json(&report)).unwrap();
    assert_eq!(back, report);
    for (a, b) in back.modes.iter().zip(&r.modes) {
        assert_eq!(a.frequency.to_bits(), b.frequency.to_bits());
    }
}

#[test]
fn thor_like_equilibrium_reports() {
    let mut cfg = load_scenario("thor-like").unwrap();
    cfg.analyses = vec![titop_cli::config::Analysis::Equilibrium];
    for (spin, tip) in [(0.0, 0.0), (0.5, 65.0)] {
        cfg.spin.nominal = spin;
        let out = run_scenario(&cfg).unwrap();
        let rep: EquilibriumReport = serde_json::from_str(&out[0].contents).unwrap();
        let node = rep.nodes.iter().find(|n| n.name == "boom1_tip").unwrap();
        assert!((node.w_p[0] - tip).abs() < 1e-9);
        if spin == 0.0 {
            assert!(rep.nodes.iter().all(|n| n.w_p.iter().all(|x| *x == 0.0)));
        }
    }
}

#[test]
fn channel_and_grid_shorthand() {
    assert_eq!(parse_channel("Tin2:wdot2", "hub").unwrap(), ("hub.ext.T2".into(), "hub.B.wdot2".into()));
    assert_eq!(parse_channel("Fin1:boom1.C.v1", "hub").unwrap(), ("hub.ext.F1".into(), "boom1.C.v1".into()));
    let g = parse_grid("log:1e-3:1e3:7").unwrap();
    assert_eq!(g.len(), 7);
    assert!((g[3] - 1.0).abs() < 1e-12);
    assert!(parse_grid("log:0:1:5").is_err());
}

#[test]
fn exit_codes() {
    let dir = tmp("exit");
    assert!(titop(&["run", "fig7"], &dir).status.success());
    assert!(dir.join("fig7_campbell.csv").exists());

    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"name":"x","spin":{"nominal":0},"topology":{"root":"a"},"extra":true}"#).unwrap();
    assert_eq!(titop(&["run", bad.to_str().unwrap()], &dir).status.code(), Some(2));

    let out = titop(&["run", "thor-like", "--spin", "30"], &dir);
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8_lossy(&out.stderr);
    assert!(text.contains("model_invalid") && text.contains("q_f"), "{text}");

    let out = titop(&["freqresp", "thor-like", "--channel", "Tin9:wdot2"], &dir);
    assert_eq!(out.status.code(), Some(2));
    let _ = std::fs::remove_dir_all(&dir);
}
