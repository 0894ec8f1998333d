//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so every line is printed; exits non-zero if any criterion fails.

use std::process::Command;
use std::time::Instant;

use nalgebra::{Matrix3, Vector3, Vector6};
use titop::analysis::{bending_scale_z, frequency_response, DimensionlessSetup, frequency_ratio};
use titop::assembly::{assemble, cantilever};
use titop::beam::{build_matrix_set, compute_equilibrium, BeamProperties, Kinematics};
use titop::linalg::eigenvalues;
use titop::modal_frequencies;
use titop::rigid::{build_main_body, RigidBodyProperties};
use titop_cli::published::{self, RatioRow as Published};
use titop_cli::tables::{oracle_pair, ratio_row, ratio_table, table_beam, RatioRow, TableKind};

struct Outcome {
    pass: bool,
    detail: String,
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

/// Worst relative deviation over the eight bending ratios of every row.
fn worst_bending(rows: &[RatioRow], reference: &[Published]) -> (f64, String) {
    let mut worst = (0.0, String::new());
    for (r, p) in rows.iter().zip(reference) {
        assert_eq!(r.eta, p.0);
        for k in 0..4 {
            for (name, got, want) in [("in-plane", r.in_plane[k], p.1[k]), ("out-of-plane", r.out_of_plane[k], p.2[k])] {
                let d = rel(got, want);
                if !(d <= worst.0) {
                    worst = (d, format!("η={} {name} {}: {got:.4} vs {want:.4}", r.eta, k + 1));
                }
            }
        }
    }
    worst
}

fn table_check(kind: TableKind, reference: &[Published]) -> (bool, String) {
    let rows = ratio_table(&table_beam(), kind, 1).expect("table");
    let (w, at) = worst_bending(&rows, reference);
    (w <= 5e-4, format!("{} worst {:.4}% at {at}", kind.name(), w * 100.0))
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let (ok, msg) = table_check(TableKind::T1, &published::T1);
    let secs = t.elapsed().as_secs_f64();
    Outcome { pass: ok && secs < 5.0, detail: format!("{msg}; {secs:.2} s") }
}

fn criterion_2() -> Outcome {
    let (ok2, m2) = table_check(TableKind::T2, &published::T2);
    let (ok3, m3) = table_check(TableKind::T3, &published::T3);
    let first = ratio_row(&table_beam(), 0.0, 1.0, 0.0, 1).expect("row").in_plane[0];
    let ok0 = (first - 1.5573).abs() < 5e-5;
    Outcome { pass: ok2 && ok3 && ok0, detail: format!("{m2}; {m3}; T3 η=0 first {first:.4}") }
}

fn criterion_3() -> Outcome {
    let p = table_beam();
    let t4 = &published::T4;
    let mut worst5: f64 = 0.0;
    let mut worst1: f64 = 0.0;
    let mut worst1_other: f64 = 0.0;
    let mut worst_fe: f64 = 0.0;
    for (i, &eta) in t4.eta.iter().enumerate() {
        let five = ratio_row(&p, 0.0, 0.0, eta, 5).expect("5 el.");
        let one = ratio_row(&p, 0.0, 0.0, eta, 1).expect("1 el.");
        worst5 = worst5.max(rel(five.out_of_plane[0], t4.b1z_exact[i]));
        worst1 = worst1.max(rel(one.out_of_plane[0], t4.b1z_one[i]));
        for (got, want) in [
            (one.out_of_plane[1], t4.b2z_one[i]),
            (one.in_plane[0], t4.b1y_one[i]),
            (one.in_plane[1], t4.b2y_one[i]),
        ] {
            worst1_other = worst1_other.max(rel(got, want));
        }
        let fe = oracle_pair(&p, eta, 40).expect("FE");
        for (got, want) in [(fe[0], t4.b1z_nastran[i]), (fe[2], t4.b1y_nastran[i]), (fe[3], t4.b2y_nastran[i])] {
            worst_fe = worst_fe.max(rel(got, want));
        }
    }
    Outcome {
        pass: worst5 <= 1e-4 && worst1 <= 5e-4 && worst_fe <= 5e-3,
        detail: format!(
            "5 el. f_b1^z vs exact {:.4}%; 1 el. f_b1^z {:.4}% (other 1 el. columns, informative: {:.4}%); FE 40 el. vs NASTRAN {:.3}%",
            worst5 * 100.0,
            worst1 * 100.0,
            worst1_other * 100.0,
            worst_fe * 100.0
        ),
    }
}

fn criterion_4() -> Outcome {
    let r = ratio_row(&table_beam(), 0.0, 0.0, 0.0, 1).expect("row");
    let d = (r.traction - 3f64.sqrt()).abs();
    Outcome {
        pass: d <= 1e-6,
        detail: format!("ω√(ρl²/E) = {:.9} (|Δ| = {d:.1e}); published 1732/1719 normalization left unresolved", r.traction),
    }
}

fn criterion_5() -> Outcome {
    let mut cfg = titop_cli::load_scenario("thor-like").expect("builtin");
    cfg.spin.nominal = 0.0;
    let g = cfg.graph().expect("graph").graph;
    let m = assemble(&g, 0.0).expect("assembly");
    let ss = &m.block.ss;
    let (i, o) = titop_cli::parse_channel("Tin2:wdot2", "hub").expect("channel");
    let gain = frequency_response(ss, ss.input_index(&i).unwrap(), ss.output_index(&o).unwrap(), &[1e-7]).expect("response")[0]
        .magnitude();
    let p = table_beam();
    let (r, l, tip) = (2.0, p.l, 5.0);
    let boom_j = p.rho * p.s * ((r + l).powi(3) - r.powi(3)) / 3.0;
    let jyy = 570.42 + 2.0 * boom_j + 2.0 * tip * (r + l).powi(2);
    let d = rel(gain, 1.0 / jyy);
    Outcome { pass: d <= 1e-6, detail: format!("gain {gain:.10e} vs 1/J_yy {:.10e} (rel {d:.1e})", 1.0 / jyy) }
}

fn euler_nutation(j: &Matrix3<f64>, spin: f64) -> f64 {
    let f = |w: &Vector3<f64>| -j.try_inverse().unwrap() * w.cross(&(j * w));
    let w0 = Vector3::new(0.0, 0.0, spin);
    let h = 1e-6 * spin;
    let mut jac = Matrix3::zeros();
    for k in 0..3 {
        let mut e = Vector3::zeros();
        e[k] = h;
        jac.set_column(k, &((f(&(w0 + e)) - f(&(w0 - e))) / (2.0 * h)));
    }
    jac.complex_eigenvalues().iter().map(|z| z.im.abs()).fold(0.0, f64::max)
}

fn criterion_6() -> Outcome {
    let j = Matrix3::from_diagonal(&Vector3::new(570.42, 570.42, 1000.0));
    let props = RigidBodyProperties { m: 500.0, j_a: j, ap: Vector3::zeros(), pc: Vector3::zeros() };
    let mut worst: f64 = 0.0;
    for spin in [0.1, 0.5, 2.0] {
        let want = euler_nutation(&j, spin);
        let block = build_main_body("hub", &props, &[], &Vector3::new(0.0, 0.0, spin)).expect("hub");
        let got = eigenvalues(&block.ss.a)
            .expect("eig")
            .iter()
            .map(|z| z.im.abs())
            .min_by(|a, b| (a - want).abs().total_cmp(&(b - want).abs()))
            .unwrap();
        worst = worst.max(rel(got, want));
    }
    Outcome { pass: worst <= 1e-8, detail: format!("worst rel {worst:.1e} over Ω ∈ {{0.1, 0.5, 2}}") }
}

fn criterion_7() -> Outcome {
    let t = Instant::now();
    let p = table_beam();
    let mut fails = vec![];

    // mass and gyroscopic structure over spin, offset and several beams
    for (scale, eta, alpha) in [(1.0, 0.0, 0.0), (1.0, 5.0, 1.0), (0.1, 10.0, 0.3), (3.0, 2.0, 0.0)] {
        let q = BeamProperties { l: p.l * scale, ..p.clone() };
        let eq = compute_equilibrium(&q, &Kinematics::spinning(alpha * q.l, eta * bending_scale_z(&q)), &Vector6::zeros())
            .expect("equilibrium");
        let ms = build_matrix_set(&q, &eq).expect("matrices");
        if (&ms.m_t - ms.m_t.transpose()).abs().max() > 1e-12 * ms.m_t.abs().max() || ms.m_t.clone().cholesky().is_none() {
            fails.push("M_T not SPD");
        }
        let g = (ms.g_t.transpose() - &ms.g_t) * 0.5;
        if (&g + g.transpose()).abs().max() > 1e-12 * g.abs().max().max(1.0) {
            fails.push("gyroscopic part not skew");
        }
    }

    // imaginary spectra at rest
    for (alpha, mu, n) in [(0.0, 0.0, 1), (1.0, 0.0, 2), (0.0, 1.0, 3)] {
        let g = cantilever(&p, n, alpha * p.l, mu * p.mass(), None).expect("graph");
        let r = modal_frequencies(&assemble(&g, 0.0).expect("model").block.ss).expect("modal");
        let scale = r.eigenvalues.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if r.eigenvalues.iter().any(|v| v.re.abs() > 1e-8 * scale) {
            fails.push("non-imaginary spectrum at rest");
        }
    }

    // out-of-plane Campbell branches of the fig7 scenario
    let cfg = titop_cli::load_scenario("fig7").expect("builtin");
    let art = titop_cli::campbell(&cfg, 2.0, 40, &[]).expect("campbell");
    let lines: Vec<&str> = art.contents.lines().collect();
    let header: Vec<&str> = lines[0].split(',').collect();
    let cols: Vec<usize> = (0..header.len()).filter(|&k| header[k].starts_with("Out-of-plane")).collect();
    let values: Vec<Vec<f64>> = lines[1..].iter().map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    if values.len() != 41 || cols.is_empty() {
        fails.push("Campbell grid incomplete");
    }
    for &c in &cols {
        if values.windows(2).any(|w| !(w[1][c] > w[0][c])) {
            fails.push("out-of-plane branch not increasing");
        }
    }

    // in-plane ≤ out-of-plane for every η > 0 of T1 to T3
    for kind in [TableKind::T1, TableKind::T2, TableKind::T3] {
        for r in ratio_table(&p, kind, 1).expect("table").iter().filter(|r| r.eta > 0.0) {
            if (0..4).any(|k| r.in_plane[k] > r.out_of_plane[k]) {
                fails.push("in-plane above out-of-plane");
            }
        }
    }

    // ratios unchanged under a change of length, mass and time units
    let (ls, ms, ts): (f64, f64, f64) = (0.01, 1000.0, 60.0);
    let q = BeamProperties::new(
        p.rho * ms / ls.powi(3),
        p.s * ls * ls,
        p.l * ls,
        p.e * ms / (ls * ts * ts),
        p.nu,
        p.jy * ls.powi(4),
        p.jz * ls.powi(4),
        p.jpx * ls.powi(4),
    );
    let ratios = |b: &BeamProperties| {
        let om = 6.0 * bending_scale_z(b);
        let g = cantilever(b, 1, 0.5 * b.l, b.mass(), None).unwrap();
        let r = modal_frequencies(&assemble(&g, om).unwrap().block.ss).unwrap();
        let t = frequency_ratio(&r, &DimensionlessSetup::new(b, om, b.mass(), 0.5 * b.l), b);
        [t.in_plane.clone(), t.out_of_plane.clone(), t.traction.clone(), t.torsion.clone()].concat()
    };
    if ratios(&p).iter().zip(ratios(&q)).any(|(a, b)| rel(*a, b) > 1e-8) {
        fails.push("ratios depend on units");
    }

    let secs = t.elapsed().as_secs_f64();
    Outcome {
        pass: fails.is_empty() && secs < 60.0,
        detail: if fails.is_empty() { format!("all properties hold; {secs:.2} s") } else { format!("{fails:?}; {secs:.2} s") },
    }
}

fn criterion_8() -> Outcome {
    let dir = std::env::temp_dir().join(format!("titop-acceptance-{}", std::process::id()));
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_titop"))
            .args(["table", "T1"])
            .env(titop_cli::OUTPUT_ENV, &dir)
            .output()
            .expect("binary runs");
        let file = std::fs::read(dir.join("table_T1.csv")).unwrap_or_default();
        (out.status.success(), out.stdout, file)
    };
    let (ok_a, out_a, file_a) = run();
    let (ok_b, out_b, file_b) = run();
    let _ = std::fs::remove_dir_all(&dir);
    let same = out_a == out_b && file_a == file_b && out_a == file_a && !out_a.is_empty();
    Outcome { pass: ok_a && ok_b && same, detail: format!("{} bytes, identical: {same}", out_a.len()) }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("T1 ratios", criterion_1),
        ("T2 and T3 ratios", criterion_2),
        ("T4 cross-method", criterion_3),
        ("single-element traction frequency", criterion_4),
        ("spacecraft static gain", criterion_5),
        ("hub nutation", criterion_6),
        ("property suite", criterion_7),
        ("determinism", criterion_8),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        println!("{} criterion {}: {name}: {}", if o.pass { "PASS" } else { "FAIL" }, k + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
