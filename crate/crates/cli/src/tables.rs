//! Frequency-ratio tables of the uniform spinning cantilever.

use std::fmt::Write as _;

use titop::analysis::{bending_scale_y, bending_scale_z, frequency_ratio, DimensionlessSetup};
use titop::assembly::{assemble, cantilever};
use titop::beam::BeamProperties;
use titop::oracle_fe::{fe_in_plane_frequencies, fe_out_of_plane_frequencies};
use titop::{modal_frequencies, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    T1,
    T2,
    T3,
    T4,
}

impl TableKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_uppercase().as_str() {
            "T1" => Some(Self::T1),
            "T2" => Some(Self::T2),
            "T3" => Some(Self::T3),
            "T4" => Some(Self::T4),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::T1 => "T1",
            Self::T2 => "T2",
            Self::T3 => "T3",
            Self::T4 => "T4",
        }
    }

    /// Root offset ratio α and tip mass ratio μ.
    pub fn alpha_mu(&self) -> (f64, f64) {
        match self {
            Self::T2 => (1.0, 0.0),
            Self::T3 => (0.0, 1.0),
            _ => (0.0, 0.0),
        }
    }

    pub fn etas(&self) -> &'static [f64] {
        match self {
            Self::T4 => &[0.0, 3.0, 6.0, 12.0],
            _ => &[0.0, 2.0, 4.0, 6.0, 8.0, 10.0],
        }
    }
}

/// Boom used by every table: aluminium tube, 50 m.
pub fn table_beam() -> BeamProperties {
    BeamProperties::new(2700.0, 3.14e-4, 50.0, 7e10, 0.33, 7.85e-9, 7.85e-9, 1.57e-8)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioRow {
    pub eta: f64,
    pub in_plane: [f64; 4],
    pub out_of_plane: [f64; 4],
    pub traction: f64,
    pub torsion: f64,
}

fn first<const N: usize>(v: &[f64]) -> [f64; N] {
    std::array::from_fn(|i| v.get(i).copied().unwrap_or(f64::NAN))
}

/// Ratios of an `elements`-element chain spinning at `η` times the
/// out-of-plane bending scale.
pub fn ratio_row(props: &BeamProperties, alpha: f64, mu: f64, eta: f64, elements: usize) -> Result<RatioRow> {
    let omega = eta * bending_scale_z(props);
    let r = alpha * props.l;
    let m = mu * props.mass();
    let g = cantilever(props, elements, r, m, None)?;
    let model = assemble(&g, omega)?;
    let modal = modal_frequencies(&model.block.ss)?;
    let setup = DimensionlessSetup::new(props, omega, m, r);
    let t = frequency_ratio(&modal, &setup, props);
    Ok(RatioRow {
        eta,
        in_plane: first(&t.in_plane),
        out_of_plane: first(&t.out_of_plane),
        traction: t.traction.first().copied().unwrap_or(f64::NAN),
        torsion: t.torsion.first().copied().unwrap_or(f64::NAN),
    })
}

pub fn ratio_table(props: &BeamProperties, kind: TableKind, elements: usize) -> Result<Vec<RatioRow>> {
    let (alpha, mu) = kind.alpha_mu();
    kind.etas().iter().map(|&eta| ratio_row(props, alpha, mu, eta, elements)).collect()
}

/// First two bending ratios per plane, out-of-plane first: `[z1, z2, y1, y2]`.
pub type BendingPair = [f64; 4];

#[derive(Debug, Clone, PartialEq)]
pub struct CrossRow {
    pub eta: f64,
    pub one: BendingPair,
    pub many: BendingPair,
    pub oracle: Option<BendingPair>,
}

pub const ORACLE_ELEMENTS: usize = 40;

pub fn oracle_pair(props: &BeamProperties, eta: f64, n: usize) -> Result<BendingPair> {
    let omega = eta * bending_scale_z(props);
    let z = fe_out_of_plane_frequencies(props, omega, 0.0, 0.0, n)?;
    let y = fe_in_plane_frequencies(props, omega, 0.0, 0.0, n)?;
    let sz = bending_scale_z(props);
    let sy = bending_scale_y(props);
    Ok([z[0] / sz, z[1] / sz, y[0] / sy, y[1] / sy])
}

pub fn cross_table(props: &BeamProperties, elements: usize, oracle: bool) -> Result<Vec<CrossRow>> {
    TableKind::T4
        .etas()
        .iter()
        .map(|&eta| {
            let pair = |r: RatioRow| [r.out_of_plane[0], r.out_of_plane[1], r.in_plane[0], r.in_plane[1]];
            Ok(CrossRow {
                eta,
                one: pair(ratio_row(props, 0.0, 0.0, eta, 1)?),
                many: pair(ratio_row(props, 0.0, 0.0, eta, elements)?),
                oracle: if oracle { Some(oracle_pair(props, eta, ORACLE_ELEMENTS)?) } else { None },
            })
        })
        .collect()
}

const ORDINALS: [&str; 4] = ["1st", "2nd", "3rd", "4th"];

fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.4}")
    } else {
        String::new()
    }
}

/// CSV for T1–T3. The published traction/torsion columns are carried along
/// verbatim since their normalization is unknown.
pub fn ratio_csv(kind: TableKind, rows: &[RatioRow]) -> String {
    let published = match kind {
        TableKind::T1 => Some(&crate::published::T1),
        TableKind::T2 => Some(&crate::published::T2),
        TableKind::T3 => Some(&crate::published::T3),
        TableKind::T4 => None,
    };
    let mut s = String::from("eta");
    for fam in ["In-plane bending", "Out-of-plane bending"] {
        for o in ORDINALS {
            write!(s, ",{fam} {o}").unwrap();
        }
    }
    s.push_str(",Traction,Torsion,Traction published (normalization unresolved),Torsion published (normalization unresolved)\n");
    for r in rows {
        write!(s, "{}", num(r.eta)).unwrap();
        for x in r.in_plane.iter().chain(&r.out_of_plane) {
            write!(s, ",{}", num(*x)).unwrap();
        }
        write!(s, ",{},{}", num(r.traction), num(r.torsion)).unwrap();
        match published.and_then(|p| p.iter().find(|p| p.0 == r.eta)) {
            Some(p) => write!(s, ",{},{}", num(p.3), num(p.4)).unwrap(),
            None => s.push_str(",,"),
        }
        s.push('\n');
    }
    s
}

pub fn cross_csv(rows: &[CrossRow], elements: usize) -> String {
    let mut s = String::from("eta");
    let mut group = |tag: &str| {
        for (fam, o) in [("Out-of-plane bending", 0), ("Out-of-plane bending", 1), ("In-plane bending", 0), ("In-plane bending", 1)] {
            write!(s, ",{fam} {} ({tag})", ORDINALS[o]).unwrap();
        }
    };
    group("1 el.");
    group(&format!("{elements} el."));
    if rows.iter().any(|r| r.oracle.is_some()) {
        group(&format!("FE {ORACLE_ELEMENTS} el."));
    }
    s.push('\n');
    for r in rows {
        write!(s, "{}", num(r.eta)).unwrap();
        for x in r.one.iter().chain(&r.many).chain(r.oracle.iter().flatten()) {
            write!(s, ",{}", num(*x)).unwrap();
        }
        s.push('\n');
    }
    s
}

/// Runs one table and renders its CSV.
pub fn generate(props: &BeamProperties, kind: TableKind, elements: Option<usize>, oracle: bool) -> Result<String> {
    match kind {
        TableKind::T4 => {
            let n = elements.unwrap_or(5);
            Ok(cross_csv(&cross_table(props, n, oracle)?, n))
        }
        _ => Ok(ratio_csv(kind, &ratio_table(props, kind, elements.unwrap_or(1))?)),
    }
}
