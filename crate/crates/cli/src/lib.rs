//! Scenario-driven front end: built-in scenarios, table generators and
//! artifact serialization.

pub mod config;
pub mod output;
pub mod published;
pub mod tables;

use std::path::{Path, PathBuf};

use config::{Analysis, ConfigError, ScenarioConfig};
use output::{DeltaReport, EquilibriumReport, ErrorReport, ModalReport};
use tables::TableKind;
use titop::analysis::{frequency_response, ModeFamily};
use titop::assembly::{assemble, build_parametric_family, campbell_sweep};
use titop::{modal_frequencies, Error};

/// Output directory override.
pub const OUTPUT_ENV: &str = "TITOP_OUTPUT_DIR";

pub const BUILTINS: [(&str, &str); 6] = [
    ("tables1", include_str!("../scenarios/tables1.json")),
    ("tables2", include_str!("../scenarios/tables2.json")),
    ("tables3", include_str!("../scenarios/tables3.json")),
    ("tables4", include_str!("../scenarios/tables4.json")),
    ("thor-like", include_str!("../scenarios/thor-like.json")),
    ("fig7", include_str!("../scenarios/fig7.json")),
];

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Usage(_) => 2,
            CliError::Model(e) => match e {
                Error::ModelInvalid { .. } => 3,
                Error::Topology(_)
                | Error::ChannelMismatch(_)
                | Error::DoubleClosure(_)
                | Error::InvalidParameter(_)
                | Error::Dimension(_) => 2,
                _ => 4,
            },
            CliError::Write { .. } => 1,
        }
    }

    pub fn report(&self) -> ErrorReport {
        let (error, q_f) = match self {
            CliError::Config(_) | CliError::Usage(_) => ("schema", None),
            CliError::Write { .. } => ("io", None),
            CliError::Model(e) => match e {
                Error::ModelInvalid { q_f, .. } => ("model_invalid", Some(q_f.clone())),
                Error::Topology(_) | Error::DoubleClosure(_) => ("topology", None),
                Error::ChannelMismatch(_) | Error::InvalidParameter(_) | Error::Dimension(_) => ("schema", None),
                _ => ("numerical", None),
            },
        };
        ErrorReport { error: error.into(), message: self.to_string(), q_f }
    }
}

/// Loads a built-in scenario by name, or a scenario file by path.
pub fn load_scenario(arg: &str) -> Result<ScenarioConfig, CliError> {
    if let Some((_, text)) = BUILTINS.iter().find(|(n, _)| *n == arg) {
        return Ok(config::parse(text)?);
    }
    let text = std::fs::read_to_string(arg).map_err(|source| ConfigError::Io { path: arg.into(), source })?;
    Ok(config::parse(&text)?)
}

/// File produced by an analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub file_name: String,
    pub contents: String,
}

pub fn output_dir() -> PathBuf {
    std::env::var_os(OUTPUT_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("titop-out"))
}

pub fn write_artifacts(dir: &Path, artifacts: &[Artifact]) -> Result<Vec<PathBuf>, CliError> {
    let werr = |p: &Path| {
        let path = p.display().to_string();
        move |source| CliError::Write { path, source }
    };
    std::fs::create_dir_all(dir).map_err(werr(dir))?;
    artifacts
        .iter()
        .map(|a| {
            let p = dir.join(&a.file_name);
            std::fs::write(&p, &a.contents).map_err(werr(&p))?;
            Ok(p)
        })
        .collect()
}

pub fn parse_family(s: &str) -> Result<ModeFamily, CliError> {
    match s {
        "in_plane" => Ok(ModeFamily::InPlane),
        "out_of_plane" => Ok(ModeFamily::OutOfPlane),
        "traction" => Ok(ModeFamily::Traction),
        "torsion" => Ok(ModeFamily::Torsion),
        _ => Err(CliError::Usage(format!("unknown mode family {s}"))),
    }
}

/// `log:a:b:n` or `lin:a:b:n`, `n ≥ 2` points from `a` to `b`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("bad grid {s}; expected log:a:b:n or lin:a:b:n"));
    let parts: Vec<&str> = s.split(':').collect();
    let [kind, a, b, n] = parts[..] else { return Err(bad()) };
    let a: f64 = a.parse().map_err(|_| bad())?;
    let b: f64 = b.parse().map_err(|_| bad())?;
    let n: usize = n.parse().map_err(|_| bad())?;
    if n < 2 || !(b > a) {
        return Err(bad());
    }
    let t = |k: usize| k as f64 / (n - 1) as f64;
    match kind {
        "lin" => Ok((0..n).map(|k| a + (b - a) * t(k)).collect()),
        "log" if a > 0.0 => {
            let (la, lb) = (a.log10(), b.log10());
            Ok((0..n).map(|k| 10f64.powf(la + (lb - la) * t(k))).collect())
        }
        _ => Err(bad()),
    }
}

/// Resolves `in:out` shorthand. `Tin2`/`Fin1` name external torque/force
/// inputs of the root; a bare motion label names a root output. Dotted names
/// pass through.
pub fn parse_channel(s: &str, root: &str) -> Result<(String, String), CliError> {
    let (i, o) = s.split_once(':').ok_or_else(|| CliError::Usage(format!("bad channel {s}; expected in:out")))?;
    let input = if i.contains('.') {
        i.to_string()
    } else if let Some(k) = i.strip_prefix("Tin") {
        format!("{root}.ext.T{k}")
    } else if let Some(k) = i.strip_prefix("Fin") {
        format!("{root}.ext.F{k}")
    } else {
        return Err(CliError::Usage(format!("bad input channel {i}")));
    };
    let output = if o.contains('.') { o.to_string() } else { format!("{root}.B.{o}") };
    Ok((input, output))
}

/// Uniform spin grid over `[0, omega_max]` with `steps` intervals.
pub fn spin_grid(omega_max: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if steps == 0 || !(omega_max > 0.0) || !omega_max.is_finite() {
        return Err(CliError::Usage("campbell needs omega_max > 0 and steps > 0".into()));
    }
    Ok((0..=steps).map(|k| omega_max * k as f64 / steps as f64).collect())
}

const DEFAULT_BRANCHES: [(ModeFamily, usize); 2] = [(ModeFamily::InPlane, 2), (ModeFamily::OutOfPlane, 2)];

pub fn campbell(cfg: &ScenarioConfig, omega_max: f64, steps: usize, branches: &[config::BranchConfig]) -> Result<Artifact, CliError> {
    let graph = cfg.graph()?.graph;
    let grid = spin_grid(omega_max, steps)?;
    let selection = if branches.is_empty() {
        DEFAULT_BRANCHES.to_vec()
    } else {
        branches.iter().map(|b| Ok((parse_family(&b.family)?, b.count))).collect::<Result<Vec<_>, CliError>>()?
    };
    let curve = campbell_sweep(&graph, &grid, &selection)?;
    if let Some(why) = &curve.truncated {
        eprintln!("warning: campbell sweep truncated: {why}");
    }
    Ok(Artifact { file_name: format!("{}_campbell.csv", cfg.name), contents: output::campbell_csv(&curve) })
}

pub fn freqresp(cfg: &ScenarioConfig, channel: &str, grid: &str) -> Result<Artifact, CliError> {
    let graph = cfg.graph()?.graph;
    let omegas = parse_grid(grid)?;
    let (i, o) = parse_channel(channel, &graph.nodes[graph.root].name)?;
    let model = assemble(&graph, cfg.spin.nominal)?;
    let ss = &model.block.ss;
    let gains = frequency_response(ss, ss.input_index(&i)?, ss.output_index(&o)?, &omegas)?;
    Ok(Artifact { file_name: format!("{}_freqresp.csv", cfg.name), contents: output::freqresp_csv(&omegas, &gains) })
}

pub fn table(kind: TableKind, elements: Option<usize>, oracle: bool, props: &titop::BeamProperties) -> Result<Artifact, CliError> {
    if elements == Some(0) {
        return Err(CliError::Usage("--elements must be positive".into()));
    }
    Ok(Artifact {
        file_name: format!("table_{}.csv", kind.name()),
        contents: tables::generate(props, kind, elements, oracle)?,
    })
}

/// Runs every analysis listed in the scenario.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Vec<Artifact>, CliError> {
    let built = cfg.graph()?;
    let spin = cfg.spin.nominal;
    let mut out = vec![];
    let json = |suffix: &str, s: String| Artifact { file_name: format!("{}_{suffix}.json", cfg.name), contents: s };
    for a in &cfg.analyses {
        match a {
            Analysis::Modal => {
                let model = assemble(&built.graph, spin)?;
                let modal = modal_frequencies(&model.block.ss)?;
                let r = ModalReport::new(&cfg.name, spin, model.block.ss.nstates(), &modal);
                out.push(json("modal", output::to_json(&r)));
            }
            Analysis::Equilibrium => {
                let model = assemble(&built.graph, spin)?;
                let r = EquilibriumReport::new(&cfg.name, spin, &built.graph, &model);
                out.push(json("equilibrium", output::to_json(&r)));
            }
            Analysis::Delta => {
                let (_, d) = build_parametric_family(built.graph.clone(), cfg.spin_uncertainty(), built.masses.clone())?;
                out.push(json("delta", output::to_json(&DeltaReport::new(&cfg.name, &d))));
            }
            Analysis::Campbell { omega_max, steps, branches } => out.push(campbell(cfg, *omega_max, *steps, branches)?),
            Analysis::Freqresp { channel, grid } => out.push(freqresp(cfg, channel, grid)?),
            Analysis::Table { table: t, elements, oracle } => {
                let kind = TableKind::parse(t).ok_or_else(|| CliError::Usage(format!("unknown table {t}")))?;
                let beam = cfg
                    .beams
                    .first()
                    .ok_or_else(|| CliError::Usage("table analysis needs a beam".into()))?;
                out.push(table(kind, *elements, *oracle, &beam.properties())?);
            }
        }
    }
    Ok(out)
}
