//! Subcommand tables and runners.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use seba_core::localisation::{
    eight_point_mass, local_coefficients, momentum_density, proposition3_check, scan_quadruples,
    theorem7_experiment, GapQuadruple, MomentumGridSpec,
};
use seba_core::quasimode::{build_quasimode, residual_oracle, solve_quasi_eigenvalues, Interval};
use seba_core::secular::{eigenpair_coefficients, solve_all_eigenvalues, ScattererConfig};
use seba_core::spectrum::io::{parse_jsonl, parse_text, to_jsonl, to_text};
use seba_core::spectrum::{
    generate_poisson, generate_rectangle_full, generate_rectangle_odd, RectangleGeometry, Spectrum,
    SpectrumKind,
};
use seba_core::stochastic::{mc_proposition_b2, BlockEventParams};
use seba_core::Error;

use crate::config::{Kind, Param, Params, Presence, Value};
use crate::error::CliError;

use Kind::*;
use Presence::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Solve,
    Quasimode,
    Localize,
    ScanGaps,
    Theorem7,
    Momentum,
    PoissonMc,
}

pub const COMMANDS: [Command; 8] = [
    Command::Spectrum,
    Command::Solve,
    Command::Quasimode,
    Command::Localize,
    Command::ScanGaps,
    Command::Theorem7,
    Command::Momentum,
    Command::PoissonMc,
];

const COMMON: [Param; 3] = [
    Param::new("seed", Int, Default("0"), "Random seed"),
    Param::new(
        "threads",
        Int,
        Default("0"),
        "Worker threads, 0 for all cores",
    ),
    Param::new(
        "out-dir",
        Text,
        Default("seba-out"),
        "Directory for outputs and the manifest",
    ),
];

const INPUT: Param = Param::new("input", Text, Required, "Spectrum file (.jsonl or text)");
const THETA: Param = Param::new("theta", Theta, Default("pi"), "Coupling angle");
const CUTOFF: Param = Param::new(
    "cutoff",
    Float,
    Optional,
    "Series cutoff, defaults to the spectrum e_max",
);
const TAIL: Param = Param::new(
    "tail",
    Bool,
    Default("true"),
    "Add the Weyl tail correction beyond the cutoff",
);
const ROOT_TOL: Param = Param::new(
    "root-tol",
    Float,
    Default("1e-12"),
    "Largest accepted relative bracket width",
);
const Q: Param = Param::new("q", Float, Default("0.25"), "Flank exponent");
const RHO: Param = Param::new("rho", Float, Default("1.4"), "Ceiling exponent");
const EPS: Param = Param::new(
    "eps",
    FloatList,
    Default("0.1,0.05,0.02,0.01"),
    "Middle gap thresholds",
);

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Solve => "solve",
            Command::Quasimode => "quasimode",
            Command::Localize => "localize",
            Command::ScanGaps => "scan-gaps",
            Command::Theorem7 => "theorem7",
            Command::Momentum => "momentum",
            Command::PoissonMc => "poisson-mc",
        }
    }

    pub fn about(self) -> &'static str {
        match self {
            Command::Spectrum => "Generate an unperturbed spectrum",
            Command::Solve => "Perturbed eigenvalues, one per gap in a window",
            Command::Quasimode => "Quasimodes on an interval",
            Command::Localize => "Overlap bound on every satisfied gap quadruple",
            Command::ScanGaps => "List gap quadruples",
            Command::Theorem7 => "Two-level quasimode against the eigenfunction along an eps sweep",
            Command::Momentum => "Momentum density of one eigenfunction on a rectangle",
            Command::PoissonMc => "Monte Carlo frequency of gap quadruples on Poisson paths",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        COMMANDS.into_iter().find(|c| c.name() == name)
    }

    pub fn schema(self) -> Vec<Param> {
        let mut own = match self {
            Command::Spectrum => vec![
                Param::new(
                    "kind",
                    Text,
                    Default("rectangle-odd"),
                    "rectangle-odd, rectangle-full or poisson",
                ),
                Param::new("emax", Float, Required, "Largest energy kept"),
                Param::new(
                    "a",
                    Float,
                    Default("1"),
                    "Half side along x (rectangle-odd)",
                ),
                Param::new(
                    "b",
                    Float,
                    Default("1"),
                    "Half side along y (rectangle-odd)",
                ),
                Param::new(
                    "side-x",
                    Float,
                    Default("1"),
                    "Side along x (rectangle-full)",
                ),
                Param::new(
                    "side-y",
                    Float,
                    Default("1"),
                    "Side along y (rectangle-full)",
                ),
                Param::new("xp", Float, Optional, "Scatterer x (rectangle-full)"),
                Param::new("yp", Float, Optional, "Scatterer y (rectangle-full)"),
                Param::new("intensity", Float, Default("1"), "Point density (poisson)"),
                Param::new("weight", Float, Default("1"), "Level weight (poisson)"),
                Param::new("format", Text, Default("jsonl"), "jsonl or text"),
            ],
            Command::Solve => vec![
                INPUT,
                THETA,
                Param::new("window", Pair, Required, "Energy window"),
                CUTOFF,
                TAIL,
                ROOT_TOL,
            ],
            Command::Quasimode => vec![
                INPUT,
                THETA,
                Param::new("interval", Pair, Required, "Closed interval of levels"),
                Param::new(
                    "sigma",
                    Float,
                    Default("0"),
                    "Weight of the off-interval part",
                ),
                CUTOFF,
                TAIL,
            ],
            Command::Localize => vec![INPUT, THETA, EPS, Q, RHO, CUTOFF, TAIL],
            Command::ScanGaps => vec![
                INPUT,
                EPS,
                Q,
                RHO,
                Param::new(
                    "all",
                    Bool,
                    Default("false"),
                    "Also list quadruples that fail a condition",
                ),
            ],
            Command::Theorem7 => vec![
                Param::new(
                    "input",
                    Text,
                    Optional,
                    "Spectrum file; a Poisson spectrum is generated when absent",
                ),
                EPS,
                Q,
                RHO,
                CUTOFF,
                Param::new(
                    "emax",
                    Float,
                    Default("2000"),
                    "Largest energy of the generated spectrum",
                ),
                Param::new(
                    "intensity",
                    Float,
                    Default("1"),
                    "Point density of the generated spectrum",
                ),
                Param::new(
                    "weight",
                    Float,
                    Default("1"),
                    "Level weight of the generated spectrum",
                ),
                Param::new(
                    "min-weight",
                    Float,
                    Default("0"),
                    "Reject spectra with lighter levels below the cutoff",
                ),
            ],
            Command::Momentum => vec![
                INPUT,
                THETA,
                Param::new(
                    "gap",
                    Int,
                    Required,
                    "Gap index j of the eigenvalue in (E_j, E_j+1)",
                ),
                CUTOFF,
                TAIL,
                Param::new(
                    "half-width",
                    Int,
                    Default("40"),
                    "Levels kept on either side of the gap",
                ),
                Param::new(
                    "extent",
                    Float,
                    Optional,
                    "Grid half width, defaults to 3 sqrt(lambda)",
                ),
                Param::new("grid-resolution", Int, Default("512"), "Cells per axis"),
                Param::new(
                    "radius",
                    Float,
                    Default("0.1"),
                    "Window radius as a fraction of |P|",
                ),
            ],
            Command::PoissonMc => vec![
                Param::new("eps", Float, Default("0.05"), "Middle gap threshold"),
                Q,
                RHO,
                Param::new(
                    "rho-prime",
                    Float,
                    Optional,
                    "Block count exponent, defaults to (1 + rho)/2",
                ),
                Param::new("trials", Int, Default("10000"), "Number of paths"),
                Param::new(
                    "budget",
                    Int,
                    Default("4000000000"),
                    "Cap on levels x trials",
                ),
            ],
        };
        own.extend(COMMON);
        own
    }

    /// Run with resolved parameters, writing artifacts into `out`. Returns
    /// the artifact names and a summary for the manifest.
    pub fn run(self, p: &mut Params, out: &Path) -> Result<Outputs, CliError> {
        match self {
            Command::Spectrum => spectrum(p, out),
            Command::Solve => solve(p, out),
            Command::Quasimode => quasimode(p, out),
            Command::Localize => localize(p, out),
            Command::ScanGaps => scan_gaps(p, out),
            Command::Theorem7 => theorem7(p, out),
            Command::Momentum => momentum(p, out),
            Command::PoissonMc => poisson_mc(p, out),
        }
    }
}

#[derive(Debug, Default)]
pub struct Outputs {
    pub files: Vec<String>,
    pub summary: serde_json::Value,
}

fn write(out: &Path, name: &str, body: &str, files: &mut Vec<String>) -> Result<(), CliError> {
    let path = out.join(name);
    fs::write(&path, body).map_err(|e| CliError::io(path, e))?;
    files.push(name.to_owned());
    Ok(())
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Param(format!("csv: {e}"));
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(r).map_err(csv_err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Param(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn json_line<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}

fn f(x: f64) -> String {
    x.to_string()
}

fn read_spectrum(path: &str) -> Result<Spectrum, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let parsed = if path.ends_with(".jsonl") || path.ends_with(".json") {
        parse_jsonl(&text)
    } else {
        parse_text(&text)
    };
    parsed.map_err(|source| CliError::Input {
        path: PathBuf::from(path),
        source,
    })
}

fn load_input(p: &mut Params) -> Result<Spectrum, CliError> {
    let spec = read_spectrum(p.text("input")?)?;
    p.derive("spectrum-id", Value::Text(format!("{:016x}", spec.id())));
    Ok(spec)
}

fn scatterer(p: &mut Params, spec: &Spectrum) -> Result<ScattererConfig, CliError> {
    let cutoff = match p.opt_float("cutoff")? {
        Some(c) => c,
        None => {
            p.derive("cutoff", Value::Float(spec.e_max()));
            spec.e_max()
        }
    };
    Ok(ScattererConfig::new(p.float("theta")?, cutoff)?.with_tail(p.flag("tail")?))
}

fn spectrum(p: &mut Params, out: &Path) -> Result<Outputs, CliError> {
    let kind: SpectrumKind = p.text("kind")?.parse()?;
    let e_max = p.float("emax")?;
    let spec = match kind {
        SpectrumKind::RectangleOdd => generate_rectangle_odd(
            &RectangleGeometry::centered(p.float("a")?, p.float("b")?)?,
            e_max,
        )?,
        SpectrumKind::RectangleFull => {
            let (sx, sy) = (p.float("side-x")?, p.float("side-y")?);
            let (Some(x), Some(y)) = (p.opt_float("xp")?, p.opt_float("yp")?) else {
                return Err(CliError::Param(
                    "rectangle-full needs --xp and --yp".to_owned(),
                ));
            };
            generate_rectangle_full(sx, sy, (x, y), e_max)?
        }
        SpectrumKind::Poisson => generate_poisson(
            p.float("intensity")?,
            p.float("weight")?,
            e_max,
            p.int("seed")?,
        )?,
        SpectrumKind::File => {
            return Err(CliError::Param(
                "--kind must be rectangle-odd, rectangle-full or poisson".to_owned(),
            ))
        }
    };
    let mut files = Vec::new();
    match p.text("format")? {
        "jsonl" => write(out, "spectrum.jsonl", &to_jsonl(&spec), &mut files)?,
        "text" => write(out, "spectrum.txt", &to_text(&spec), &mut files)?,
        other => return Err(CliError::Param(format!("unknown --format '{other}'"))),
    }
    Ok(Outputs {
        files,
        summary: json!({
            "levels": spec.len(),
            "spectrum_id": format!("{:016x}", spec.id()),
        }),
    })
}

fn solve(p: &mut Params, out: &Path) -> Result<Outputs, CliError> {
    let spec = load_input(p)?;
    let cfg = scatterer(p, &spec)?;
    let tol = p.float("root-tol")?;
    let sol = solve_all_eigenvalues(&spec, &cfg, p.pair("window")?)?;
    for r in &sol.roots {
        let limit = tol * r.lambda.abs().max(1.0);
        if r.bracket_width > limit {
            return Err(CliError::Tolerance {
                gap_index: r.gap_index,
                width: r.bracket_width,
                tol: limit,
            });
        }
    }
    let body: String = sol.roots.iter().map(json_line).collect();
    let mut files = Vec::new();
    write(out, "eigenvalues.jsonl", &body, &mut files)?;
    Ok(Outputs {
        files,
        summary: json!({ "roots": sol.roots.len(), "skipped_gaps": sol.skipped }),
    })
}

#[derive(Serialize)]
struct QuasimodeReport {
    sigma: f64,
    interval: [f64; 2],
    mu: f64,
    norm_sq: f64,
    discrepancy: f64,
    oracle_discrepancy: f64,
    /// `[re, im]` on the levels inside the interval.
    coefficients: Vec<[f64; 2]>,
}

fn quasimode(p: &mut Params, out: &Path) -> Result<Outputs, CliError> {
    let spec = load_input(p)?;
    let cfg = scatterer(p, &spec)?;
    let (lo, hi) = p.pair("interval")?;
    let sigma = p.float("sigma")?;
    let interval = Interval::new(&spec, lo, hi)?;
    let mut body = String::new();
    let mut count = 0;
    for mu in solve_quasi_eigenvalues(&spec, &interval, sigma, &cfg)? {
        let qm = build_quasimode(&spec, &interval, sigma, mu, &cfg)?;
        let report = QuasimodeReport {
            sigma,
            interval: [lo, hi],
            mu,
            norm_sq: qm.norm_sq,
            discrepancy: qm.discrepancy,
            oracle_discrepancy: residual_oracle(&spec, &qm, &cfg)?.sqrt(),
            coefficients: qm.in_coeffs.iter().map(|c| [c.re, c.im]).collect(),
        };
        body.push_str(&json_line(&report));
        count += 1;
    }
    let mut files = Vec::new();
    write(out, "quasimodes.jsonl", &body, &mut files)?;
    Ok(Outputs {
        files,
        summary: json!({ "levels": interval.len(), "quasimodes": count }),
    })
}

fn quad_cells(q: &GapQuadruple) -> Vec<String> {
    let mut cells = vec![f(q.eps)];
    cells.extend(q.energies.iter().map(|&e| f(e)));
    cells
}

fn scan_gaps(p: &mut Params, out: &Path) -> Result<Outputs, CliError> {
    let spec = load_input(p)?;
    let (q, rho, all) = (p.float("q")?, p.float("rho")?, p.flag("all")?);
    let mut rows = Vec::new();
    let mut counts = Vec::new();
    for &eps in p.floats("eps")? {
        let scan = scan_quadruples(&spec, eps, q, rho)?;
        let quads: Vec<GapQuadruple> = if all {
            spec.lines()
                .windows(4)
                .take_while(|w| w[3].energy < scan.ceiling)
                .map(|w| {
                    GapQuadruple::classify(
                        [w[0].index, w[1].index, w[2].index, w[3].index],
                        [w[0].energy, w[1].energy, w[2].energy, w[3].energy],
                        eps,
                        q,
                        rho,
                    )
                })
                .collect()
        } else {
            scan.quadruples.clone()
        };
        for quad in &quads {
            let fl = quad.flags;
            let mut cells = quad_cells(quad);
            cells.extend(
                [
                    fl.middle_small,
                    fl.upper_wide,
                    fl.lower_wide,
                    fl.below_ceiling,
                    quad.satisfied(),
                ]
                .iter()
                .map(|b| b.to_string()),
            );
            rows.push(cells);
        }
        counts.push(json!({
            "eps": eps,
            "examined": scan.examined,
            "satisfied": scan.quadruples.len(),
            "ceiling": scan.ceiling,
        }));
    }
    let header = [
        "eps",
        "e_a",
        "e_b",
        "e_c",
        "e_d",
        "middle_small",
        "upper_wide",
        "lower_wide",
        "below_ceiling",
        "satisfied",
    ];
    let mut files = Vec::new();
    write(
        out,
        "quadruples.csv",
        &csv_text(&header, &rows)?,
        &mut files,
    )?;
    Ok(Outputs {
        files,
        summary: json!({ "scans": counts }),
    })
}

fn localize(p: &mut Params, out: &Path) -> Result<Outputs, CliError> {
    let spec = load_input(p)?;
    let cfg = scatterer(p, &spec)?;
    let (q, rho) = (p.float("q")?, p.float("rho")?);
    let mut rows = Vec::new();
    let (mut checked, mut violations, mut beyond_cutoff) = (0, 0, 0);
    for &eps in p.floats("eps")? {
        for quad in scan_quadruples(&spec, eps, q, rho)?.quadruples {
            if quad.energies[3] >= cfg.e_cutoff - 1.0 {
                beyond_cutoff += 1;
                continue;
            }
            let c = proposition3_check(&spec, &cfg, &quad)?;
            checked += 1;
            violations += !c.holds as usize;
            let mut cells = quad_cells(&quad);
            cells.push(f(c.mu));
            cells.extend(c.lambdas.iter().map(|&x| f(x)));
            cells.extend(c.overlaps.iter().map(|&x| f(x)));
            cells.extend([f(c.best_overlap), f(c.bound), c.holds.to_string()]);
            rows.push(cells);
        }
    }
    let header = [
        "eps",
        "e_a",
        "e_b",
        "e_c",
        "e_d",
        "mu",
        "lambda_1",
        "lambda_2",
        "lambda_3",
        "overlap_1",
        "overlap_2",
        "overlap_3",
        "best_overlap",
        "bound",
        "holds",
    ];
    let mut files = Vec::new();
    write(out, "localize.csv", &csv_text(&header, &rows)?, &mut files)?;
    Ok(Outputs {
        files,
        summary: json!({
            "checked": checked,
            "violations": violations,
            "skipped_above_cutoff": beyond_cutoff,
        }),
    })
}

fn theorem7(p: &mut Params, out: &Path) -> Result<Outputs, CliError> {
    let spec = if p.is_set("input") {
        load_input(p)?
    } else {
        let s = generate_poisson(
            p.float("intensity")?,
            p.float("weight")?,
            p.float("emax")?,
            p.int("seed")?,
        )?;
        p.derive("spectrum-id", Value::Text(format!("{:016x}", s.id())));
        s
    };
    p.derive("theta", Value::Float(std::f64::consts::PI));
    p.derive("tail", Value::Bool(true));
    let cfg = scatterer(p, &spec)?;
    let eps = p.floats("eps")?.to_vec();
    if eps.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(CliError::Param(
            "--eps must be strictly decreasing".to_owned(),
        ));
    }
    let (q, rho, min_weight) = (p.float("q")?, p.float("rho")?, p.float("min-weight")?);
    let mut rows = Vec::new();
    let mut missing = Vec::new();
    // One eps at a time so that a missing quadruple leaves an empty row
    // instead of ending the sweep.
    for &e in &eps {
        match theorem7_experiment(&spec, &cfg, &[e], q, rho, min_weight) {
            Ok(found) => {
                let r = &found[0];
                let mut cells = vec![
                    f(e),
                    f(r.mu),
                    f(r.lambda),
                    f(r.defect),
                    f(r.gap_margin),
                    f(r.top2.mass_fraction),
                    r.top2.beta.to_string(),
                    f(r.lambda_below),
                    f(r.lambda_above),
                ];
                cells.extend(r.quadruple.energies.iter().map(|&x| f(x)));
                rows.push(cells);
            }
            Err(Error::NoQuadruple { .. }) => {
                missing.push(e);
                let mut cells = vec![f(e)];
                cells.resize(13, String::new());
                rows.push(cells);
            }
            Err(err) => return Err(err.into()),
        }
    }
    let header = [
        "eps",
        "mu",
        "lambda",
        "defect",
        "gap_margin",
        "top2_mass",
        "top2_beta",
        "lambda_below",
        "lambda_above",
        "e_a",
        "e_b",
        "e_c",
        "e_d",
    ];
    let mut files = Vec::new();
    write(out, "theorem7.csv", &csv_text(&header, &rows)?, &mut files)?;
    Ok(Outputs {
        files,
        summary: json!({ "rows": eps.len(), "eps_without_quadruple": missing }),
    })
}

#[derive(Serialize)]
struct MomentumHeader {
    extent: f64,
    resolution: usize,
    /// Separable modes `(n, m)` of the two levels bounding the gap.
    levels: Vec<(u32, u32)>,
    lambda: f64,
    gap_index: usize,
    total_mass: f64,
    coefficient_norm_sq: f64,
    window_radius: f64,
    eight_point_mass: Option<f64>,
}

fn momentum(p: &mut Params, out: &Path) -> Result<Outputs, CliError> {
    let spec = load_input(p)?;
    if spec.kind() != SpectrumKind::RectangleOdd {
        return Err(CliError::Param(
            "momentum needs a rectangle-odd spectrum".to_owned(),
        ));
    }
    let side = |k: &str| {
        spec.params()
            .get(k)
            .copied()
            .ok_or_else(|| CliError::Param(format!("spectrum header lacks '{k}'")))
    };
    let geom = RectangleGeometry::centered(side("a")?, side("b")?)?;
    let cfg = scatterer(p, &spec)?;
    let j = p.int("gap")? as usize;
    let lines = spec.lines();
    if j == 0 || j >= lines.len() {
        return Err(CliError::Param(format!(
            "--gap must lie in 1..{}, got {j}",
            lines.len()
        )));
    }
    let (lo, hi) = (lines[j - 1].energy, lines[j].energy);
    let root = solve_all_eigenvalues(&spec, &cfg, (lo, hi))?
        .roots
        .into_iter()
        .find(|r| r.gap_index == j)
        .ok_or_else(|| CliError::Param(format!("gap {j} is too narrow to solve")))?;
    let pair = eigenpair_coefficients(&spec, &cfg, root.lambda)?;
    let coeffs = local_coefficients(&pair, p.int("half-width")? as usize);
    let extent = match p.opt_float("extent")? {
        Some(e) => e,
        None => {
            let e = 3.0 * root.lambda.max(0.0).sqrt();
            p.derive("extent", Value::Float(e));
            e
        }
    };
    let res = p.int("grid-resolution")? as usize;
    let grid = momentum_density(&geom, &spec, &coeffs, MomentumGridSpec::new(extent, res)?)?;
    let levels: Vec<(u32, u32)> = [&lines[j - 1], &lines[j]]
        .iter()
        .flat_map(|l| l.modes.iter().map(|m| (m.n, m.m)))
        .collect();
    let radius = p.float("radius")?;
    let eight = match eight_point_mass(&grid, &geom, &levels, radius) {
        Ok(m) => Some(m),
        Err(Error::Coverage { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let header = MomentumHeader {
        extent,
        resolution: res,
        levels,
        lambda: root.lambda,
        gap_index: j,
        total_mass: grid.total_mass(),
        coefficient_norm_sq: coeffs.iter().map(|c| c.norm_sqr()).sum(),
        window_radius: radius,
        eight_point_mass: eight,
    };
    let mut body = String::new();
    for row in grid.density.chunks(res) {
        let cells: Vec<String> = row.iter().map(|&x| f(x)).collect();
        body.push_str(&cells.join(","));
        body.push('\n');
    }
    let mut files = Vec::new();
    write(out, "momentum.csv", &body, &mut files)?;
    let mut head = serde_json::to_string_pretty(&header).expect("serializable");
    head.push('\n');
    write(out, "momentum.json", &head, &mut files)?;
    Ok(Outputs {
        files,
        summary: json!({ "lambda": root.lambda, "eight_point_mass": eight }),
    })
}

#[derive(Serialize)]
struct McReport {
    params: BlockEventParams,
    empirical_p: f64,
    analytic_lower: f64,
    stderr: f64,
    trials: u64,
    seed: u64,
    blocks: u64,
    levels: u64,
    ceiling: f64,
    block_p: f64,
    p_block_event: f64,
    p1: f64,
    p2: f64,
}

fn poisson_mc(p: &mut Params, out: &Path) -> Result<Outputs, CliError> {
    let mut params = BlockEventParams::new(
        p.float("eps")?,
        p.float("q")?,
        p.float("rho")?,
        p.int("trials")?,
        p.int("seed")?,
    );
    match p.opt_float("rho-prime")? {
        Some(r) => params.rho_prime = r,
        None => p.derive("rho-prime", Value::Float(params.rho_prime)),
    }
    params.budget = p.int("budget")?;
    let r = mc_proposition_b2(&params)?;
    let report = McReport {
        params: r.params,
        empirical_p: r.empirical_p,
        analytic_lower: r.analytic_lower,
        stderr: r.stderr,
        trials: r.params.trials,
        seed: r.params.seed,
        blocks: r.blocks,
        levels: r.levels,
        ceiling: r.ceiling,
        block_p: r.block_p,
        p_block_event: r.p_block_event,
        p1: r.p1,
        p2: r.p2,
    };
    let mut body = serde_json::to_string_pretty(&report).expect("serializable");
    body.push('\n');
    let mut files = Vec::new();
    write(out, "mc.json", &body, &mut files)?;
    Ok(Outputs {
        files,
        summary: json!({
            "empirical_p": r.empirical_p,
            "analytic_lower": r.analytic_lower,
            "block_p": r.block_p,
        }),
    })
}
