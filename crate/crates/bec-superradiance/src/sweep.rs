//! Batch experiment driver: parameter sweeps, phase-diagram tables,
//! scaling-law fits and oracle comparison reports, with deterministic
//! CSV/JSON output.

use crate::error::{Error, Result};
use crate::fock;
use crate::gibbs::{self, LimitVariant};
use crate::lattice::VolumeSpec;
use crate::params::{Density, ModelParams, ModelVariant, RegimeTag};
use crate::solver;
use crate::specfun;
use crate::spectrum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Axis a sweep steps through; every other input stays fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Rho,
    Beta,
    G,
    Omega,
    EpsQ,
    BoxL,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::Rho => "rho",
            SweepAxis::Beta => "beta",
            SweepAxis::G => "g",
            SweepAxis::Omega => "omega",
            SweepAxis::EpsQ => "eps_q",
            SweepAxis::BoxL => "box_l",
        }
    }
}

/// Inclusive linear range with a fixed number of points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.steps <= 1 {
            return vec![self.start];
        }
        let h = (self.stop - self.start) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| self.start + h * i as f64).collect()
    }

    /// Parse the CLI form `axis:start:stop:steps`.
    pub fn parse(s: &str) -> Result<SweepSpec> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(Error::Config(format!(
                "sweep spec '{s}' is not of the form axis:start:stop:steps"
            )));
        }
        let axis = match parts[0] {
            "rho" => SweepAxis::Rho,
            "beta" => SweepAxis::Beta,
            "g" => SweepAxis::G,
            "omega" => SweepAxis::Omega,
            "eps_q" | "eps-q" => SweepAxis::EpsQ,
            "box_l" | "box-l" | "l" => SweepAxis::BoxL,
            other => return Err(Error::Config(format!("unknown sweep axis '{other}'"))),
        };
        let num = |t: &str| -> Result<f64> {
            t.parse().map_err(|_| Error::Config(format!("bad number '{t}' in sweep spec")))
        };
        let steps: usize = parts[3]
            .parse()
            .map_err(|_| Error::Config(format!("bad step count '{}' in sweep spec", parts[3])))?;
        if steps == 0 {
            return Err(Error::Config("sweep needs at least one step".into()));
        }
        Ok(SweepSpec { axis, start: num(parts[1])?, stop: num(parts[2])?, steps })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// One batch request: fixed physical inputs, optionally one swept axis,
/// output format. Mirrors the JSON config file (lower_snake_case keys).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub model: ModelVariant,
    pub dim: u32,
    pub c_kin: f64,
    pub beta: f64,
    pub omega: f64,
    pub g: f64,
    pub eps_q: f64,
    pub rho: Option<f64>,
    pub mu: Option<f64>,
    pub box_l: Option<f64>,
    pub sweep: Option<SweepSpec>,
    pub format: OutputFormat,
    pub out: Option<String>,
    /// Report the g/Omega-interchanged limit variant next to the uniform
    /// one (condensates and phase-diagram tables).
    pub interchange_variant: bool,
    /// Seed for the oracle-check draws.
    pub seed: u64,
    /// Random draws per oracle-check suite.
    pub draws: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            model: ModelVariant::Pbg,
            dim: 3,
            c_kin: 1.0,
            beta: 1.0,
            omega: 1.0,
            g: 0.0,
            eps_q: 0.0,
            rho: None,
            mu: None,
            box_l: None,
            sweep: None,
            format: OutputFormat::Csv,
            out: None,
            interchange_variant: false,
            seed: 20020521,
            draws: 2000,
        }
    }
}

impl SweepConfig {
    fn params(&self) -> Result<ModelParams> {
        ModelParams::new(self.model, self.dim, self.c_kin, self.omega, self.g, self.eps_q, self.beta)
            .map_err(|e| Error::Config(e.to_string()))
    }

    fn with_axis(&self, axis: SweepAxis, value: f64) -> SweepConfig {
        let mut c = self.clone();
        match axis {
            SweepAxis::Rho => c.rho = Some(value),
            SweepAxis::Beta => c.beta = value,
            SweepAxis::G => c.g = value,
            SweepAxis::Omega => c.omega = value,
            SweepAxis::EpsQ => c.eps_q = value,
            SweepAxis::BoxL => c.box_l = Some(value),
        }
        c
    }
}

/// The batch tasks behind the CLI subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    SolveMu,
    Occupations,
    Condensates,
    PhaseDiagram,
    Scaling,
    OracleCheck,
}

/// One table cell. Numbers keep full f64 round-trip precision; infinities
/// are spelled `inf`.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_f64(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => {
                if s.contains([',', '"', '\n']) {
                    format!("\"{}\"", s.replace('"', "\"\""))
                } else {
                    s.clone()
                }
            }
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Cell::Num(x) => {
                if x.is_finite() {
                    serde_json::json!(x)
                } else {
                    serde_json::Value::String(fmt_f64(*x))
                }
            }
            Cell::Int(i) => serde_json::json!(i),
            Cell::Text(s) => serde_json::Value::String(s.clone()),
            Cell::Empty => serde_json::Value::Null,
        }
    }
}

/// Round-trip-exact decimal formatting; `inf` spelled out.
pub fn fmt_f64(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: &[&str]) -> Table {
        Table { columns: columns.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::to_csv).collect();
            s.push_str(&line.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json_rows(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for (c, cell) in self.columns.iter().zip(row) {
                    obj.insert(c.clone(), cell.to_json());
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

/// Least-squares power-law fit in log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    pub slope: f64,
    /// Sign-carrying amplitude: y ~ prefactor * x^slope.
    pub prefactor: f64,
    pub r_squared: f64,
    pub points_used: usize,
}

/// Fit log|y| vs log x. Errors on fewer than 3 points, zeros, or mixed
/// signs in ys.
pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<FitResult> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(Error::Domain(format!(
            "power-law fit needs >= 3 paired points, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    if ys.contains(&0.0) {
        return Err(Error::Domain("power-law fit: ys contain a zero".into()));
    }
    let sign = ys[0].signum();
    if ys.iter().any(|&y| y.signum() != sign) {
        return Err(Error::Domain("power-law fit: ys change sign".into()));
    }
    if xs.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::Domain("power-law fit: xs must be positive".into()));
    }
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.abs().ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| {
            let e = y - (slope * x + intercept);
            e * e
        })
        .sum();
    let ss_tot: f64 = ly.iter().map(|y| (y - my) * (y - my)).sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(FitResult { slope, prefactor: sign * intercept.exp(), r_squared, points_used: xs.len() })
}

/// Result of one batch run: the table, an optional fit, free-text notes,
/// and whether the run as a whole failed (no usable point, or an
/// oracle-check suite out of tolerance).
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub table: Table,
    pub fit: Option<FitResult>,
    pub notes: Vec<String>,
    pub failed: bool,
}

impl RunOutput {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.table.to_csv(),
            OutputFormat::Json => {
                let mut obj = serde_json::Map::new();
                obj.insert("columns".into(), serde_json::json!(self.table.columns));
                obj.insert("rows".into(), self.table.to_json_rows());
                if let Some(fit) = &self.fit {
                    obj.insert("fit".into(), serde_json::to_value(fit).expect("fit serializes"));
                }
                if !self.notes.is_empty() {
                    obj.insert("notes".into(), serde_json::json!(self.notes));
                }
                let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(obj))
                    .expect("table serializes");
                s.push('\n');
                s
            }
        }
    }
}

/// Run `task` over the sweep (or the single configured point).
pub fn run_sweep(task: Task, config: &SweepConfig) -> Result<RunOutput> {
    match task {
        Task::SolveMu => sweep_points(config, solve_mu_columns(), solve_mu_row),
        Task::Occupations => sweep_points(config, occupations_columns(), occupations_row),
        Task::Condensates => {
            let mut cols = vec![
                "rho", "regime", "mu_c", "rho_c", "matter_condensate", "photon_condensate",
                "correlation_density", "interaction_energy_density",
            ];
            if config.interchange_variant {
                cols.extend_from_slice(&[
                    "photon_condensate_interchange",
                    "correlation_density_interchange",
                    "interaction_energy_density_interchange",
                ]);
            }
            cols.push("error");
            sweep_points(config, cols, condensates_row)
        }
        Task::PhaseDiagram => {
            let mut cols = vec!["mu_c", "rho_c", "regime", "matter_condensate", "photon_condensate"];
            if config.interchange_variant {
                cols.push("photon_condensate_interchange");
            }
            cols.push("error");
            sweep_points(config, cols, phase_diagram_row)
        }
        Task::Scaling => scaling(config),
        Task::OracleCheck => oracle_check(config),
    }
}

fn sweep_points(
    config: &SweepConfig,
    task_columns: Vec<&str>,
    row_fn: impl Fn(&SweepConfig) -> Result<Vec<Cell>>,
) -> Result<RunOutput> {
    let (axis_name, points): (&str, Vec<(f64, SweepConfig)>) = match &config.sweep {
        Some(spec) => (
            spec.axis.name(),
            spec.values().iter().map(|&v| (v, config.with_axis(spec.axis, v))).collect(),
        ),
        None => ("point", vec![(0.0, config.clone())]),
    };
    let mut columns = vec![axis_name];
    columns.extend(task_columns.iter());
    let width = columns.len();
    let mut table = Table::new(&columns);
    let mut any_ok = false;
    for (v, cfg) in points {
        let mut row = vec![Cell::Num(v)];
        match row_fn(&cfg) {
            Ok(cells) => {
                row.extend(cells);
                debug_assert_eq!(row.len(), width);
                any_ok = true;
            }
            Err(Error::Config(msg)) | Err(Error::InvalidParams(msg)) => {
                return Err(Error::Config(msg));
            }
            Err(e) => {
                row.resize(width - 1, Cell::Empty);
                row.push(Cell::Text(e.to_string()));
            }
        }
        table.rows.push(row);
    }
    // individual failures are recorded in-row; only a run with no usable
    // point at all counts as a numerical failure
    Ok(RunOutput { table, fit: None, notes: Vec::new(), failed: !any_ok })
}

fn require_rho(config: &SweepConfig) -> Result<f64> {
    config.rho.ok_or_else(|| Error::Config("this command needs rho (flag --rho)".into()))
}

fn require_box(config: &SweepConfig) -> Result<VolumeSpec> {
    let l = config
        .box_l
        .ok_or_else(|| Error::Config("this command needs a box side (flag --box-l)".into()))?;
    VolumeSpec::new(l, config.dim).map_err(|e| Error::Config(e.to_string()))
}

fn regime_cell(tag: RegimeTag) -> Cell {
    Cell::Text(match tag {
        RegimeTag::Normal => "normal".into(),
        RegimeTag::Condensed => "condensed".into(),
    })
}

fn solve_mu_columns() -> Vec<&'static str> {
    vec!["mu_v", "residual", "iterations", "regime", "mu_c", "rho_c", "mu_infinity", "error"]
}

fn solve_mu_row(config: &SweepConfig) -> Result<Vec<Cell>> {
    let params = config.params()?;
    let rho = require_rho(config)?;
    let vol = require_box(config)?;
    let sol = solver::solve_mu(&params, rho, &vol)?;
    let (mu_inf, _) = solver::limiting_mu(&params, rho)?;
    Ok(vec![
        Cell::Num(sol.mu),
        Cell::Num(sol.residual),
        Cell::Int(sol.iterations as i64),
        regime_cell(sol.regime.tag),
        Cell::Num(sol.regime.mu_c),
        Cell::Num(sol.regime.rho_c.as_f64()),
        Cell::Num(mu_inf),
        Cell::Empty,
    ])
}

fn occupations_columns() -> Vec<&'static str> {
    vec![
        "mu", "matter_mode", "photon_mode", "correlation", "free_density", "e_plus", "e_minus",
        "error",
    ]
}

fn occupations_row(config: &SweepConfig) -> Result<Vec<Cell>> {
    let params = config.params()?;
    let vol = require_box(config)?;
    let mu = match config.mu {
        Some(mu) => mu,
        None => {
            let rho = config.rho.ok_or_else(|| {
                Error::Config("occupations needs either --mu or --rho to solve for mu_V".into())
            })?;
            solver::solve_mu(&params, rho, &vol)?.mu
        }
    };
    let occ = gibbs::occupation_set(&params, mu, &vol)?;
    let (e_plus, e_minus) = match params.variant {
        ModelVariant::Pbg => (Cell::Empty, Cell::Empty),
        ModelVariant::Model1 => {
            let s = spectrum::model1_spectrum(params.eps_q, mu, params.omega, params.g);
            (Cell::Num(s.e_plus), Cell::Num(s.e_minus))
        }
        ModelVariant::Model2 => {
            let s = spectrum::model2_spectrum(params.eps_q, mu, params.omega, params.g)?;
            (Cell::Num(s.e_plus), Cell::Num(s.e_minus))
        }
    };
    Ok(vec![
        Cell::Num(mu),
        Cell::Num(occ.matter_mode),
        Cell::Num(occ.photon_mode),
        Cell::Num(occ.correlation),
        Cell::Num(occ.free_density),
        e_plus,
        e_minus,
        Cell::Empty,
    ])
}

fn condensates_row(config: &SweepConfig) -> Result<Vec<Cell>> {
    let params = config.params()?;
    let rho = require_rho(config)?;
    let rep = gibbs::condensate_limits(&params, rho)?;
    let mut row = vec![
        Cell::Num(rho),
        regime_cell(rep.regime.tag),
        Cell::Num(rep.regime.mu_c),
        Cell::Num(rep.regime.rho_c.as_f64()),
        Cell::Num(rep.matter_condensate),
        Cell::Num(rep.photon_condensate),
        Cell::Num(rep.correlation_density),
        Cell::Num(rep.interaction_energy_density),
    ];
    if config.interchange_variant {
        let alt = gibbs::condensate_limits_with_variant(&params, rho, LimitVariant::Interchanged)?;
        row.push(Cell::Num(alt.photon_condensate));
        row.push(Cell::Num(alt.correlation_density));
        row.push(Cell::Num(alt.interaction_energy_density));
    }
    row.push(Cell::Empty);
    Ok(row)
}

fn phase_diagram_row(config: &SweepConfig) -> Result<Vec<Cell>> {
    let params = config.params()?;
    let mu_c = params.critical_chemical_potential();
    let rho_c = params.critical_density();
    let mut row = vec![Cell::Num(mu_c), Cell::Num(rho_c.as_f64())];
    match config.rho {
        Some(rho) => {
            let rep = gibbs::condensate_limits(&params, rho)?;
            row.push(regime_cell(rep.regime.tag));
            row.push(Cell::Num(rep.matter_condensate));
            row.push(Cell::Num(rep.photon_condensate));
            if config.interchange_variant {
                let alt =
                    gibbs::condensate_limits_with_variant(&params, rho, LimitVariant::Interchanged)?;
                row.push(Cell::Num(alt.photon_condensate));
            }
        }
        None => {
            row.push(Cell::Empty);
            row.push(Cell::Empty);
            row.push(Cell::Empty);
            if config.interchange_variant {
                row.push(Cell::Empty);
            }
        }
    }
    row.push(Cell::Empty);
    Ok(row)
}

fn scaling(config: &SweepConfig) -> Result<RunOutput> {
    let rho = require_rho(config)?;
    let spec = match &config.sweep {
        Some(s) if s.axis == SweepAxis::BoxL => *s,
        Some(s) => {
            return Err(Error::Config(format!(
                "scaling sweeps the box side; got axis '{}'",
                s.axis.name()
            )))
        }
        None => SweepSpec { axis: SweepAxis::BoxL, start: 16.0, stop: 96.0, steps: 6 },
    };
    let params = config.params()?;
    let mu_c = params.critical_chemical_potential();
    let columns = [
        "box_l", "volume", "mu_v", "mu_v_minus_mu_c", "soft_gap", "soft_gap_times_v",
        "matter_density", "photon_density", "correlation_density", "error",
    ];
    let mut table = Table::new(&columns);
    let mut vols: Vec<f64> = Vec::new();
    let mut devs: Vec<f64> = Vec::new();
    for l in spec.values() {
        let vol = match VolumeSpec::new(l, config.dim) {
            Ok(v) => v,
            Err(e) => return Err(Error::Config(e.to_string())),
        };
        let mut row = vec![Cell::Num(l)];
        match solver::solve_mu(&params, rho, &vol).and_then(|sol| {
            let occ = solver::finite_volume_condensates(&params, rho, &vol)?;
            Ok((sol, occ))
        }) {
            Ok((sol, occ)) => {
                let gap = match params.variant {
                    ModelVariant::Pbg => -sol.mu,
                    ModelVariant::Model1 => {
                        spectrum::model1_spectrum(params.eps_q, sol.mu, params.omega, params.g)
                            .e_minus
                    }
                    ModelVariant::Model2 => {
                        let s =
                            spectrum::model2_spectrum(params.eps_q, sol.mu, params.omega, params.g)?;
                        s.e_minus.min(s.e_plus)
                    }
                };
                row.extend([
                    Cell::Num(sol.volume),
                    Cell::Num(sol.mu),
                    Cell::Num(sol.mu - mu_c),
                    Cell::Num(gap),
                    Cell::Num(gap * sol.volume),
                    Cell::Num(occ.matter_mode),
                    Cell::Num(occ.photon_mode),
                    Cell::Num(occ.correlation),
                    Cell::Empty,
                ]);
                vols.push(sol.volume);
                devs.push(sol.mu - mu_c);
            }
            Err(e) => {
                row.resize(columns.len() - 1, Cell::Empty);
                row.push(Cell::Text(e.to_string()));
            }
        }
        table.rows.push(row);
    }
    let failed = vols.is_empty();
    let fit = fit_power_law(&vols, &devs).ok();
    let mut notes = Vec::new();
    if let Some(f) = &fit {
        notes.push(format!(
            "fit mu_V - mu_c ~ prefactor * V^slope: slope = {}, prefactor = {}, r^2 = {}",
            fmt_f64(f.slope),
            fmt_f64(f.prefactor),
            fmt_f64(f.r_squared)
        ));
    }
    if let Density::Finite(rc) = params.critical_density() {
        if rho > rc {
            notes.push(format!(
                "condensed-regime targets: mu_V - mu_c -> -1/(beta V (rho - rho_c)) with \
                 1/(beta (rho - rho_c)) = {}",
                fmt_f64(1.0 / (params.beta * (rho - rc)))
            ));
            if params.variant == ModelVariant::Model1 {
                notes.push(format!(
                    "soft_gap_times_v target: {}",
                    fmt_f64(solver::asymptotic_gap(&params, rho, 1.0).expect("condensed model 1"))
                ));
            }
        }
    }
    Ok(RunOutput { table, fit, notes, failed })
}

/// Tolerances of the oracle-check suites.
const SPECTRUM_TOL_ABS: f64 = 1e-12;
const FOCK_TOL_REL: f64 = 1e-8;
const BOSE_TOL_REL: f64 = 1e-10;

fn oracle_check(config: &SweepConfig) -> Result<RunOutput> {
    let columns = ["suite", "model", "points", "max_deviation", "tolerance", "pass"];
    let mut table = Table::new(&columns);
    let mut failed = false;
    let mut push = |suite: &str, model: &str, points: usize, dev: f64, tol: f64| {
        let pass = dev <= tol;
        table.rows.push(vec![
            Cell::Text(suite.into()),
            Cell::Text(model.into()),
            Cell::Int(points as i64),
            Cell::Num(dev),
            Cell::Num(tol),
            Cell::Text(if pass { "true".into() } else { "false".into() }),
        ]);
        pass
    };

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    // spectrum: closed forms vs the matrix eigensolver
    for model in [ModelVariant::Model1, ModelVariant::Model2] {
        let mut dev: f64 = 0.0;
        for _ in 0..config.draws {
            let a: f64 = rng.gen_range(0.01..10.0);
            let b: f64 = rng.gen_range(0.01..10.0);
            let g = 2.0 * (a * b).sqrt() * rng.gen_range(0.0..0.95);
            let (cp, cm) = match model {
                ModelVariant::Model1 => spectrum::model1_energies(a, b, g),
                _ => spectrum::model2_energies(a, b, g)?,
            };
            let (op, om) = spectrum::numerical_spectrum_oracle(model, a, b, g)?;
            dev = dev.max((cp - op).abs()).max((cm - om).abs());
        }
        let model_name = if model == ModelVariant::Model1 { "1" } else { "2" };
        failed |= !push("spectrum", model_name, config.draws, dev, SPECTRUM_TOL_ABS);
    }

    // coupled-block expectations vs the truncated-Fock thermal oracle
    let fock_points = config.draws.clamp(1, 12);
    for model in [ModelVariant::Model1, ModelVariant::Model2] {
        let mut dev: f64 = 0.0;
        for i in 0..fock_points {
            // soft-gap beta E_min placed between 0.4 and 4
            let target = 0.4 * (10.0f64).powf(i as f64 / (fock_points.max(2) - 1) as f64);
            let omega = rng.gen_range(0.5..2.5);
            let g = rng.gen_range(0.3..2.0);
            // keep mu_c = eps_q - g^2/(4 Omega) < 0 so the solved mu is stable
            let eps_q = rng.gen_range(0.0..0.8) * g * g / (4.0 * omega);
            let mut params = if model == ModelVariant::Model1 {
                ModelParams::model1(3, 1.0, omega, g, eps_q)?
            } else {
                ModelParams::model2(3, 1.0, omega, g, eps_q)?
            };
            let e_min = omega * rng.gen_range(0.05..0.7);
            let mu = spectrum::mu_for_soft_gap(&params, e_min)?;
            params.beta = target / e_min;
            let block = gibbs::coupled_occupations(&params, mu)?;
            let (orc, _) = fock::converged_thermal_expectations(
                model,
                params.eps_q - mu,
                params.omega,
                params.g,
                params.beta,
                FOCK_TOL_REL * 0.1,
            )?;
            for (x, y) in [
                (block.matter, orc.n_matter),
                (block.photon, orc.n_photon),
                (block.correlation, orc.correlation),
            ] {
                let scale = x.abs().max(y.abs()).max(1e-2);
                dev = dev.max((x - y).abs() / scale);
            }
        }
        let model_name = if model == ModelVariant::Model1 { "1" } else { "2" };
        failed |= !push("fock", model_name, fock_points, dev, FOCK_TOL_REL);
    }

    // Bose density: series vs adaptive quadrature over the module grid
    let mut dev: f64 = 0.0;
    let mut points = 0;
    for d in 1..=3u32 {
        for &mu in &[-5.0, -1.0, -0.1, -0.01] {
            for &beta in &[0.5, 1.0, 2.0] {
                let s = specfun::bose_density(beta, mu, d, 1.0)?.value.as_f64();
                let q = specfun::bose_density_quadrature_oracle(beta, mu, d, 1.0)?;
                dev = dev.max((s - q).abs() / s.abs());
                points += 1;
            }
        }
    }
    failed |= !push("bose_density", "-", points, dev, BOSE_TOL_REL);

    let notes = vec![format!("seed = {}", config.seed)];
    Ok(RunOutput { table, fit: None, notes, failed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_values_inclusive() {
        let s = SweepSpec { axis: SweepAxis::Rho, start: 0.0, stop: 1.0, steps: 5 };
        assert_eq!(s.values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let s = SweepSpec::parse("g:0:2:3").unwrap();
        assert_eq!((s.axis, s.start, s.stop, s.steps), (SweepAxis::G, 0.0, 2.0, 3));
        assert!(SweepSpec::parse("nope:0:1:2").is_err());
        assert!(SweepSpec::parse("g:0:1").is_err());
    }

    #[test]
    fn fit_exact_power_law() {
        let xs = [16.0f64, 32.0, 64.0, 128.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.5 / x).collect();
        let f = fit_power_law(&xs, &ys).unwrap();
        assert!((f.slope + 1.0).abs() < 1e-12);
        assert!((f.prefactor - 3.5).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        // negative ys keep the sign in the prefactor
        let ys: Vec<f64> = xs.iter().map(|x| -3.5 / x).collect();
        let f = fit_power_law(&xs, &ys).unwrap();
        assert!((f.prefactor + 3.5).abs() < 1e-12);
    }

    #[test]
    fn fit_errors() {
        assert!(fit_power_law(&[1.0, 2.0], &[1.0, 0.5]).is_err());
        assert!(fit_power_law(&[1.0, 2.0, 3.0], &[1.0, -0.5, 0.3]).is_err());
        assert!(fit_power_law(&[1.0, 2.0, 3.0], &[1.0, 0.0, 0.3]).is_err());
    }

    #[test]
    fn condensate_sweep_piecewise_linear() {
        // sweeping rho through rho_c: matter condensate is 0 then slope 1
        let cfg = SweepConfig {
            model: ModelVariant::Model1,
            omega: 1.0,
            g: 2.0,
            eps_q: 0.5,
            sweep: Some(SweepSpec { axis: SweepAxis::Rho, start: 0.005, stop: 0.095, steps: 10 }),
            ..SweepConfig::default()
        };
        let out = run_sweep(Task::Condensates, &cfg).unwrap();
        let rho_c = 0.018_194_205_980_410_225;
        for row in &out.table.rows {
            let rho = match row[0] {
                Cell::Num(x) => x,
                _ => unreachable!(),
            };
            let matter = match row[5] {
                Cell::Num(x) => x,
                _ => unreachable!("{row:?}"),
            };
            let expect = (rho - rho_c).max(0.0);
            assert!((matter - expect).abs() < 1e-12, "rho={rho}");
        }
    }

    #[test]
    fn rho_c_column_decreases_with_g() {
        // once mu_c < 0 (g^2 > 4 Omega eps_q = 2 here), rho_c strictly drops
        let cfg = SweepConfig {
            model: ModelVariant::Model1,
            omega: 1.0,
            eps_q: 0.5,
            sweep: Some(SweepSpec { axis: SweepAxis::G, start: 1.5, stop: 3.0, steps: 4 }),
            ..SweepConfig::default()
        };
        let out = run_sweep(Task::PhaseDiagram, &cfg).unwrap();
        let rho_cs: Vec<f64> = out
            .table
            .rows
            .iter()
            .map(|r| match r[2] {
                Cell::Num(x) => x,
                _ => unreachable!(),
            })
            .collect();
        for w in rho_cs.windows(2) {
            assert!(w[1] < w[0], "{rho_cs:?}");
        }
    }

    #[test]
    fn per_row_errors_do_not_abort() {
        // a mu above mu_c triggers a numerical per-row error at every beta
        let cfg = SweepConfig {
            model: ModelVariant::Model1,
            omega: 1.0,
            g: 2.0,
            eps_q: 0.5,
            mu: Some(-0.1), // above mu_c = -0.5
            box_l: Some(8.0),
            sweep: Some(SweepSpec { axis: SweepAxis::Beta, start: 0.5, stop: 1.5, steps: 3 }),
            ..SweepConfig::default()
        };
        let out = run_sweep(Task::Occupations, &cfg).unwrap();
        assert_eq!(out.table.rows.len(), 3);
        for row in &out.table.rows {
            match row.last().unwrap() {
                Cell::Text(msg) => assert!(msg.contains("instability")),
                other => panic!("expected per-row error, got {other:?}"),
            }
        }
        // every point failed: the run counts as a numerical failure
        assert!(out.failed);
    }

    #[test]
    fn csv_and_json_numeric_content_agree() {
        let cfg = SweepConfig {
            model: ModelVariant::Model1,
            omega: 1.0,
            g: 2.0,
            eps_q: 0.5,
            rho: Some(0.0363),
            box_l: Some(12.0),
            ..SweepConfig::default()
        };
        let out = run_sweep(Task::SolveMu, &cfg).unwrap();
        let csv = out.render(OutputFormat::Csv);
        let json = out.render(OutputFormat::Json);
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        let lines: Vec<&str> = csv.trim_end().lines().collect();
        let header: Vec<&str> = lines[0].split(',').collect();
        for (line, jrow) in lines[1..].iter().zip(parsed["rows"].as_array().unwrap()) {
            for (name, cell) in header.iter().zip(line.split(',')) {
                let jval = &jrow[*name];
                if let Ok(x) = cell.parse::<f64>() {
                    if let Some(y) = jval.as_f64() {
                        assert_eq!(x, y, "column {name}");
                    } else if jval.as_i64().is_some() {
                        assert_eq!(x, jval.as_i64().unwrap() as f64);
                    } else if cell == "inf" {
                        assert_eq!(jval.as_str().unwrap(), "inf");
                    }
                }
            }
        }
    }

    #[test]
    fn infinite_rho_c_spelled_inf() {
        let cfg = SweepConfig {
            model: ModelVariant::Pbg,
            dim: 2,
            rho: Some(0.1),
            box_l: Some(10.0),
            ..SweepConfig::default()
        };
        let out = run_sweep(Task::SolveMu, &cfg).unwrap();
        let csv = out.render(OutputFormat::Csv);
        assert!(csv.contains(",inf,"), "{csv}");
    }
}
