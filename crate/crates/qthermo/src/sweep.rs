//! Driving-time sweeps: configuration, the grid runner, and deterministic
//! CSV / SVG emission.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::drive::{propagator, DriveProtocol};
use crate::error::{Error as RunError, Result as RunResult};
use crate::hermitian::{pauli, HermitianOperator, PauliAxis};
use crate::metrics::{thermo_record, ThermoRecord};
use crate::thermal::{gibbs_state, ThermalSpec};

/// Exact CSV header contract.
pub const CSV_HEADER: &str = "nu_f_hz,tau_s,avg_work_hz,delta_f_hz,s_irr_work,s_irr_relent,\
                              coherence,population,bures_length,bound,jarzynski_lhs,jarzynski_rhs";

/// Configuration-level failure: carries the key and, for file input, the line.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config line {line}: expected `key = value`, got `{content}`")]
    Syntax { line: usize, content: String },

    #[error("config line {line}: unknown key `{key}`")]
    UnknownKey { key: String, line: usize },

    #[error("config line {line}: key `{key}`: cannot parse `{value}` as {expected}")]
    Malformed {
        key: String,
        value: String,
        expected: &'static str,
        line: usize,
    },

    #[error("config key `{key}`: {reason}")]
    Invariant { key: &'static str, reason: String },
}

/// Fully resolved sweep parameters. Defaults reproduce the published
/// experiment: a 1580.2 Hz spin temperature, initial gap 2000 Hz, final
/// gaps 3600 and 5000 Hz, and driving times 100-800 us on 8 points.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub temperature_hz: f64,
    pub nu_i_hz: f64,
    pub nu_f_list_hz: Vec<f64>,
    pub tau_start_s: f64,
    pub tau_end_s: f64,
    pub tau_steps: usize,
    pub slices: usize,
    pub tolerance: f64,
    pub output_path: PathBuf,
    pub plot_path: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            temperature_hz: 1580.2,
            nu_i_hz: 2000.0,
            nu_f_list_hz: vec![3600.0, 5000.0],
            tau_start_s: 100e-6,
            tau_end_s: 800e-6,
            tau_steps: 8,
            slices: 256,
            tolerance: 1e-9,
            output_path: PathBuf::from("sweep.csv"),
            plot_path: None,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |key: &'static str, reason: String| Err(ConfigError::Invariant { key, reason });
        if !(self.temperature_hz > 0.0) {
            return bad(
                "temperature_hz",
                format!("must be positive, got {}", self.temperature_hz),
            );
        }
        if !(self.nu_i_hz > 0.0) {
            return bad("nu_i", format!("must be positive, got {}", self.nu_i_hz));
        }
        if self.nu_f_list_hz.is_empty() {
            return bad("nu_f", "list must be nonempty".into());
        }
        if let Some(&v) = self.nu_f_list_hz.iter().find(|&&v| !(v > 0.0)) {
            return bad("nu_f", format!("frequencies must be positive, got {v}"));
        }
        if !(self.tau_start_s > 0.0) {
            return bad(
                "tau_start",
                format!("must be positive, got {}", self.tau_start_s),
            );
        }
        if !(self.tau_start_s <= self.tau_end_s) {
            return bad(
                "tau_end",
                format!(
                    "must be >= tau_start, got {} < {}",
                    self.tau_end_s, self.tau_start_s
                ),
            );
        }
        if self.tau_steps < 1 {
            return bad("tau_steps", "must be at least 1".into());
        }
        if self.slices < 1 {
            return bad("slices", "must be at least 1".into());
        }
        if !(self.tolerance > 0.0) {
            return bad(
                "tolerance",
                format!("must be positive, got {}", self.tolerance),
            );
        }
        Ok(())
    }

    /// Inclusive linear grid from tau_start to tau_end.
    pub fn tau_grid(&self) -> Vec<f64> {
        if self.tau_steps == 1 {
            return vec![self.tau_start_s];
        }
        let step = (self.tau_end_s - self.tau_start_s) / (self.tau_steps - 1) as f64;
        (0..self.tau_steps)
            .map(|k| {
                if k + 1 == self.tau_steps {
                    self.tau_end_s
                } else {
                    self.tau_start_s + k as f64 * step
                }
            })
            .collect()
    }

    /// Defaults, then file values, then flag values; validated at the end.
    pub fn resolve(
        file: Option<PartialConfig>,
        flags: PartialConfig,
    ) -> Result<Self, ConfigError> {
        let mut cfg = SweepConfig::default();
        if let Some(partial) = file {
            partial.apply_to(&mut cfg);
        }
        flags.apply_to(&mut cfg);
        cfg.validate()?;
        Ok(cfg)
    }
}

/// A partially specified configuration (one layer of the precedence stack).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartialConfig {
    pub temperature_hz: Option<f64>,
    pub nu_i_hz: Option<f64>,
    pub nu_f_list_hz: Option<Vec<f64>>,
    pub tau_start_s: Option<f64>,
    pub tau_end_s: Option<f64>,
    pub tau_steps: Option<usize>,
    pub slices: Option<usize>,
    pub tolerance: Option<f64>,
    pub output_path: Option<PathBuf>,
    pub plot_path: Option<PathBuf>,
}

impl PartialConfig {
    fn apply_to(self, cfg: &mut SweepConfig) {
        if let Some(v) = self.temperature_hz {
            cfg.temperature_hz = v;
        }
        if let Some(v) = self.nu_i_hz {
            cfg.nu_i_hz = v;
        }
        if let Some(v) = self.nu_f_list_hz {
            cfg.nu_f_list_hz = v;
        }
        if let Some(v) = self.tau_start_s {
            cfg.tau_start_s = v;
        }
        if let Some(v) = self.tau_end_s {
            cfg.tau_end_s = v;
        }
        if let Some(v) = self.tau_steps {
            cfg.tau_steps = v;
        }
        if let Some(v) = self.slices {
            cfg.slices = v;
        }
        if let Some(v) = self.tolerance {
            cfg.tolerance = v;
        }
        if let Some(v) = self.output_path {
            cfg.output_path = v;
        }
        if let Some(v) = self.plot_path {
            cfg.plot_path = Some(v);
        }
    }

    /// Parse flat `key = value` text with `#` comments.
    pub fn from_config_text(text: &str) -> Result<Self, ConfigError> {
        let mut partial = PartialConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ConfigError::Syntax {
                    line,
                    content: content.to_string(),
                });
            };
            let key = key.trim();
            let value = value.trim();
            match key {
                "temperature_hz" => partial.temperature_hz = Some(parse_f64(key, value, line)?),
                "nu_i" => partial.nu_i_hz = Some(parse_f64(key, value, line)?),
                "nu_f" => partial.nu_f_list_hz = Some(parse_f64_list(key, value, line)?),
                "tau_start" => partial.tau_start_s = Some(parse_f64(key, value, line)?),
                "tau_end" => partial.tau_end_s = Some(parse_f64(key, value, line)?),
                "tau_steps" => partial.tau_steps = Some(parse_usize(key, value, line)?),
                "slices" => partial.slices = Some(parse_usize(key, value, line)?),
                "tolerance" => partial.tolerance = Some(parse_f64(key, value, line)?),
                "out" => partial.output_path = Some(PathBuf::from(value)),
                "plot" => partial.plot_path = Some(PathBuf::from(value)),
                _ => {
                    return Err(ConfigError::UnknownKey {
                        key: key.to_string(),
                        line,
                    })
                }
            }
        }
        Ok(partial)
    }
}

fn parse_f64(key: &str, value: &str, line: usize) -> Result<f64, ConfigError> {
    value.parse().map_err(|_| ConfigError::Malformed {
        key: key.to_string(),
        value: value.to_string(),
        expected: "a number",
        line,
    })
}

fn parse_usize(key: &str, value: &str, line: usize) -> Result<usize, ConfigError> {
    value.parse().map_err(|_| ConfigError::Malformed {
        key: key.to_string(),
        value: value.to_string(),
        expected: "a non-negative integer",
        line,
    })
}

fn parse_f64_list(key: &str, value: &str, line: usize) -> Result<Vec<f64>, ConfigError> {
    value
        .split(',')
        .map(|item| parse_f64(key, item.trim(), line))
        .collect()
}

/// One grid point's complete thermodynamic record.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub nu_f_hz: f64,
    pub tau_s: f64,
    pub record: ThermoRecord,
}

fn gap_hamiltonian(axis: PauliAxis, nu_hz: f64) -> HermitianOperator {
    HermitianOperator::new(pauli(axis).matrix().scale_re(-0.5 * nu_hz))
        .expect("scaled Pauli matrix is Hermitian")
}

/// Run the full (ν_f, τ) grid. Rows are ordered by ν_f ascending, then τ
/// ascending, and every row is checked against the record invariants.
pub fn run_sweep(cfg: &SweepConfig) -> RunResult<Vec<SweepRow>> {
    cfg.validate()
        .map_err(|e| RunError::Config(e.to_string()))?;
    let thermal = ThermalSpec::from_temperature_hz(cfg.temperature_hz)?;
    let h_i = gap_hamiltonian(PauliAxis::X, cfg.nu_i_hz);
    let rho_i = gibbs_state(&h_i, thermal);

    let mut nu_fs = cfg.nu_f_list_hz.clone();
    nu_fs.sort_by(f64::total_cmp);

    let mut rows = Vec::with_capacity(nu_fs.len() * cfg.tau_steps);
    for &nu_f in &nu_fs {
        let h_f = gap_hamiltonian(PauliAxis::Y, nu_f);
        for tau in cfg.tau_grid() {
            let at_point = |e: RunError| RunError::SweepPoint {
                nu_f_hz: nu_f,
                tau_s: tau,
                source: Box::new(e),
            };
            let protocol =
                DriveProtocol::new(cfg.nu_i_hz, nu_f, tau, cfg.slices).map_err(at_point)?;
            let u = propagator(&protocol, cfg.tolerance).map_err(at_point)?;
            let rho_tau = crate::drive::evolve(&rho_i, &u).map_err(at_point)?;
            let record =
                thermo_record(&rho_i, &h_i, &rho_tau, &h_f, &u, thermal).map_err(at_point)?;
            record.validate().map_err(at_point)?;
            rows.push(SweepRow {
                nu_f_hz: nu_f,
                tau_s: tau,
                record,
            });
        }
    }
    Ok(rows)
}

/// Plain decimal with the requested number of significant digits.
pub(crate) fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

fn trim_trailing_zeros(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    let trimmed = s.trim_end_matches('0').trim_end_matches('.');
    trimmed.to_string()
}

fn format_nu_label(nu: f64) -> String {
    if (nu - nu.round()).abs() < 1e-9 {
        format!("{}", nu.round() as i64)
    } else {
        trim_trailing_zeros(&format_significant(nu, 6))
    }
}

/// Write rows as UTF-8 CSV with 12 significant digits per number.
pub fn emit_csv(rows: &[SweepRow], path: &Path) -> RunResult<()> {
    if rows.is_empty() {
        return Err(RunError::Config("cannot emit an empty sweep".into()));
    }
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let r = &row.record;
        let fields = [
            row.nu_f_hz,
            row.tau_s,
            r.avg_work_hz,
            r.delta_f_hz,
            r.s_irr_work_route,
            r.s_irr_relent_route,
            r.coherence_term,
            r.population_term,
            r.bures_length,
            r.bound_value,
            r.jarzynski_lhs,
            r.jarzynski_rhs,
        ];
        let line: Vec<String> = fields
            .iter()
            .map(|&v| format_significant(v, 12))
            .collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

const SVG_WIDTH: f64 = 640.0;
const SVG_HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 55.0;

struct Series<'a> {
    label: &'a str,
    color: &'a str,
    values: Vec<f64>,
}

/// Emit one self-contained SVG per ν_f value; the value is suffixed onto the
/// file name. Returns the written paths.
pub fn emit_svg_plot(rows: &[SweepRow], path: &Path) -> RunResult<Vec<PathBuf>> {
    if rows.is_empty() {
        return Err(RunError::Config("cannot plot an empty sweep".into()));
    }
    let mut written = Vec::new();
    let mut start = 0;
    while start < rows.len() {
        let nu_f = rows[start].nu_f_hz;
        let mut end = start;
        while end < rows.len() && rows[end].nu_f_hz == nu_f {
            end += 1;
        }
        let group = &rows[start..end];
        let target = suffixed_path(path, nu_f);
        fs::write(&target, svg_document(group, nu_f))?;
        written.push(target);
        start = end;
    }
    Ok(written)
}

fn suffixed_path(base: &Path, nu_f: f64) -> PathBuf {
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "plot".to_string());
    let ext = base
        .extension()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "svg".to_string());
    base.with_file_name(format!("{stem}_{}.{ext}", format_nu_label(nu_f)))
}

fn format_tick(v: f64) -> String {
    trim_trailing_zeros(&format_significant(v, 4))
}

fn svg_document(group: &[SweepRow], nu_f: f64) -> String {
    let plot_w = SVG_WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = SVG_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;

    let taus: Vec<f64> = group.iter().map(|r| r.tau_s).collect();
    let mut t_min = taus.iter().copied().fold(f64::INFINITY, f64::min);
    let mut t_max = taus.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if t_max - t_min <= 0.0 {
        // Degenerate single-abscissa plot: pad the axis around the point.
        let pad = t_max.abs().max(1e-6) * 0.5;
        t_min -= pad;
        t_max += pad;
    }
    let s_max = group
        .iter()
        .map(|r| r.record.s_irr_relent_route)
        .fold(0.0_f64, f64::max);
    let y_max = if s_max > 0.0 { 1.05 * s_max } else { 1.0 };

    let x_of = |t: f64| MARGIN_LEFT + (t - t_min) / (t_max - t_min) * plot_w;
    let y_of = |v: f64| MARGIN_TOP + plot_h * (1.0 - v / y_max);

    let series = [
        Series {
            label: "entropy production",
            color: "#d62728",
            values: group.iter().map(|r| r.record.s_irr_relent_route).collect(),
        },
        Series {
            label: "coherence",
            color: "#1f77b4",
            values: group.iter().map(|r| r.record.coherence_term).collect(),
        },
        Series {
            label: "entropy bound",
            color: "#2ca02c",
            values: group.iter().map(|r| r.record.bound_value).collect(),
        },
    ];

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_WIDTH}\" height=\"{SVG_HEIGHT}\" \
         viewBox=\"0 0 {SVG_WIDTH} {SVG_HEIGHT}\">"
    );
    let _ = writeln!(svg, "<rect width=\"{SVG_WIDTH}\" height=\"{SVG_HEIGHT}\" fill=\"white\"/>");
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"15\">driven-qubit entropy production, final gap {} Hz</text>",
        MARGIN_LEFT + plot_w / 2.0,
        format_nu_label(nu_f)
    );

    // Axes.
    let x0 = MARGIN_LEFT;
    let y0 = MARGIN_TOP + plot_h;
    let _ = writeln!(
        svg,
        "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{:.2}\" y2=\"{y0:.2}\" stroke=\"black\"/>",
        MARGIN_LEFT + plot_w
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{x0:.2}\" y1=\"{:.2}\" x2=\"{x0:.2}\" y2=\"{y0:.2}\" stroke=\"black\"/>",
        MARGIN_TOP
    );

    // X ticks: one per sample point when few, else an even subdivision.
    let tick_taus: Vec<f64> = if taus.len() <= 10 {
        taus.clone()
    } else {
        (0..6)
            .map(|k| t_min + (t_max - t_min) * k as f64 / 5.0)
            .collect()
    };
    for &t in &tick_taus {
        let x = x_of(t);
        let _ = writeln!(
            svg,
            "<line x1=\"{x:.2}\" y1=\"{y0:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
            y0 + 5.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
             font-size=\"10\">{}</text>",
            y0 + 18.0,
            format_tick(t)
        );
    }
    // Y ticks.
    for k in 0..=4 {
        let v = y_max * k as f64 / 4.0;
        let y = y_of(v);
        let _ = writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{x0:.2}\" y2=\"{y:.2}\" stroke=\"black\"/>",
            x0 - 5.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" font-family=\"sans-serif\" \
             font-size=\"10\">{}</text>",
            x0 - 8.0,
            y + 3.5,
            format_tick(v)
        );
    }

    // Axis labels.
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"12\">driving time (s)</text>",
        MARGIN_LEFT + plot_w / 2.0,
        SVG_HEIGHT - 14.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"18\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"12\" transform=\"rotate(-90 18 {:.2})\">nats</text>",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );

    // Data: one polyline plus point markers per series.
    for s in &series {
        let points: Vec<String> = taus
            .iter()
            .zip(&s.values)
            .map(|(&t, &v)| format!("{:.2},{:.2}", x_of(t), y_of(v)))
            .collect();
        let _ = writeln!(
            svg,
            "<polyline class=\"data\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" \
             points=\"{}\"/>",
            s.color,
            points.join(" ")
        );
        for (&t, &v) in taus.iter().zip(&s.values) {
            let _ = writeln!(
                svg,
                "<circle class=\"marker\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{}\"/>",
                x_of(t),
                y_of(v),
                s.color
            );
        }
    }

    // Legend.
    let legend_x = MARGIN_LEFT + plot_w - 170.0;
    for (i, s) in series.iter().enumerate() {
        let y = MARGIN_TOP + 14.0 + 18.0 * i as f64;
        let _ = writeln!(
            svg,
            "<line x1=\"{legend_x:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" \
             stroke=\"{}\" stroke-width=\"2\"/>",
            legend_x + 24.0,
            s.color
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>",
            legend_x + 30.0,
            y + 3.5,
            s.label
        );
    }

    svg.push_str("</svg>\n");
    svg
}
