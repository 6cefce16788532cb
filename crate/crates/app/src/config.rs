//! Experiment configuration: a TOML file with one level of sections.
//!
//! ```toml
//! [group]
//! preset = "pythagorean_full"     # or `form` + `generators`
//! w0 = [3, 4, 5]
//!
//! [family]
//! kind = "sector"                 # norm_ball | sector | bisector
//! source = "orbit"                # orbit | ball
//! windows = [[[0, 90]], [[90, 180]]]
//! t_min = 10.0
//! t_max = 1000.0
//! points = 11
//!
//! [sieve]
//! factors = ["x3"]
//! big_r = 1
//! t = 1000.0
//!
//! [budgets]
//! max_points = 20000000
//!
//! [run]
//! workers = 4
//! ```
//!
//! Window angles are in degrees; each window is a list of arcs.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use orbitsieve_core::measures::Window;
use orbitsieve_core::orbit::{geometric_grid, GroupPresentation};
use orbitsieve_core::presets;
use orbitsieve_core::sieve::{FactorConfig, PolynomialF, SieveMode, DEFAULT_ORBIT_CAP};
use orbitsieve_core::{IntMatrix, QuadraticForm};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
    #[error("cannot parse config: {0}")]
    Parse(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn invalid(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field: field.to_owned(),
        message: message.into(),
    }
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct GroupSection {
    pub preset: Option<String>,
    pub form: Option<Vec<Vec<i64>>>,
    pub generators: Option<Vec<Vec<Vec<i64>>>>,
    pub w0: Option<Vec<i64>>,
    /// Expected `Q(w0)`; checked when given.
    pub level: Option<i64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    #[default]
    NormBall,
    Sector,
    Bisector,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// Vector orbit `Γ·w0`, sized by Euclidean norm.
    #[default]
    Orbit,
    /// Group ball `{γ : e^{t(γ)} ≤ T}`.
    Ball,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct FamilySection {
    pub kind: FamilyKind,
    pub source: Source,
    pub windows: Vec<Vec<[f64; 2]>>,
    pub t_grid: Option<Vec<f64>>,
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    /// Radius window of the growth fit; defaults to the whole grid.
    pub fit_window: Option<[f64; 2]>,
}

impl Default for FamilySection {
    fn default() -> Self {
        Self {
            kind: FamilyKind::NormBall,
            source: Source::Orbit,
            windows: Vec::new(),
            t_grid: None,
            t_min: 10.0,
            t_max: 1000.0,
            points: 11,
            fit_window: None,
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct PsSection {
    /// Exponent of the atoms; fitted from the ball when absent.
    pub delta: Option<f64>,
    pub inner_radius: f64,
    pub tolerance: f64,
    pub margin: f64,
    pub mass_floor: f64,
    pub bins: usize,
    pub shells: usize,
}

impl Default for PsSection {
    fn default() -> Self {
        Self {
            delta: None,
            inner_radius: 0.0,
            tolerance: 0.1,
            margin: 0.01,
            mass_floor: 0.0,
            bins: 72,
            shells: 6,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeName {
    #[default]
    Exact,
    Bonferroni,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct SieveSection {
    /// Factors `F_1, …, F_r` in the variables `x1, …, xm`; defaults to the
    /// last coordinate.
    pub factors: Option<Vec<String>>,
    pub big_r: Option<u32>,
    pub z: Option<f64>,
    /// Level `D` for the remainder sum; `X^{1/4}` when absent.
    pub level: Option<f64>,
    pub t: f64,
    pub mode: ModeName,
    pub k: usize,
    pub moduli_max: u64,
    pub primes_max: u64,
    pub dimension_w_min: u64,
    pub t_grid: Option<Vec<f64>>,
}

impl Default for SieveSection {
    fn default() -> Self {
        Self {
            factors: None,
            big_r: None,
            z: None,
            level: None,
            t: 1000.0,
            mode: ModeName::Exact,
            k: 2,
            moduli_max: 30,
            primes_max: 100,
            dimension_w_min: 10,
            t_grid: None,
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct BudgetSection {
    pub max_points: usize,
    pub max_depth: usize,
    pub timeout_secs: f64,
    pub orbit_cap: usize,
    pub rho_iterations: u64,
}

impl Default for BudgetSection {
    fn default() -> Self {
        Self {
            max_points: 20_000_000,
            max_depth: 100_000,
            timeout_secs: 3600.0,
            orbit_cap: DEFAULT_ORBIT_CAP,
            rho_iterations: FactorConfig::default().max_rho_iterations,
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub output: PathBuf,
    pub workers: usize,
    pub seed: u64,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            output: PathBuf::from("out"),
            workers: 1,
            seed: FactorConfig::default().seed,
        }
    }
}

/// The file as written, with defaults filled in.
#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct RawConfig {
    pub group: GroupSection,
    pub family: FamilySection,
    pub ps: PsSection,
    pub sieve: SieveSection,
    pub budgets: BudgetSection,
    pub run: RunSection,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::parse(&text)
    }

    /// SHA-256 of the canonical JSON form, leaving out the output directory
    /// and worker count, which do not affect results.
    pub fn hash_hex(&self) -> String {
        let mut canonical = self.clone();
        canonical.run.output = PathBuf::new();
        canonical.run.workers = 0;
        let json = serde_json::to_string(&canonical).expect("config serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}

#[derive(Clone, Debug)]
pub struct Family {
    pub kind: FamilyKind,
    pub source: Source,
    pub windows: Vec<Window>,
    pub t_grid: Vec<f64>,
    pub fit_window: (f64, f64),
}

impl Family {
    pub fn t_max(&self) -> f64 {
        self.t_grid.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug)]
pub struct SieveSpec {
    pub f: PolynomialF,
    pub factors: Vec<String>,
    pub big_r: u32,
    pub z: Option<f64>,
    pub level: Option<f64>,
    pub t: f64,
    pub mode: SieveMode,
    pub moduli_max: u64,
    pub primes_max: u64,
    pub dimension_w_min: u64,
    pub t_grid: Vec<f64>,
}

/// A validated configuration.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub raw: RawConfig,
    pub preset: Option<String>,
    pub group: GroupPresentation,
    pub w0: Vec<i64>,
    pub q_w0: i128,
    pub family: Family,
    pub ps: PsSection,
    pub sieve: SieveSpec,
    pub budgets: BudgetSection,
    pub output: PathBuf,
    pub workers: usize,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        Self::from_raw(RawConfig::load(path)?)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Self::from_raw(RawConfig::parse(text)?)
    }

    pub fn from_raw(raw: RawConfig) -> Result<Self, ConfigError> {
        let (preset, group, w0) = resolve_group(&raw.group)?;
        let q_w0 = presets::check_base(&group, &w0).map_err(|e| invalid("group.w0", e.to_string()))?;
        if let Some(level) = raw.group.level {
            if i128::from(level) != q_w0 {
                return Err(invalid("group.w0", format!("Q(w0) = {q_w0}, but group.level = {level}")));
            }
        }
        let n = group.form().n();
        let family = resolve_family(&raw.family, n)?;
        let sieve = resolve_sieve(&raw.sieve, group.dim())?;

        let ps = raw.ps.clone();
        if ps.delta.is_some_and(|d| !(d > 0.0)) {
            return Err(invalid("ps.delta", "must be positive"));
        }
        if !(ps.tolerance >= 0.0) || !(ps.margin >= 0.0) || !(ps.inner_radius >= 0.0) {
            return Err(invalid("ps", "tolerance, margin and inner_radius must be nonnegative"));
        }
        if ps.shells < 2 {
            return Err(invalid("ps.shells", "need at least 2 shells"));
        }

        let budgets = raw.budgets.clone();
        if budgets.max_points == 0 || budgets.max_depth == 0 || budgets.orbit_cap == 0 || budgets.rho_iterations == 0 {
            return Err(invalid("budgets", "limits must be positive"));
        }
        if !(budgets.timeout_secs > 0.0) {
            return Err(invalid("budgets.timeout_secs", "must be positive"));
        }
        if raw.run.workers == 0 {
            return Err(invalid("run.workers", "must be at least 1"));
        }
        Ok(Self {
            preset,
            group,
            w0,
            q_w0,
            family,
            ps,
            sieve,
            budgets,
            output: raw.run.output.clone(),
            workers: raw.run.workers,
            seed: raw.run.seed,
            raw,
        })
    }

    pub fn factor_config(&self) -> FactorConfig {
        FactorConfig {
            seed: self.seed,
            max_rho_iterations: self.budgets.rho_iterations,
            ..FactorConfig::default()
        }
    }
}

fn resolve_group(g: &GroupSection) -> Result<(Option<String>, GroupPresentation, Vec<i64>), ConfigError> {
    match (&g.preset, &g.form, &g.generators) {
        (Some(name), None, None) => {
            let preset = presets::by_name(name).ok_or_else(|| {
                invalid(
                    "group.preset",
                    format!("unknown preset {name:?}; expected one of {}", presets::PRESET_NAMES.join(", ")),
                )
            })?;
            let w0 = g.w0.clone().unwrap_or(preset.w0);
            Ok((Some(name.clone()), preset.group, w0))
        }
        (Some(_), _, _) => Err(invalid("group.preset", "give either a preset or form and generators, not both")),
        (None, Some(form), gens) => {
            let form = QuadraticForm::from_rows(form).map_err(|e| invalid("group.form", e.to_string()))?;
            let mut matrices = Vec::new();
            for (i, rows) in gens.iter().flatten().enumerate() {
                let m = IntMatrix::from_rows(rows)
                    .ok_or_else(|| invalid(&format!("group.generators[{i}]"), "not a square matrix"))?;
                if m.dim() != form.dim() {
                    return Err(invalid(
                        &format!("group.generators[{i}]"),
                        format!("is {0}x{0}, form is {1}x{1}", m.dim(), form.dim()),
                    ));
                }
                matrices.push(m);
            }
            let group = GroupPresentation::from_integer(form, &matrices, "inline")
                .map_err(|e| invalid("group.generators", e.to_string()))?;
            let w0 = g.w0.clone().ok_or_else(|| invalid("group.w0", "required with inline generators"))?;
            Ok((None, group, w0))
        }
        (None, None, Some(_)) => Err(invalid("group.form", "required with inline generators")),
        (None, None, None) => Err(invalid("group", "set preset, or form and generators")),
    }
}

fn resolve_family(f: &FamilySection, n: usize) -> Result<Family, ConfigError> {
    let t_grid = match &f.t_grid {
        Some(grid) => grid.clone(),
        None => {
            if !(f.t_min > 0.0 && f.t_max > f.t_min) {
                return Err(invalid("family.t_max", "need 0 < t_min < t_max"));
            }
            if f.points < 2 {
                return Err(invalid("family.points", "need at least 2 points"));
            }
            geometric_grid(f.t_min, f.t_max, f.points)
        }
    };
    if t_grid.is_empty() || t_grid.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
        return Err(invalid("family.t_grid", "radii must be positive and finite"));
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("family.t_grid", "radii must increase"));
    }
    if !f.windows.is_empty() && n != 2 {
        return Err(invalid("family.windows", format!("arcs need a circle boundary, the form has n = {n}")));
    }
    let mut windows = Vec::with_capacity(f.windows.len());
    for (i, arcs) in f.windows.iter().enumerate() {
        if arcs.is_empty() {
            return Err(invalid(&format!("family.windows[{i}]"), "window has no arcs"));
        }
        let rad: Vec<(f64, f64)> = arcs.iter().map(|a| (a[0].to_radians(), a[1].to_radians())).collect();
        let w = Window::arcs(&rad);
        w.validate(n).map_err(|e| invalid(&format!("family.windows[{i}]"), e))?;
        windows.push(w);
    }
    if windows.is_empty() {
        windows.push(Window::Full);
    }
    if f.kind == FamilyKind::Bisector && f.source == Source::Orbit {
        return Err(invalid("family.kind", "bisectors need source = \"ball\""));
    }
    let fit_window = match f.fit_window {
        Some([a, b]) if a > 0.0 && b > a => (a, b),
        Some(_) => return Err(invalid("family.fit_window", "need 0 < T_min < T_max")),
        None => (t_grid[0], *t_grid.last().expect("nonempty")),
    };
    Ok(Family {
        kind: f.kind,
        source: f.source,
        windows,
        t_grid,
        fit_window,
    })
}

fn resolve_sieve(s: &SieveSection, dim: usize) -> Result<SieveSpec, ConfigError> {
    let factors = s.factors.clone().unwrap_or_else(|| vec![format!("x{dim}")]);
    if factors.is_empty() {
        return Err(invalid("sieve.factors", "need at least one factor"));
    }
    let f = PolynomialF::parse(&factors, dim).map_err(|e| invalid("sieve.factors", e.to_string()))?;
    let big_r = s.big_r.unwrap_or(f.r.max(1) as u32);
    if (big_r as usize) < f.r {
        return Err(invalid("sieve.big_r", format!("R = {big_r} is below the {} nonconstant factors", f.r)));
    }
    if !(s.t > 0.0) || !s.t.is_finite() {
        return Err(invalid("sieve.t", "must be positive"));
    }
    if s.z.is_some_and(|z| !(z >= 2.0)) {
        return Err(invalid("sieve.z", "must be at least 2"));
    }
    if s.level.is_some_and(|d| !(d >= 1.0)) {
        return Err(invalid("sieve.level", "must be at least 1"));
    }
    let mode = match s.mode {
        ModeName::Exact => SieveMode::Exact,
        ModeName::Bonferroni if s.k >= 1 => SieveMode::Bonferroni(s.k),
        ModeName::Bonferroni => return Err(invalid("sieve.k", "Bonferroni truncation needs k >= 1")),
    };
    if s.moduli_max < 1 {
        return Err(invalid("sieve.moduli_max", "must be at least 1"));
    }
    if s.dimension_w_min < 2 {
        return Err(invalid("sieve.dimension_w_min", "must be at least 2"));
    }
    let t_grid = s.t_grid.clone().unwrap_or_else(|| geometric_grid(s.t / 10.0, s.t, 11));
    if t_grid.is_empty() || t_grid.iter().any(|&t| !(t > 0.0) || t > s.t) || t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("sieve.t_grid", "radii must increase and lie in (0, sieve.t]"));
    }
    Ok(SieveSpec {
        f,
        factors,
        big_r,
        z: s.z,
        level: s.level,
        t: s.t,
        mode,
        moduli_max: s.moduli_max,
        primes_max: s.primes_max,
        dimension_w_min: s.dimension_w_min,
        t_grid,
    })
}
