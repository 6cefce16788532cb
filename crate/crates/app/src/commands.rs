//! Subcommand bodies. Each writes its artifacts through a [`RunContext`].

use std::f64::consts::TAU;
use std::fmt::Write as _;

use serde::Serialize;

use orbitsieve_core::measures::{
    admissibility_check, empirical_ps_annulus, measure_ratio_report, poincare_abscissa, s_grid, sector_counts_ball,
    sector_counts_orbit, AbscissaEstimate, BallGeometry, OrbitGeometry, Reference, SectorSpec, SectorTable, Window,
};
use orbitsieve_core::orbit::{
    fit_exponent, group_ball_with, orbit_bfs_with, render_cache, BfsOptions, GroupBall, GrowthFit, OrbitError, OrbitSet,
};
use orbitsieve_core::sieve::arith::{primes_below, squarefree_up_to};
use orbitsieve_core::sieve::{
    almost_prime_count, default_z, integer_windows, legendre_sieve, sieve_dimension_fit, LocalDensityTable,
    SieveInstance,
};
use orbitsieve_oracle as oracle;

use crate::config::{ExperimentConfig, FamilyKind, Source};
use crate::output::{csv_float, to_json, RunContext};
use crate::{verify, AppError, Subcommand};

pub fn dispatch(sub: Subcommand, cfg: &ExperimentConfig, ctx: &mut RunContext) -> Result<(), AppError> {
    match sub {
        Subcommand::Orbit => orbit(cfg, ctx),
        Subcommand::Count => count(cfg, ctx),
        Subcommand::Exponent => exponent(cfg, ctx),
        Subcommand::Ps => ps(cfg, ctx),
        Subcommand::SieveLocal => sieve_local(cfg, ctx),
        Subcommand::SieveRun => sieve_run(cfg, ctx),
        Subcommand::AlmostPrime => almost_prime(cfg, ctx),
        Subcommand::Oracle => oracle_fixtures(cfg, ctx),
        Subcommand::Verify => verify_all(ctx),
    }
}

fn options(cfg: &ExperimentConfig) -> BfsOptions {
    BfsOptions {
        max_points: cfg.budgets.max_points,
        ..BfsOptions::default()
    }
}

/// Vector orbit up to `bound`, saturated. A budget stop writes the partial
/// cache before failing.
fn saturated_orbit(cfg: &ExperimentConfig, ctx: &mut RunContext, bound: f64) -> Result<OrbitSet, AppError> {
    let result = ctx.stage("orbit_bfs", || {
        match orbit_bfs_with(&cfg.group, &cfg.w0, bound, cfg.budgets.max_depth, &options(cfg)) {
            Ok(o) => Ok(Ok(o)),
            Err(OrbitError::OrbitBudget { limit, partial }) => Ok(Err((limit, *partial))),
            Err(e) => Err(e.into()),
        }
    })?;
    match result {
        Ok(orbit) if orbit.complete_below >= bound => Ok(orbit),
        Ok(orbit) => {
            ctx.write("orbit.partial.txt", &render_cache(&orbit, &cfg.group), true)?;
            Err(AppError::Budget(format!(
                "orbit is complete only below {} after depth {}; raise budgets.max_depth",
                orbit.complete_below, orbit.max_word_length
            )))
        }
        Err((limit, partial)) => {
            ctx.write("orbit.partial.txt", &render_cache(&partial, &cfg.group), true)?;
            Err(AppError::Budget(format!("orbit exceeded budgets.max_points = {limit}")))
        }
    }
}

/// Group ball `t ≤ log t_max`, saturated.
fn saturated_ball(cfg: &ExperimentConfig, ctx: &mut RunContext, t_max: f64) -> Result<GroupBall, AppError> {
    let radius = t_max.ln();
    let ball = ctx.stage("group_ball", || {
        Ok(group_ball_with(&cfg.group, radius, cfg.budgets.max_depth, &options(cfg))?)
    })?;
    if ball.complete_below + 1e-9 < radius {
        return Err(AppError::Budget(format!(
            "group ball is complete only below t = {} after depth {}; raise budgets.max_depth",
            ball.complete_below, ball.max_word_length
        )));
    }
    Ok(ball)
}

#[derive(Serialize)]
struct OrbitSummary {
    base: Vec<i64>,
    q_w0: i64,
    norm_bound: f64,
    count: usize,
    max_word_length: usize,
    complete_below: f64,
    exhausted: bool,
}

fn orbit(cfg: &ExperimentConfig, ctx: &mut RunContext) -> Result<(), AppError> {
    let bound = cfg.family.t_max();
    let orbit = saturated_orbit(cfg, ctx, bound)?;
    ctx.write("orbit.txt", &render_cache(&orbit, &cfg.group), false)?;
    let summary = OrbitSummary {
        base: orbit.base.clone(),
        q_w0: cfg.q_w0 as i64,
        norm_bound: bound,
        count: orbit.len(),
        max_word_length: orbit.max_word_length,
        complete_below: orbit.complete_below,
        exhausted: orbit.exhausted,
    };
    ctx.write("orbit_summary.json", &to_json(&summary), false)
}

/// Sector specs of the configured family, with their ids.
fn family_specs(cfg: &ExperimentConfig) -> Vec<(String, SectorSpec)> {
    let grid = cfg.family.t_grid.clone();
    let windows = &cfg.family.windows;
    match cfg.family.kind {
        FamilyKind::NormBall => vec![("ball".into(), SectorSpec::norm_ball(grid))],
        FamilyKind::Sector => windows
            .iter()
            .enumerate()
            .map(|(i, w)| (format!("w{i}"), SectorSpec::sector(w.clone(), grid.clone())))
            .collect(),
        FamilyKind::Bisector => {
            let mut out = Vec::new();
            for (i, a) in windows.iter().enumerate() {
                for (j, b) in windows.iter().enumerate() {
                    out.push((format!("w{i}|w{j}"), SectorSpec::bisector(a.clone(), b.clone(), grid.clone())));
                }
            }
            out
        }
    }
}

fn family_tables(cfg: &ExperimentConfig, ctx: &mut RunContext) -> Result<Vec<SectorTable>, AppError> {
    let t_max = cfg.family.t_max();
    let specs = family_specs(cfg);
    match cfg.family.source {
        Source::Orbit => {
            let orbit = saturated_orbit(cfg, ctx, t_max)?;
            ctx.stage("sector_counts", || {
                let geo = OrbitGeometry::new(&orbit, cfg.group.form());
                specs
                    .iter()
                    .map(|(id, spec)| Ok(sector_counts_orbit(&geo, spec, id)?))
                    .collect()
            })
        }
        Source::Ball => {
            let ball = saturated_ball(cfg, ctx, t_max)?;
            ctx.stage("sector_counts", || {
                let geo = BallGeometry::new(&ball, cfg.group.form());
                specs
                    .iter()
                    .map(|(id, spec)| Ok(sector_counts_ball(&geo, spec, id)?))
                    .collect()
            })
        }
    }
}

fn kind_name(kind: FamilyKind) -> &'static str {
    match kind {
        FamilyKind::NormBall => "norm_ball",
        FamilyKind::Sector => "sector",
        FamilyKind::Bisector => "bisector",
    }
}

fn count(cfg: &ExperimentConfig, ctx: &mut RunContext) -> Result<(), AppError> {
    let tables = family_tables(cfg, ctx)?;
    let mut csv = String::from("window_id,kind,T,count\n");
    for table in &tables {
        for (t, n) in table.t_grid.iter().zip(&table.counts) {
            writeln!(csv, "{},{},{},{n}", table.window_id, kind_name(cfg.family.kind), csv_float(*t)).expect("string");
        }
    }
    ctx.write("counts.csv", &csv, false)
}

#[derive(Serialize)]
struct ExponentReport {
    source: Source,
    fit: GrowthFit,
    abscissa: Option<AbscissaEstimate>,
    abscissa_error: Option<String>,
}

fn fit_counts(counts: &[(f64, f64)], window: (f64, f64)) -> Result<GrowthFit, AppError> {
    fit_exponent(counts, window).map_err(AppError::from)
}

fn exponent(cfg: &ExperimentConfig, ctx: &mut RunContext) -> Result<(), AppError> {
    let t_max = cfg.family.t_max();
    let grid = &cfg.family.t_grid;
    let window = cfg.family.fit_window;
    let report = match cfg.family.source {
        Source::Orbit => {
            let orbit = saturated_orbit(cfg, ctx, t_max)?;
            let fit = ctx.stage("fit", || fit_counts(&orbit.count_grid(grid), window))?;
            ExponentReport {
                source: Source::Orbit,
                fit,
                abscissa: None,
                abscissa_error: None,
            }
        }
        Source::Ball => {
            let ball = saturated_ball(cfg, ctx, t_max)?;
            let fit = ctx.stage("fit", || fit_counts(&ball.count_grid(grid), window))?;
            let s_max = cfg.group.form().n() as f64;
            let est = ctx.stage("poincare", || {
                Ok(poincare_abscissa(
                    &ball.displacements,
                    (window.0.ln(), window.1.ln()),
                    cfg.ps.shells,
                    &s_grid(s_max, 0.01),
                ))
            })?;
            let (abscissa, abscissa_error) = match est {
                Ok(a) => (Some(a), None),
                Err(e) => (None, Some(e.to_string())),
            };
            ExponentReport {
                source: Source::Ball,
                fit,
                abscissa,
                abscissa_error,
            }
        }
    };
    ctx.write("exponent.json", &to_json(&report), false)
}

#[derive(Serialize)]
struct WindowSummary {
    window_id: String,
    mass: f64,
    lebesgue: f64,
    admissible: bool,
    nearest_atom_distance: f64,
    degenerate: bool,
}

#[derive(Serialize)]
struct PsSummary {
    delta: f64,
    delta_fitted: bool,
    inner_radius: f64,
    atoms: usize,
    windows: Vec<WindowSummary>,
    report_pass: bool,
}

fn ps(cfg: &ExperimentConfig, ctx: &mut RunContext) -> Result<(), AppError> {
    if cfg.family.windows.len() < 2 {
        return Err(crate::config::ConfigError::Invalid {
            field: "family.windows".into(),
            message: "the sector report needs at least two windows".into(),
        }
        .into());
    }
    let t_max = cfg.family.t_max();
    let ball = saturated_ball(cfg, ctx, t_max)?;
    let (delta, fitted) = match cfg.ps.delta {
        Some(d) => (d, false),
        None => {
            let fit = fit_counts(&ball.count_grid(&cfg.family.t_grid), cfg.family.fit_window)?;
            (fit.exponent, true)
        }
    };
    let geo = BallGeometry::new(&ball, cfg.group.form());
    let nu = ctx.stage("ps_measure", || Ok(empirical_ps_annulus(&geo, delta, cfg.ps.inner_radius)?))?;
    let n = cfg.group.form().n();
    let mut windows = Vec::new();
    let mut families = Vec::new();
    for (i, w) in cfg.family.windows.iter().enumerate() {
        let id = format!("w{i}");
        let v = admissibility_check(w, &nu, cfg.ps.margin, cfg.ps.mass_floor)?;
        windows.push(WindowSummary {
            window_id: id.clone(),
            mass: v.mass,
            lebesgue: w.lebesgue(n),
            admissible: v.pass,
            nearest_atom_distance: v.nearest_atom_distance,
            degenerate: v.degenerate,
        });
        let spec = SectorSpec::sector(w.clone(), cfg.family.t_grid.clone());
        let table = sector_counts_ball(&geo, &spec, &id)?;
        families.push((spec, table));
    }
    let report = measure_ratio_report(&families, 0, Reference::Empirical(&nu), cfg.ps.tolerance)?;
    ctx.write("ps_report.csv", &report.to_csv(), false)?;
    if n == 2 && cfg.ps.bins > 0 {
        let mut csv = String::from("arc_start_deg,arc_end_deg,mass\n");
        let step = TAU / cfg.ps.bins as f64;
        for k in 0..cfg.ps.bins {
            let mass = nu.mass(&Window::circle_part(k, cfg.ps.bins));
            let (a, b) = (k as f64 * step, (k + 1) as f64 * step);
            writeln!(csv, "{},{},{}", csv_float(a.to_degrees()), csv_float(b.to_degrees()), csv_float(mass))
                .expect("string");
        }
        ctx.write("ps_histogram.csv", &csv, false)?;
    }
    let summary = PsSummary {
        delta,
        delta_fitted: fitted,
        inner_radius: cfg.ps.inner_radius,
        atoms: nu.atoms.len(),
        windows,
        report_pass: report.pass,
    };
    ctx.write("ps_measure.json", &to_json(&summary), false)
}

#[derive(Serialize)]
struct PairSummary {
    d1: u64,
    d2: u64,
    g_equal: bool,
    crt_defect: String,
}

#[derive(Serialize)]
struct DimensionSummary {
    r: f64,
    windows: usize,
    w_min: u64,
    z_max: u64,
    max_deviation: f64,
    worst: (u64, u64),
}

#[derive(Serialize)]
struct LocalSummary {
    factors: Vec<String>,
    moduli: usize,
    bad_primes: Vec<u64>,
    pairs: Vec<PairSummary>,
    multiplicative: bool,
    dimension: Option<DimensionSummary>,
    dimension_error: Option<String>,
}

fn density_table(cfg: &ExperimentConfig, extra_primes_below: u64) -> Result<LocalDensityTable, AppError> {
    let mut moduli = squarefree_up_to(cfg.sieve.moduli_max);
    moduli.extend(primes_below(extra_primes_below));
    moduli.sort_unstable();
    moduli.dedup();
    let mut table =
        LocalDensityTable::build(&cfg.group, &cfg.w0, &cfg.sieve.f, &moduli, cfg.budgets.orbit_cap)?;
    table.discover_bad_primes(cfg.sieve.moduli_max)?;
    Ok(table)
}

fn sieve_local(cfg: &ExperimentConfig, ctx: &mut RunContext) -> Result<(), AppError> {
    let s = &cfg.sieve;
    let mut table = ctx.stage("densities", || {
        let mut moduli = squarefree_up_to(s.moduli_max);
        moduli.extend(primes_below(s.primes_max + 1));
        moduli.sort_unstable();
        moduli.dedup();
        Ok(LocalDensityTable::build(&cfg.group, &cfg.w0, &s.f, &moduli, cfg.budgets.orbit_cap)?)
    })?;
    let verdicts = ctx.stage("bad_primes", || Ok(table.discover_bad_primes(s.moduli_max)?))?;
    ctx.write("local_density.csv", &table.to_csv(), false)?;
    let windows = integer_windows(s.dimension_w_min, s.primes_max);
    let fit = ctx.stage("dimension", || {
        Ok(sieve_dimension_fit(|p| table.prime_density(p), s.f.r as f64, &windows))
    })?;
    let (dimension, dimension_error) = match fit {
        Ok(fit) => (
            Some(DimensionSummary {
                r: fit.r,
                windows: fit.windows.len(),
                w_min: s.dimension_w_min,
                z_max: s.primes_max,
                max_deviation: fit.max_deviation,
                worst: fit.worst,
            }),
            None,
        ),
        Err(e) => (None, Some(e.to_string())),
    };
    let summary = LocalSummary {
        factors: s.factors.clone(),
        moduli: table.entries.len(),
        bad_primes: table.bad_primes.iter().copied().collect(),
        multiplicative: verdicts.iter().all(|v| v.g_equal()),
        pairs: verdicts
            .iter()
            .map(|v| PairSummary {
                d1: v.d1,
                d2: v.d2,
                g_equal: v.g_equal(),
                crt_defect: v.crt_defect().to_string(),
            })
            .collect(),
        dimension,
        dimension_error,
    };
    ctx.write("sieve_local.json", &to_json(&summary), false)
}

fn instance(cfg: &ExperimentConfig, ctx: &mut RunContext, t: f64) -> Result<SieveInstance, AppError> {
    let orbit = saturated_orbit(cfg, ctx, t)?;
    ctx.stage("instance", || Ok(SieveInstance::from_orbit(&orbit, &cfg.sieve.f, t)?))
}

fn sieve_run(cfg: &ExperimentConfig, ctx: &mut RunContext) -> Result<(), AppError> {
    let s = &cfg.sieve;
    let inst = instance(cfg, ctx, s.t)?;
    let z = s.z.unwrap_or_else(|| default_z(inst.x(), s.f.r).max(2.0));
    let table = ctx.stage("densities", || density_table(cfg, z.ceil() as u64 + 1))?;
    let run = ctx.stage("legendre", || Ok(legendre_sieve(&inst, &table, z, s.mode, s.level)?))?;
    ctx.write("sieve_run.json", &to_json(&run), false)
}

#[derive(Serialize)]
struct AlmostSummary {
    factors: Vec<String>,
    big_r: u32,
    r: usize,
    skipped: usize,
    prime_constant_spread_top_decade: Option<f64>,
}

fn almost_prime(cfg: &ExperimentConfig, ctx: &mut RunContext) -> Result<(), AppError> {
    let s = &cfg.sieve;
    let t = *s.t_grid.last().expect("validated nonempty");
    let inst = instance(cfg, ctx, t)?;
    let table = ctx.stage("almost_primes", || {
        Ok(almost_prime_count(&inst, &s.f, s.big_r, &s.t_grid, &cfg.factor_config())?)
    })?;
    let mut csv = String::from("T,X,nonzero,almost_primes,primes,c_almost,c_prime\n");
    for r in &table.rows {
        writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            csv_float(r.t),
            r.points,
            r.nonzero,
            r.almost_primes,
            r.primes,
            csv_float(r.c_almost),
            csv_float(r.c_prime)
        )
        .expect("string");
    }
    ctx.write("almost_prime.csv", &csv, !table.skipped.is_empty())?;
    let summary = AlmostSummary {
        factors: s.factors.clone(),
        big_r: table.big_r,
        r: table.r,
        skipped: table.skipped.len(),
        prime_constant_spread_top_decade: table.prime_constant_spread(t / 10.0),
    };
    ctx.write("almost_prime.json", &to_json(&summary), !table.skipped.is_empty())?;
    if !table.skipped.is_empty() {
        return Err(AppError::Budget(format!(
            "{} points exceeded the rho budget and were left out",
            table.skipped.len()
        )));
    }
    Ok(())
}

fn oracle_fixtures(cfg: &ExperimentConfig, ctx: &mut RunContext) -> Result<(), AppError> {
    let gens: Vec<Vec<Vec<i64>>> = cfg.group.integer_generators().iter().map(|g| g.to_rows()).collect();
    let fp = ctx.stage("fp_closure", || {
        let mut csv = String::from("p,orbit_size,zero_count\n");
        for p in primes_below(cfg.sieve.primes_max + 1) {
            let closure = oracle::fp_orbit_closure(&gens, &cfg.w0, p).map_err(|e| AppError::Compute(e.to_string()))?;
            let zeros = closure.iter().filter(|x| cfg.sieve.f.eval_mod(x, p) == 0).count();
            writeln!(csv, "{p},{},{zeros}", closure.len()).expect("string");
        }
        Ok(csv)
    })?;
    ctx.write("oracle_fp.csv", &fp, false)?;

    let t_max = cfg.family.t_max();
    let (form_hash, gens_hash) = (cfg.group.form().hash_hex(), cfg.group.hash_hex());
    let level = i64::try_from(cfg.q_w0).map_err(|_| AppError::Compute("Q(w0) overflows i64".into()))?;
    let quadric = ctx.stage("quadric", || {
        oracle::enumerate_quadric(&cfg.group.form().gram().to_rows(), level, t_max.floor() as i64).map_err(|e| match e {
            oracle::OracleError::BudgetExceeded(m) => AppError::Budget(m),
            e => AppError::Compute(e.to_string()),
        })
    })?;
    let rows: Vec<Vec<i64>> = quadric
        .points
        .into_iter()
        .filter(|x| x.iter().map(|&v| (v as f64).powi(2)).sum::<f64>() <= t_max * t_max)
        .collect();
    ctx.write(
        "oracle_quadric.txt",
        &oracle::render_fixture(&form_hash, &gens_hash, &cfg.w0, 0, t_max, &rows),
        false,
    )?;

    if cfg.preset.as_deref() == Some("pythagorean_full") && cfg.w0 == [3, 4, 5] {
        let points = ctx.stage("euclid", || Ok(oracle::pythagorean_orbit_points(t_max)))?;
        ctx.write(
            "oracle_orbit.txt",
            &oracle::render_fixture(&form_hash, &gens_hash, &cfg.w0, 0, t_max, &points),
            false,
        )?;
        let primes = points.iter().filter(|p| oracle::is_prime(p[2] as u64)).count();
        ctx.write("oracle_prime_hypotenuse.json", &to_json(&serde_json::json!({ "T": t_max, "points": primes })), false)?;
    }
    Ok(())
}

fn verify_all(ctx: &mut RunContext) -> Result<(), AppError> {
    let scratch = ctx.out.join("determinism");
    let results = verify::run_all(&scratch, |r| println!("{}", r.line()));
    let mut text = String::new();
    for r in &results {
        writeln!(text, "{}", r.line()).expect("string");
    }
    ctx.write("verify.txt", &text, false)?;
    ctx.write("verify.json", &to_json(&results), false)?;
    let failed: Vec<String> = results.iter().filter(|r| !r.pass).map(|r| r.id.to_string()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(AppError::Verification(format!("criteria {} failed", failed.join(", "))))
    }
}
