//! The acceptance suite: nine checks run on the shipped presets, shared by
//! `orbitsieve verify` and the `acceptance` test target.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use orbitsieve_core::measures::{
    poincare_abscissa, s_grid, sector_counts_ball, BallGeometry, SectorSpec, Window,
};
use orbitsieve_core::orbit::{fit_exponent, geometric_grid, group_ball, orbit_bfs, GroupBall};
use orbitsieve_core::presets::{self, pythagorean_full, pythagorean_thin, sl2z_spin, PRESET_NAMES};
use orbitsieve_core::sieve::arith::{primes_below, squarefree_up_to};
use orbitsieve_core::sieve::{
    almost_prime_count, finite_orbit, integer_windows, legendre_sieve, reduce_generators, sieve_dimension_fit,
    FactorConfig, LocalDensityTable, PolynomialF, SieveInstance, SieveMode, DEFAULT_ORBIT_CAP,
};
use orbitsieve_oracle as oracle;

use crate::{run, ExperimentConfig, RawConfig, Subcommand, MANIFEST};

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {}. {}: {} ({:.1} s)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds
        )
    }
}

type Check = Result<(bool, String), String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Runs every criterion in order, reporting each result as it completes.
/// `scratch` receives the artifacts of the determinism runs.
pub fn run_all(scratch: &Path, mut report: impl FnMut(&CriterionResult)) -> Vec<CriterionResult> {
    let mut lattice: Option<GroupBall> = None;
    let mut out = Vec::new();
    let mut record = |id: u8, name: &'static str, check: &mut dyn FnMut() -> Check| {
        let start = Instant::now();
        let (pass, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
        let r = CriterionResult {
            id,
            name,
            pass,
            detail,
            seconds: start.elapsed().as_secs_f64(),
        };
        report(&r);
        out.push(r);
    };
    record(1, "orbit oracle equivalence", &mut orbit_oracle);
    record(2, "lattice exponent", &mut || {
        let ball = lattice_ball()?;
        let check = lattice_exponent(&ball);
        lattice = Some(ball);
        check
    });
    record(3, "thin-group self-consistency", &mut thin_consistency);
    record(4, "sector and bisector ratios", &mut || match &lattice {
        Some(ball) => bisector_ratios(ball),
        None => bisector_ratios(&lattice_ball()?),
    });
    record(5, "sieve exactness", &mut sieve_exactness);
    record(6, "local densities", &mut local_densities);
    record(7, "sieve dimension", &mut sieve_dimension);
    record(8, "almost primes", &mut almost_primes);
    record(9, "determinism", &mut || determinism(scratch));
    out
}

fn hypotenuse() -> PolynomialF {
    PolynomialF::parse(&["x3"], 3).expect("valid polynomial")
}

/// Criterion 1.
pub fn orbit_oracle() -> Check {
    let start = Instant::now();
    let t = 1e4;
    let orbit = orbit_bfs(&pythagorean_full(), &[3, 4, 5], t, 1_000_000).map_err(err)?;
    let secs = start.elapsed().as_secs_f64();
    let expected = oracle::pythagorean_orbit_points(t);
    let equal = orbit.points == expected;
    Ok((
        equal && orbit.complete_below >= t && secs <= 60.0,
        format!(
            "{} engine points, {} oracle points, sets {}, enumeration {secs:.2} s (limit 60 s)",
            orbit.len(),
            expected.len(),
            if equal { "equal" } else { "differ" }
        ),
    ))
}

fn lattice_ball() -> Result<GroupBall, String> {
    group_ball(&sl2z_spin(), 1e5f64.ln(), 100_000).map_err(err)
}

/// `(growth fit, Poincaré abscissa)` over `[a, b]`.
fn estimators(ball: &GroupBall, a: f64, b: f64, points: usize) -> Result<(f64, f64), String> {
    let fit = fit_exponent(&ball.count_grid(&geometric_grid(a, b, points)), (a, b)).map_err(err)?;
    let est = poincare_abscissa(&ball.displacements, (a.ln(), b.ln()), 6, &s_grid(2.0, 0.01)).map_err(err)?;
    Ok((fit.exponent, est.abscissa))
}

/// Criterion 2.
pub fn lattice_exponent(ball: &GroupBall) -> Check {
    let (fit, abscissa) = estimators(ball, 1e2, 1e5, 31)?;
    Ok((
        (fit - 1.0).abs() <= 0.05 && (abscissa - fit).abs() <= 0.05,
        format!(
            "{} elements; fit on [1e2, 1e5] = {fit:.4} (target 1.00 ± 0.05), abscissa = {abscissa:.4} (|Δ| = {:.4} ≤ 0.05)",
            ball.len(),
            (abscissa - fit).abs()
        ),
    ))
}

/// Criterion 3.
pub fn thin_consistency() -> Check {
    let ball = group_ball(&pythagorean_thin(), 1e8f64.ln(), 100_000).map_err(err)?;
    let (f1, a1) = estimators(&ball, 1e6, 1e7, 21)?;
    let (f2, a2) = estimators(&ball, 1e7, 1e8, 21)?;
    let pass = (f1 - f2).abs() <= 0.05 && (f1 - a1).abs() <= 0.05 && (f2 - a2).abs() <= 0.05;
    Ok((
        pass,
        format!(
            "fit [1e6,1e7] = {f1:.4}, [1e7,1e8] = {f2:.4} (|Δ| = {:.4}); abscissae {a1:.4}, {a2:.4} (|Δ| = {:.4}, {:.4}); all ≤ 0.05",
            (f1 - f2).abs(),
            (f1 - a1).abs(),
            (f2 - a2).abs()
        ),
    ))
}

/// Criterion 4.
pub fn bisector_ratios(ball: &GroupBall) -> Check {
    let geo = BallGeometry::new(ball, sl2z_spin().form());
    let grid = geometric_grid(1e2, 1e5, 31);
    let total = sector_counts_ball(&geo, &SectorSpec::norm_ball(grid.clone()), "ball").map_err(err)?;
    let quarters: Vec<Window> = (0..4).map(|k| Window::circle_part(k, 4)).collect();
    let mut sector_sum = vec![0u64; grid.len()];
    let mut bisector_sum = vec![0u64; grid.len()];
    let mut first = None;
    for a in &quarters {
        let sector = sector_counts_ball(&geo, &SectorSpec::sector(a.clone(), grid.clone()), "q").map_err(err)?;
        sector_sum.iter_mut().zip(&sector.counts).for_each(|(s, c)| *s += c);
        for b in &quarters {
            let spec = SectorSpec::bisector(a.clone(), b.clone(), grid.clone());
            let table = sector_counts_ball(&geo, &spec, "b").map_err(err)?;
            bisector_sum.iter_mut().zip(&table.counts).for_each(|(s, c)| *s += c);
            first.get_or_insert(table);
        }
    }
    let first = first.expect("sixteen bisectors");
    let last = grid.len() - 1;
    let ratio = first.counts[last] as f64 / total.counts[last] as f64;
    let additive = sector_sum == total.counts && bisector_sum == total.counts;
    Ok((
        (16.0 * ratio - 1.0).abs() <= 0.1 && additive,
        format!(
            "N(quarter, quarter)/N(ball) at T = 1e5: {}/{} = {ratio:.5}, 16·ratio = {:.4} (target 1 ± 0.1); additivity {} at all {} radii",
            first.counts[last],
            total.counts[last],
            16.0 * ratio,
            if additive { "exact" } else { "broken" },
            grid.len()
        ),
    ))
}

/// Criterion 5.
pub fn sieve_exactness() -> Check {
    let f = hypotenuse();
    let t = 2_000.0;
    let small_primes = primes_below(20);
    let mut runs = 0usize;
    let mut failures = Vec::new();
    for name in PRESET_NAMES {
        let preset = presets::by_name(name).expect("shipped preset");
        let orbit = orbit_bfs(&preset.group, &preset.w0, t, 100_000).map_err(err)?;
        let inst = SieveInstance::from_orbit(&orbit, &f, t).map_err(err)?;
        let table = LocalDensityTable::build(&preset.group, &preset.w0, &f, &small_primes, DEFAULT_ORBIT_CAP).map_err(err)?;
        let values: Vec<i128> = inst.points.iter().map(|x| f.eval(x).expect("small values")).collect();
        let zs = std::iter::once(2.0).chain(small_primes.iter().map(|&p| p as f64 + 0.5));
        for z in zs {
            let primes: Vec<u64> = small_primes.iter().copied().filter(|&p| (p as f64) < z).collect();
            let direct = values.iter().filter(|&&v| primes.iter().all(|&p| v % p as i128 != 0)).count() as u64;
            let exact = legendre_sieve(&inst, &table, z, SieveMode::Exact, None).map_err(err)?;
            runs += 1;
            if exact.s_exact != direct || exact.inclusion_exclusion != Some(direct as i64) {
                failures.push(format!("{name} z={z}: {:?} vs {direct}", exact.inclusion_exclusion));
            }
            for k in 1..=6 {
                let b = legendre_sieve(&inst, &table, z, SieveMode::Bonferroni(k), None).map_err(err)?;
                runs += 1;
                let s = direct as i64;
                let (lo, hi) = b.bounds.ok_or("missing Bonferroni bounds")?;
                let bk = b.truncated.ok_or("missing truncated sum")?;
                let side = if k % 2 == 0 { bk >= s } else { bk <= s };
                if !(lo <= s && s <= hi && side) {
                    failures.push(format!("{name} z={z} k={k}: {lo} <= {s} <= {hi}, B_k = {bk}"));
                }
            }
        }
    }
    Ok((
        failures.is_empty(),
        if failures.is_empty() {
            format!(
                "{} presets, z over every ω(P) = 0..{}, {runs} exact and Bonferroni (k = 1..6) runs all consistent",
                PRESET_NAMES.len(),
                small_primes.len()
            )
        } else {
            failures.join("; ")
        },
    ))
}

/// Criterion 6.
pub fn local_densities() -> Check {
    let group = pythagorean_full();
    let gens: Vec<Vec<Vec<i64>>> = group.integer_generators().iter().map(|g| g.to_rows()).collect();
    let mut mismatched = Vec::new();
    let primes = primes_below(32);
    for &p in &primes {
        let images = reduce_generators(&group, p).map_err(err)?;
        let engine = finite_orbit(&images, &[3, 4, 5], p, DEFAULT_ORBIT_CAP).map_err(err)?;
        let closure = oracle::fp_orbit_closure(&gens, &[3, 4, 5], p).map_err(err)?;
        if engine.points() != closure {
            mismatched.push(p);
        }
    }
    let mut table =
        LocalDensityTable::build(&group, &[3, 4, 5], &hypotenuse(), &squarefree_up_to(30), DEFAULT_ORBIT_CAP)
            .map_err(err)?;
    let verdicts = table.discover_bad_primes(30).map_err(err)?;
    let failing = verdicts.iter().filter(|v| !v.g_equal()).count();
    let bad: Vec<u64> = table.bad_primes.iter().copied().collect();
    Ok((
        mismatched.is_empty() && failing == 0 && !verdicts.is_empty(),
        format!(
            "finite orbits equal the oracle closure for {} primes ≤ 31 (mismatches {mismatched:?}); g multiplicative on {}/{} coprime pairs with d1·d2 ≤ 30; bad set S = {bad:?}",
            primes.len(),
            verdicts.len() - failing,
            verdicts.len()
        ),
    ))
}

/// Criterion 7.
pub fn sieve_dimension() -> Check {
    let primes = primes_below(1001);
    let table = LocalDensityTable::build(&pythagorean_full(), &[3, 4, 5], &hypotenuse(), &primes, DEFAULT_ORBIT_CAP)
        .map_err(err)?;
    let windows = integer_windows(10, 1000);
    let fit = sieve_dimension_fit(|p| table.prime_density(p), 1.0, &windows).map_err(err)?;
    Ok((
        fit.max_deviation < 2.0,
        format!(
            "max |Σ g(p) log p − log(z/w)| = {:.4} at (w, z) = {:?} over {} windows in [10, 1000] (limit 2.0)",
            fit.max_deviation,
            fit.worst,
            windows.len()
        ),
    ))
}

/// Criterion 8.
pub fn almost_primes() -> Check {
    let start = Instant::now();
    let t = 1e5;
    let f = hypotenuse();
    let orbit = orbit_bfs(&pythagorean_full(), &[3, 4, 5], t, 1_000_000).map_err(err)?;
    let inst = SieveInstance::from_orbit(&orbit, &f, t).map_err(err)?;
    let grid = geometric_grid(1e4, t, 11);
    let table = almost_prime_count(&inst, &f, 1, &grid, &FactorConfig::default()).map_err(err)?;
    let secs = start.elapsed().as_secs_f64();
    let last = table.rows.last().ok_or("empty table")?;
    let expected = oracle::prime_hypotenuse_points(t);
    let spread = table.prime_constant_spread(1e4).ok_or("no primes in the top decade")?;
    Ok((
        last.primes == expected && spread <= 2.0 && table.skipped.is_empty() && secs <= 300.0,
        format!(
            "{} prime-hypotenuse points at T = 1e5 (oracle {expected}); c(T) spread over [1e4, 1e5] = {spread:.4} (limit 2); {secs:.1} s (limit 300 s)",
            last.primes
        ),
    ))
}

const CONE_CONFIG: &str = r#"
[group]
preset = "pythagorean_full"

[family]
kind = "sector"
source = "orbit"
windows = [[[0, 90]], [[90, 180]], [[180, 270]], [[270, 360]]]
t_min = 10.0
t_max = 2000.0
points = 9

[sieve]
t = 2000.0
z = 12.0
moduli_max = 30
primes_max = 60
"#;

const LATTICE_CONFIG: &str = r#"
[group]
preset = "sl2z_spin"

[family]
kind = "bisector"
source = "ball"
windows = [[[0, 90]], [[90, 180]], [[180, 270]], [[270, 360]]]
t_min = 10.0
t_max = 1000.0
points = 7

[ps]
inner_radius = 2.0
"#;

/// Artifact bytes of a run directory, manifest excluded.
fn snapshot(dir: &Path) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(dir).map_err(err)? {
        let entry = entry.map_err(err)?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if name != MANIFEST {
            out.insert(name, std::fs::read(entry.path()).map_err(err)?);
        }
    }
    Ok(out)
}

/// Criterion 9.
pub fn determinism(scratch: &Path) -> Check {
    if scratch.exists() {
        std::fs::remove_dir_all(scratch).map_err(err)?;
    }
    let suites: [(&str, &str, &[Subcommand]); 2] = [
        (
            "cone",
            CONE_CONFIG,
            &[
                Subcommand::Orbit,
                Subcommand::Count,
                Subcommand::Exponent,
                Subcommand::SieveLocal,
                Subcommand::SieveRun,
                Subcommand::AlmostPrime,
                Subcommand::Oracle,
            ],
        ),
        ("lattice", LATTICE_CONFIG, &[Subcommand::Count, Subcommand::Exponent, Subcommand::Ps]),
    ];
    let workers = [1usize, 1, 4, 8];
    let mut artifacts = 0usize;
    let mut differing = Vec::new();
    for (label, text, subs) in suites {
        for &sub in subs {
            let mut reference: Option<BTreeMap<String, Vec<u8>>> = None;
            for (i, &w) in workers.iter().enumerate() {
                let mut raw = RawConfig::parse(text).map_err(err)?;
                raw.run.workers = w;
                let cfg = ExperimentConfig::from_raw(raw).map_err(err)?;
                let dir = scratch.join(format!("{label}-{}-{i}-w{w}", sub.name()));
                let outcome = run(sub, &cfg, &dir).map_err(err)?;
                if let Some(e) = outcome.error {
                    return Err(format!("{label} {}: {e}", sub.name()));
                }
                let snap = snapshot(&dir)?;
                match &reference {
                    None => {
                        artifacts += snap.len();
                        reference = Some(snap);
                    }
                    Some(r) if *r != snap => differing.push(format!("{label} {} (run {i}, {w} workers)", sub.name())),
                    Some(_) => {}
                }
            }
        }
    }
    Ok((
        differing.is_empty(),
        if differing.is_empty() {
            format!("{artifacts} artifacts from 10 subcommand runs byte-identical across reruns and workers 1, 4, 8")
        } else {
            format!("artifacts differ: {}", differing.join(", "))
        },
    ))
}
