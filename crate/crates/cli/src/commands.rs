use std::path::Path;

use cosserat_plate::dispersion::{
    cutoff_frequencies, dispersion_curves, log_linear_magnitudes, spectrum, Cutoffs, DEFAULT_DIRECTIONS,
};
use cosserat_plate::dynamics::{assemble, Edge, FIELDS};
use cosserat_plate::material::{technical_constants_with, TechnicalConstants};
use cosserat_plate::operators::{
    build_extensional, build_flexural, literal_extensional, literal_flexural, tabulated_row_scales,
    ExtensionalOperator, FlexuralOperator, KTable, KappaTable, Symbol,
};
use cosserat_plate::plate_fields::{inertia_constants_with, InertiaSet};
use cosserat_plate::verify::{run_all, FIELD_NAMES};
use cosserat_plate::{Error, MaterialParams};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{digest, RunConfig};
use crate::output::{num, Csv, Sink};
use crate::CliError;

pub struct Flags<'a> {
    pub out: &'a Path,
    pub seed: u64,
    pub literal: bool,
}

/// Ok(true) on success, Ok(false) when a check ran but failed (exit 1).
pub type Outcome = Result<bool, CliError>;

fn constants(cfg: &RunConfig) -> Result<(TechnicalConstants, InertiaSet), Error> {
    let m = cfg.material();
    Ok((
        technical_constants_with(&m, cfg.geometry.h, cfg.options.shear)?,
        inertia_constants_with(&m, cfg.geometry.h, cfg.options.micro_inertia)?,
    ))
}

fn no_literal(flags: &Flags, command: &str) -> Result<(), CliError> {
    if flags.literal {
        return Err(CliError::Config(format!(
            "--paper-literal-operators applies to `dispersion` and `verify`, not `{command}`"
        )));
    }
    Ok(())
}

pub fn validate(cfg: &RunConfig, flags: &Flags) -> Outcome {
    no_literal(flags, "validate")?;
    let report = cfg.material().validate();
    let model_error = cfg.model().validate().err().filter(|_| report.is_admissible()).map(|e| e.to_string());
    println!("material: {report}");
    if let Some(e) = &model_error {
        println!("model: {e}");
    }
    #[derive(Serialize)]
    struct Validation<'a> {
        admissible: bool,
        violations: Vec<&'static str>,
        model_error: &'a Option<String>,
    }
    let sink = Sink::new(flags.out, cfg.hash())?;
    sink.json(
        "validation.json",
        &Validation { admissible: report.is_admissible(), violations: report.labels(), model_error: &model_error },
    )?;
    if !report.is_admissible() {
        return Err(CliError::Config(format!("inadmissible material: {report}")));
    }
    if let Some(e) = model_error {
        return Err(CliError::Config(e));
    }
    Ok(true)
}

pub fn constants_cmd(cfg: &RunConfig, flags: &Flags) -> Outcome {
    no_literal(flags, "constants")?;
    let (tc, inertia) = constants(cfg)?;
    let k = KTable::printed(&tc);
    let kappa = KappaTable::printed(&tc);
    println!("technical constants");
    for (name, v) in [
        ("h", tc.h),
        ("E", tc.e),
        ("nu", tc.nu),
        ("G", tc.g),
        ("D", tc.d),
        ("l_t", tc.l_t),
        ("l_b", tc.l_b),
        ("N", tc.n),
        ("Psi", tc.psi_polar),
        ("kappa1^2", tc.kappa1_sq),
        ("kappa2^2", tc.kappa2_sq),
    ] {
        println!("  {name:<9} = {v}");
    }
    println!("inertia");
    for (name, v) in [
        ("I_o", inertia.i_o),
        ("rho_o", inertia.rho_o),
        ("I_o1", inertia.i_o1),
        ("I_o2", inertia.i_o2),
        ("J3*", inertia.j3_s),
        ("I_o3", inertia.i_o3),
    ] {
        println!("  {name:<9} = {v}");
    }
    println!("k table");
    for (i, v) in k.k.iter().enumerate() {
        println!("  k{:<8} = {v}", i + 1);
    }
    println!("kappa table");
    for (i, v) in kappa.kappa.iter().enumerate() {
        println!("  kappa{:<4} = {v}", i + 1);
    }
    #[derive(Serialize)]
    struct Constants {
        technical: TechnicalConstants,
        inertia: InertiaSet,
        k: [f64; 14],
        kappa: [f64; 5],
    }
    Sink::new(flags.out, cfg.hash())?.json(
        "constants.json",
        &Constants { technical: tc, inertia, k: k.k, kappa: kappa.kappa },
    )?;
    Ok(true)
}

fn field_header(lead: &[&str]) -> Csv {
    let header: Vec<&str> = lead.iter().copied().chain(FIELD_NAMES).collect();
    Csv::new(&header)
}

pub fn static_cmd(cfg: &RunConfig, flags: &Flags) -> Outcome {
    no_literal(flags, "static")?;
    let model = assemble(&cfg.model())?;
    let sol = model.static_solve()?;
    let g = &model.grid;
    let mut csv = field_header(&["i", "j", "x", "y"]);
    for k in 0..g.nodes() {
        let (i, j) = g.ij(k);
        let (x, y) = g.coords(k);
        let mut row = vec![i.to_string(), j.to_string(), num(x), num(y)];
        row.extend((0..FIELDS).map(|f| num(sol.values[FIELDS * k + f])));
        csv.push(row);
    }
    let center = g.index(g.nx / 2, g.ny / 2);
    let w_center = sol.values[FIELDS * center + 2];
    let w_max = (0..g.nodes()).map(|k| sol.values[FIELDS * k + 2].abs()).fold(0.0, f64::max);
    println!("static solve: {} unknowns, residual {:.3e} (rhs {:.3e})", sol.values.len(), sol.residual_inf, sol.rhs_inf);
    println!("W at centre node = {w_center:e}, max |W| = {w_max:e}");
    #[derive(Serialize)]
    struct Summary<'a> {
        config: &'a RunConfig,
        residual_inf: f64,
        rhs_inf: f64,
        w_center: f64,
        w_max_abs: f64,
    }
    let sink = Sink::new(flags.out, cfg.hash())?;
    sink.csv("static.csv", &csv)?;
    sink.json(
        "static_summary.json",
        &Summary { config: cfg, residual_inf: sol.residual_inf, rhs_inf: sol.rhs_inf, w_center, w_max_abs: w_max },
    )?;
    Ok(true)
}

pub fn simulate(cfg: &RunConfig, flags: &Flags) -> Outcome {
    no_literal(flags, "simulate")?;
    if !(cfg.time.t_final > 0.0) {
        return Err(CliError::Config(format!("time.t_final must be positive (got {})", cfg.time.t_final)));
    }
    let model = assemble(&cfg.model())?;
    let stable = model.stable_dt();
    let dt = match cfg.time.dt {
        Some(dt) if !(dt > 0.0) => return Err(CliError::Config(format!("time.dt must be positive (got {dt})"))),
        Some(dt) => dt,
        None => stable,
    };
    let steps = (cfg.time.t_final / dt).ceil() as usize;
    let g = &model.grid;
    let n = model.system.n;
    let (mut h0, mut v0) = (vec![0.0; n], vec![0.0; n]);
    for k in 0..g.nodes() {
        let (x, y) = g.coords(k);
        h0[FIELDS * k + 2] = cfg.initial.w.eval(x, y, 0.0);
        v0[FIELDS * k + 2] = cfg.initial.w_velocity.eval(x, y, 0.0);
    }
    let s0 = model.initial_state(&h0, &v0)?;
    let traj = model.simulate(s0, dt, steps, cfg.time.cadence)?;

    let mut energy = Csv::new(&["step", "t", "kinetic", "strain", "external_work", "total"]);
    for (i, r) in traj.log.rows.iter().enumerate() {
        energy.push(vec![i.to_string(), num(r.t), num(r.kinetic), num(r.strain), num(r.external_work), num(r.total)]);
    }
    let mut snaps = field_header(&["t", "i", "j", "x", "y"]);
    for s in &traj.snapshots {
        for k in 0..g.nodes() {
            let (i, j) = g.ij(k);
            let (x, y) = g.coords(k);
            let mut row = vec![num(s.time), i.to_string(), j.to_string(), num(x), num(y)];
            row.extend((0..FIELDS).map(|f| num(s.h[FIELDS * k + f])));
            snaps.push(row);
        }
    }
    let mut warnings: Vec<String> = traj.snapshots.iter().filter_map(|s| s.warning.clone()).collect();
    warnings.dedup();
    if Edge::ALL.iter().any(|e| !cfg.bc.get(*e).is_displacement()) {
        warnings.push("traction edges are collocated; the logged energy balance carries an O(dx) boundary error".into());
    }
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let last = traj.log.rows.last().copied();
    println!(
        "simulated {steps} steps of dt = {dt:e} (stable {stable:e}); relative drift {:.3e}",
        traj.log.relative_drift()
    );
    #[derive(Serialize)]
    struct Summary<'a> {
        config: &'a RunConfig,
        dt: f64,
        stable_dt: f64,
        steps: usize,
        relative_drift: f64,
        final_drift: f64,
        final_energy: Option<cosserat_plate::dynamics::EnergyRow>,
        warnings: Vec<String>,
    }
    let sink = Sink::new(flags.out, cfg.hash())?;
    sink.csv("energy.csv", &energy)?;
    sink.csv("snapshots.csv", &snaps)?;
    sink.json(
        "summary.json",
        &Summary {
            config: cfg,
            dt,
            stable_dt: stable,
            steps,
            relative_drift: traj.log.relative_drift(),
            final_drift: traj.log.final_drift(),
            final_energy: last,
            warnings,
        },
    )?;
    Ok(true)
}

fn directions(cfg: &RunConfig) -> Result<Vec<[f64; 2]>, CliError> {
    let dirs = cfg.dispersion.directions.clone().unwrap_or_else(|| DEFAULT_DIRECTIONS.to_vec());
    dirs.iter()
        .map(|d| {
            let n = d[0].hypot(d[1]);
            if n > 0.0 && n.is_finite() {
                Ok([d[0] / n, d[1] / n])
            } else {
                Err(CliError::Config(format!("dispersion.directions: {d:?} is not a direction")))
            }
        })
        .collect()
}

/// Symbols with masses scaled like their rows, so the printed tables share the eigenproblem.
fn literal_symbols(tc: &TechnicalConstants, flex: &FlexuralOperator, ext: &ExtensionalOperator) -> ((Symbol<6>, [f64; 6]), (Symbol<3>, [f64; 3])) {
    let (fs, es) = tabulated_row_scales(tc);
    (
        (literal_flexural(tc), std::array::from_fn(|r| flex.mass[r] * fs[r])),
        (literal_extensional(tc), std::array::from_fn(|r| ext.mass[r] * es[r])),
    )
}

pub fn dispersion(cfg: &RunConfig, flags: &Flags) -> Outcome {
    let (tc, inertia) = constants(cfg)?;
    let flex = build_flexural(&tc, &inertia);
    let ext = build_extensional(&tc, &inertia);
    let ds = &cfg.dispersion;
    if ds.samples == 0 {
        return Err(CliError::Config("dispersion.samples must be at least 1".into()));
    }
    let k_max = ds.k_max.unwrap_or(20.0 / cfg.geometry.h);
    if !(k_max > 0.0 && k_max.is_finite()) {
        return Err(CliError::Config(format!("dispersion.k_max must be positive (got {k_max})")));
    }
    let dirs = directions(cfg)?;
    let ks = log_linear_magnitudes(k_max, ds.samples);
    let xi: Vec<(usize, f64, [f64; 2])> = dirs
        .iter()
        .enumerate()
        .flat_map(|(d, dir)| ks.iter().map(move |&k| (d, k, [k * dir[0], k * dir[1]])))
        .collect();
    let mut csv = Csv::new(&["direction", "dir_x", "dir_y", "k", "subsystem", "branch", "omega", "status"]);
    let sink = Sink::new(flags.out, format!("{}{}", cfg.hash(), if flags.literal { "-literal" } else { "" }))?;

    if flags.literal {
        let ((fsym, fmass), (esym, emass)) = literal_symbols(&tc, &flex, &ext);
        let rows: Vec<Vec<Vec<String>>> = xi
            .par_iter()
            .map(|&(d, k, x)| {
                let mut out = Vec::new();
                let mut emit = |tag: &str, r: Result<Vec<f64>, Error>, n: usize| match r {
                    Ok(w) => {
                        for (b, w) in w.iter().enumerate() {
                            out.push(vec![d.to_string(), num(dirs[d][0]), num(dirs[d][1]), num(k), tag.into(), b.to_string(), num(*w), "ok".into()]);
                        }
                    }
                    Err(e) => {
                        for b in 0..n {
                            out.push(vec![d.to_string(), num(dirs[d][0]), num(dirs[d][1]), num(k), tag.into(), b.to_string(), "nan".into(), e.to_string()]);
                        }
                    }
                };
                emit("flexural", spectrum(&fsym, &fmass, x, false).map(|s| s.omega), 6);
                emit("extensional", spectrum(&esym, &emass, x, false).map(|s| s.omega), 3);
                out
            })
            .collect();
        let bad = rows.iter().flatten().filter(|r| r[7] != "ok").count();
        for r in rows.into_iter().flatten() {
            csv.push(r);
        }
        sink.csv("dispersion_literal.csv", &csv)?;
        println!("printed-table dispersion: {} rows, {bad} at non-conservative wavevectors", csv.rows.len());
        return Ok(true);
    }

    let pts: Vec<[f64; 2]> = xi.iter().map(|p| p.2).collect();
    let res = dispersion_curves(&flex, &ext, &pts, ds.modes)?;
    for (i, &(d, k, _)) in xi.iter().enumerate() {
        for (tag, branches) in [("flexural", &res.flexural_branches[i]), ("extensional", &res.extensional_branches[i])] {
            for (b, w) in branches.iter().enumerate() {
                csv.push(vec![d.to_string(), num(dirs[d][0]), num(dirs[d][1]), num(k), tag.into(), b.to_string(), num(*w), "ok".into()]);
            }
        }
    }
    #[derive(Serialize)]
    struct CutoffReport {
        flexural: Cutoffs,
        extensional: Cutoffs,
    }
    let cut = CutoffReport {
        flexural: cutoff_frequencies(&flex.symbol, &flex.mass)?,
        extensional: cutoff_frequencies(&ext.symbol, &ext.mass)?,
    };
    sink.csv("dispersion.csv", &csv)?;
    sink.json("cutoffs.json", &cut)?;
    if ds.modes {
        sink.json("modes.json", &res)?;
    }
    println!(
        "dispersion: {} wavevectors; flexural cutoffs {:?}; extensional cutoffs {:?}",
        pts.len(),
        cut.flexural.omega,
        cut.extensional.omega
    );
    Ok(true)
}

pub fn verify(flags: &Flags) -> Outcome {
    let (reports, diff) = run_all(flags.seed);
    let mut checks = Csv::new(&["id", "suite", "passed", "check", "value", "threshold", "bound"]);
    for r in &reports {
        println!("{} [{:.1}s]", r.line(), r.seconds);
        for c in &r.checks {
            checks.push(vec![
                r.id.to_string(),
                r.name.clone(),
                c.passed().to_string(),
                c.label.clone(),
                num(c.value),
                num(c.threshold),
                if c.upper_bound { "max" } else { "min" }.into(),
            ]);
        }
    }
    let mut table = Csv::new(&["entry", "paper_value_expr", "paper_value", "oracle_value", "abs_diff"]);
    for d in &diff {
        table.push(vec![d.entry.clone(), d.printed_expr.clone(), num(d.printed_value), num(d.oracle_value), num(d.abs_diff)]);
        if flags.literal && d.abs_diff > 0.0 {
            println!("  {:<8} printed {:<28} {:>13.6e}  derived {:>13.6e}", d.entry, d.printed_expr, d.printed_value, d.oracle_value);
        }
    }
    let sink = Sink::new(flags.out, digest(&format!("verify seed={}", flags.seed)))?;
    sink.csv("verify.csv", &checks)?;
    sink.csv("coefficient_diff.csv", &table)?;
    let passed = reports.iter().filter(|r| r.passed()).count();
    println!("{passed} of {} suites pass", reports.len());
    Ok(passed == reports.len())
}

pub fn sweep(cfg: &RunConfig, flags: &Flags) -> Outcome {
    no_literal(flags, "sweep")?;
    let base = cfg.material();
    let tc0 = technical_constants_with(&base, cfg.geometry.h, cfg.options.shear)?;
    let s = &cfg.sweep;
    let k_ref = s.k_ref.unwrap_or(1.0 / cfg.geometry.h);
    let mut combos = Vec::new();
    for &n in &s.coupling {
        for &lt in &s.l_t {
            for &lb in &s.l_b {
                for &psi in &s.polar_ratio {
                    combos.push((n, lt, lb, psi));
                }
            }
        }
    }
    if combos.is_empty() {
        return Err(CliError::Config("sweep: every parameter list needs at least one value".into()));
    }
    let rows: Vec<Vec<Vec<String>>> = combos
        .par_iter()
        .map(|&(n, lt, lb, psi)| {
            let lead = [num(n), num(lt), num(lb), num(psi)];
            let m = MaterialParams::from_engineering(tc0.g, tc0.nu, n, lt, lb, psi, base.rho, base.j);
            let mut out = Vec::new();
            let report = m.validate();
            if !report.is_admissible() {
                let mut row = lead.to_vec();
                row.extend(["-".into(), "-".into(), "nan".into(), "nan".into(), "-".into(), report.to_string()]);
                out.push(row);
                return out;
            }
            let run = || -> Result<Vec<Vec<String>>, Error> {
                let tc = technical_constants_with(&m, cfg.geometry.h, cfg.options.shear)?;
                let i = inertia_constants_with(&m, cfg.geometry.h, cfg.options.micro_inertia)?;
                let f = build_flexural(&tc, &i);
                let e = build_extensional(&tc, &i);
                let mut rows = Vec::new();
                let cf = cutoff_frequencies(&f.symbol, &f.mass)?;
                let wf = spectrum(&f.symbol, &f.mass, [k_ref, 0.0], false)?.omega;
                let ce = cutoff_frequencies(&e.symbol, &e.mass)?;
                let we = spectrum(&e.symbol, &e.mass, [k_ref, 0.0], false)?.omega;
                for (tag, cut, w, names) in [("flexural", cf, wf, &FIELD_NAMES[..6]), ("extensional", ce, we, &FIELD_NAMES[6..])] {
                    for (b, (&cut_b, &w_b)) in cut.omega.iter().zip(&w).enumerate() {
                        let zero = cut.zero_modes.iter().find(|z| z.branch == b).map(|z| names[z.dominant_field]).unwrap_or("-");
                        let mut row = lead.to_vec();
                        row.extend([tag.into(), b.to_string(), num(cut_b), num(w_b), zero.into(), "ok".into()]);
                        rows.push(row);
                    }
                }
                Ok(rows)
            };
            match run() {
                Ok(r) => out.extend(r),
                Err(e) => {
                    let mut row = lead.to_vec();
                    row.extend(["-".into(), "-".into(), "nan".into(), "nan".into(), "-".into(), e.to_string()]);
                    out.push(row);
                }
            }
            out
        })
        .collect();
    let mut csv = Csv::new(&["coupling", "l_t", "l_b", "polar_ratio", "subsystem", "branch", "cutoff", "omega_at_k_ref", "zero_mode_field", "status"]);
    for r in rows.into_iter().flatten() {
        csv.push(r);
    }
    let skipped = csv.rows.iter().filter(|r| r[9] != "ok").count();
    Sink::new(flags.out, cfg.hash())?.csv("sweep.csv", &csv)?;
    println!("sweep: {} parameter sets, {skipped} inadmissible or failed, k_ref = {k_ref:e}", combos.len());
    Ok(true)
}
