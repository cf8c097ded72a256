use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use euph_core::oracle::{crosscheck_block, crosscheck_blocks, summarize, CrosscheckReport};
use euph_core::spectra::{
    self, energy_at, make_tables, spectroscopic_bound, Tables, CRITICAL_DECIMALS, INVERSION_DECIMALS,
};
use euph_core::wavefunctions::{build_state_with, count_nodes, Measure};
use euph_core::{DeformationModel, QuantumNumbers, Space, UnitSystem};
use rayon::prelude::*;

use crate::args::{Cli, Command, GlobalOpts, MeasureArg, ModelArg, Range, UnitsArg};
use crate::output::{plot_script, write_text, Cell, Dataset, Format};
use crate::Invalid;

/// Unit system plus the labels used in column headers.
struct Units {
    system: UnitSystem,
    si: bool,
}

impl Units {
    fn new(arg: UnitsArg) -> Self {
        match arg {
            UnitsArg::Hartree => Units {
                system: UnitSystem::HARTREE,
                si: false,
            },
            UnitsArg::Si => Units {
                system: UnitSystem::SI,
                si: true,
            },
        }
    }

    fn energy(&self) -> &'static str {
        if self.si {
            "J"
        } else {
            "Eh"
        }
    }

    fn length(&self) -> &'static str {
        if self.si {
            "m"
        } else {
            "a0"
        }
    }

    fn inverse_area(&self) -> &'static str {
        if self.si {
            "m^-2"
        } else {
            "a0^-2"
        }
    }

    fn momentum(&self) -> &'static str {
        if self.si {
            "kg m/s"
        } else {
            "hbar/a0"
        }
    }

    /// Converts a deformation given in Hartree units (a0^-2) to the output units.
    fn lambda_from_hartree(&self, lambda: f64) -> f64 {
        lambda / self.system.bohr_radius().powi(2)
    }

    fn lambda_to_hartree(&self, lambda: f64) -> f64 {
        lambda * self.system.bohr_radius().powi(2)
    }
}

struct Ctx {
    format: Format,
    dir: PathBuf,
    units: Units,
    written: Vec<PathBuf>,
}

impl Ctx {
    fn emit(&mut self, data: &Dataset) -> Result<()> {
        let path = data.write(&self.dir, self.format)?;
        self.written.push(path);
        Ok(())
    }

    fn emit_script(&mut self, name: &str, text: &str) -> Result<()> {
        let path = write_text(&self.dir, name, text)?;
        self.written.push(path);
        Ok(())
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let GlobalOpts { format, output, units } = cli.global;
    fs::create_dir_all(&output).with_context(|| format!("creating {}", output.display()))?;
    let mut ctx = Ctx {
        format,
        dir: output,
        units: Units::new(units),
        written: Vec::new(),
    };
    match cli.command {
        Command::Spectrum {
            model,
            lambda,
            bohr,
            n_max,
        } => spectrum(&mut ctx, model, lambda, bohr, n_max)?,
        Command::Tables { n_max } => tables(&mut ctx, n_max)?,
        Command::Figure1 { lambda, dx_range } => figure1(&mut ctx, lambda, dx_range)?,
        Command::Figure2 { lambda_range, levels } => figure2(&mut ctx, lambda_range, &levels)?,
        Command::Wavefunction {
            model,
            lambda,
            n,
            l,
            m,
            samples,
            measure,
        } => wavefunction(&mut ctx, model, lambda, QuantumNumbers::new(n, l, m)?, samples, measure)?,
        Command::Verify { lambdas, n_max } => verify(&mut ctx, &lambdas, n_max)?,
        Command::Bound { precision } => bound(&mut ctx, precision)?,
    }
    for p in &ctx.written {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn model(ctx: &Ctx, space: Space, lambda: f64) -> Result<DeformationModel> {
    if lambda == 0.0 {
        return Err(Invalid(
            "lambda = 0 is the undeformed limit; use `spectrum --bohr` (Bohr-limit mode) \
             or `figure2`, whose lambda range may start at 0"
                .into(),
        )
        .into());
    }
    Ok(DeformationModel::with_units(space, lambda, ctx.units.system)?)
}

fn check_n_max(n_max: u32, hi: u32) -> Result<()> {
    if !(1..=hi).contains(&n_max) {
        return Err(Invalid(format!("--n-max must be in 1..={hi}, got {n_max}")).into());
    }
    Ok(())
}

fn spectrum(ctx: &mut Ctx, model_arg: ModelArg, lambda: Option<f64>, bohr: bool, n_max: u32) -> Result<()> {
    check_n_max(n_max, 50)?;
    let space = Space::from(model_arg);
    let e = ctx.units.energy();
    let mut data = Dataset::new(
        "spectrum",
        &[
            ("model", ""),
            ("n", ""),
            ("l", ""),
            ("energy", e),
            ("bohr_term", e),
            ("correction", e),
        ],
    );
    let deformed = match (bohr, lambda) {
        (true, _) => None,
        (false, Some(lam)) => Some(model(ctx, space, lam)?),
        (false, None) => return Err(Invalid("--lambda is required unless --bohr is given".into()).into()),
    };
    for n in 1..=n_max {
        for l in 0..n {
            let qn = QuantumNumbers::nl(n, l)?;
            let (energy, bohr_term, correction) = match &deformed {
                Some(m) => {
                    let lvl = spectra::energy(m, qn);
                    (lvl.energy, lvl.bohr_term, lvl.correction)
                }
                None => {
                    let e0 = energy_at(space, 0.0, &ctx.units.system, qn)?;
                    (e0, e0, 0.0)
                }
            };
            data.push(vec![
                space.label().into(),
                n.into(),
                l.into(),
                energy.into(),
                bohr_term.into(),
                correction.into(),
            ]);
        }
    }
    if deformed.is_none() {
        data.note("undeformed Bohr levels (lambda = 0)");
    }
    ctx.emit(&data)
}

/// Erratum flag for a critical-deformation cell, if any.
fn critical_note(n: u32, l: u32) -> Option<&'static str> {
    ((n, l) == (3, 0)).then_some("closed form 1/72 = 0.0139; a published value 0.1389 is a misprint")
}

fn tables(ctx: &mut Ctx, n_max: u32) -> Result<()> {
    if !(2..=20).contains(&n_max) {
        return Err(Invalid(format!("--n-max must be in 2..=20, got {n_max}")).into());
    }
    let t = make_tables(n_max)?;
    let unit = ctx.units.inverse_area();
    let wide = |name: &str, pick: &dyn Fn(&Tables, u32, u32) -> Option<f64>, decimals: usize| {
        let l_names: Vec<String> = (0..n_max).map(|l| format!("l={l}")).collect();
        let mut cols: Vec<(&str, &str)> = vec![("n", "")];
        cols.extend(l_names.iter().map(|s| (s.as_str(), unit)));
        let mut d = Dataset::new(name, &cols);
        for n in 2..=n_max {
            let mut row: Vec<Cell> = vec![n.into()];
            for l in 0..n_max {
                row.push(match pick(&t, n, l) {
                    Some(v) if ctx.units.si => Cell::Num(ctx.units.lambda_from_hartree(v)),
                    Some(v) => Cell::Fixed(v, decimals),
                    None => Cell::Empty,
                });
            }
            d.push(row);
        }
        d
    };
    let mut critical = wide("table_critical", &|t, n, l| t.critical_at(n, l), CRITICAL_DECIMALS);
    critical.note("AdS deformation at which E(n, l) = 0");
    if let Some(note) = critical_note(3, 0).filter(|_| n_max >= 3) {
        critical.note(format!("(3,0): {note}"));
    }
    let mut inversion = wide("table_inversion", &|t, n, l| t.inversion_at(n, l), INVERSION_DECIMALS);
    inversion.note("dS deformation at which E(n, l) = E(1, 0)");

    let mut cells = Dataset::new(
        "table_cells",
        &[
            ("n", ""),
            ("l", ""),
            ("lambda_c", unit),
            ("lambda_f", unit),
            ("note", ""),
        ],
    );
    for n in 2..=n_max {
        for l in 0..n {
            let conv = |v: Option<f64>| Cell::from(v.map(|x| ctx.units.lambda_from_hartree(x)));
            cells.push(vec![
                n.into(),
                l.into(),
                conv(t.critical_at(n, l)),
                conv(t.inversion_at(n, l)),
                critical_note(n, l).map_or(Cell::Empty, Cell::from),
            ]);
        }
    }
    ctx.emit(&critical)?;
    ctx.emit(&inversion)?;
    ctx.emit(&cells)
}

fn figure1(ctx: &mut Ctx, lambda: f64, dx_range: Range) -> Result<()> {
    if dx_range.start <= 0.0 {
        return Err(Invalid(format!("--dx-range must start above 0, got {}", dx_range.start)).into());
    }
    let ds = model(ctx, Space::DeSitter, lambda)?;
    let ads = model(ctx, Space::AntiDeSitter, lambda)?;
    let (len, p) = (ctx.units.length(), ctx.units.momentum());
    let mut data = Dataset::new(
        "figure1",
        &[("dx", len), ("dp_ds", p), ("dp_ads", p), ("dp_undeformed", p)],
    );
    let hbar = ctx.units.system.hbar;
    for dx in dx_range.points() {
        data.push(vec![
            dx.into(),
            ds.uncertainty_floor(dx)?.into(),
            ads.uncertainty_floor(dx)?.into(),
            (0.5 * hbar / dx).into(),
        ]);
    }
    data.note(format!("minimal momentum spread at lambda = {lambda}"));
    ctx.emit(&data)?;
    if ctx.format == Format::Csv {
        let script = plot_script(
            "figure1.csv",
            "Minimal momentum spread",
            &format!("dx [{len}]"),
            &format!("dp [{p}]"),
        );
        ctx.emit_script("figure1.py", &script)?;
    }
    Ok(())
}

fn figure2(ctx: &mut Ctx, range: Range, levels: &[u32]) -> Result<()> {
    if range.start < 0.0 {
        return Err(Invalid(format!("--lambda-range must start at or above 0, got {}", range.start)).into());
    }
    if levels.is_empty() || levels.iter().any(|&n| n == 0 || n > 50) {
        return Err(Invalid(format!("--levels must list n in 1..=50, got {levels:?}")).into());
    }
    let e = ctx.units.energy();
    let names: Vec<String> = levels
        .iter()
        .flat_map(|n| Space::BOTH.map(|s| format!("E_{}_n{n}", s.label())))
        .collect();
    let mut cols: Vec<(&str, &str)> = vec![("lambda", ctx.units.inverse_area())];
    cols.extend(names.iter().map(|s| (s.as_str(), e)));
    let mut data = Dataset::new("figure2", &cols);
    for lam in range.points() {
        let mut row: Vec<Cell> = vec![lam.into()];
        for &n in levels {
            let qn = QuantumNumbers::nl(n, 0)?;
            for space in Space::BOTH {
                row.push(energy_at(space, lam, &ctx.units.system, qn)?.into());
            }
        }
        data.push(row);
    }
    data.note("s-level energies E(n, 0)");
    ctx.emit(&data)?;
    if ctx.format == Format::Csv {
        let script = plot_script(
            "figure2.csv",
            "s-level energies",
            &format!("lambda [{}]", ctx.units.inverse_area()),
            &format!("E [{e}]"),
        );
        ctx.emit_script("figure2.py", &script)?;
    }
    Ok(())
}

fn wavefunction(
    ctx: &mut Ctx,
    model_arg: ModelArg,
    lambda: f64,
    qn: QuantumNumbers,
    samples: usize,
    measure: MeasureArg,
) -> Result<()> {
    if !(2..=1_000_000).contains(&samples) {
        return Err(Invalid(format!("--samples must be in 2..=1000000, got {samples}")).into());
    }
    let m = model(ctx, model_arg.into(), lambda)?;
    let measure = Measure::from(measure);
    let state = build_state_with(&m, qn, measure)?;
    let len = ctx.units.length();
    let r_unit = format!("{len}^-1");
    let psi_unit = format!("{len}^-3/2");
    let mut data = Dataset::new(
        "wavefunction",
        &[("r", len), ("R", r_unit.as_str()), ("radial", psi_unit.as_str())],
    );
    let extent = state.sampling_extent();
    for i in 0..samples {
        let r = extent * (i as f64 + 0.5) / samples as f64;
        let big_r = state.radial_function(r)?;
        data.push(vec![r.into(), big_r.into(), (big_r / r.sqrt()).into()]);
    }
    let nodes = count_nodes(&state, samples.max(1000))?;
    let norm = state.norm(1e-12)?;
    let mut summary = Dataset::new("wavefunction_summary", &[("quantity", ""), ("value", ""), ("unit", "")]);
    let rows: Vec<(&str, Cell, &str)> = vec![
        ("model", m.space().label().into(), ""),
        ("lambda", lambda.into(), ctx.units.inverse_area()),
        ("n", qn.n.into(), ""),
        ("l", qn.l.into(), ""),
        ("m", Cell::Int(qn.m.into()), ""),
        ("n_r", qn.n_r().into(), ""),
        ("energy", state.energy.energy.into(), ctx.units.energy()),
        ("delta", state.delta().into(), ""),
        ("eta", state.params.eta.into(), ""),
        (
            "measure",
            if measure == Measure::Flat { "flat" } else { "natural" }.into(),
            "",
        ),
        ("norm", norm.into(), ""),
        ("nodes", nodes.into(), ""),
    ];
    for (q, v, u) in rows {
        summary.push(vec![q.into(), v, u.into()]);
    }
    ctx.emit(&data)?;
    ctx.emit(&summary)?;
    println!("{} n={} l={}: {nodes} nodes, norm {norm:.12}", m.space(), qn.n, qn.l);
    Ok(())
}

/// Worker count from EUPH_THREADS, if set.
fn thread_cap() -> Result<Option<usize>> {
    match std::env::var("EUPH_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Invalid(format!("EUPH_THREADS must be a positive integer, got '{v}'")).into()),
        },
    }
}

fn verify(ctx: &mut Ctx, lambdas: &[f64], n_max: u32) -> Result<()> {
    if lambdas.is_empty() {
        return Err(Invalid("--lambdas must not be empty".into()).into());
    }
    let hartree: Vec<f64> = lambdas.iter().map(|&l| ctx.units.lambda_to_hartree(l)).collect();
    for &l in lambdas {
        model(ctx, Space::DeSitter, l)?;
    }
    let blocks = crosscheck_blocks(&hartree, n_max)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap()? {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().context("building the worker pool")?;
    // collect() keeps block order, so output does not depend on scheduling
    let cells: Vec<_> = pool.install(|| {
        blocks
            .par_iter()
            .map(|&(space, lambda, l)| crosscheck_block(space, lambda, l, n_max))
            .collect::<Vec<_>>()
    });
    let report = summarize(cells.into_iter().flatten().collect());
    emit_report(ctx, &report)
}

fn emit_report(ctx: &mut Ctx, report: &CrosscheckReport) -> Result<()> {
    let e = ctx.units.energy();
    let scale = ctx.units.system.hartree_energy();
    let mut data = Dataset::new(
        "verify",
        &[
            ("model", ""),
            ("lambda", ctx.units.inverse_area()),
            ("n", ""),
            ("l", ""),
            ("e_closed", e),
            ("e_oracle", e),
            ("rel_dev", ""),
            ("nodes_closed", ""),
            ("nodes_oracle", ""),
            ("richardson_ratio", ""),
            ("trusted", ""),
            ("error", ""),
        ],
    );
    for c in &report.cells {
        data.push(vec![
            c.space.label().into(),
            ctx.units.lambda_from_hartree(c.lambda).into(),
            c.n.into(),
            c.l.into(),
            (c.e_closed * scale).into(),
            c.e_oracle.map(|x| x * scale).into(),
            c.rel_dev.into(),
            c.nodes_closed.map_or(Cell::Empty, Cell::from),
            c.nodes_oracle.map_or(Cell::Empty, Cell::from),
            c.convergence.into(),
            c.trusted.into(),
            c.error.clone().map_or(Cell::Empty, Cell::from),
        ]);
    }
    let s = &report.summary;
    let mut summary = Dataset::new("verify_summary", &[("quantity", ""), ("value", "")]);
    summary.push(vec!["max_rel_dev_ds".into(), s.max_dev_ds.into()]);
    summary.push(vec!["max_rel_dev_ads".into(), s.max_dev_ads.into()]);
    summary.push(vec!["max_rel_dev".into(), s.max_dev.into()]);
    summary.push(vec!["nodes_all_match".into(), s.nodes_all_match.into()]);
    summary.push(vec!["failed_cells".into(), s.failed_cells.into()]);
    summary.note("maxima over trusted levels; dS levels above -k e^2 sqrt(lambda) are untrusted");
    ctx.emit(&data)?;
    ctx.emit(&summary)?;
    let fmt = |x: Option<f64>| x.map_or("n/a".to_string(), |v| format!("{v:.3e}"));
    println!(
        "verify: {} cells, max rel dev {} (dS {}, AdS {}), nodes match: {}, failed: {}",
        report.cells.len(),
        fmt(s.max_dev),
        fmt(s.max_dev_ds),
        fmt(s.max_dev_ads),
        s.nodes_all_match,
        s.failed_cells
    );
    Ok(())
}

fn bound(ctx: &mut Ctx, precision: f64) -> Result<()> {
    let b = spectroscopic_bound(precision, &ctx.units.system)?;
    let (p, inv) = (ctx.units.momentum(), ctx.units.inverse_area());
    let mut data = Dataset::new("bound", &[("quantity", ""), ("value", ""), ("unit", "")]);
    let rows: [(&str, f64, &str); 5] = [
        ("precision", b.precision, ""),
        ("dp_min_coefficient_3_2", b.dp_min_half, p),
        ("dp_min_coefficient_3", b.dp_min, p),
        ("lambda_max_coefficient_3_2", b.lambda_half, inv),
        ("lambda_max_coefficient_3", b.lambda, inv),
    ];
    for (q, v, u) in rows {
        data.push(vec![q.into(), v.into(), u.into()]);
    }
    data.note("the 2s-1s ratio shift is written with coefficient 3/2 or 3; both are reported");
    ctx.emit(&data)?;
    println!("dP_min = {:.4e} (3/2), {:.4e} (3) {p}", b.dp_min_half, b.dp_min);
    Ok(())
}
