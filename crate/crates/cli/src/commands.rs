//! Command implementations: resolve options, run the library, render output.

use std::path::PathBuf;

use aep_core::aep::{
    abep_dqpsk_asymptotic, abep_dqpsk_closed, aep_monte_carlo, aep_quadrature_oracle,
    asep_mpsk_asymptotic, asep_mpsk_closed, diversity_order, truncation_bound, EpKind,
    SeriesControl, TruncationBoundVariant,
};
use aep_core::awgn::{
    chi_exact, chi_fitted, dqpsk_bep_approx, dqpsk_bep_exact, mpsk_sep_approx, mpsk_sep_exact,
    relative_error, ChiFitTable, ModulationSpec,
};
use aep_core::fading::{sample, write_sample_dump, KappaMuShadowedParams, McControl, SamplerKind};
use aep_core::specfun::Tolerance;
use aep_core::{Error, Result};

use crate::config::RunConfig;
use crate::table::{Format, Table};
use crate::{Command, CommonOpts};

/// Reference table sampling points: (M, SNR-per-bit list).
const SEP_TABLE_POINTS: [(u32, [f64; 7]); 3] = [
    (4, [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]),
    (8, [2.0, 4.0, 6.0, 8.0, 10.0, 14.0, 16.0]),
    (16, [5.0, 10.0, 20.0, 30.0, 35.0, 40.0, 45.0]),
];

const BEP_TABLE_POINTS: [f64; 15] = [
    0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0,
];

struct Resolved<'a> {
    opts: &'a CommonOpts,
    cfg: &'a RunConfig,
}

impl<'a> Resolved<'a> {
    fn format(&self) -> Result<Format> {
        let name = self
            .opts
            .format
            .clone()
            .or_else(|| self.cfg.format.clone())
            .unwrap_or_else(|| "csv".to_string());
        match name.as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Domain(format!("unknown format '{other}'"))),
        }
    }

    fn out(&self) -> Option<PathBuf> {
        self.opts
            .out
            .clone()
            .or_else(|| self.cfg.output.as_ref().map(PathBuf::from))
    }

    fn scheme(&self) -> Result<ModulationSpec> {
        let name = self
            .opts
            .scheme
            .clone()
            .or_else(|| self.cfg.scheme.clone())
            .unwrap_or_else(|| "dqpsk".to_string());
        parse_scheme(&name)
    }

    fn params_with(&self, gamma_bar: f64) -> Result<KappaMuShadowedParams> {
        let c = self.cfg.params.clone().unwrap_or_default();
        KappaMuShadowedParams::new(
            self.opts.kappa.or(c.kappa).unwrap_or(1.0),
            self.opts.mu.or(c.mu).unwrap_or(2.0),
            self.opts.m.or(c.m).unwrap_or(1.3),
            gamma_bar,
        )
    }

    /// Mean SNR from --gamma-bar-db (or config's linear gamma_bar), in
    /// linear units.
    fn gamma_bar(&self) -> Result<f64> {
        if let Some(v) = self.opts.gamma_bar_db {
            return Ok(if self.opts.linear { v } else { db_to_linear(v) });
        }
        if let Some(gb) = self.cfg.params.as_ref().and_then(|p| p.gamma_bar) {
            return Ok(gb);
        }
        Ok(db_to_linear(10.0))
    }

    fn grid(&self, default: &str) -> Result<Vec<f64>> {
        let values = match &self.opts.grid {
            Some(spec) => parse_grid(spec)?,
            None => match &self.cfg.grid {
                Some(v) => v.clone(),
                None => parse_grid(default)?,
            },
        };
        if values.is_empty() {
            return Err(Error::Domain("grid must not be empty".into()));
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("grid must be strictly ascending".into()));
        }
        Ok(values)
    }

    fn series(&self) -> Result<SeriesControl> {
        let c = self.cfg.series.clone().unwrap_or_default();
        SeriesControl::new(
            self.opts.max_terms.or(c.max_terms).unwrap_or(250),
            self.opts.rel_tol.or(c.rel_tol).unwrap_or(1e-12),
        )
    }

    fn quad(&self) -> Result<Tolerance> {
        let c = self.cfg.quad.clone().unwrap_or_default();
        Tolerance::new(
            c.rel.unwrap_or(1e-10),
            c.abs.unwrap_or(1e-300),
            c.max_iter.unwrap_or(10_000),
        )
    }

    fn mc(&self) -> Result<McControl> {
        let c = self.cfg.mc.clone().unwrap_or_default();
        McControl::new(
            self.opts.samples.or(c.n_samples).unwrap_or(100_000),
            self.opts.seed.or(c.seed).unwrap_or(12345),
            self.opts.streams.or(c.streams).unwrap_or(1),
        )
    }

    fn sampler(&self) -> Result<SamplerKind> {
        match self.opts.sampler.as_deref().unwrap_or("inverse-cdf") {
            "physical" => Ok(SamplerKind::Physical),
            "inverse-cdf" => Ok(SamplerKind::InverseCdf),
            other => Err(Error::Domain(format!("unknown sampler '{other}'"))),
        }
    }

    fn bound_variant(&self) -> Result<TruncationBoundVariant> {
        match self.opts.bound_weight.as_deref().unwrap_or("pochhammer") {
            "pochhammer" => Ok(TruncationBoundVariant::PochhammerWeight),
            "inverse-gamma" => Ok(TruncationBoundVariant::InverseGammaWeight),
            other => Err(Error::Domain(format!("unknown bound weighting '{other}'"))),
        }
    }
}

fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

pub(crate) fn parse_scheme(name: &str) -> Result<ModulationSpec> {
    if name == "dqpsk" {
        return Ok(ModulationSpec::GcDqpsk);
    }
    if let Some(order) = name.strip_prefix("mpsk:") {
        let m: u32 = order
            .parse()
            .map_err(|_| Error::Domain(format!("bad M-PSK order '{order}'")))?;
        let spec = ModulationSpec::Mpsk { m };
        spec.validate()?;
        return Ok(spec);
    }
    Err(Error::Domain(format!(
        "unknown scheme '{name}' (expected mpsk:M or dqpsk)"
    )))
}

/// `start:stop:step`, endpoints inclusive (within half a step of `stop`).
pub(crate) fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Domain(format!(
            "grid '{spec}' is not start:stop:step"
        )));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| Error::Domain(format!("grid component '{s}' is not a number")))
        })
        .collect::<Result<_>>()?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if !start.is_finite() || !stop.is_finite() || !(step > 0.0) || !step.is_finite() || stop < start
    {
        return Err(Error::Domain(format!(
            "grid '{spec}' needs finite stop >= start and step > 0"
        )));
    }
    let n = ((stop - start) / step + 1.0 + 1e-9).floor();
    if !(n >= 1.0) || n > 1e7 {
        return Err(Error::Domain(format!("grid '{spec}' has {n} points")));
    }
    let n = n as usize;
    Ok((0..n).map(|i| start + step * i as f64).collect())
}

pub fn run(command: &Command, cfg: &RunConfig) -> Result<()> {
    if let Some(expected) = &cfg.command {
        if expected != command.name() {
            return Err(Error::Domain(format!(
                "config is for command '{expected}', invoked '{}'",
                command.name()
            )));
        }
    }
    let r = Resolved {
        opts: command.opts(),
        cfg,
    };
    let table = match command {
        Command::Table2(_) => Some(cmd_table2(&r)?),
        Command::Table4(_) => Some(cmd_table4(&r)?),
        Command::AepSweep(_) => Some(cmd_aep_sweep(&r)?),
        Command::Truncation(_) => Some(cmd_truncation(&r)?),
        Command::Diversity(_) => Some(cmd_diversity(&r)?),
        Command::Chi(_) => Some(cmd_chi(&r)?),
        Command::Relerr(_) => Some(cmd_relerr(&r)?),
        Command::Sample(_) => {
            cmd_sample(&r)?;
            None
        }
    };
    if let Some(table) = table {
        let rendered = table.render(r.format()?);
        match r.out() {
            Some(path) => std::fs::write(path, rendered)?,
            None => print!("{rendered}"),
        }
    }
    Ok(())
}

fn cmd_table2(r: &Resolved) -> Result<Table> {
    let tol = r.quad()?;
    let mut ms = Vec::new();
    let mut gammas = Vec::new();
    let mut exact = Vec::new();
    let mut approx = Vec::new();
    let mut relerr = Vec::new();
    for (m, points) in SEP_TABLE_POINTS {
        for gamma in points {
            let e = mpsk_sep_exact(m, gamma, &tol)?;
            let a = mpsk_sep_approx(m, gamma)?;
            ms.push(m as i64);
            gammas.push(gamma);
            exact.push(e);
            approx.push(a);
            relerr.push(relative_error(a, e)?);
        }
    }
    let mut t = Table::new();
    t.push_int("m", ms);
    t.push_float("gamma", gammas);
    t.push_float("exact", exact);
    t.push_float("approx", approx);
    t.push_float("rel_err", relerr);
    Ok(t)
}

fn cmd_table4(r: &Resolved) -> Result<Table> {
    let tol = r.quad()?;
    let mut gammas = Vec::new();
    let mut exact = Vec::new();
    let mut approx = Vec::new();
    let mut relerr = Vec::new();
    for gamma in BEP_TABLE_POINTS {
        let e = dqpsk_bep_exact(gamma, &tol)?;
        let a = dqpsk_bep_approx(gamma);
        gammas.push(gamma);
        exact.push(e);
        approx.push(a);
        relerr.push(relative_error(a, e)?);
    }
    let mut t = Table::new();
    t.push_float("gamma", gammas);
    t.push_float("exact", exact);
    t.push_float("approx", approx);
    t.push_float("rel_err", relerr);
    Ok(t)
}

fn closed_form(
    p: &KappaMuShadowedParams,
    scheme: ModulationSpec,
    ctrl: &SeriesControl,
) -> Result<f64> {
    match scheme {
        ModulationSpec::Mpsk { m } => asep_mpsk_closed(p, m),
        ModulationSpec::GcDqpsk => Ok(abep_dqpsk_closed(p, ctrl)?.value),
    }
}

fn asymptote(p: &KappaMuShadowedParams, scheme: ModulationSpec) -> Result<f64> {
    match scheme {
        ModulationSpec::Mpsk { m } => asep_mpsk_asymptotic(p, m),
        ModulationSpec::GcDqpsk => abep_dqpsk_asymptotic(p),
    }
}

fn cmd_aep_sweep(r: &Resolved) -> Result<Table> {
    let scheme = r.scheme()?;
    let ctrl = r.series()?;
    let tol = r.quad()?;
    let mc = r.mc()?;
    let grid = r.grid("0:25:1")?;

    let mut db_col = Vec::new();
    let mut closed_col = Vec::new();
    let mut asym_col = Vec::new();
    let mut mc_col = Vec::new();
    let mut se_col = Vec::new();
    let mut quad_col = Vec::new();
    for &g in &grid {
        let gb = if r.opts.linear { g } else { db_to_linear(g) };
        let p = r.params_with(gb)?;
        db_col.push(if r.opts.linear { linear_to_db(g) } else { g });
        closed_col.push(closed_form(&p, scheme, &ctrl)?);
        asym_col.push(asymptote(&p, scheme)?);
        let est = aep_monte_carlo(&p, scheme, EpKind::Exact, &mc)?;
        mc_col.push(est.mean);
        se_col.push(est.std_error);
        quad_col.push(aep_quadrature_oracle(&p, scheme, EpKind::Approx, &tol)?);
    }
    let mut t = Table::new();
    t.push_float("gamma_bar_db", db_col);
    t.push_float("closed", closed_col);
    t.push_float("asymptotic", asym_col);
    t.push_float("mc_mean", mc_col);
    t.push_float("mc_std_error", se_col);
    t.push_float("quadrature", quad_col);
    Ok(t)
}

fn cmd_truncation(r: &Resolved) -> Result<Table> {
    let p = r.params_with(r.gamma_bar()?)?;
    let variant = r.bound_variant()?;
    let grid = r.grid("1:10:1")?;
    let mut ls = Vec::new();
    let mut bounds = Vec::new();
    for &l in &grid {
        let li = l.round();
        if (l - li).abs() > 1e-9 || li < 1.0 {
            return Err(Error::Domain(format!(
                "truncation grid values must be integers >= 1, got {l}"
            )));
        }
        ls.push(li as i64);
        bounds.push(truncation_bound(&p, li as usize, variant)?);
    }
    let mut t = Table::new();
    t.push_int("l", ls);
    t.push_float("bound", bounds);
    Ok(t)
}

fn cmd_diversity(r: &Resolved) -> Result<Table> {
    let scheme = r.scheme()?;
    let grid_in = r.grid("10:60:2.5")?;
    let grid: Vec<f64> = if r.opts.linear {
        grid_in.clone()
    } else {
        grid_in.iter().map(|&d| db_to_linear(d)).collect()
    };
    let p = r.params_with(grid[0])?;
    let pts = diversity_order(&p, scheme, &grid)?;
    let mut t = Table::new();
    t.push_float(
        "gamma_bar_db",
        pts.iter().map(|pt| linear_to_db(pt.gamma_bar)).collect(),
    );
    t.push_float("ratio", pts.iter().map(|pt| pt.ratio).collect());
    t.push_float("slope", pts.iter().map(|pt| pt.slope).collect());
    Ok(t)
}

fn cmd_chi(r: &Resolved) -> Result<Table> {
    let tol = r.quad()?;
    let grid = r.grid("0.1:12:0.1")?;
    let table = ChiFitTable::baseline();
    let mut exact = Vec::new();
    let mut fitted = Vec::new();
    for &g in &grid {
        exact.push(chi_exact(g, &tol)?);
        fitted.push(chi_fitted(g, &table));
    }
    let mut t = Table::new();
    t.push_float("gamma", grid);
    t.push_float("chi_exact", exact);
    t.push_float("chi_fitted", fitted);
    Ok(t)
}

fn cmd_relerr(r: &Resolved) -> Result<Table> {
    let tol = r.quad()?;
    let grid = r.grid("0.1:12:0.1")?;
    let mut exact = Vec::new();
    let mut approx = Vec::new();
    let mut rel = Vec::new();
    for &g in &grid {
        let e = dqpsk_bep_exact(g, &tol)?;
        let a = dqpsk_bep_approx(g);
        exact.push(e);
        approx.push(a);
        rel.push(relative_error(a, e)?);
    }
    let mut t = Table::new();
    t.push_float("gamma", grid);
    t.push_float("exact", exact);
    t.push_float("approx", approx);
    t.push_float("rel_err", rel);
    Ok(t)
}

fn cmd_sample(r: &Resolved) -> Result<()> {
    let p = r.params_with(r.gamma_bar()?)?;
    let mc = r.mc()?;
    let kind = r.sampler()?;
    let out = r
        .out()
        .ok_or_else(|| Error::Domain("sample requires --out PATH for the binary dump".into()))?;
    let xs = sample(&p, &mc, kind)?;
    write_sample_dump(&out, &xs, &p, &mc, kind)
}
