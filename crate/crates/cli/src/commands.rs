use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use rectiflow::devices::{analytic_currents, analytic_rectification, DeviceFamily};
use rectiflow::pareto::{max_r_given_j, pareto_front, region_compare, ParameterBox, RegionAxis};
use rectiflow::rectification::{
    bidirectional_detailed, max_current, rectification_factor, CurrentPair, CURRENT_CALIBRATION,
};
use rectiflow::{Error, OperatingPoint, PerformancePoint};

use crate::config::{Engine, ExperimentConfig, Format};
use crate::output::{config_hash, emit, pretty, round12, Cell, Meta, Table};
use crate::CliError;

/// Closed-form currents at `p` in `γε` as printed in the reference
/// formulas (no calibration factor); `None` where no closed form exists.
fn closed_form(family: DeviceFamily, p: &OperatingPoint) -> Result<Option<(CurrentPair, f64)>, Error> {
    let spec = p.spec(family);
    let (coupling, scenario) = (p.coupling(), p.scenario());
    match analytic_currents(&spec, &coupling, &scenario) {
        Ok((hc, ch)) => {
            let unit = p.gamma * p.epsilon;
            let r = analytic_rectification(&spec, &coupling, &scenario)?;
            Ok(Some((
                CurrentPair {
                    j_hc: hc / unit,
                    j_ch: ch / unit,
                },
                r,
            )))
        }
        Err(Error::NoAnalyticForm) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Numeric `J` over the uncalibrated closed-form `J`; equals the
/// calibration constant wherever a closed form exists.
fn ratio(family: DeviceFamily, point: &PerformancePoint) -> Result<Cell, Error> {
    let Some((pair, _)) = closed_form(family, &point.params)? else {
        return Ok(Cell::Missing);
    };
    let numeric = rectiflow::rectification::bidirectional(
        &point.params.spec(family),
        &point.params.scenario(),
        &point.params.coupling(),
    )?;
    Ok(Cell::Num(max_current(&numeric) / max_current(&pair)))
}

pub struct Run<'a> {
    pub config: &'a ExperimentConfig,
    pub out: Option<PathBuf>,
}

impl Run<'_> {
    fn meta(&self, command: &'static str, skipped: usize) -> Meta {
        Meta {
            command,
            config_sha256: config_hash(&self.config.canonical()),
            skipped,
        }
    }

    fn fixed_point(&self, family: DeviceFamily, t_hot: f64) -> Result<OperatingPoint, CliError> {
        let bx = self.config.parameter_box(family, t_hot);
        let fixed = |name: &str, lo: f64, hi: f64| {
            if lo == hi {
                Ok(lo)
            } else {
                Err(CliError::Config(format!(
                    "point: `{name}` must be a single value for device {family}, got [{lo}, {hi}]"
                )))
            }
        };
        Ok(OperatingPoint {
            epsilon: bx.epsilon,
            gamma: bx.gamma,
            chi: fixed("chi", bx.chi.lo, bx.chi.hi)?,
            delta: if family == DeviceFamily::B { fixed("delta", bx.delta.lo, bx.delta.hi)? } else { 0.0 },
            g: if family == DeviceFamily::A { 0.0 } else { fixed("g", bx.g.lo, bx.g.hi)? },
            t_hot,
            t_cold: bx.t_cold,
        })
    }

    fn boxes(&self) -> Result<Vec<(DeviceFamily, f64, ParameterBox)>, CliError> {
        let mut out = Vec::new();
        for &family in &self.config.devices {
            for t in self.config.t_hot.values("t_hot")? {
                let bx = self.config.parameter_box(family, t);
                bx.validate()?;
                out.push((family, t, bx));
            }
        }
        Ok(out)
    }

    pub fn point(&self) -> Result<(), CliError> {
        let cfg = self.config;
        let alphas = cfg.alpha_grid.values()?;
        let both = cfg.engine == Engine::Both;
        let mut cols = vec![
            "device", "T_h", "chi", "delta", "g", "J_hc", "J_ch", "J", "R", "eta", "residual",
            "trace_error", "hermiticity", "min_eigenvalue", "energy_balance",
        ];
        if both {
            cols.extend(["J_hc_analytic", "J_ch_analytic", "R_analytic", "ratio_numeric_analytic"]);
        }
        let mut table = Table::new(&cols);
        for &family in &cfg.devices {
            for t in cfg.t_hot.values("t_hot")? {
                let p = self.fixed_point(family, t)?;
                p.spec(family).validate()?;
                let exact = closed_form(family, &p)?;
                let use_numeric = cfg.engine != Engine::Analytic || exact.is_none();
                let mut diag = vec![Cell::Missing; 5];
                let (pair, r) = if use_numeric {
                    let (hc, ch) = bidirectional_detailed(&p.spec(family), &p.scenario(), &p.coupling())?;
                    let (mut res, mut tr, mut herm, mut eig, mut bal) = (0.0_f64, 0.0_f64, 0.0_f64, f64::INFINITY, 0.0_f64);
                    for s in [&hc, &ch] {
                        res = res.max(s.steady.residual);
                        tr = tr.max((s.steady.rho.matrix().trace() - 1.0).norm());
                        herm = herm.max(s.steady.rho.matrix().hermitian_deviation());
                        eig = eig.min(s.steady.rho.min_eigenvalue());
                        bal = bal.max(s.energy_balance());
                    }
                    diag = vec![res.into(), tr.into(), herm.into(), eig.into(), bal.into()];
                    let pair = CurrentPair {
                        j_hc: hc.current,
                        j_ch: ch.current,
                    };
                    let r = rectification_factor(&pair)?;
                    (pair, r)
                } else {
                    let (exact_pair, r) = exact.expect("closed form present");
                    let pair = CurrentPair {
                        j_hc: exact_pair.j_hc * CURRENT_CALIBRATION,
                        j_ch: exact_pair.j_ch * CURRENT_CALIBRATION,
                    };
                    (pair, r)
                };
                let j = max_current(&pair);
                let etas: Vec<f64> = alphas.iter().map(|a| a * r + (1.0 - a) * j).collect();
                let mut row: Vec<Cell> = vec![
                    family.to_string().into(),
                    t.into(),
                    p.chi.into(),
                    p.delta.into(),
                    p.g.into(),
                    pair.j_hc.into(),
                    pair.j_ch.into(),
                    j.into(),
                    r.into(),
                    Cell::List(etas),
                ];
                row.extend(diag);
                if both {
                    match exact {
                        Some((e, er)) => row.extend([
                            e.j_hc.into(),
                            e.j_ch.into(),
                            er.into(),
                            (pair.j_hc / e.j_hc).into(),
                        ]),
                        None => row.extend(vec![Cell::Missing; 4]),
                    }
                }
                table.push(row);
            }
        }
        emit(self.out.as_deref(), &table.render(cfg.format, &self.meta("point", 0)))
    }

    pub fn tradeoff(&self) -> Result<(), CliError> {
        let cfg = self.config;
        if cfg.devices.len() != 1 {
            return Err(CliError::Config(format!(
                "tradeoff: exactly one device required, got {} (use --device)",
                cfg.devices.len()
            )));
        }
        let alphas = cfg.alpha_grid.values()?;
        let settings = cfg.settings();
        let both = cfg.engine == Engine::Both;
        let mut cols = vec!["T_h", "alpha", "chi_opt", "delta_opt", "g_opt", "J", "R", "eta"];
        if both {
            cols.push("ratio_numeric_analytic");
        }
        let mut table = Table::new(&cols);
        let mut skipped = 0;
        let boxes = self.boxes()?;
        let row = |t: f64, alpha: Cell, p: Option<&PerformancePoint>, eta: Cell| -> Result<Vec<Cell>, Error> {
            let mut r = vec![t.into(), alpha];
            match p {
                Some(p) => r.extend([
                    p.params.chi.into(),
                    p.params.delta.into(),
                    p.params.g.into(),
                    p.j.into(),
                    p.r.into(),
                    eta,
                ]),
                None => r.extend(vec![Cell::Missing; 6]),
            }
            if both {
                r.push(match p {
                    Some(p) => ratio(p.device, p)?,
                    None => Cell::Missing,
                });
            }
            Ok(r)
        };
        for (_, t, bx) in &boxes {
            if let Some(j_min) = cfg.j_min {
                match max_r_given_j(bx, j_min, &settings) {
                    Ok(o) => table.push(row(*t, Cell::Missing, Some(&o.best), Cell::Missing)?),
                    Err(e @ (Error::Infeasible { .. } | Error::AllInfeasible { .. })) => {
                        eprintln!("T_h = {t}: {e}");
                        skipped += 1;
                        table.push(row(*t, Cell::Missing, None, Cell::Missing)?);
                    }
                    Err(e) => return Err(e.into()),
                }
                continue;
            }
            match pareto_front(bx, &alphas, &settings) {
                Ok(run) => {
                    for o in &run.optima {
                        table.push(row(*t, o.alpha.into(), Some(&o.point), o.eta.into())?);
                    }
                }
                Err(e @ Error::AllInfeasible { .. }) => {
                    eprintln!("T_h = {t}: {e}");
                    skipped += 1;
                    for &a in &alphas {
                        table.push(row(*t, a.into(), None, Cell::Missing)?);
                    }
                }
                Err(e) => return Err(e.into()),
            }
        }
        emit(self.out.as_deref(), &table.render(cfg.format, &self.meta("tradeoff", skipped)))
    }

    pub fn pareto(&self) -> Result<(), CliError> {
        let cfg = self.config;
        let alphas = cfg.alpha_grid.values()?;
        let settings = cfg.settings();
        let both = cfg.engine == Engine::Both;
        let mut cols = vec!["J", "R", "alpha_winner", "device", "T_h", "chi", "delta", "g"];
        if both {
            cols.push("ratio_numeric_analytic");
        }
        let mut table = Table::new(&cols);
        let mut summary = Vec::new();
        let mut skipped = 0;
        for (family, t, bx) in self.boxes()? {
            let run = match pareto_front(&bx, &alphas, &settings) {
                Ok(run) => run,
                Err(e @ Error::AllInfeasible { .. }) => {
                    eprintln!("device {family}, T_h = {t}: {e}");
                    skipped += 1;
                    continue;
                }
                Err(e) => return Err(e.into()),
            };
            skipped += run.stats.infeasible;
            for fp in &run.front.points {
                let p = &fp.point;
                let mut row: Vec<Cell> = vec![
                    p.j.into(),
                    p.r.into(),
                    Cell::List(fp.winning_alphas.clone()),
                    family.to_string().into(),
                    t.into(),
                    p.params.chi.into(),
                    p.params.delta.into(),
                    p.params.g.into(),
                ];
                if both {
                    row.push(ratio(family, p)?);
                }
                table.push(row);
            }
            summary.push(json!({
                "device": family.to_string(),
                "T_h": round12(t),
                "evaluated": run.stats.evaluated,
                "infeasible": run.stats.infeasible,
                "max_eta": run.optima.iter().map(|o| json!({
                    "alpha": round12(o.alpha),
                    "eta": round12(o.eta),
                    "J": round12(o.point.j),
                    "R": round12(o.point.r),
                })).collect::<Vec<_>>(),
            }));
        }
        let meta = self.meta("pareto", skipped);
        let mut doc: Value = meta.json();
        doc["fronts"] = Value::Array(summary);
        match cfg.format {
            Format::Json => {
                let mut full: Value = serde_json::from_str(&table.render(Format::Json, &meta)).expect("valid json");
                full["summary"] = doc["fronts"].take();
                emit(self.out.as_deref(), &pretty(&full))
            }
            Format::Csv => {
                emit(self.out.as_deref(), &table.render(Format::Csv, &meta))?;
                if let Some(out) = &self.out {
                    emit(Some(&summary_path(out)), &pretty(&doc))?;
                }
                Ok(())
            }
        }
    }

    pub fn regions(&self) -> Result<(), CliError> {
        let cfg = self.config;
        let rc = cfg
            .regions
            .as_ref()
            .ok_or_else(|| CliError::Config("regions: missing `regions` section".into()))?;
        let t_hot = cfg.t_hot.values("t_hot")?;
        let values = rc.values.values("regions.values")?;
        // non-swept parameters come from the first device's box
        let mut base = None;
        for family in [rc.first, rc.second] {
            let bx = cfg.parameter_box(family, t_hot[0]);
            let unswept = [
                ("chi", bx.chi, true),
                ("delta", bx.delta, family == DeviceFamily::B && rc.axis != RegionAxis::Delta),
                ("g", bx.g, family != DeviceFamily::A && rc.axis != RegionAxis::G),
            ];
            for (name, iv, used) in unswept {
                if used && iv.lo != iv.hi {
                    return Err(CliError::Config(format!(
                        "regions: `{name}` must be a single value for device {family}"
                    )));
                }
            }
            base.get_or_insert(OperatingPoint {
                epsilon: bx.epsilon,
                gamma: bx.gamma,
                chi: bx.chi.lo,
                delta: bx.delta.lo,
                g: bx.g.lo,
                t_hot: t_hot[0],
                t_cold: bx.t_cold,
            });
        }
        let base = base.expect("two devices");
        let map = region_compare(rc.first, rc.second, &base, &t_hot, rc.axis, &values, cfg.engine.mode())?;
        let mut table = Table::new(&["T_h", rc.axis.name(), "label"]);
        for (i, t) in map.t_hot.iter().enumerate() {
            for (k, v) in map.values.iter().enumerate() {
                let label = map.cells[i][k].map_or(Cell::Missing, |l| l.code().into());
                table.push(vec![(*t).into(), (*v).into(), label]);
            }
        }
        emit(self.out.as_deref(), &table.render(cfg.format, &self.meta("regions", map.infeasible())))
    }
}

/// `<out>.summary.json` next to the front CSV.
pub fn summary_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".summary.json");
    PathBuf::from(s)
}
