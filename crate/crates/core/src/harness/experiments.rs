//! The `coverage` and `drr-sweep` experiments: boundary tables and DRR
//! sweeps written as CSV plus one SVG per plot.

use std::f64::consts::PI;
use std::path::Path;

use crate::coverage::{
    approximate_region, approximation_quality, conic_divergence, exact_boundary, Approximation, BoundaryModel,
    ConicMode, DivergenceReport,
};
use crate::drr::dynamic_ranging_rate_with_area;
use crate::error::Result;
use crate::montecarlo::{aggregate, run_replications, ReplicationOutcome, SimConfig};
use crate::shapes::{Point2, SensingShape};

use super::config::{ExperimentConfig, SweepParameter};
use super::svg::{Plot, Style};
use super::table::{Cell, ResultTable};

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// `#` header lines shared by every output file.
pub fn provenance(cfg: &ExperimentConfig, command: &str) -> Vec<(String, String)> {
    vec![
        ("tool".into(), TOOL_VERSION.into()),
        ("command".into(), command.into()),
        ("seed".into(), cfg.seed.to_string()),
        ("config_sha256".into(), cfg.hash.clone()),
        ("fidelity".into(), cfg.fidelity.to_string()),
        (
            "tool_defaults".into(),
            "wavelength, RCS, PRI values and sweep ranges are tool defaults".into(),
        ),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodSummary {
    pub case: String,
    pub method: String,
    pub area: f64,
    pub iou: f64,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageSummary {
    pub methods: Vec<MethodSummary>,
    pub divergence: Vec<(String, DivergenceReport)>,
}

impl CoverageSummary {
    pub fn area(&self, case: &str, method: &str) -> Option<f64> {
        self.methods
            .iter()
            .find(|m| m.case == case && m.method == method)
            .map(|m| m.area)
    }
}

/// Boundaries of every configured case by every applicable method.
///
/// All methods are sampled on the same rays from the DRV, so rows with the
/// same (case, theta) compare directly.
pub fn cmd_coverage(cfg: &ExperimentConfig, out: &Path) -> Result<CoverageSummary> {
    std::fs::create_dir_all(out)?;
    let prov = provenance(cfg, "coverage");
    let mut boundaries = ResultTable::new(["case", "method", "theta", "x", "y"]).with_provenance(&prov);
    let mut summary_table =
        ResultTable::new(["case", "method", "alpha_hat", "w", "d_v", "area", "iou", "max_residual"])
            .with_provenance(&prov);
    let mut divergence_table =
        ResultTable::new(["case", "coefficient", "paper", "expansion", "difference", "predicted"]).with_provenance(&prov);
    let mut summary = CoverageSummary {
        methods: Vec::new(),
        divergence: Vec::new(),
    };
    let n = cfg.coverage.n_angles;

    for case in &cfg.coverage.cases {
        let net = cfg
            .network
            .with_path_loss(case.bs_path_loss_exponent, case.drv_path_loss_exponent);
        let model = BoundaryModel {
            w: net.w()?,
            alpha_hat: net.alpha_hat(),
            d_v: case.d_v,
        };
        let drv = model.drv();
        let exact = exact_boundary(model.w, model.alpha_hat, model.d_v, n)?;

        let mut methods: Vec<(String, SensingShape)> = vec![("exact".into(), SensingShape::Polyline(exact.clone()))];
        methods.push(("circle".into(), approximate_region(&model, Approximation::Circle, None)?));
        if model.alpha_hat < 1.0 {
            for mode in [ConicMode::Expansion, ConicMode::Paper] {
                match approximate_region(&model, Approximation::Conic(mode), None) {
                    Ok(shape) => methods.push((format!("conic_{mode}"), shape)),
                    Err(e) if e.is_numeric_degeneracy() => {
                        log::warn!("case {}: {mode} conic skipped: {e}", case.name)
                    }
                    Err(e) => return Err(e),
                }
            }
            let report = conic_divergence(model.w, model.alpha_hat, model.d_v, drv)?;
            for row in &report.rows {
                divergence_table.push(vec![
                    case.name.as_str().into(),
                    row.name.into(),
                    row.paper.into(),
                    row.expansion.into(),
                    row.difference.into(),
                    row.predicted.into(),
                ])?;
            }
            summary.divergence.push((case.name.clone(), report));
        } else {
            log::info!("case {}: alpha_hat = 1, the Taylor conic does not apply", case.name);
        }

        let mut plot = Plot::new(
            format!("{}: alpha_b = {}, alpha_v = {}, d_v = {} m", case.name, case.bs_path_loss_exponent, case.drv_path_loss_exponent, case.d_v),
            "x (m)",
            "y (m)",
        );
        plot.equal_aspect = true;
        for (color, (name, shape)) in methods.iter().enumerate() {
            let points: Vec<(f64, Point2)> = match shape {
                SensingShape::Polyline(p) => p
                    .points()
                    .iter()
                    .enumerate()
                    .map(|(k, &q)| (2.0 * PI * k as f64 / n as f64, q))
                    .collect(),
                other => {
                    let fallback = other.boundary_samples(n);
                    (0..n)
                        .map(|k| {
                            let theta = 2.0 * PI * k as f64 / n as f64;
                            (theta, other.ray_exit(drv, theta).unwrap_or(fallback[k]))
                        })
                        .collect()
                }
            };
            for &(theta, q) in &points {
                boundaries.push(vec![case.name.as_str().into(), name.as_str().into(), theta.into(), q.x.into(), q.y.into()])?;
            }
            let (area, iou, residual) = if name == "exact" {
                (exact.area(), 1.0, 0.0)
            } else {
                let q = approximation_quality(&exact, shape, &model)?;
                (shape.area()?, q.iou, q.max_residual)
            };
            log::info!("case {} {name}: area {area:.6e} m2, IoU {iou:.5}", case.name);
            summary_table.push(vec![
                case.name.as_str().into(),
                name.as_str().into(),
                model.alpha_hat.into(),
                model.w.into(),
                model.d_v.into(),
                area.into(),
                iou.into(),
                residual.into(),
            ])?;
            summary.methods.push(MethodSummary {
                case: case.name.clone(),
                method: name.clone(),
                area,
                iou,
                max_residual: residual,
            });
            let mut closed: Vec<(f64, f64)> = points.iter().map(|(_, q)| (q.x, q.y)).collect();
            closed.push(closed[0]);
            let style = if name == "exact" { Style::Line } else { Style::Dashed };
            plot.add(name.as_str(), closed, style, color);
        }
        plot.add("DRV", vec![(drv.x, drv.y)], Style::Markers, 4);
        std::fs::write(out.join(format!("coverage_{}.svg", case.name)), plot.render())?;
    }

    let exact_areas: Vec<(String, f64)> = summary
        .methods
        .iter()
        .filter(|m| m.method == "exact")
        .map(|m| (m.case.clone(), m.area))
        .collect();
    for pair in exact_areas.windows(2) {
        log::info!(
            "exact area {} = {:.6e} m2 vs {} = {:.6e} m2",
            pair[0].0,
            pair[0].1,
            pair[1].0,
            pair[1].1
        );
    }

    boundaries.write(&out.join("coverage_boundaries.csv"))?;
    summary_table.write(&out.join("coverage_summary.csv"))?;
    divergence_table.write(&out.join("conic_divergence.csv"))?;
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub series: Option<f64>,
    pub value: f64,
    pub xi: f64,
    pub xi_r: f64,
    pub p_dwell: f64,
    pub empirical_xi: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub events: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub name: String,
    pub parameter: SweepParameter,
    pub rows: Vec<SweepRow>,
    /// Series values (or `None` without series) at which ξ is not
    /// increasing in the DRV speed.
    pub speed_non_monotone: Vec<String>,
}

/// Analytic and simulated ξ along every configured sweep.
///
/// The PRI only decides which events qualify, so points that differ in PRI
/// alone share one simulation.
pub fn cmd_drr_sweep(cfg: &ExperimentConfig, out: &Path) -> Result<Vec<SweepOutcome>> {
    std::fs::create_dir_all(out)?;
    let prov = provenance(cfg, "drr-sweep");
    let mut outcomes = Vec::new();

    for sweep in &cfg.sweeps {
        let grid = sweep.grid();
        let series_values: Vec<Option<f64>> = match &sweep.series {
            Some(s) => s.values.iter().copied().map(Some).collect(),
            None => vec![None],
        };
        let n_grid = grid.len();
        let mut order: Vec<(usize, usize)> = (0..series_values.len())
            .flat_map(|si| (0..n_grid).map(move |gi| (si, gi)))
            .collect();
        if sweep.series.as_ref().is_some_and(|s| s.parameter == SweepParameter::Pri) {
            order.sort_by_key(|&(si, gi)| (gi, si));
        }
        let mut slots: Vec<Option<SweepRow>> = vec![None; order.len()];
        let mut cache: Option<(SimConfig, Vec<ReplicationOutcome>)> = None;
        for (si, gi) in order {
            let (sv, value) = (series_values[si], grid[gi]);
            let mut net = cfg.network;
            if let (Some(s), Some(v)) = (&sweep.series, sv) {
                s.parameter.apply(&mut net, v);
            }
            sweep.parameter.apply(&mut net, value);
            let sim = SimConfig::new(
                net,
                cfg.simulation.replications,
                cfg.simulation.periods_per_drv,
                cfg.seed,
                cfg.fidelity,
            )?;
            let reuse = cache.as_ref().is_some_and(|(c, _)| {
                let (mut a, mut b) = (*c, sim);
                a.net.pri = 0.0;
                b.net.pri = 0.0;
                a == b
            });
            if !reuse {
                log::info!("{}: simulating {}={value:e} series={sv:?}", sweep.name, sweep.parameter.name());
                cache = Some((sim, run_replications(&sim)?));
            }
            let (_, reps) = cache.as_ref().expect("filled above");
            let report = aggregate(&sim, reps)?;
            let analytic = dynamic_ranging_rate_with_area(&net, sim.window.area())?;
            slots[si * n_grid + gi] = Some(SweepRow {
                series: sv,
                value,
                xi: analytic.xi,
                xi_r: analytic.xi_r,
                p_dwell: analytic.p_dwell,
                empirical_xi: report.xi.value,
                ci_low: report.xi.low(),
                ci_high: report.xi.high(),
                events: report.event_count,
            });
        }
        let rows: Vec<SweepRow> = slots.into_iter().map(|r| r.expect("every slot visited")).collect();
        let speed_non_monotone = speed_monotonicity(sweep.parameter, sweep.series.as_ref().map(|s| s.parameter), &rows, grid.len());
        for flag in &speed_non_monotone {
            log::warn!("{}: xi is not increasing in speed at {flag}", sweep.name);
        }

        let param_col = format!("{}_{}", sweep.parameter.name(), sweep.parameter.unit());
        let series_col = match &sweep.series {
            Some(s) => format!("{}_{}", s.parameter.name(), s.parameter.unit()),
            None => "series".into(),
        };
        let mut table = ResultTable::new([
            series_col.as_str(),
            param_col.as_str(),
            "xi_analytic",
            "xi_r_analytic",
            "p_dwell_analytic",
            "xi_empirical",
            "ci_low",
            "ci_high",
            "events",
        ])
        .with_provenance(&prov);
        table.note("sweep", sweep.name.as_str());
        table.note("replications", cfg.simulation.replications.to_string());
        table.note("periods_per_drv", cfg.simulation.periods_per_drv.to_string());
        table.note(
            "speed_non_monotone",
            if speed_non_monotone.is_empty() { "none".to_owned() } else { speed_non_monotone.join(" ") },
        );
        for r in &rows {
            table.push(vec![
                r.series.map_or(Cell::Text("-".into()), Cell::Num),
                r.value.into(),
                r.xi.into(),
                r.xi_r.into(),
                r.p_dwell.into(),
                r.empirical_xi.into(),
                r.ci_low.into(),
                r.ci_high.into(),
                r.events.into(),
            ])?;
        }
        table.write(&out.join(format!("{}.csv", sweep.name)))?;

        let mut plot = Plot::new(
            format!("DRR vs {}", sweep.parameter.name()),
            format!("{} ({})", sweep.parameter.name(), sweep.parameter.unit()),
            "xi (events/s)",
        );
        plot.log_x = sweep.scale == super::config::Scale::Log;
        for (k, chunk) in rows.chunks(grid.len()).enumerate() {
            let label = match (&sweep.series, chunk[0].series) {
                (Some(s), Some(v)) => format!("{} = {v}", s.parameter.name()),
                _ => "xi".into(),
            };
            plot.add(format!("{label} analytic"), chunk.iter().map(|r| (r.value, r.xi)).collect(), Style::Line, k);
            plot.add(format!("{label} simulated"), chunk.iter().map(|r| (r.value, r.empirical_xi)).collect(), Style::Markers, k);
        }
        std::fs::write(out.join(format!("{}.svg", sweep.name)), plot.render())?;

        outcomes.push(SweepOutcome {
            name: sweep.name.clone(),
            parameter: sweep.parameter,
            rows,
            speed_non_monotone,
        });
    }
    Ok(outcomes)
}

fn speed_monotonicity(
    parameter: SweepParameter,
    series: Option<SweepParameter>,
    rows: &[SweepRow],
    grid_len: usize,
) -> Vec<String> {
    let mut flags = Vec::new();
    if parameter == SweepParameter::Speed {
        for chunk in rows.chunks(grid_len) {
            if chunk.windows(2).any(|w| w[1].xi <= w[0].xi) {
                flags.push(match chunk[0].series {
                    Some(v) => format!("series={v}"),
                    None => "sweep".into(),
                });
            }
        }
    } else if series == Some(SweepParameter::Speed) {
        let n_series = rows.len() / grid_len;
        for k in 0..grid_len {
            let column: Vec<&SweepRow> = (0..n_series).map(|s| &rows[s * grid_len + k]).collect();
            if column.windows(2).any(|w| w[1].series > w[0].series && w[1].xi <= w[0].xi) {
                flags.push(format!("{}={}", parameter.name(), column[0].value));
            }
        }
    }
    flags
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::DEFAULT_CONFIG;

    fn quick_config() -> ExperimentConfig {
        let text = DEFAULT_CONFIG
            .replace("replications = 2000", "replications = 20")
            .replace("periods_per_drv = 10", "periods_per_drv = 2")
            .replace("steps = 9", "steps = 3")
            .replace("steps = 11", "steps = 3");
        ExperimentConfig::from_toml(&text).unwrap()
    }

    #[test]
    fn coverage_outputs() {
        let dir = tempfile::tempdir().unwrap();
        let s = cmd_coverage(&quick_config(), dir.path()).unwrap();
        let c1 = s.area("case1", "circle").unwrap();
        assert!((c1 / (PI * 218.829_139_714_668_9f64.powi(2)) - 1.0).abs() < 1e-9);
        for m in ["exact", "conic_expansion", "conic_paper"] {
            assert!(c1 > s.area("case2", m).unwrap(), "{m}");
        }
        assert!(s.area("case1", "exact").unwrap() > s.area("case2", "exact").unwrap());
        let csv = std::fs::read_to_string(dir.path().join("coverage_boundaries.csv")).unwrap();
        assert!(csv.lines().any(|l| l == "case,method,theta,x,y"));
        assert!(!csv.contains('\r'));
        // case 1 exact and circle rows coincide on the shared rays
        let rows: Vec<Vec<&str>> = csv.lines().filter(|l| l.starts_with("case1,")).map(|l| l.split(',').collect()).collect();
        let exact: Vec<_> = rows.iter().filter(|r| r[1] == "exact").collect();
        let circle: Vec<_> = rows.iter().filter(|r| r[1] == "circle").collect();
        assert_eq!(exact.len(), circle.len());
        for (e, c) in exact.iter().zip(&circle) {
            let d = (e[3].parse::<f64>().unwrap() - c[3].parse::<f64>().unwrap())
                .hypot(e[4].parse::<f64>().unwrap() - c[4].parse::<f64>().unwrap());
            assert!(d <= 1e-6, "{d}");
        }
        assert!(dir.path().join("coverage_case2.svg").exists());
        assert!(std::fs::read_to_string(dir.path().join("conic_divergence.csv")).unwrap().contains("case2,d,"));
    }

    #[test]
    fn sweep_outputs() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = quick_config();
        let out = cmd_drr_sweep(&cfg, dir.path()).unwrap();
        let lv = &out[0];
        for chunk in lv.rows.chunks(3) {
            assert!(chunk.windows(2).all(|w| w[1].xi > w[0].xi));
        }
        let tau = &out[1];
        for chunk in tau.rows.chunks(3) {
            assert!(chunk.windows(2).all(|w| w[1].xi < w[0].xi));
            assert_eq!(chunk[0].value, 0.0);
            assert_eq!(chunk[0].xi, chunk[0].xi_r);
        }
        let a = std::fs::read(dir.path().join("xi_vs_pri.csv")).unwrap();
        let dir2 = tempfile::tempdir().unwrap();
        cmd_drr_sweep(&cfg, dir2.path()).unwrap();
        assert_eq!(a, std::fs::read(dir2.path().join("xi_vs_pri.csv")).unwrap());
    }

    #[test]
    fn speed_flagging() {
        let row = |series, value, xi| SweepRow {
            series,
            value,
            xi,
            xi_r: xi,
            p_dwell: 1.0,
            empirical_xi: xi,
            ci_low: xi,
            ci_high: xi,
            events: 0,
        };
        let rows = vec![row(None, 1.0, 1.0), row(None, 2.0, 2.0), row(None, 3.0, 1.5)];
        assert_eq!(speed_monotonicity(SweepParameter::Speed, None, &rows, 3), vec!["sweep".to_owned()]);
        let rows = vec![row(Some(1.0), 0.1, 2.0), row(Some(2.0), 0.1, 1.0)];
        assert_eq!(speed_monotonicity(SweepParameter::Pri, Some(SweepParameter::Speed), &rows, 1).len(), 1);
    }
}
