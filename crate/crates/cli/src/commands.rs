use std::io::Read;

use rayleigh::acceptance;
use rayleigh::{
    build_series, convergence_diagnostics, convolve_response, evaluate_grid, oracle_compare,
    prony_export, zero_table, DirichletSeries, Execution, InversionConfig, SignalTrace, SumReport,
    TimeGrid,
};
use serde_json::Value;

use crate::output::{float, num, nums, Object, Table};
use crate::{CountArgs, Failure, Format, Grid, GridArgs, InvertArgs, Report, RespondArgs,
    SeriesArgs, VerifyArgs};

fn done(bytes: Vec<u8>) -> Result<Report, Failure> {
    Ok(Report { bytes, ok: true })
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Invalid(msg.into())
}

fn series_meta(table: Table, series: &DirichletSeries) -> Table {
    table
        .meta("nu", float(series.order().nu()))
        .meta("N", series.len())
        .meta("tail_tol", float(series.tail_tol()))
        .meta("tail_bound", float(series.tail_bound()))
}

fn grid(g: &Grid, defaults: (f64, f64, usize)) -> Result<TimeGrid, Failure> {
    let t0 = g.t_min.unwrap_or(defaults.0);
    let t1 = g.t_max.unwrap_or(defaults.1);
    let n = g.points.unwrap_or(defaults.2);
    let grid = if g.geometric {
        TimeGrid::geometric(t0, t1, n)?
    } else {
        TimeGrid::linear(t0, t1, n)?
    };
    if grid.first() <= 0.0 {
        return Err(invalid("grid times must be > 0"));
    }
    Ok(grid)
}

pub fn zeros(a: &CountArgs) -> Result<Report, Failure> {
    let count = a.count.unwrap_or(10);
    let table = zero_table(a.common.nu, count)?;
    match a.common.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut t = Table::new(&["n", "j"])
                .meta("nu", float(a.common.nu.nu()))
                .meta("count", count)
                .meta("residual_bound", float(table.residual_bound()));
            for (i, &j) in table.zeros().iter().enumerate() {
                t.row(vec![(i + 1).to_string(), float(j)]);
            }
            done(t.render())
        }
        Format::Json => done(
            Object::new()
                .float("nu", a.common.nu.nu())
                .field("count", count)
                .float("residual_bound", table.residual_bound())
                .field("zeros", nums(table.zeros()))
                .render(),
        ),
    }
}

pub fn sum(a: &CountArgs) -> Result<Report, Failure> {
    let count = a.count.unwrap_or(500);
    let table = zero_table(a.common.nu, count)?;
    let r = SumReport::new(&table);
    match a.common.format.unwrap_or(Format::Json) {
        Format::Json => done(
            Object::new()
                .float("nu", r.nu)
                .field("n_terms", r.n_terms)
                .float("partial_sum", r.partial_sum)
                .float("tail_estimate", r.tail_estimate)
                .float("tail_bound", r.tail_bound)
                .float("total", r.total)
                .float("closed_form", r.closed_form)
                .float("abs_error", r.abs_error)
                .render(),
        ),
        Format::Csv => {
            let mut t = Table::new(&[
                "nu",
                "n_terms",
                "partial_sum",
                "tail_estimate",
                "tail_bound",
                "total",
                "closed_form",
                "abs_error",
            ]);
            t.row(vec![
                float(r.nu),
                r.n_terms.to_string(),
                float(r.partial_sum),
                float(r.tail_estimate),
                float(r.tail_bound),
                float(r.total),
                float(r.closed_form),
                float(r.abs_error),
            ]);
            done(t.render())
        }
    }
}

pub fn diagnose(a: &CountArgs) -> Result<Report, Failure> {
    let count = a.count.unwrap_or(1000);
    let table = zero_table(a.common.nu, count)?;
    let d = convergence_diagnostics(a.common.nu, &table)?;
    match a.common.format.unwrap_or(Format::Json) {
        Format::Json => {
            let pairs = |s: &[(usize, f64)]| {
                Value::Array(
                    s.iter()
                        .map(|&(n, v)| Value::Array(vec![n.into(), num(v)]))
                        .collect(),
                )
            };
            done(
                Object::new()
                    .float("nu", a.common.nu.nu())
                    .field("n_terms", count)
                    .float("d_estimate", d.d_estimate)
                    .float("sigma_estimate", d.sigma_estimate)
                    .field("d_sequence", pairs(&d.d_sequence))
                    .field("sigma_sequence", pairs(&d.sigma_sequence))
                    .render(),
            )
        }
        Format::Csv => {
            let mut t = Table::new(&["n", "d", "sigma"])
                .meta("nu", float(a.common.nu.nu()))
                .meta("d_estimate", float(d.d_estimate))
                .meta("sigma_estimate", float(d.sigma_estimate));
            for (dn, sn) in d.d_sequence.iter().zip(&d.sigma_sequence) {
                t.row(vec![dn.0.to_string(), float(dn.1), float(sn.1)]);
            }
            done(t.render())
        }
    }
}

fn series(a: &SeriesArgs, t_min: f64) -> Result<DirichletSeries, Failure> {
    Ok(build_series(a.common.nu, a.tail_tol, t_min)?)
}

pub fn relax(a: &GridArgs) -> Result<Report, Failure> {
    let g = grid(&a.grid, (1e-3, 10.0, 50))?;
    let s = series(&a.series, g.first())?;
    let rows = evaluate_grid(&s, &g, Execution::default())?;
    match a.series.common.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut t = series_meta(Table::new(&["t", "F", "G", "Phi"]), &s)
                .meta("phi_t_min", float(s.phi_t_min()));
            for r in &rows {
                t.row(vec![float(r.t), float(r.f), float(r.g), float(r.phi)]);
            }
            done(t.render())
        }
        Format::Json => {
            let col = |f: fn(&rayleigh::RelaxationSample) -> f64| {
                nums(&rows.iter().map(f).collect::<Vec<_>>())
            };
            done(
                Object::new()
                    .float("nu", s.order().nu())
                    .field("n_terms", s.len())
                    .float("tail_tol", s.tail_tol())
                    .float("tail_bound", s.tail_bound())
                    .float("phi_t_min", s.phi_t_min())
                    .field("t", col(|r| r.t))
                    .field("F", col(|r| r.f))
                    .field("G", col(|r| r.g))
                    .field("Phi", col(|r| r.phi))
                    .render(),
            )
        }
    }
}

pub fn invert_check(a: &InvertArgs) -> Result<Report, Failure> {
    let g = grid(&a.grid, (0.01, 2.0, 20))?;
    let config = InversionConfig::new(a.gs_terms, (g.first(), g.last()))?;
    let s = series(&a.series, g.first())?;
    let r = oracle_compare(a.series.common.nu, &g, &s, &config)?;
    match a.series.common.format.unwrap_or(Format::Json) {
        Format::Json => done(
            Object::new()
                .float("nu", r.nu)
                .field("t_values", nums(&r.t_values))
                .field("series_values", nums(&r.series_values))
                .field("inverted_values", nums(&r.inverted_values))
                .float("max_abs_err", r.max_abs_err)
                .float("mean_abs_err", r.mean_abs_err)
                .render(),
        ),
        Format::Csv => {
            let mut t = series_meta(Table::new(&["t", "series", "inverted", "abs_err"]), &s)
                .meta("gs_terms", a.gs_terms)
                .meta("max_abs_err", float(r.max_abs_err))
                .meta("mean_abs_err", float(r.mean_abs_err));
            for i in 0..r.t_values.len() {
                let (x, y) = (r.series_values[i], r.inverted_values[i]);
                t.row(vec![float(r.t_values[i]), float(x), float(y), float((x - y).abs())]);
            }
            done(t.render())
        }
    }
}

/// Two-column `t,V` CSV; `#` lines and one non-numeric header row are skipped.
fn read_trace(text: &str) -> Result<SignalTrace, Failure> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let (mut times, mut values) = (Vec::new(), Vec::new());
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| invalid(format!("input CSV: {e}")))?;
        if record.len() != 2 {
            return Err(invalid(format!(
                "input CSV record {} has {} fields, expected 2 (t, V)",
                i + 1,
                record.len()
            )));
        }
        let parsed = (record[0].parse::<f64>(), record[1].parse::<f64>());
        match parsed {
            (Ok(t), Ok(v)) => {
                times.push(t);
                values.push(v);
            }
            _ if i == 0 => continue,
            _ => {
                return Err(invalid(format!(
                    "input CSV record {} is not numeric: {:?}",
                    i + 1,
                    record
                )))
            }
        }
    }
    Ok(SignalTrace::new(TimeGrid::new(times)?, values)?)
}

pub fn respond(a: &RespondArgs) -> Result<Report, Failure> {
    let text = match &a.input {
        Some(path) => std::fs::read_to_string(path)?,
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            buf
        }
    };
    let input = read_trace(&text)?;
    let positive = input.times().iter().find(|&&t| t > 0.0).copied().unwrap_or(1.0);
    let s = series(&a.series, positive)?;
    let r = convolve_response(&s, &input)?;
    match a.series.common.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut t = series_meta(Table::new(&["t", "V", "I"]), &s);
            if let Some(u) = r.under_resolved {
                t = t.meta(
                    "warning",
                    format!(
                        "under-resolved fast modes: max step {} times alpha_N {} exceeds 1",
                        float(u.max_step),
                        float(u.fastest_rate)
                    ),
                );
            }
            for ((&tk, &v), &i) in input.times().iter().zip(input.values()).zip(r.current.values()) {
                t.row(vec![float(tk), float(v), float(i)]);
            }
            done(t.render())
        }
        Format::Json => {
            let warning = r.under_resolved.map(|u| {
                Object::new()
                    .float("max_step", u.max_step)
                    .float("fastest_rate", u.fastest_rate)
            });
            let mut obj = Object::new()
                .float("nu", s.order().nu())
                .field("n_terms", s.len())
                .float("tail_tol", s.tail_tol())
                .field("t", nums(input.times()))
                .field("V", nums(input.values()))
                .field("I", nums(r.current.values()));
            obj = match warning {
                Some(w) => obj.field("under_resolved", w.into_value()),
                None => obj.field("under_resolved", Value::Null),
            };
            done(obj.render())
        }
    }
}

pub fn prony(a: &SeriesArgs) -> Result<Report, Failure> {
    let s = series(a, 1.0)?;
    let p = prony_export(&s);
    match a.common.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut t = series_meta(Table::new(&["c_n", "alpha_n"]), &s)
                .meta("static_term", float(p.static_term));
            for (c, r) in p.amplitudes.iter().zip(&p.rates) {
                t.row(vec![float(*c), float(*r)]);
            }
            done(t.render())
        }
        Format::Json => done(
            Object::new()
                .float("nu", s.order().nu())
                .float("static_term", p.static_term)
                .field("amplitudes", nums(&p.amplitudes))
                .field("rates", nums(&p.rates))
                .render(),
        ),
    }
}

pub fn verify(a: &VerifyArgs) -> Report {
    let outcomes = acceptance::run_all(Execution::default());
    let ok = outcomes.iter().all(|o| o.passed);
    let bytes = match a.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut t = Table::new(&["criterion", "result", "elapsed_s", "budget_s", "title", "detail"])
                .meta("passed", outcomes.iter().filter(|o| o.passed).count())
                .meta("total", outcomes.len());
            for o in &outcomes {
                t.row(vec![
                    o.id.to_string(),
                    if o.passed { "PASS" } else { "FAIL" }.to_owned(),
                    format!("{:.3}", o.elapsed_s),
                    format!("{:.0}", o.budget_s),
                    o.title.to_owned(),
                    o.detail.clone(),
                ]);
            }
            t.render()
        }
        Format::Json => {
            let rows = outcomes
                .iter()
                .map(|o| {
                    Object::new()
                        .field("criterion", o.id)
                        .field("passed", o.passed)
                        .field("checks_passed", o.checks_passed)
                        .field("within_budget", o.within_budget)
                        .float("elapsed_s", o.elapsed_s)
                        .float("budget_s", o.budget_s)
                        .field("title", o.title)
                        .field("detail", o.detail.clone())
                        .into_value()
                })
                .collect();
            Object::new()
                .field("passed", ok)
                .field("criteria", Value::Array(rows))
                .render()
        }
    };
    Report { bytes, ok }
}
