use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::experiment::{ExperimentRow, Method, TraceRecord};
use crate::HarnessError;

pub const CSV_HEADER: [&str; 10] = [
    "method",
    "sweep_value",
    "mean_queries",
    "ci95",
    "pcs",
    "queries_region",
    "queries_flag",
    "queries_estimate",
    "queries_amplify",
    "queries_classical",
];

pub const TRACE_HEADER: [&str; 10] =
    ["method", "sweep_value", "replication", "t", "a", "b", "r_t", "branch", "next_a", "next_b"];

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io { path: path.display().to_string(), source }
}

fn csv_err(e: csv::Error) -> HarnessError {
    HarnessError::Config(format!("csv: {e}"))
}

/// Rows as CSV text. `f64` Display is the shortest representation that
/// parses back to the same value.
pub fn rows_to_csv(rows: &[ExperimentRow]) -> Result<String, HarnessError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in rows {
        let mut rec = vec![r.method.name().to_string(), r.sweep_value.clone()];
        rec.extend([r.mean_queries, r.ci95, r.pcs].iter().map(f64::to_string));
        rec.extend(r.phase_means.iter().map(f64::to_string));
        w.write_record(&rec).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| HarnessError::Config(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| HarnessError::Config(e.to_string()))
}

pub fn parse_csv(text: &str) -> Result<Vec<ExperimentRow>, HarnessError> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let header = rd.headers().map_err(csv_err)?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(HarnessError::Config(format!("unexpected header {header:?}")));
    }
    let num = |s: &str| s.parse::<f64>().map_err(|_| HarnessError::Config(format!("bad number '{s}'")));
    rd.records()
        .map(|rec| {
            let rec = rec.map_err(csv_err)?;
            let mut phase_means = [0.0; 5];
            for (slot, s) in phase_means.iter_mut().zip(rec.iter().skip(5)) {
                *slot = num(s)?;
            }
            Ok(ExperimentRow {
                method: rec[0].parse()?,
                sweep_value: rec[1].to_string(),
                mean_queries: num(&rec[2])?,
                ci95: num(&rec[3])?,
                pcs: num(&rec[4])?,
                phase_means,
            })
        })
        .collect()
}

pub fn emit_csv(rows: &[ExperimentRow], path: &Path) -> Result<(), HarnessError> {
    if rows.is_empty() {
        return Err(HarnessError::Config("no rows to write".into()));
    }
    fs::write(path, rows_to_csv(rows)?).map_err(io_err(path))
}

pub fn emit_trace(records: &[TraceRecord], path: &Path) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(TRACE_HEADER).map_err(csv_err)?;
    for t in records {
        w.write_record([
            t.method.name().to_string(),
            t.sweep_value.clone(),
            t.replication.to_string(),
            t.t.to_string(),
            t.a.to_string(),
            t.b.to_string(),
            t.r.to_string(),
            t.branch.name().to_string(),
            t.next_a.to_string(),
            t.next_b.to_string(),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| HarnessError::Config(format!("csv: {e}")))?;
    fs::write(path, bytes).map_err(io_err(path))
}

/// Sweep values in first-seen order, with each method's (mean, ci) per value.
fn series(rows: &[ExperimentRow]) -> (Vec<String>, Vec<(Method, Vec<Option<(f64, f64)>>)>) {
    let mut xs: Vec<String> = Vec::new();
    for r in rows {
        if !xs.contains(&r.sweep_value) {
            xs.push(r.sweep_value.clone());
        }
    }
    let out = Method::ALL
        .into_iter()
        .filter(|m| rows.iter().any(|r| r.method == *m))
        .map(|m| {
            let ys = xs
                .iter()
                .map(|x| {
                    rows.iter()
                        .find(|r| r.method == m && &r.sweep_value == x)
                        .map(|r| (r.mean_queries, r.ci95))
                })
                .collect();
            (m, ys)
        })
        .collect();
    (xs, out)
}

/// Whitespace-separated companion data: one line per sweep value with mean
/// and CI for every method.
pub fn plot_data(rows: &[ExperimentRow]) -> String {
    let (xs, ser) = series(rows);
    let mut s = String::from("# sweep_value");
    for (m, _) in &ser {
        let _ = write!(s, " {m}_mean {m}_ci95");
    }
    s.push('\n');
    for (i, x) in xs.iter().enumerate() {
        s.push_str(x);
        for (_, ys) in &ser {
            match ys[i] {
                Some((mean, ci)) => {
                    let _ = write!(s, " {mean} {ci}");
                }
                None => s.push_str(" nan nan"),
            }
        }
        s.push('\n');
    }
    s
}

const W: f64 = 640.0;
const H: f64 = 420.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const COLORS: [&str; 2] = ["#1f77b4", "#d62728"];

/// Self-contained SVG chart: lines with error bars when every sweep value
/// is numeric, grouped bars otherwise. `log_axes` puts both axes (or the y
/// axis of a bar chart) on a log scale.
pub fn render_svg(rows: &[ExperimentRow], log_axes: bool) -> String {
    let (xs, ser) = series(rows);
    let numeric: Option<Vec<f64>> = xs.iter().map(|x| x.parse::<f64>().ok().filter(|v| *v > 0.0)).collect();
    let ys: Vec<f64> = ser
        .iter()
        .flat_map(|(_, v)| v.iter().flatten().flat_map(|&(m, c)| [m + c, (m - c).max(m * 0.5)]))
        .filter(|v| v.is_finite() && *v > 0.0)
        .collect();
    let ymax = ys.iter().cloned().fold(1.0, f64::max) * 1.05;
    let ymin = if log_axes { ys.iter().cloned().fold(ymax, f64::min) / 1.5 } else { 0.0 };
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let ty = |v: f64| -> f64 {
        let f = if log_axes { (v.max(ymin).ln() - ymin.ln()) / (ymax.ln() - ymin.ln()) } else { v / ymax };
        TOP + ph * (1.0 - f)
    };

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{LEFT},{TOP} V{} H{}" stroke="black" fill="none"/>"#,
        TOP + ph,
        LEFT + pw
    );
    for i in 0..=4 {
        let v = if log_axes { (ymin.ln() + (ymax.ln() - ymin.ln()) * i as f64 / 4.0).exp() } else { ymax * i as f64 / 4.0 };
        let y = ty(v);
        let _ = writeln!(s, r#"<text x="{}" y="{y:.1}" font-size="11" text-anchor="end">{v:.3e}</text>"#, LEFT - 6.0);
    }
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.1}" font-size="12" transform="rotate(-90 20 {:.1})" text-anchor="middle">mean queries</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );

    match numeric {
        Some(xv) => {
            let (lo, hi) = xv.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
            let tx = |v: f64| -> f64 {
                let f = if hi <= lo {
                    0.5
                } else if log_axes {
                    (v.ln() - lo.ln()) / (hi.ln() - lo.ln())
                } else {
                    (v - lo) / (hi - lo)
                };
                LEFT + 20.0 + (pw - 40.0) * f
            };
            for (x, label) in xv.iter().zip(&xs) {
                let _ = writeln!(s, r#"<text x="{:.1}" y="{}" font-size="11" text-anchor="middle">{label}</text>"#, tx(*x), TOP + ph + 16.0);
            }
            for (si, (_, vals)) in ser.iter().enumerate() {
                let c = COLORS[si % COLORS.len()];
                let pts: Vec<String> = xv
                    .iter()
                    .zip(vals)
                    .filter_map(|(x, v)| v.map(|(m, _)| format!("{:.1},{:.1}", tx(*x), ty(m))))
                    .collect();
                let _ = writeln!(s, r#"<polyline points="{}" stroke="{c}" fill="none" stroke-width="2"/>"#, pts.join(" "));
                for (x, v) in xv.iter().zip(vals) {
                    if let Some((m, ci)) = v {
                        let px = tx(*x);
                        let _ = writeln!(s, r#"<circle cx="{px:.1}" cy="{:.1}" r="3" fill="{c}"/>"#, ty(*m));
                        let _ = writeln!(
                            s,
                            r#"<line x1="{px:.1}" y1="{:.1}" x2="{px:.1}" y2="{:.1}" stroke="{c}"/>"#,
                            ty(m + ci),
                            ty((m - ci).max(ymin))
                        );
                    }
                }
            }
        }
        None => {
            let group = pw / xs.len() as f64;
            let bar = group * 0.8 / ser.len().max(1) as f64;
            for (gi, label) in xs.iter().enumerate() {
                let gx = LEFT + group * gi as f64;
                let _ = writeln!(s, r#"<text x="{:.1}" y="{}" font-size="11" text-anchor="middle">{label}</text>"#, gx + group / 2.0, TOP + ph + 16.0);
                for (si, (_, vals)) in ser.iter().enumerate() {
                    if let Some((m, ci)) = vals[gi] {
                        let c = COLORS[si % COLORS.len()];
                        let x = gx + group * 0.1 + bar * si as f64;
                        let y = ty(m);
                        let _ = writeln!(s, r#"<rect x="{x:.1}" y="{y:.1}" width="{bar:.1}" height="{:.1}" fill="{c}"/>"#, TOP + ph - y);
                        let cx = x + bar / 2.0;
                        let _ = writeln!(
                            s,
                            r#"<line x1="{cx:.1}" y1="{:.1}" x2="{cx:.1}" y2="{:.1}" stroke="black"/>"#,
                            ty(m + ci),
                            ty((m - ci).max(ymin))
                        );
                    }
                }
            }
        }
    }
    for (si, (m, _)) in ser.iter().enumerate() {
        let y = TOP + 14.0 * si as f64 + 6.0;
        let c = COLORS[si % COLORS.len()];
        let _ = writeln!(s, r#"<rect x="{}" y="{}" width="10" height="10" fill="{c}"/>"#, LEFT + 12.0, y - 8.0);
        let _ = writeln!(s, r#"<text x="{}" y="{y}" font-size="12">{m}</text>"#, LEFT + 26.0);
    }
    s.push_str("</svg>\n");
    s
}

/// Companion path with the `.dat` extension.
pub fn data_path(plot: &Path) -> PathBuf {
    plot.with_extension("dat")
}

pub fn emit_plot(rows: &[ExperimentRow], path: &Path, log_axes: bool) -> Result<PathBuf, HarnessError> {
    if rows.is_empty() {
        return Err(HarnessError::Config("no rows to plot".into()));
    }
    fs::write(path, render_svg(rows, log_axes)).map_err(io_err(path))?;
    let dat = data_path(path);
    fs::write(&dat, plot_data(rows)).map_err(io_err(&dat))?;
    Ok(dat)
}
