//! Output formats: JSON, a plain-text table, sweep CSV and an SVG gain plot.
//!
//! Every float written by this module is rounded to six decimals first. The
//! SVG is drawn from the same rounded rows as the CSV, so plotting a sweep
//! directly or from its CSV gives identical bytes.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scenario::{AssessmentResult, Scenario, SweepResult};
use crate::usecases::UseCase;

pub const CSV_HEADER: &str = "sic_db,se_fdd_bps_hz,se_fd_bps_hz,gain_percent,residual_si_dbw";

pub fn round6(x: f64) -> f64 {
    let r = (x * 1e6).round() / 1e6;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Rounds every float in `v` to six decimals. Non-finite numbers are already
/// `null` after serialization.
pub fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => n
            .as_f64()
            .map(round6)
            .and_then(serde_json::Number::from_f64)
            .map_or(Value::Null, Value::Number),
        Value::Array(a) => Value::Array(a.into_iter().map(round_floats).collect()),
        Value::Object(m) => {
            Value::Object(m.into_iter().map(|(k, v)| (k, round_floats(v))).collect())
        }
        other => other,
    }
}

fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON value serializes");
    s.push('\n');
    s
}

pub fn assessment_value(s: &Scenario, r: &AssessmentResult) -> Value {
    let mut result = serde_json::to_value(r).expect("assessment serializes");
    if let Value::Object(m) = &mut result {
        m.remove("assumptions");
    }
    round_floats(json!({
        "scenario": s.to_json_value(),
        "result": result,
        "assumptions": r.assumptions,
        "version": crate::VERSION,
    }))
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn assessment_json(s: &Scenario, r: &AssessmentResult) -> String {
    to_pretty(&assessment_value(s, r))
}

pub fn sweep_json(s: &Scenario, r: &SweepResult) -> String {
    let mut result = serde_json::to_value(r).expect("sweep serializes");
    if let Value::Object(m) = &mut result {
        m.remove("assumptions");
    }
    to_pretty(&round_floats(json!({
        "scenario": s.to_json_value(),
        "result": result,
        "assumptions": r.assumptions,
        "version": crate::VERSION,
    })))
}

pub fn catalog_value(entries: &[&UseCase]) -> Value {
    round_floats(serde_json::to_value(entries).expect("catalog serializes"))
}

pub fn catalog_json(entries: &[&UseCase]) -> String {
    to_pretty(&catalog_value(entries))
}

fn f6(x: f64) -> String {
    format!("{:.6}", round6(x))
}

pub fn assessment_table(r: &AssessmentResult) -> String {
    let c = &r.comparison;
    let g = &r.geometry;
    let mut out = String::new();
    let mut row = |k: &str, v: String| {
        let _ = writeln!(out, "{k:<28} {v}");
    };
    row("use case", r.use_case.to_string());
    row("geometry", g.policy.as_str().to_string());
    if let (Some(id), Some(t)) = (g.satellite_id, g.epoch_s) {
        row("serving satellite", format!("{id} at t = {t:.1} s"));
    }
    for n in &g.nodes {
        row(
            &format!("  {}", n.node),
            format!(
                "elevation {:.3} deg, range {:.3} km",
                n.elevation_deg, n.slant_range_km
            ),
        );
    }
    for d in &c.directions {
        let tag = if d.receives_at_fd_node {
            " (FD receive)"
        } else {
            ""
        };
        row(
            &format!("{} -> {}{tag}", d.tx, d.rx),
            format!(
                "FSPL {:.3} dB, SNR {:.3} dB, SINR {:.3} dB",
                d.budget.fspl_db, d.budget.snr_db, d.efficiency.sinr_fd_db
            ),
        );
    }
    row(
        "SIC",
        format!(
            "{:.3} dB (isolation {:.3} dB)",
            c.sic.sic_db, c.sic.isolation_db
        ),
    );
    row("residual SI", format!("{:.3} dBW", c.residual_si_dbw));
    row("noise", format!("{:.3} dBW", c.noise_dbw));
    row("metric", c.metric.as_str().to_string());
    row("SE FDD", format!("{:.3} bps/Hz", c.se_fdd_bps_hz));
    row("SE FD", format!("{:.3} bps/Hz", c.se_fd_bps_hz));
    row("gain", format!("{:.2} %", c.gain_percent));
    row("SIC break-even", r.sic_breakeven_db.to_string());
    let warn = if r.stability_warning {
        "  WARNING: echo loop unstable"
    } else {
        ""
    };
    row(
        "loop stability margin",
        format!("{:.3} dB{warn}", r.stability_margin_db),
    );
    if !r.assumptions.is_empty() {
        out.push_str("\nassumptions:\n");
        for a in &r.assumptions {
            let _ = writeln!(out, "  {a}");
        }
    }
    out
}

/// One line of sweep CSV, already rounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsvRow {
    pub sic_db: f64,
    pub se_fdd_bps_hz: f64,
    pub se_fd_bps_hz: f64,
    pub gain_percent: f64,
    pub residual_si_dbw: f64,
}

impl CsvRow {
    fn rounded(self) -> CsvRow {
        CsvRow {
            sic_db: round6(self.sic_db),
            se_fdd_bps_hz: round6(self.se_fdd_bps_hz),
            se_fd_bps_hz: round6(self.se_fd_bps_hz),
            gain_percent: round6(self.gain_percent),
            residual_si_dbw: round6(self.residual_si_dbw),
        }
    }
}

pub fn sweep_rows(r: &SweepResult) -> Vec<CsvRow> {
    r.points
        .iter()
        .map(|p| {
            CsvRow {
                sic_db: p.sic_db,
                se_fdd_bps_hz: p.comparison.se_fdd_bps_hz,
                se_fd_bps_hz: p.comparison.se_fd_bps_hz,
                gain_percent: p.comparison.gain_percent,
                residual_si_dbw: p.comparison.residual_si_dbw,
            }
            .rounded()
        })
        .collect()
}

pub fn rows_csv(rows: &[CsvRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            f6(r.sic_db),
            f6(r.se_fdd_bps_hz),
            f6(r.se_fd_bps_hz),
            f6(r.gain_percent),
            f6(r.residual_si_dbw)
        );
    }
    out
}

pub fn sweep_csv(r: &SweepResult) -> String {
    rows_csv(&sweep_rows(r))
}

pub fn assessment_csv(r: &AssessmentResult) -> String {
    let c = &r.comparison;
    rows_csv(&[CsvRow {
        sic_db: c.sic.sic_db,
        se_fdd_bps_hz: c.se_fdd_bps_hz,
        se_fd_bps_hz: c.se_fd_bps_hz,
        gain_percent: c.gain_percent,
        residual_si_dbw: c.residual_si_dbw,
    }
    .rounded()])
}

pub fn read_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let parse_err = |line: usize, message: String| Error::Parse {
        line: line + 1,
        column: 1,
        message,
    };
    match lines.next() {
        Some((_, h)) if h.trim() == CSV_HEADER => {}
        Some((i, h)) => return Err(parse_err(i, format!("unexpected CSV header `{h}`"))),
        None => return Err(parse_err(0, "empty CSV".into())),
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let cells: Vec<f64> = line
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| parse_err(i, format!("bad number: {e}")))?;
        let [sic_db, se_fdd_bps_hz, se_fd_bps_hz, gain_percent, residual_si_dbw] = cells[..] else {
            return Err(parse_err(
                i,
                format!("expected 5 columns, got {}", cells.len()),
            ));
        };
        rows.push(
            CsvRow {
                sic_db,
                se_fdd_bps_hz,
                se_fd_bps_hz,
                gain_percent,
                residual_si_dbw,
            }
            .rounded(),
        );
    }
    if rows.is_empty() {
        return Err(parse_err(0, "CSV has no data rows".into()));
    }
    Ok(rows)
}

const SVG_W: f64 = 640.0;
const SVG_H: f64 = 400.0;
const PAD_L: f64 = 70.0;
const PAD_R: f64 = 20.0;
const PAD_T: f64 = 30.0;
const PAD_B: f64 = 50.0;

/// Axis bounds and tick step covering `[lo, hi]` with round numbers.
fn nice_axis(lo: f64, hi: f64) -> (f64, f64, f64) {
    let (lo, hi) = if hi - lo < 1e-9 {
        (lo - 1.0, hi + 1.0)
    } else {
        (lo, hi)
    };
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    ((lo / step).floor() * step, (hi / step).ceil() * step, step)
}

fn tick_label(v: f64, step: f64) -> String {
    let decimals = if step >= 1.0 {
        0
    } else {
        (-step.log10().floor()) as usize
    };
    let s = format!("{:.*}", decimals, v);
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// Gain versus SIC as a standalone SVG document.
pub fn gain_svg(rows: &[CsvRow]) -> String {
    let xs: Vec<f64> = rows.iter().map(|r| r.sic_db).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.gain_percent).collect();
    let fold = |v: &[f64], init: f64, f: fn(f64, f64) -> f64| v.iter().copied().fold(init, f);
    let (x0, x1, xs_step) = nice_axis(
        fold(&xs, f64::INFINITY, f64::min),
        fold(&xs, f64::NEG_INFINITY, f64::max),
    );
    let (y0, y1, ys_step) = nice_axis(
        fold(&ys, f64::INFINITY, f64::min),
        fold(&ys, f64::NEG_INFINITY, f64::max),
    );
    let pw = SVG_W - PAD_L - PAD_R;
    let ph = SVG_H - PAD_T - PAD_B;
    let px = |x: f64| PAD_L + (x - x0) / (x1 - x0) * pw;
    let py = |y: f64| PAD_T + (1.0 - (y - y0) / (y1 - y0)) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_W}" height="{SVG_H}" viewBox="0 0 {SVG_W} {SVG_H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{SVG_W}" height="{SVG_H}" fill="white"/>"#
    );
    let bottom = PAD_T + ph;
    let right = PAD_L + pw;

    let nx = ((x1 - x0) / xs_step).round() as usize;
    for i in 0..=nx {
        let v = x0 + i as f64 * xs_step;
        let x = px(v);
        let _ = writeln!(
            s,
            r##"<line x1="{x:.2}" y1="{PAD_T:.2}" x2="{x:.2}" y2="{bottom:.2}" stroke="#dddddd"/>"##
        );
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            bottom + 18.0,
            tick_label(v, xs_step)
        );
    }
    let ny = ((y1 - y0) / ys_step).round() as usize;
    for i in 0..=ny {
        let v = y0 + i as f64 * ys_step;
        let y = py(v);
        let _ = writeln!(
            s,
            r##"<line x1="{PAD_L:.2}" y1="{y:.2}" x2="{right:.2}" y2="{y:.2}" stroke="#dddddd"/>"##
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            PAD_L - 8.0,
            y + 4.0,
            tick_label(v, ys_step)
        );
    }
    let _ = writeln!(
        s,
        r#"<path d="M{PAD_L:.2} {PAD_T:.2} V{bottom:.2} H{right:.2}" fill="none" stroke="black"/>"#
    );
    let points: Vec<String> = rows
        .iter()
        .map(|r| format!("{:.2},{:.2}", px(r.sic_db), py(r.gain_percent)))
        .collect();
    let _ = writeln!(
        s,
        r##"<polyline points="{}" fill="none" stroke="#1f77b4" stroke-width="2"/>"##,
        points.join(" ")
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">SIC (dB)</text>"#,
        PAD_L + pw / 2.0,
        SVG_H - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">FD gain over FDD (%)</text>"#,
        PAD_T + ph / 2.0,
        PAD_T + ph / 2.0
    );
    s.push_str("</svg>\n");
    s
}

/// Visibility listing for the `visibility` command.
pub fn passes_table(passes: &[crate::geometry::Pass]) -> String {
    let mut out = String::from("satellite  start_s      end_s        duration_s  max_el_deg  max_el_epoch_s  min_range_km\n");
    for p in passes {
        let _ = writeln!(
            out,
            "{:<10} {:<12.1} {:<12.1} {:<11.1} {:<11.3} {:<15.1} {:.3}",
            p.satellite_id,
            p.start_s,
            p.end_s,
            p.duration_s,
            p.max_elevation_deg,
            p.max_elevation_epoch_s,
            p.min_slant_range_km
        );
    }
    out
}

pub fn passes_json(passes: &[crate::geometry::Pass]) -> String {
    to_pretty(&round_floats(
        serde_json::to_value(passes).expect("passes serialize"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{assess, sweep_sic};
    use crate::usecases::{default_scenario, UseCaseId};
    use serde_json::Map;

    fn object_keys(v: &Value) -> Vec<String> {
        v.as_object()
            .map(Map::keys)
            .into_iter()
            .flatten()
            .cloned()
            .collect()
    }

    fn fu_ud() -> Scenario {
        default_scenario(UseCaseId::FuUd).load().unwrap()
    }

    #[test]
    fn rounding() {
        assert_eq!(round6(1.23456789), 1.234568);
        assert_eq!(round6(-0.0000001), 0.0);
        assert_eq!(round6(-0.0).to_bits(), 0.0f64.to_bits());
    }

    #[test]
    fn json_has_expected_top_level() {
        let s = fu_ud();
        let r = assess(&s).unwrap();
        let v = assessment_value(&s, &r);
        assert_eq!(
            object_keys(&v),
            ["assumptions", "result", "scenario", "version"]
        );
        assert!(v["result"]["comparison"]["se_fd_bps_hz"].is_number());
        assert_eq!(assessment_json(&s, &r), assessment_json(&s, &r));
    }

    #[test]
    fn csv_round_trip_and_svg_identity() {
        let s = fu_ud();
        let sweep = sweep_sic(&s, &[50.0, 60.0, 70.0, 80.0, 90.0]).unwrap();
        let csv = sweep_csv(&sweep);
        assert!(csv.starts_with(CSV_HEADER));
        assert_eq!(csv.lines().count(), 6);
        let rows = read_csv(&csv).unwrap();
        assert_eq!(rows, sweep_rows(&sweep));
        assert_eq!(rows_csv(&rows), csv);
        assert_eq!(gain_svg(&rows), gain_svg(&sweep_rows(&sweep)));
        let svg = gain_svg(&rows);
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn csv_reader_rejects_garbage() {
        assert!(read_csv("").is_err());
        assert!(read_csv("a,b\n1,2\n").is_err());
        assert!(read_csv(&format!("{CSV_HEADER}\n1,2,3\n")).is_err());
        assert!(read_csv(&format!("{CSV_HEADER}\n1,2,3,4,x\n")).is_err());
        assert!(read_csv(&format!("{CSV_HEADER}\n")).is_err());
    }

    #[test]
    fn single_point_svg() {
        let row = CsvRow {
            sic_db: 70.0,
            se_fdd_bps_hz: 1.0,
            se_fd_bps_hz: 2.0,
            gain_percent: 100.0,
            residual_si_dbw: -120.0,
        };
        let svg = gain_svg(&[row]);
        assert!(!svg.contains("NaN"));
    }

    #[test]
    fn nice_axis_covers_range() {
        let (lo, hi, step) = nice_axis(3.2, 97.0);
        assert!(lo <= 3.2 && hi >= 97.0);
        assert_eq!(step, 20.0);
        assert_eq!(tick_label(-0.0, 0.5), "0.0");
    }

    #[test]
    fn table_mentions_assumptions() {
        let r = assess(&fu_ud()).unwrap();
        let t = assessment_table(&r);
        assert!(t.contains("SE FD"));
        assert!(t.contains("assumptions:"));
        assert!(t.contains("duplex.si_reference"));
    }
}
