//! Tabular and JSON renderings for sweeps, histograms and trajectories.
//!
//! CSV output uses a fixed column order, `\n` line endings and `.` as the
//! decimal separator. Rationals are rendered exactly, as a reduced fraction
//! and as a decimal rounded half-up at [`DECIMAL_PLACES`] places.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::Ratio;
use serde::Serialize;
use serde_json::{json, Value};

use crate::base_digits::{Base, DigitQuad};
use crate::diff_pairs::pair_of;
use crate::dynamics::{base_report, BaseReport, Terminal, Trajectory};
use crate::theorems::{classify_base, predict_cb, predict_mb, BaseClass, PredictionReport};

pub const DECIMAL_PLACES: u32 = 12;

pub const SWEEP_HEADER: &str =
    "b,m,n,mb_measured,mb_predicted,mb_match,sb_size,cb_fraction,cb_decimal,cb_predicted_fraction,cb_match";

pub const HISTOGRAM_HEADER: &str = "k,count,fraction";

pub const FIXED_POINTS_HEADER: &str = "b,fixed_point,value";

/// JSON schema for every document the command-line tool emits.
pub const JSON_SCHEMA: &str = include_str!("../schema/output.schema.json");

pub fn fraction(r: &Ratio<u128>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Exact decimal expansion rounded half-up at `places` digits.
pub fn decimal(r: &Ratio<u128>, places: u32) -> String {
    let scale = 10u128.pow(places);
    let (n, d) = (*r.numer(), *r.denom());
    let whole = n / d;
    let rem = n % d;
    // rem < d ≤ 2⁶⁴ for every ratio built here, so rem·scale stays in range
    let mut frac = (rem * scale + d / 2) / d;
    let mut whole = whole;
    if frac == scale {
        whole += 1;
        frac = 0;
    }
    if places == 0 {
        return whole.to_string();
    }
    format!("{whole}.{frac:0width$}", width = places as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Metrics {
    pub mb: bool,
    pub cb: bool,
    pub sb_size: bool,
    pub fixed_points: bool,
}

impl Metrics {
    pub fn all() -> Self {
        Metrics {
            mb: true,
            cb: true,
            sb_size: true,
            fixed_points: true,
        }
    }
}

/// One base of a sweep. Cells are absent when the metric was not requested
/// or the base has no non-trivial fixed numeral.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub b: u32,
    pub has_fixed_point: bool,
    pub m: Option<u32>,
    pub n: Option<u32>,
    pub mb_measured: Option<u32>,
    pub mb_predicted: Option<u32>,
    pub mb_match: Option<bool>,
    pub sb_size: Option<u64>,
    #[serde(skip)]
    pub cb: Option<Ratio<u128>>,
    #[serde(skip)]
    pub cb_predicted: Option<Ratio<u128>>,
    pub cb_match: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_points: Option<Vec<DigitQuad>>,
}

pub fn sweep_row(base: Base, metrics: Metrics) -> SweepRow {
    sweep_row_from(&base_report(base), metrics)
}

pub fn sweep_row_from(report: &BaseReport, metrics: Metrics) -> SweepRow {
    let base = report.base;
    let (m, n) = match classify_base(base) {
        BaseClass::FiveDecomposition { m, n } => (Some(m), Some(n)),
        _ => (None, None),
    };
    let has_fixed = !report.fixed_numerals.is_empty();
    let mut row = SweepRow {
        b: base.get(),
        has_fixed_point: has_fixed,
        m,
        n,
        mb_measured: None,
        mb_predicted: None,
        mb_match: None,
        sb_size: None,
        cb: None,
        cb_predicted: None,
        cb_match: None,
        fixed_points: None,
    };
    if !has_fixed {
        if metrics.fixed_points {
            row.fixed_points = Some(Vec::new());
        }
        return row;
    }
    if metrics.mb {
        row.mb_measured = report.mb;
        row.mb_predicted = predict_mb(base);
        row.mb_match = row.mb_predicted.map(|p| Some(p) == report.mb);
    }
    if metrics.sb_size {
        row.sb_size = Some(report.sb_size);
    }
    if metrics.cb {
        row.cb = Some(report.cb);
        row.cb_predicted = predict_cb(base);
        row.cb_match = row.cb_predicted.map(|p| p == report.cb);
    }
    if metrics.fixed_points {
        row.fixed_points = Some(report.fixed_numerals.clone());
    }
    row
}

fn cell<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        let fields = [
            r.b.to_string(),
            cell(&r.m),
            cell(&r.n),
            cell(&r.mb_measured),
            cell(&r.mb_predicted),
            cell(&r.mb_match),
            cell(&r.sb_size),
            r.cb.as_ref().map(fraction).unwrap_or_default(),
            r.cb.as_ref()
                .map(|c| decimal(c, DECIMAL_PLACES))
                .unwrap_or_default(),
            r.cb_predicted.as_ref().map(fraction).unwrap_or_default(),
            cell(&r.cb_match),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

fn sweep_row_json(r: &SweepRow) -> Value {
    let mut v = serde_json::to_value(r).expect("plain data");
    let obj = v.as_object_mut().expect("struct");
    obj.insert("cb_fraction".into(), json!(r.cb.as_ref().map(fraction)));
    obj.insert(
        "cb_decimal".into(),
        json!(r.cb.as_ref().map(|c| decimal(c, DECIMAL_PLACES))),
    );
    obj.insert(
        "cb_predicted_fraction".into(),
        json!(r.cb_predicted.as_ref().map(fraction)),
    );
    if let Some(fps) = &r.fixed_points {
        obj.insert(
            "fixed_points".into(),
            json!(fps.iter().map(DigitQuad::render).collect::<Vec<_>>()),
        );
    }
    v
}

pub fn sweep_json(rows: &[SweepRow]) -> Value {
    json!({ "command": "sweep", "rows": rows.iter().map(sweep_row_json).collect::<Vec<_>>() })
}

pub fn sweep_text(rows: &[SweepRow]) -> String {
    let mut out = String::new();
    for r in rows {
        let _ = write!(out, "b={:<5}", r.b);
        if !r.has_fixed_point {
            out.push_str(" no fixed point\n");
            continue;
        }
        if let Some(mb) = r.mb_measured {
            let _ = write!(out, " M_b={mb}");
            if let Some(p) = r.mb_predicted {
                let _ = write!(out, " (predicted {p}, {})", verdict(r.mb_match));
            }
        }
        if let Some(s) = r.sb_size {
            let _ = write!(out, " |S_b|={s}");
        }
        if let Some(c) = &r.cb {
            let _ = write!(out, " C_b={} ≈ {}", fraction(c), decimal(c, DECIMAL_PLACES));
            if let Some(p) = &r.cb_predicted {
                let _ = write!(out, " (predicted {}, {})", fraction(p), verdict(r.cb_match));
            }
        }
        if let Some(fps) = &r.fixed_points {
            let list: Vec<String> = fps.iter().map(DigitQuad::render).collect();
            let _ = write!(
                out,
                " fixed={}",
                if list.is_empty() {
                    "none".into()
                } else {
                    list.join(" ")
                }
            );
        }
        out.push('\n');
    }
    out
}

fn verdict(m: Option<bool>) -> &'static str {
    match m {
        Some(true) => "match",
        Some(false) => "MISMATCH",
        None => "not predicted",
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HistogramRow {
    pub k: u32,
    pub count: u64,
    pub fraction: Option<Ratio<u128>>,
}

pub fn histogram_rows(histogram: &BTreeMap<u32, u64>, normalize: bool) -> Vec<HistogramRow> {
    let total: u64 = histogram.values().sum();
    let max = histogram.keys().next_back().copied().unwrap_or(0);
    (0..=max)
        .map(|k| {
            let count = histogram.get(&k).copied().unwrap_or(0);
            let fraction =
                (normalize && total > 0).then(|| Ratio::new(u128::from(count), u128::from(total)));
            HistogramRow { k, count, fraction }
        })
        .collect()
}

pub fn histogram_csv(rows: &[HistogramRow]) -> String {
    let mut out = String::from(HISTOGRAM_HEADER);
    out.push('\n');
    for r in rows {
        let frac = r
            .fraction
            .as_ref()
            .map(|f| decimal(f, DECIMAL_PLACES))
            .unwrap_or_default();
        let _ = writeln!(out, "{},{},{frac}", r.k, r.count);
    }
    out
}

pub fn histogram_json(base: Base, rows: &[HistogramRow]) -> Value {
    let total: u64 = rows.iter().map(|r| r.count).sum();
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "k": r.k,
                "count": r.count,
                "fraction": r.fraction.as_ref().map(|f| decimal(f, DECIMAL_PLACES)),
                "fraction_exact": r.fraction.as_ref().map(fraction),
            })
        })
        .collect();
    json!({ "command": "histogram", "base": base.get(), "sb_size": total, "rows": rows })
}

pub fn histogram_text(base: Base, rows: &[HistogramRow]) -> String {
    let total: u64 = rows.iter().map(|r| r.count).sum();
    let mut out = format!("base {base}: |S_b| = {total}\n");
    for r in rows {
        let _ = write!(out, "k={:<3} {:>12}", r.k, r.count);
        if let Some(f) = &r.fraction {
            let _ = write!(out, "  {}", decimal(f, DECIMAL_PLACES));
        }
        out.push('\n');
    }
    out
}

/// Descending, ascending and result numerals of every step. A cycling
/// orbit gets one closing step back to its entry state.
fn steps(t: &Trajectory) -> Vec<(DigitQuad, DigitQuad, DigitQuad)> {
    let mut targets: Vec<DigitQuad> = t.states[1..].to_vec();
    if let Terminal::Cycle { entry_step, .. } = t.terminal {
        targets.push(t.states[entry_step]);
    }
    t.states
        .iter()
        .zip(targets)
        .map(|(q, next)| {
            let desc = q.sorted_desc();
            let asc = [desc[3], desc[2], desc[1], desc[0]];
            let mk = |d: [u32; 4]| DigitQuad::new(q.base(), d).expect("digits of a valid numeral");
            (mk(desc), mk(asc), next)
        })
        .collect()
}

pub fn trajectory_text(t: &Trajectory) -> String {
    let show_values = t.base.get() != 10;
    let mut out = format!("start {} (base {})\n", t.start, t.base);
    for (d, a, r) in steps(t) {
        let _ = write!(out, "{d} - {a} = {r}");
        if show_values {
            let _ = write!(out, "   ({} - {} = {})", d.value(), a.value(), r.value());
        }
        out.push('\n');
    }
    match t.terminal {
        Terminal::FixedNumeral(f) => {
            let _ = writeln!(
                out,
                "fixed point {f} reached, distance {}",
                t.distance.unwrap_or(0)
            );
        }
        Terminal::ZeroSink => out.push_str("zero sink reached\n"),
        Terminal::Cycle { period, entry_step } => {
            let _ = writeln!(
                out,
                "enters a cycle of period {period} at step {entry_step}"
            );
        }
    }
    out
}

pub fn trajectory_json(t: &Trajectory) -> Value {
    let steps: Vec<Value> = steps(t)
        .into_iter()
        .map(|(d, a, r)| {
            json!({
                "descending": d.render(),
                "ascending": a.render(),
                "result": r.render(),
                "result_digits": r.digits(),
                "result_value": r.value(),
            })
        })
        .collect();
    let terminal = match t.terminal {
        Terminal::FixedNumeral(f) => json!({ "kind": "fixed-numeral", "numeral": f.render() }),
        Terminal::ZeroSink => json!({ "kind": "zero-sink" }),
        Terminal::Cycle { period, entry_step } => {
            json!({ "kind": "cycle", "period": period, "entry_step": entry_step })
        }
    };
    json!({
        "command": "trajectory",
        "base": t.base.get(),
        "start": t.start.render(),
        "start_value": t.start.value(),
        "steps": steps,
        "terminal": terminal,
        "distance": t.distance,
        "steps_to_periodic": t.steps_to_periodic(),
    })
}

pub fn fixed_points_csv(rows: &[(Base, Vec<DigitQuad>)]) -> String {
    let mut out = String::from(FIXED_POINTS_HEADER);
    out.push('\n');
    for (b, fps) in rows {
        if fps.is_empty() {
            let _ = writeln!(out, "{b},,");
        }
        for f in fps {
            let _ = writeln!(out, "{b},{},{}", csv_field(&f.render()), f.value());
        }
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains(',') {
        format!("\"{s}\"")
    } else {
        s.to_string()
    }
}

pub fn fixed_points_json(rows: &[(Base, Vec<DigitQuad>)]) -> Value {
    let rows: Vec<Value> = rows
        .iter()
        .map(|(b, fps)| {
            let list: Vec<Value> = fps
                .iter()
                .map(|f| {
                    let p = pair_of(f);
                    json!({
                        "numeral": f.render(),
                        "digits": f.digits(),
                        "value": f.value(),
                        "pair": [p.d(), p.d_prime()],
                    })
                })
                .collect();
            json!({ "b": b.get(), "fixed_points": list })
        })
        .collect();
    json!({ "command": "fixed-points", "rows": rows })
}

pub fn fixed_points_text(rows: &[(Base, Vec<DigitQuad>)]) -> String {
    let mut out = String::new();
    for (b, fps) in rows {
        if fps.is_empty() {
            let _ = writeln!(out, "b={b}: none");
        }
        for f in fps {
            let _ = writeln!(out, "b={b}: {f} (pair {})", pair_of(f));
        }
    }
    out
}

pub fn verify_json(reports: &[PredictionReport]) -> Value {
    let all_match = reports.iter().all(PredictionReport::all_match);
    json!({
        "command": "verify",
        "all_match": all_match,
        "reports": serde_json::to_value(reports).expect("plain data"),
    })
}

pub fn verify_text(reports: &[PredictionReport]) -> String {
    let mut out = String::new();
    for r in reports {
        if r.nothing_to_verify() {
            let _ = writeln!(out, "b={}: no fixed point; nothing to verify", r.base);
            continue;
        }
        let _ = write!(out, "b={}:", r.base);
        let _ = write!(
            out,
            " M_b {} (predicted {}) {}",
            opt(r.measured_mb),
            opt(r.predicted_mb),
            r.mb_verdict
        );
        let _ = write!(
            out,
            "; C_b {} (predicted {}) {}",
            r.measured_cb.as_ref().map_or("-".into(), fraction),
            r.predicted_cb.as_ref().map_or("-".into(), fraction),
            r.cb_verdict
        );
        out.push('\n');
        for c in &r.checks {
            let _ = writeln!(
                out,
                "  {:<30} {:<9} {}",
                c.label,
                c.verdict.to_string(),
                c.detail
            );
        }
    }
    let bad: Vec<String> = reports
        .iter()
        .flat_map(PredictionReport::mismatches)
        .collect();
    if bad.is_empty() {
        out.push_str("all checks match\n");
    } else {
        let _ = writeln!(out, "{} mismatch(es):", bad.len());
        for m in bad {
            let _ = writeln!(out, "  {m}");
        }
    }
    out
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or("-".into(), |v| v.to_string())
}

/// Serialises a JSON document with a trailing newline.
pub fn json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::trajectory;

    fn base(b: u32) -> Base {
        Base::new(b).unwrap()
    }

    #[test]
    fn decimal_rounding() {
        assert_eq!(decimal(&Ratio::new(999, 1000), 12), "0.999000000000");
        assert_eq!(decimal(&Ratio::new(1, 3), 12), "0.333333333333");
        assert_eq!(decimal(&Ratio::new(2, 3), 12), "0.666666666667");
        assert_eq!(decimal(&Ratio::new(1, 1), 12), "1.000000000000");
        assert_eq!(decimal(&Ratio::new(0, 1), 3), "0.000");
        assert_eq!(decimal(&Ratio::new(9999, 10000), 3), "1.000");
        assert_eq!(decimal(&Ratio::new(7, 2), 0), "4");
    }

    #[test]
    fn sweep_csv_shape() {
        let rows: Vec<SweepRow> = [5, 6, 10]
            .iter()
            .map(|&b| sweep_row(base(b), Metrics::all()))
            .collect();
        let csv = sweep_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], SWEEP_HEADER);
        assert_eq!(lines[2], "6,,,,,,,,,,");
        assert_eq!(
            lines[3],
            "10,1,1,7,7,true,9990,999/1000,0.999000000000,999/1000,true"
        );
        assert!(!csv.contains('\r'));
        for l in &lines {
            assert_eq!(l.matches(',').count(), 10, "{l}");
        }
    }

    #[test]
    fn sweep_only_mb() {
        let m = Metrics {
            mb: true,
            ..Metrics::default()
        };
        let row = sweep_row(base(20), m);
        assert_eq!(
            sweep_csv(&[row]).lines().nth(1).unwrap(),
            "20,1,2,10,10,true,,,,,"
        );
    }

    #[test]
    fn histogram_normalized_sums_to_one() {
        let report = base_report(base(5));
        let rows = histogram_rows(&report.histogram, true);
        let sum = rows
            .iter()
            .fold(Ratio::new(0u128, 1), |acc, r| acc + r.fraction.unwrap());
        assert_eq!(sum, Ratio::new(1, 1));
        let csv = histogram_csv(&rows);
        assert!(csv.starts_with("k,count,fraction\n0,1,"));
    }

    #[test]
    fn trajectory_text_chain() {
        let start = DigitQuad::new(base(10), [0, 8, 8, 9]).unwrap();
        let t = trajectory(start, 100).unwrap();
        let text = trajectory_text(&t);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[1], "9880 - 0889 = 8991");
        assert_eq!(lines[3], "8820 - 0288 = 8532");
        assert_eq!(lines[4], "8532 - 2358 = 6174");
        assert_eq!(lines[5], "fixed point 6174 reached, distance 4");
        assert_eq!(lines.len(), 6);
    }

    #[test]
    fn trajectory_text_cycle_closes_loop() {
        let start = DigitQuad::new(base(6), [0, 0, 0, 1]).unwrap();
        let t = trajectory(start, 100).unwrap();
        let rendered = steps(&t);
        let Terminal::Cycle { entry_step, .. } = t.terminal else {
            panic!("base 6 cycles")
        };
        assert_eq!(rendered.last().unwrap().2, t.states[entry_step]);
        assert_eq!(rendered.len(), t.states.len());
    }
}
