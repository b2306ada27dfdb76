//! Compares every prediction of this module with measured dynamics.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::tables::{
    table4_column_max, Table4Entry, TABLE1, TABLE1_ONE_STEP, TABLE2, TABLE3, TABLE4, TABLE4_MIN_N,
};
use super::{
    classify_base, fixed_point_digits, measure_l, power_of_two_exponent, predict_cb, predict_mb,
    proposition_bound_l, BaseClass,
};
use crate::base_digits::{kaprekar_step, Base, DigitQuad};
use crate::diff_pairs::{
    all_pairs, classify, count_representatives, numerals_with_pair, pair_count, pair_of, pair_step,
    predecessors, predecessors_condensed, DifferencePair, PairType,
};
use crate::dynamics::{
    base_report, default_max_steps, fixed_pair, trajectory, BaseReport, PairDistanceMap,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Depth {
    Formulas,
    Deep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Match,
    Mismatch,
    NotPredicted,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Match
        } else {
            Verdict::Mismatch
        }
    }

    fn compare<T: PartialEq>(predicted: Option<T>, measured: Option<T>) -> Self {
        match predicted {
            None => Verdict::NotPredicted,
            Some(p) => Verdict::from_bool(Some(p) == measured),
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Match => "match",
            Verdict::Mismatch => "mismatch",
            Verdict::NotPredicted => "not-predicted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub label: String,
    pub verdict: Verdict,
    pub detail: String,
}

impl Check {
    fn new(label: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Check {
            label: label.into(),
            verdict: Verdict::from_bool(ok),
            detail: detail.into(),
        }
    }
}

fn ratio_opt<S: Serializer>(r: &Option<Ratio<u128>>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&format!("{}/{}", r.numer(), r.denom())),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredictionReport {
    pub base: Base,
    pub class: BaseClass,
    pub depth: Depth,
    pub predicted_mb: Option<u32>,
    pub measured_mb: Option<u32>,
    pub mb_verdict: Verdict,
    #[serde(serialize_with = "ratio_opt")]
    pub predicted_cb: Option<Ratio<u128>>,
    #[serde(serialize_with = "ratio_opt")]
    pub measured_cb: Option<Ratio<u128>>,
    pub cb_verdict: Verdict,
    /// Deep checks, in a fixed order.
    pub checks: Vec<Check>,
}

impl PredictionReport {
    pub fn mismatches(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.mb_verdict == Verdict::Mismatch {
            out.push(format!(
                "mb b={}: predicted {:?}, measured {:?}",
                self.base, self.predicted_mb, self.measured_mb
            ));
        }
        if self.cb_verdict == Verdict::Mismatch {
            out.push(format!("cb b={}", self.base));
        }
        for c in self
            .checks
            .iter()
            .filter(|c| c.verdict == Verdict::Mismatch)
        {
            out.push(format!("{} b={}: {}", c.label, self.base, c.detail));
        }
        out
    }

    pub fn all_match(&self) -> bool {
        self.mismatches().is_empty()
    }

    /// True when the base has no non-trivial fixed numeral.
    pub fn nothing_to_verify(&self) -> bool {
        self.class == BaseClass::NoFixedPoint
    }
}

pub fn verify_base(base: Base, depth: Depth) -> PredictionReport {
    let class = classify_base(base);
    let report = base_report(base);
    let predicted_mb = predict_mb(base);
    let predicted_cb = predict_cb(base);
    let measured_cb = (report.sb_size > 0).then_some(report.cb);
    let checks = match (depth, class) {
        (Depth::Deep, BaseClass::FiveDecomposition { m, n }) => Context {
            base,
            m,
            n,
            report: &report,
        }
        .run(),
        _ => Vec::new(),
    };
    PredictionReport {
        base,
        class,
        depth,
        predicted_mb,
        measured_mb: report.mb,
        mb_verdict: Verdict::compare(predicted_mb, report.mb),
        predicted_cb,
        measured_cb,
        cb_verdict: Verdict::compare(predicted_cb, measured_cb),
        checks,
    }
}

struct Context<'a> {
    base: Base,
    m: u32,
    n: u32,
    report: &'a BaseReport,
}

type CheckFn = fn(&Context<'_>) -> Vec<Check>;

impl Context<'_> {
    fn run(&self) -> Vec<Check> {
        let groups: [CheckFn; 8] = [
            fixed_numeral_checks,
            predecessor_checks,
            odd_part_checks,
            landing_checks,
            divisible_trajectory_checks,
            step_table_checks,
            total_step_checks,
            iterate_identity_checks,
        ];
        groups
            .par_iter()
            .map(|g| g(self))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    }

    fn pair(&self, d: u32, dp: u32) -> DifferencePair {
        DifferencePair::canonical(self.base, d, dp).expect("components below base")
    }

    fn power_of_two(&self) -> Option<u32> {
        power_of_two_exponent(self.base)
    }

    fn unit(&self) -> u32 {
        1 << self.n
    }

    fn class_pair(&self, (p, q): (u32, u32)) -> DifferencePair {
        self.pair(p * self.unit(), q * self.unit())
    }
}

/// The fixed numeral formula, and the one-step landing from its pair.
fn fixed_numeral_checks(cx: &Context<'_>) -> Vec<Check> {
    let fixed = fixed_point_digits(cx.base).expect("5 | b");
    let fp = fixed_pair(cx.base).expect("5 | b");
    let formula_ok = kaprekar_step(&fixed) == fixed
        && pair_of(&fixed) == fp
        && cx.report.fixed_numerals == vec![fixed];
    let numerals = numerals_with_pair(&fp);
    let into_fixed = numerals.iter().all(|q| kaprekar_step(q) == fixed);
    let count_ok = numerals.len() as u64 == count_representatives(&fp);
    // no other pair's image is the fixed numeral
    let others_miss = predecessors(&fp)
        .iter()
        .filter(|p| **p != fp)
        .all(|p| p.image() != fixed);
    vec![
        Check::new(
            "fixed-numeral",
            formula_ok,
            format!("{fixed} with pair {fp}"),
        ),
        Check::new(
            "fixed-pair-refinement",
            into_fixed && count_ok && others_miss,
            format!(
                "{} numerals with pair {fp} reach {fixed} in one step",
                numerals.len()
            ),
        ),
    ]
}

/// Preimage under `pair_step` by a full scan.
fn scanned_preimages(base: Base) -> Vec<BTreeSet<DifferencePair>> {
    let mut out = vec![BTreeSet::new(); pair_count(base)];
    for p in all_pairs(base) {
        out[pair_step(&p).index()].insert(p);
    }
    out
}

fn predecessor_checks(cx: &Context<'_>) -> Vec<Check> {
    let scan = scanned_preimages(cx.base);
    let bad = all_pairs(cx.base)
        .filter(|p| predecessors(p) != scan[p.index()])
        .count();
    let mut checks = vec![Check::new(
        "predecessor-table",
        bad == 0,
        format!(
            "{bad} of {} pairs disagree with the scan",
            pair_count(cx.base)
        ),
    )];
    let b = cx.base.get();
    if b.is_multiple_of(4) && b > 4 {
        let bad = all_pairs(cx.base)
            .filter(|p| predecessors_condensed(p).ok().as_ref() != Some(&scan[p.index()]))
            .count();
        checks.push(Check::new(
            "predecessor-condensed",
            bad == 0,
            format!("{bad} pairs disagree with the scan"),
        ));
    }
    checks
}

/// Pairs that reach the fixed pair, the fixed pair included.
fn basin_pairs(base: Base) -> Vec<DifferencePair> {
    let map = PairDistanceMap::towards(fixed_pair(base).expect("5 | b"));
    map.iter()
        .filter(|(_, s)| s.is_some())
        .map(|(p, _)| p)
        .collect()
}

/// `b = 5·m·2ⁿ` with odd `m > 1`: shape of the fixed pair's basin.
fn odd_part_checks(cx: &Context<'_>) -> Vec<Check> {
    if cx.m == 1 {
        return Vec::new();
    }
    let basin = basin_pairs(cx.base);
    let divisible = basin
        .iter()
        .all(|p| classify(p) == PairType::A && p.d() % cx.m == 0 && p.d_prime() % cx.m == 0);
    let expected = 4usize.pow(cx.n + 1);
    let h_sets = h_set_partition(cx.base, &basin);
    let b = u64::from(cx.base.get());
    let closed = |x: u64, y: u64| 24 * (4 * b * x + 2 * b * y - 2 * b * b - 2 * x * x - 2 * y * y);
    let h_counts_ok = h_sets.as_ref().is_some_and(|sets| {
        sets.iter().all(|&(x, y)| {
            let members = h_set(cx.base, x, y).expect("partition members are valid");
            let total: u64 = members.iter().map(count_representatives).sum();
            total == closed(u64::from(x), u64::from(y))
        })
    });
    let four_n = 4u64.pow(cx.n);
    let sb = 40 * four_n * u64::from(cx.m * cx.m) * (1 + 5 * four_n);
    vec![
        Check::new(
            "odd-part-divisibility",
            divisible,
            format!(
                "every basin pair is type a with both coordinates divisible by {}",
                cx.m
            ),
        ),
        Check::new(
            "fixed-pair-predecessor-count",
            basin.len() == expected,
            format!("{} basin pairs, expected {expected}", basin.len()),
        ),
        Check::new(
            "h-set-partition",
            h_sets.as_ref().is_some_and(|s| s.len() * 4 == basin.len()) && h_counts_ok,
            format!("{} sets of four", h_sets.map_or(0, |s| s.len())),
        ),
        Check::new(
            "basin-size",
            cx.report.sb_size == sb,
            format!("|S_b| = {}, closed form {sb}", cx.report.sb_size),
        ),
    ]
}

/// `{(x, y), (x, b − y), (b − y, b − x), (y, b − x)}`, when all four are
/// distinct canonical pairs.
pub fn h_set(base: Base, x: u32, y: u32) -> Option<[DifferencePair; 4]> {
    let b = base.get();
    if y > x || x >= b || x + y < b {
        return None;
    }
    let members = [
        DifferencePair::new(base, x, y).ok()?,
        DifferencePair::new(base, x, b - y).ok()?,
        DifferencePair::new(base, b - y, b - x).ok()?,
        DifferencePair::new(base, y, b - x).ok()?,
    ];
    let distinct: BTreeSet<_> = members.iter().collect();
    (distinct.len() == 4).then_some(members)
}

/// Splits `pairs` into H-sets, returning each set's `(x, y)`. The element
/// with the largest first coordinate determines its set, so a greedy pass
/// is exact.
pub fn h_set_partition(base: Base, pairs: &[DifferencePair]) -> Option<Vec<(u32, u32)>> {
    let mut remaining: BTreeSet<DifferencePair> = pairs.iter().copied().collect();
    let mut sets = Vec::new();
    while let Some(&top) = remaining.iter().next_back() {
        let members = h_set(base, top.d(), top.d_prime())?;
        for m in &members {
            if !remaining.remove(m) {
                return None;
            }
        }
        sets.push((top.d(), top.d_prime()));
    }
    Some(sets)
}

fn all_classes() -> impl Iterator<Item = (u32, u32)> {
    (0..5).flat_map(|p| (0..=p).map(move |q| (p, q)))
}

fn landing_checks(cx: &Context<'_>) -> Vec<Check> {
    let Some(n) = cx.power_of_two().filter(|&n| n >= 2) else {
        return Vec::new();
    };
    let mut worst: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    let mut violations = 0usize;
    for p in all_pairs(cx.base) {
        let landing = measure_l(&p).expect("b = 5·2ⁿ");
        let (lp, lq) = landing.class;
        if landing.steps > proposition_bound_l(lp, lq, n).expect("canonical class") {
            violations += 1;
        }
        let w = worst.entry(landing.class).or_insert(0);
        *w = (*w).max(landing.steps);
    }
    let mut checks = vec![Check::new(
        "landing-bound",
        violations == 0,
        format!("{violations} pairs exceed the landing bound for their class"),
    )];
    if n >= TABLE4_MIN_N {
        let missed: Vec<String> = all_classes()
            .filter(|&(p, q)| worst.get(&(p, q)) != Some(&proposition_bound_l(p, q, n).unwrap()))
            .map(|(p, q)| format!("({p},{q}) max {:?}", worst.get(&(p, q))))
            .collect();
        checks.push(Check::new(
            "landing-tightness",
            missed.is_empty(),
            if missed.is_empty() {
                "every class attains its bound".into()
            } else {
                missed.join(", ")
            },
        ));
    }
    let col = (n % 4) as usize;
    let mut witness_failures = Vec::new();
    let mut tested = 0;
    for row in &TABLE2 {
        let Some((u, v)) = row.start.resolve(cx.base.get()) else {
            continue;
        };
        tested += 1;
        let landing = measure_l(&cx.pair(u, v)).expect("b = 5·2ⁿ");
        if landing.steps != row.steps.eval(n) || landing.class != row.landing[col] {
            witness_failures.push(format!(
                "{} gave L={} landing {:?}, table {} landing {:?}",
                row.start, landing.steps, landing.class, row.steps, row.landing[col]
            ));
        }
    }
    checks.push(Check::new(
        "landing-witnesses",
        witness_failures.is_empty(),
        if witness_failures.is_empty() {
            format!("{tested} witness rows reproduced")
        } else {
            witness_failures.join("; ")
        },
    ));
    checks
}

fn iterate(p: DifferencePair, steps: u32) -> DifferencePair {
    (0..steps).fold(p, |q, _| pair_step(&q))
}

fn divisible_trajectory_checks(cx: &Context<'_>) -> Vec<Check> {
    let Some(n) = cx.power_of_two().filter(|&n| n >= 2) else {
        return Vec::new();
    };
    let col = (n % 4) as usize;
    let mut failures = Vec::new();
    for row in &TABLE1 {
        let got = iterate(cx.class_pair(row.start), n + 1);
        let want = cx.class_pair(row.after_n_plus_one[col]);
        if got != want {
            failures.push(format!("{:?}: reached {got}, table {want}", row.start));
        }
    }
    for &(from, to) in &TABLE1_ONE_STEP {
        let got = pair_step(&cx.class_pair(from));
        if got != cx.class_pair(to) {
            failures.push(format!("{from:?}: reached {got} in one step"));
        }
    }
    vec![Check::new(
        "divisible-trajectories",
        failures.is_empty(),
        if failures.is_empty() {
            "all fifteen classes reproduced".into()
        } else {
            failures.join("; ")
        },
    )]
}

/// A numeral with pair `p` that is not itself periodic: `[0, 0, d′, d]`,
/// or `[1, 1, 1, 1]` for `(0, 0)`. Images of non-zero pairs are at least
/// `b³ − 1`, so two leading zeros rule out lying on a cycle.
fn non_periodic_numeral(p: &DifferencePair) -> DigitQuad {
    let digits = if p.d() == 0 {
        [1; 4]
    } else {
        [0, 0, p.d_prime(), p.d()]
    };
    DigitQuad::new(p.base(), digits).expect("digits below base")
}

/// Integer steps from a numeral whose pair is `p` until it first reaches a
/// periodic numeral, and whether that numeral is the fixed one. Every
/// non-periodic numeral with pair `p` has the same image, so this is the
/// largest value over all numerals with that pair.
fn integer_fate(p: &DifferencePair) -> (usize, bool) {
    let start = non_periodic_numeral(p);
    let t = trajectory(start, default_max_steps(p.base())).expect("orbits are determined");
    (t.steps_to_periodic(), t.distance.is_some())
}

fn step_table_checks(cx: &Context<'_>) -> Vec<Check> {
    let Some(n) = cx.power_of_two().filter(|&n| n >= 2) else {
        return Vec::new();
    };
    let col = (n % 4) as usize;
    let mut failures = Vec::new();
    for row in &TABLE3 {
        let (steps, fixed) = integer_fate(&cx.class_pair(row.start));
        let stated = row.steps[col];
        let ok = match stated {
            Some(e) => fixed && steps as u32 == e.eval(n),
            None => !fixed,
        };
        if !ok {
            let measured = if fixed {
                steps.to_string()
            } else {
                "cycles".into()
            };
            let stated = stated.map_or("cycles".into(), |e| format!("{e} = {}", e.eval(n)));
            failures.push(format!(
                "{:?}: measured {measured}, table {stated}",
                row.start
            ));
        }
    }
    vec![Check::new(
        "steps-from-divisible",
        failures.is_empty(),
        if failures.is_empty() {
            "all thirteen rows reproduced".into()
        } else {
            failures.join("; ")
        },
    )]
}

/// Per landing class: the largest distance to the fixed numeral, and the
/// largest steps-to-periodic among numerals that cycle.
#[derive(Debug, Default, Clone, Copy)]
struct ClassExtremes {
    fixed: Option<u32>,
    cycle: Option<u32>,
}

fn class_extremes(cx: &Context<'_>) -> BTreeMap<(u32, u32), ClassExtremes> {
    let pairs: Vec<DifferencePair> = all_pairs(cx.base).collect();
    let per_pair: Vec<((u32, u32), usize, bool)> = pairs
        .par_iter()
        .map(|p| {
            let class = measure_l(p).expect("b = 5·2ⁿ").class;
            let (steps, fixed) = integer_fate(p);
            (class, steps, fixed)
        })
        .collect();
    let mut out: BTreeMap<(u32, u32), ClassExtremes> = BTreeMap::new();
    for (class, steps, fixed) in per_pair {
        let e = out.entry(class).or_default();
        let slot = if fixed { &mut e.fixed } else { &mut e.cycle };
        *slot = Some(slot.map_or(steps as u32, |s| s.max(steps as u32)));
    }
    out
}

fn total_step_checks(cx: &Context<'_>) -> Vec<Check> {
    let Some(n) = cx.power_of_two().filter(|&n| n >= TABLE4_MIN_N) else {
        return Vec::new();
    };
    let col = (n % 4) as usize;
    let column_max = table4_column_max(n);
    let mut checks = vec![Check::new(
        "total-step-column",
        Some(column_max) == predict_mb(cx.base) && Some(column_max) == cx.report.mb,
        format!(
            "column max {column_max}, predicted {:?}, measured {:?}",
            predict_mb(cx.base),
            cx.report.mb
        ),
    )];
    let extremes = class_extremes(cx);
    let mut row_failures = Vec::new();
    let mut cycle_failures = Vec::new();
    for row in &TABLE4 {
        let got = extremes.get(&row.first).copied().unwrap_or_default();
        match row.bound[col] {
            Table4Entry::FixedPoint(e) => {
                if got.fixed != Some(e.eval(n)) || got.cycle.is_some() {
                    row_failures.push(format!(
                        "{:?}: measured {:?}, table {e} = {}",
                        row.first,
                        got.fixed,
                        e.eval(n)
                    ));
                }
            }
            Table4Entry::Cycle(e) => {
                if got.cycle != Some(e.eval(n)) || got.fixed.is_some() {
                    cycle_failures.push(format!(
                        "{:?}: measured {:?}, table [{e}] = {}",
                        row.first,
                        got.cycle,
                        e.eval(n)
                    ));
                }
            }
        }
    }
    checks.push(Check::new(
        "total-step-rows",
        row_failures.is_empty(),
        if row_failures.is_empty() {
            "every fixed-point row is tight".into()
        } else {
            row_failures.join("; ")
        },
    ));
    checks.push(Check::new(
        "total-step-cycles",
        cycle_failures.is_empty(),
        if cycle_failures.is_empty() {
            "every cycle row enters its cycle after the stated steps".into()
        } else {
            cycle_failures.join("; ")
        },
    ));
    checks
}

fn iterate_identity_checks(cx: &Context<'_>) -> Vec<Check> {
    let Some(n) = cx.power_of_two().filter(|&n| n >= 2) else {
        return Vec::new();
    };
    let b = cx.base.get();
    let mut failures = Vec::new();
    let mut walk = |label: &str,
                    start: DifferencePair,
                    range: std::ops::RangeInclusive<u32>,
                    f: &dyn Fn(u32) -> (u32, u32)| {
        let mut p = start;
        let mut t = 0;
        for target in range {
            while t < target {
                p = pair_step(&p);
                t += 1;
            }
            let (x, y) = f(t);
            if p != cx.pair(x, y) {
                failures.push(format!("{label} t={t}: {p}"));
            }
        }
    };
    walk("(1,1)", cx.pair(1, 1), 1..=n + 1, &|t| {
        (b - (1 << (t - 1)), b - 3 * (1 << (t - 1)))
    });
    walk("(1,0)", cx.pair(1, 0), 3..=n + 2, &|t| {
        (b - (1 << (t - 2)), b - (1 << (t - 1)))
    });
    walk("(b/2,b/2)", cx.pair(b / 2, b / 2), 2..=n + 2, &|t| {
        (b - (1 << (t - 2)), b - 3 * (1 << (t - 2)))
    });
    let end = iterate(cx.pair(b / 2, b / 2), n + 2) == cx.class_pair((4, 2));
    if !end {
        failures.push("(b/2,b/2) does not reach 2ⁿ(4,2) after n+2 steps".into());
    }
    vec![Check::new(
        "iterate-identities",
        failures.is_empty(),
        if failures.is_empty() {
            "closed forms hold along each range".into()
        } else {
            failures.join("; ")
        },
    )]
}
