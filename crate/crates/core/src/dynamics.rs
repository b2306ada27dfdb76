//! Orbits of the Kaprekar map and the per-base statistics built on them.
//!
//! Two independent routes compute the same [`BaseReport`]:
//!
//! * [`ReportMethod::Enumerated`] iterates the integer map from all `b⁴`
//!   numerals and never looks at difference pairs.
//! * [`ReportMethod::PairWeighted`] works on the `b(b + 1)/2` pairs. A numeral
//!   `x` that is not itself fixed satisfies `Kʲ(x) = image(stepʲ⁻¹(pair(x)))`,
//!   and an image is a fixed numeral exactly when its pair is a non-zero fixed
//!   pair, so the distance of `x` is one more than the pair distance of
//!   `pair(x)`. Each pair then contributes its representative count.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::base_digits::{kaprekar_step, to_digits, Base, DigitQuad};
use crate::diff_pairs::{
    all_pairs, count_representatives, pair_count, pair_from_index, pair_of, pair_step,
    predecessors, DifferencePair,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Terminal {
    FixedNumeral(DigitQuad),
    ZeroSink,
    /// `entry_step` is the index of the first state lying on the cycle.
    Cycle {
        period: usize,
        entry_step: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub base: Base,
    pub start: DigitQuad,
    /// `states[0] = start`, `states[i + 1] = K(states[i])`; ends at the fixed
    /// numeral, the zero numeral, or the last state before a repeat.
    pub states: Vec<DigitQuad>,
    pub terminal: Terminal,
    pub distance: Option<u32>,
}

impl Trajectory {
    /// Steps until the orbit first reaches a periodic numeral: the fixed
    /// numeral, zero, or the first state on the cycle.
    pub fn steps_to_periodic(&self) -> usize {
        match self.terminal {
            Terminal::FixedNumeral(_) | Terminal::ZeroSink => self.states.len() - 1,
            Terminal::Cycle { entry_step, .. } => entry_step,
        }
    }
}

/// Step budget used when the caller does not supply one. After one step a
/// numeral is determined by its pair, so any orbit repeats within
/// `b(b + 1)/2 + 2` steps.
pub fn default_max_steps(base: Base) -> u64 {
    let b = u64::from(base.get());
    b * b + 16
}

pub fn trajectory(start: DigitQuad, max_steps: u64) -> Result<Trajectory> {
    let mut states = vec![start];
    let mut seen: HashMap<u64, usize> = HashMap::from([(start.value(), 0)]);
    let mut steps = 0u64;
    loop {
        if steps >= max_steps {
            return Err(Error::Undetermined { steps });
        }
        let current = *states.last().expect("non-empty");
        let next = kaprekar_step(&current);
        steps += 1;
        if next == current {
            let (terminal, distance) = if current.is_zero() {
                (Terminal::ZeroSink, None)
            } else {
                (
                    Terminal::FixedNumeral(current),
                    Some((states.len() - 1) as u32),
                )
            };
            return Ok(Trajectory {
                base: start.base(),
                start,
                states,
                terminal,
                distance,
            });
        }
        if let Some(&entry_step) = seen.get(&next.value()) {
            let terminal = Terminal::Cycle {
                period: states.len() - entry_step,
                entry_step,
            };
            return Ok(Trajectory {
                base: start.base(),
                start,
                states,
                terminal,
                distance: None,
            });
        }
        seen.insert(next.value(), states.len());
        states.push(next);
    }
}

/// `(3b/5, b/5)`, the pair of the fixed numeral when `5 | b`.
pub fn fixed_pair(base: Base) -> Result<DifferencePair> {
    let b = base.get();
    if !b.is_multiple_of(5) {
        return Err(Error::UnsupportedBase {
            base: b,
            requirement: "5 | b",
        });
    }
    DifferencePair::new(base, 3 * b / 5, b / 5)
}

/// Non-zero pairs with `pair_step(p) = p`; their images are exactly the
/// non-zero fixed numerals.
pub fn fixed_pairs(base: Base) -> Vec<DifferencePair> {
    all_pairs(base)
        .filter(|p| p.d() > 0 && pair_step(p) == *p)
        .collect()
}

/// Least `t` with `pair_stepᵗ(p)` equal to the fixed pair, for every pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairDistanceMap {
    base: Base,
    fixed_pair: DifferencePair,
    distances: Vec<Option<u32>>,
}

impl PairDistanceMap {
    /// Reverse breadth-first search from `fixed_pair` along the predecessor
    /// table.
    pub fn towards(fixed_pair: DifferencePair) -> Self {
        let base = fixed_pair.base();
        let mut distances = vec![None; pair_count(base)];
        distances[fixed_pair.index()] = Some(0);
        let mut queue = VecDeque::from([fixed_pair]);
        while let Some(p) = queue.pop_front() {
            let next = distances[p.index()].expect("queued pairs have a distance") + 1;
            for q in predecessors(&p) {
                if distances[q.index()].is_none() {
                    distances[q.index()] = Some(next);
                    queue.push_back(q);
                }
            }
        }
        let map = PairDistanceMap {
            base,
            fixed_pair,
            distances,
        };
        debug_assert_eq!(
            map.distances,
            forward_pair_distances(fixed_pair),
            "reverse search and forward iteration disagree in base {base}"
        );
        map
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn fixed_pair(&self) -> DifferencePair {
        self.fixed_pair
    }

    pub fn get(&self, p: &DifferencePair) -> Option<u32> {
        self.distances[p.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (DifferencePair, Option<u32>)> + '_ {
        self.distances
            .iter()
            .enumerate()
            .map(|(i, &s)| (pair_from_index(self.base, i), s))
    }

    /// Largest finite pair distance.
    pub fn max(&self) -> Option<u32> {
        self.distances.iter().flatten().copied().max()
    }
}

pub fn pair_distance_map(base: Base) -> Result<PairDistanceMap> {
    Ok(PairDistanceMap::towards(fixed_pair(base)?))
}

/// Pair distances to `target` by forward iteration with memoisation.
pub fn forward_pair_distances(target: DifferencePair) -> Vec<Option<u32>> {
    let base = target.base();
    let n = pair_count(base);
    // None = unknown, Some(None) = never reaches target
    let mut memo: Vec<Option<Option<u32>>> = vec![None; n];
    memo[target.index()] = Some(Some(0));
    let mut on_path = vec![false; n];
    for start in all_pairs(base) {
        let mut path = Vec::new();
        let mut p = start;
        let tail = loop {
            if let Some(known) = memo[p.index()] {
                break known;
            }
            if on_path[p.index()] {
                break None;
            }
            on_path[p.index()] = true;
            path.push(p);
            p = pair_step(&p);
        };
        for (k, q) in path.iter().rev().enumerate() {
            on_path[q.index()] = false;
            memo[q.index()] = Some(tail.map(|t| t + k as u32 + 1));
        }
    }
    memo.into_iter()
        .map(|m| m.expect("every pair resolved"))
        .collect()
}

/// 0 for the fixed numeral, otherwise `s(pair(q)) + 1` when defined.
pub fn integer_distance(q: &DigitQuad, map: &PairDistanceMap) -> Result<Option<u32>> {
    if q.base() != map.base {
        return Err(Error::BaseMismatch {
            expected: map.base.get(),
            actual: q.base().get(),
        });
    }
    if *q == map.fixed_pair.image() {
        return Ok(Some(0));
    }
    Ok(map.get(&pair_of(q)).map(|s| s + 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportMethod {
    PairWeighted,
    Enumerated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Basin {
    pub fixed: DigitQuad,
    pub size: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseReport {
    pub base: Base,
    pub method: ReportMethod,
    /// Largest distance over `S_b`; absent when `S_b` is empty.
    pub mb: Option<u32>,
    pub sb_size: u64,
    pub cb: Ratio<u128>,
    pub histogram: BTreeMap<u32, u64>,
    pub fixed_numerals: Vec<DigitQuad>,
    /// `S_b` split by the fixed numeral each orbit reaches.
    pub basins: Vec<Basin>,
    /// Numerals whose orbit reaches zero.
    pub zero_sink: u64,
    /// Numerals whose orbit enters a cycle of period at least two.
    pub cycling: u64,
}

impl BaseReport {
    fn assemble(
        base: Base,
        method: ReportMethod,
        histogram: BTreeMap<u32, u64>,
        basins: Vec<Basin>,
        zero_sink: u64,
        cycling: u64,
    ) -> Self {
        let sb_size: u64 = histogram.values().sum();
        debug_assert_eq!(sb_size, basins.iter().map(|b| b.size).sum::<u64>());
        debug_assert_eq!(sb_size + zero_sink + cycling, base.numeral_count());
        BaseReport {
            base,
            method,
            mb: histogram.keys().next_back().copied(),
            sb_size,
            cb: Ratio::new(u128::from(sb_size), u128::from(base.numeral_count())),
            histogram,
            fixed_numerals: basins.iter().map(|b| b.fixed).collect(),
            basins,
            zero_sink,
            cycling,
        }
    }

    /// Equality of every statistic, ignoring which method produced it.
    pub fn same_statistics(&self, other: &BaseReport) -> bool {
        self.base == other.base
            && self.mb == other.mb
            && self.sb_size == other.sb_size
            && self.cb == other.cb
            && self.histogram == other.histogram
            && self.basins == other.basins
            && self.zero_sink == other.zero_sink
            && self.cycling == other.cycling
    }
}

/// Statistics for `base`: pair-weighted except for `b ∈ {2, 4}`, which are
/// enumerated.
pub fn base_report(base: Base) -> BaseReport {
    match base.get() {
        2 | 4 => base_report_enumerated(base),
        _ => base_report_pair_weighted(base),
    }
}

pub fn base_report_with(base: Base, method: ReportMethod) -> BaseReport {
    match method {
        ReportMethod::PairWeighted => base_report_pair_weighted(base),
        ReportMethod::Enumerated => base_report_enumerated(base),
    }
}

pub fn base_report_pair_weighted(base: Base) -> BaseReport {
    let mut histogram = BTreeMap::new();
    let mut basins = Vec::new();
    let mut in_basins = vec![false; pair_count(base)];
    for fixed in fixed_pairs(base) {
        let map = PairDistanceMap::towards(fixed);
        let fixed_numeral = fixed.image();
        let mut size = 0;
        for (p, s) in map.iter() {
            let Some(s) = s else { continue };
            in_basins[p.index()] = true;
            let count = count_representatives(&p);
            size += count;
            if s == 0 {
                *histogram.entry(0).or_insert(0) += 1;
                *histogram.entry(1).or_insert(0) += count - 1;
            } else {
                *histogram.entry(s + 1).or_insert(0) += count;
            }
        }
        histogram.retain(|_, c| *c > 0);
        basins.push(Basin {
            fixed: fixed_numeral,
            size,
        });
    }
    basins.sort_by_key(|b| b.fixed.value());

    // (0, 0) is its own only predecessor, so zero is reached from repdigits alone
    let zero = DifferencePair::new(base, 0, 0).expect("valid");
    let zero_sink = count_representatives(&zero);
    let cycling = all_pairs(base)
        .filter(|p| *p != zero && !in_basins[p.index()])
        .map(|p| count_representatives(&p))
        .sum();
    BaseReport::assemble(
        base,
        ReportMethod::PairWeighted,
        histogram,
        basins,
        zero_sink,
        cycling,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Fate {
    Fixed { numeral: u64, distance: u32 },
    Zero,
    Cycle,
}

/// Orbit fate of `start` under the integer map, memoised over image numerals.
fn resolve(base: Base, start: u64, memo: &mut HashMap<u64, Fate>) -> Fate {
    let mut path: Vec<u64> = Vec::new();
    let mut index: HashSet<u64> = HashSet::new();
    let mut x = start;
    let tail = loop {
        if let Some(&f) = memo.get(&x) {
            break f;
        }
        if index.contains(&x) {
            break Fate::Cycle;
        }
        let next = kaprekar_step(&to_digits(x, base).expect("in range")).value();
        if next == x {
            let f = if x == 0 {
                Fate::Zero
            } else {
                Fate::Fixed {
                    numeral: x,
                    distance: 0,
                }
            };
            memo.insert(x, f);
            break f;
        }
        index.insert(x);
        path.push(x);
        x = next;
    };
    let mut fate = tail;
    for &y in path.iter().rev() {
        fate = match fate {
            Fate::Fixed { numeral, distance } => Fate::Fixed {
                numeral,
                distance: distance + 1,
            },
            other => other,
        };
        memo.insert(y, fate);
    }
    *memo.get(&start).expect("start resolved")
}

#[derive(Default)]
struct Tally {
    histogram: BTreeMap<u32, u64>,
    basins: BTreeMap<u64, u64>,
    zero_sink: u64,
    cycling: u64,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        for (k, v) in other.histogram {
            *self.histogram.entry(k).or_insert(0) += v;
        }
        for (k, v) in other.basins {
            *self.basins.entry(k).or_insert(0) += v;
        }
        self.zero_sink += other.zero_sink;
        self.cycling += other.cycling;
        self
    }
}

/// Brute force over all `b⁴` numerals of the integer map.
pub fn base_report_enumerated(base: Base) -> BaseReport {
    let b = u64::from(base.get());
    let block = b * b * b;
    let tally = (0..b)
        .into_par_iter()
        .map(|lead| {
            let mut memo = HashMap::new();
            let mut tally = Tally::default();
            for x in lead * block..(lead + 1) * block {
                let y = kaprekar_step(&to_digits(x, base).expect("in range")).value();
                let fate = if y == x {
                    if x == 0 {
                        Fate::Zero
                    } else {
                        Fate::Fixed {
                            numeral: x,
                            distance: 0,
                        }
                    }
                } else {
                    match resolve(base, y, &mut memo) {
                        Fate::Fixed { numeral, distance } => Fate::Fixed {
                            numeral,
                            distance: distance + 1,
                        },
                        other => other,
                    }
                };
                match fate {
                    Fate::Fixed { numeral, distance } => {
                        *tally.histogram.entry(distance).or_insert(0) += 1;
                        *tally.basins.entry(numeral).or_insert(0) += 1;
                    }
                    Fate::Zero => tally.zero_sink += 1,
                    Fate::Cycle => tally.cycling += 1,
                }
            }
            tally
        })
        .reduce(Tally::default, Tally::merge);
    let basins = tally
        .basins
        .into_iter()
        .map(|(v, size)| Basin {
            fixed: to_digits(v, base).expect("in range"),
            size,
        })
        .collect();
    BaseReport::assemble(
        base,
        ReportMethod::Enumerated,
        tally.histogram,
        basins,
        tally.zero_sink,
        tally.cycling,
    )
}

/// Distance histogram over `S_b`. Defined for `5 | b` and `b ∈ {2, 4}`.
pub fn distance_histogram(base: Base) -> Result<BTreeMap<u32, u64>> {
    let b = base.get();
    if !b.is_multiple_of(5) && b != 2 && b != 4 {
        return Err(Error::UnsupportedBase {
            base: b,
            requirement: "5 | b or b in {2, 4}",
        });
    }
    Ok(base_report(base).histogram)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(b: u32) -> Base {
        Base::new(b).unwrap()
    }

    fn quad(b: u32, digits: [u32; 4]) -> DigitQuad {
        DigitQuad::new(base(b), digits).unwrap()
    }

    fn pair(b: u32, d: u32, dp: u32) -> DifferencePair {
        DifferencePair::new(base(b), d, dp).unwrap()
    }

    #[test]
    fn worked_chain_from_0889() {
        let t = trajectory(quad(10, [0, 8, 8, 9]), 100).unwrap();
        let values: Vec<u64> = t.states.iter().map(DigitQuad::value).collect();
        assert_eq!(values, vec![889, 8991, 8082, 8532, 6174]);
        assert_eq!(t.terminal, Terminal::FixedNumeral(quad(10, [6, 1, 7, 4])));
        assert_eq!(t.distance, Some(4));
    }

    #[test]
    fn repdigit_sinks_in_one_step() {
        let t = trajectory(quad(10, [5, 5, 5, 5]), 100).unwrap();
        assert_eq!(t.terminal, Terminal::ZeroSink);
        assert_eq!(t.states.len(), 2);
        assert_eq!(t.steps_to_periodic(), 1);
        assert_eq!(t.distance, None);
    }

    #[test]
    fn base_five_from_0001() {
        let t = trajectory(quad(5, [0, 0, 0, 1]), default_max_steps(base(5))).unwrap();
        let rendered: Vec<String> = t.states.iter().map(DigitQuad::render).collect();
        assert_eq!(rendered, ["0001", "0444", "3441", "3032"]);
        assert_eq!(t.terminal, Terminal::FixedNumeral(quad(5, [3, 0, 3, 2])));
        assert_eq!(t.distance, Some(3));
        assert!(t.distance.unwrap() <= 4);
    }

    #[test]
    fn cycles_are_reported_with_period() {
        // base 6 has no non-zero fixed numeral
        let t = trajectory(quad(6, [0, 0, 0, 1]), default_max_steps(base(6))).unwrap();
        match t.terminal {
            Terminal::Cycle { period, entry_step } => {
                assert!(period >= 2);
                assert!(entry_step < t.states.len());
                let last = *t.states.last().unwrap();
                assert_eq!(kaprekar_step(&last), t.states[entry_step]);
            }
            other => panic!("expected a cycle, got {other:?}"),
        }
    }

    #[test]
    fn exhausted_budget_is_an_error() {
        assert_eq!(
            trajectory(quad(10, [0, 8, 8, 9]), 3),
            Err(Error::Undetermined { steps: 3 })
        );
        // four steps reach 6174 and a fifth confirms it
        assert!(trajectory(quad(10, [0, 8, 8, 9]), 4).is_err());
        assert!(trajectory(quad(10, [0, 8, 8, 9]), 5).is_ok());
    }

    #[test]
    fn base_ten_distance_map() {
        let map = pair_distance_map(base(10)).unwrap();
        assert_eq!(map.get(&pair(10, 6, 2)), Some(0));
        let s81 = map.get(&pair(10, 8, 1)).unwrap();
        assert_eq!(map.get(&pair(10, 9, 0)), Some(s81 + 1));
        // (5,5) -> (1,1) -> (9,7) -> ...
        assert!(map.get(&pair(10, 5, 5)).is_some());
        assert_eq!(map.get(&pair(10, 0, 0)), None);
        for (p, s) in map.iter() {
            if p.d() > 0 {
                assert!(s.is_some(), "{p} should reach the fixed pair");
            }
        }
    }

    #[test]
    fn forward_and_reverse_distances_agree() {
        for b in (5..=120).step_by(5) {
            let map = pair_distance_map(base(b)).unwrap();
            assert_eq!(
                map.distances,
                forward_pair_distances(map.fixed_pair()),
                "b={b}"
            );
        }
    }

    #[test]
    fn distance_map_invariant() {
        for b in (5..=100).step_by(5) {
            let map = pair_distance_map(base(b)).unwrap();
            for (p, s) in map.iter() {
                if let Some(s) = s.filter(|&s| s > 0) {
                    assert_eq!(map.get(&pair_step(&p)), Some(s - 1));
                }
            }
        }
    }

    #[test]
    fn no_distance_map_without_five() {
        assert!(pair_distance_map(base(12)).is_err());
    }

    #[test]
    fn integer_distances() {
        let map = pair_distance_map(base(10)).unwrap();
        assert_eq!(integer_distance(&quad(10, [6, 1, 7, 4]), &map), Ok(Some(0)));
        assert_eq!(integer_distance(&quad(10, [8, 5, 3, 2]), &map), Ok(Some(1)));
        assert_eq!(integer_distance(&quad(10, [0, 8, 8, 9]), &map), Ok(Some(4)));
        assert_eq!(integer_distance(&quad(10, [7, 7, 7, 7]), &map), Ok(None));
        assert!(matches!(
            integer_distance(&quad(15, [1, 2, 3, 4]), &map),
            Err(Error::BaseMismatch {
                expected: 10,
                actual: 15
            })
        ));
    }

    #[test]
    fn integer_distance_matches_trajectory() {
        for b in [5u32, 10, 15, 20, 25, 30] {
            let bb = base(b);
            let map = pair_distance_map(bb).unwrap();
            let stride = (bb.numeral_count() / 3000).max(1);
            for x in (0..bb.numeral_count()).step_by(stride as usize) {
                let q = to_digits(x, bb).unwrap();
                let t = trajectory(q, default_max_steps(bb)).unwrap();
                assert_eq!(
                    integer_distance(&q, &map).unwrap(),
                    t.distance,
                    "b={b} x={x}"
                );
            }
        }
    }

    #[test]
    fn reports_for_known_bases() {
        let r10 = base_report(base(10));
        assert_eq!(r10.mb, Some(7));
        assert_eq!(r10.sb_size, 9990);
        assert_eq!(r10.cb, Ratio::new(9990, 10000));
        assert_eq!(r10.fixed_numerals, vec![quad(10, [6, 1, 7, 4])]);

        assert_eq!(base_report(base(15)).sb_size, 2160);
        assert_eq!(base_report(base(2)).mb, Some(1));

        let r6 = base_report(base(6));
        assert_eq!(r6.mb, None);
        assert_eq!(r6.sb_size, 0);
        assert!(r6.histogram.is_empty());
        assert_eq!(r6.zero_sink, 6);
        assert_eq!(r6.cycling, 6u64.pow(4) - 6);
    }

    #[test]
    fn base_two_has_two_fixed_numerals() {
        let r = base_report(base(2));
        assert_eq!(r.method, ReportMethod::Enumerated);
        assert_eq!(
            r.fixed_numerals,
            vec![quad(2, [0, 1, 1, 1]), quad(2, [1, 0, 0, 1])]
        );
        assert_eq!(r.sb_size, 14);
        assert_eq!(r.basins.iter().map(|b| b.size).sum::<u64>(), 14);
        // the pair-weighted route finds both fixed pairs (1, 0) and (1, 1)
        assert_eq!(fixed_pairs(base(2)), vec![pair(2, 1, 0), pair(2, 1, 1)]);
        assert!(base_report_pair_weighted(base(2)).same_statistics(&r));
    }

    #[test]
    fn base_four() {
        let r = base_report(base(4));
        assert_eq!(r.mb, Some(3));
        assert_eq!(r.fixed_numerals, vec![quad(4, [3, 0, 2, 1])]);
        assert!(base_report_pair_weighted(base(4)).same_statistics(&r));
    }

    #[test]
    fn pair_weighted_matches_enumeration_small() {
        for b in 2..=30u32 {
            let bb = base(b);
            let fast = base_report_pair_weighted(bb);
            let slow = base_report_enumerated(bb);
            assert!(fast.same_statistics(&slow), "b={b}\n{fast:?}\n{slow:?}");
            assert_eq!(slow.zero_sink, u64::from(b), "only repdigits sink to zero");
        }
    }

    #[test]
    fn histograms() {
        let h10 = distance_histogram(base(10)).unwrap();
        assert_eq!(
            h10.keys().copied().collect::<Vec<_>>(),
            (0..=7).collect::<Vec<_>>()
        );
        assert_eq!(h10.values().sum::<u64>(), 9990);
        assert!(distance_histogram(base(5)).unwrap().keys().all(|&k| k <= 4));
        assert_eq!(
            distance_histogram(base(15)).unwrap().values().sum::<u64>(),
            2160
        );
        assert!(distance_histogram(base(7)).is_err());
    }
}
