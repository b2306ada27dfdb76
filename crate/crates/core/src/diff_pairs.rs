//! Difference pairs: the reduced state of the four-digit routine.
//!
//! With sorted digits `a₃ ≥ a₂ ≥ a₁ ≥ a₀` the pair `(a₃ − a₀, a₂ − a₁)`
//! determines the next Kaprekar image completely, so the `b⁴` numerals
//! collapse onto `b(b + 1)/2` pairs and the dynamics can be studied there.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::base_digits::{kaprekar_step, Base, DigitQuad};
use crate::error::{Error, Result};

/// A canonical difference pair, `0 ≤ d′ ≤ d ≤ b − 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DifferencePair {
    base: Base,
    d: u32,
    d_prime: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairType {
    Zero,
    A,
    B,
    C,
}

impl fmt::Display for PairType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairType::Zero => "zero",
            PairType::A => "a",
            PairType::B => "b",
            PairType::C => "c",
        })
    }
}

impl DifferencePair {
    pub fn new(base: Base, d: u32, d_prime: u32) -> Result<Self> {
        if d_prime <= d && d < base.get() {
            Ok(DifferencePair { base, d, d_prime })
        } else {
            Err(Error::InvalidPair {
                d,
                d_prime,
                base: base.get(),
            })
        }
    }

    /// Orders the two components so the larger comes first.
    pub fn canonical(base: Base, x: u32, y: u32) -> Result<Self> {
        let (d, d_prime) = if x >= y { (x, y) } else { (y, x) };
        Self::new(base, d, d_prime)
    }

    /// Signed variant used by the predecessor generators; rejects anything
    /// outside the digit range instead of wrapping.
    fn canonical_signed(base: Base, x: i64, y: i64) -> Option<Self> {
        let (d, d_prime) = if x >= y { (x, y) } else { (y, x) };
        if d_prime < 0 || d >= i64::from(base.get()) {
            return None;
        }
        Some(DifferencePair {
            base,
            d: d as u32,
            d_prime: d_prime as u32,
        })
    }

    #[inline]
    pub fn base(&self) -> Base {
        self.base
    }

    #[inline]
    pub fn d(&self) -> u32 {
        self.d
    }

    #[inline]
    pub fn d_prime(&self) -> u32 {
        self.d_prime
    }

    /// `c·(d, d′)`, when it is still a valid pair in the same base.
    pub fn scale(&self, c: u32) -> Option<Self> {
        let d = self.d.checked_mul(c)?;
        let d_prime = self.d_prime.checked_mul(c)?;
        Self::new(self.base, d, d_prime).ok()
    }

    /// Dense index in `0..pair_count(base)`, ordered by `d` then `d′`.
    #[inline]
    pub fn index(&self) -> usize {
        let d = self.d as usize;
        d * (d + 1) / 2 + self.d_prime as usize
    }

    /// The numeral `d d′ 0 0`, whose digits sort to exactly this pair.
    pub fn representative(&self) -> DigitQuad {
        DigitQuad::new(self.base, [self.d, self.d_prime, 0, 0])
            .expect("pair components are valid digits")
    }

    /// The common Kaprekar image of every numeral with this pair.
    pub fn image(&self) -> DigitQuad {
        kaprekar_step(&self.representative())
    }
}

impl fmt::Display for DifferencePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.d, self.d_prime)
    }
}

pub fn pair_count(base: Base) -> usize {
    let b = base.get() as usize;
    b * (b + 1) / 2
}

/// Every canonical pair of `base`, in [`DifferencePair::index`] order.
pub fn all_pairs(base: Base) -> impl Iterator<Item = DifferencePair> {
    (0..base.get())
        .flat_map(move |d| (0..=d).map(move |d_prime| DifferencePair { base, d, d_prime }))
}

pub fn pair_from_index(base: Base, index: usize) -> DifferencePair {
    // d = floor((sqrt(8i + 1) - 1) / 2), corrected for rounding
    let mut d = (((8 * index + 1) as f64).sqrt() as usize).saturating_sub(1) / 2;
    while (d + 1) * (d + 2) / 2 <= index {
        d += 1;
    }
    while d * (d + 1) / 2 > index {
        d -= 1;
    }
    let d_prime = index - d * (d + 1) / 2;
    DifferencePair {
        base,
        d: d as u32,
        d_prime: d_prime as u32,
    }
}

pub fn pair_of(q: &DigitQuad) -> DifferencePair {
    let s = q.sorted_desc();
    DifferencePair {
        base: q.base(),
        d: s[0] - s[3],
        d_prime: s[1] - s[2],
    }
}

/// Precedence is Zero, then C, then B, then A. The type-(a) condition
/// `d > d′, d + d′ ≠ b` also covers `d′ = 0`; those pairs follow the
/// type-(c) rule.
pub fn classify(p: &DifferencePair) -> PairType {
    let b = p.base.get();
    if p.d == 0 && p.d_prime == 0 {
        PairType::Zero
    } else if p.d_prime == 0 {
        PairType::C
    } else if p.d == p.d_prime || p.d + p.d_prime == b {
        PairType::B
    } else {
        PairType::A
    }
}

pub fn pair_step(p: &DifferencePair) -> DifferencePair {
    let b = i64::from(p.base.get());
    let d = i64::from(p.d);
    let dp = i64::from(p.d_prime);
    let (x, y) = match classify(p) {
        PairType::Zero => (0, 0),
        PairType::A => ((2 * d - b).abs(), (2 * dp - b).abs()),
        // for d + d′ = b the rule is symmetric in the two components, so the
        // larger one is used throughout
        PairType::B => ((2 * d - (b - 1)).abs(), (2 * d - (b + 1)).abs()),
        PairType::C => (d - 1, b - d),
    };
    DifferencePair::canonical_signed(p.base, x, y).expect("pair step stays in range")
}

#[inline]
fn half(x: i64) -> Option<i64> {
    (x % 2 == 0).then_some(x / 2)
}

#[inline]
fn even(x: i64) -> bool {
    x % 2 == 0
}

/// All pairs `q` with `pair_step(q) = p`, generated row by row from the
/// general predecessor table. Each candidate must also be a valid pair of
/// the row's predecessor type.
pub fn predecessors(p: &DifferencePair) -> BTreeSet<DifferencePair> {
    let base = p.base;
    let b = i64::from(base.get());
    let d = i64::from(p.d);
    let dp = i64::from(p.d_prime);
    let mut candidates: Vec<(PairType, Option<i64>, Option<i64>)> = Vec::new();

    let type_a_block = |out: &mut Vec<(PairType, Option<i64>, Option<i64>)>| {
        out.push((PairType::A, half(b + d), half(b + dp)));
        out.push((PairType::A, half(b + d), half(b - dp)));
        out.push((PairType::A, half(b - dp), half(b - d)));
        out.push((PairType::A, half(b + dp), half(b - d)));
    };

    match classify(p) {
        PairType::Zero => candidates.push((PairType::Zero, Some(0), Some(0))),
        PairType::A => {
            if even(d - b) && even(dp - b) {
                type_a_block(&mut candidates);
            }
            if even(d - b - 1) && even(dp - b - 1) && d == dp + 2 {
                let hi = half(b - 1 + d);
                let lo = half(b + 1 - d);
                candidates.push((PairType::B, hi, hi));
                candidates.push((PairType::B, hi, lo));
                candidates.push((PairType::B, lo, lo));
            }
            if d + dp == b - 1 {
                candidates.push((PairType::C, Some(d + 1), Some(0)));
                candidates.push((PairType::C, Some(dp + 1), Some(0)));
            }
        }
        PairType::B => {
            if d + dp == b && d != dp && even(d) && even(dp) {
                type_a_block(&mut candidates);
            }
            if d == dp + 2 && b % 4 == 0 {
                candidates.push((PairType::B, Some(3 * b / 4), Some(3 * b / 4)));
                candidates.push((PairType::B, Some(3 * b / 4), Some(b / 4)));
                candidates.push((PairType::B, Some(b / 4), Some(b / 4)));
            }
            if d == 1 && dp == 1 && even(b) {
                candidates.push((PairType::B, Some(b / 2), Some(b / 2)));
            }
            // type (c) predecessor ((b + 1)/2, 0) of ((b - 1)/2, (b - 1)/2), b odd
            if !even(b) && d == dp && 2 * d == b - 1 {
                candidates.push((PairType::C, half(b + 1), Some(0)));
            }
        }
        PairType::C => {
            if even(b) && even(d) {
                candidates.push((PairType::A, half(b + d), half(b)));
                candidates.push((PairType::A, half(b), half(b - d)));
            }
            if d == 2 && !even(b) {
                let hi = half(b + 1);
                let lo = half(b - 1);
                candidates.push((PairType::B, hi, hi));
                candidates.push((PairType::B, hi, lo));
                candidates.push((PairType::B, lo, lo));
            }
            if d == b - 1 {
                candidates.push((PairType::C, Some(1), Some(0)));
            }
        }
    }

    let out: BTreeSet<DifferencePair> = candidates
        .into_iter()
        .filter_map(|(kind, x, y)| {
            let q = DifferencePair::canonical_signed(base, x?, y?)?;
            (classify(&q) == kind).then_some(q)
        })
        .collect();
    debug_assert!(
        out.iter().all(|q| pair_step(q) == *p),
        "predecessor table produced a non-preimage of {p}"
    );
    out
}

/// The condensed predecessor rules for bases divisible by four.
pub fn predecessors_condensed(p: &DifferencePair) -> Result<BTreeSet<DifferencePair>> {
    let base = p.base;
    let bu = base.get();
    if !bu.is_multiple_of(4) || bu <= 4 {
        return Err(Error::UnsupportedBase {
            base: bu,
            requirement: "4 | b and b > 4",
        });
    }
    let b = i64::from(bu);
    let h = b / 2;
    let d = i64::from(p.d);
    let dp = i64::from(p.d_prime);
    let mut raw: Vec<(i64, i64)> = Vec::new();

    if (d, dp) == (0, 0) {
        raw.push((0, 0));
    }
    if (d, dp) == (1, 1) {
        raw.push((h, h));
    }
    if (d, dp) == (b - 1, 0) {
        raw.push((1, 0));
    }
    // (i): (2i, 2j) <- (b/2 ± i, b/2 ± j), i ≠ j
    if even(d) && even(dp) && d != dp {
        let (i, j) = (d / 2, dp / 2);
        for si in [1, -1] {
            for sj in [1, -1] {
                raw.push((h + si * i, h + sj * j));
            }
        }
    }
    // (ii): (2k + 1, 2k - 1) <- (b/2 ± k, b/2 ± k)
    if !even(d) && d == dp + 2 {
        let k = (d - 1) / 2;
        for si in [1, -1] {
            for sj in [1, -1] {
                raw.push((h + si * k, h + sj * k));
            }
        }
    }
    // (iii): (k, b - 1 - k) <- (k + 1, 0) and (b - k, 0), k ∉ {0, b - 1}
    if d + dp == b - 1 && dp >= 1 {
        raw.push((d + 1, 0));
        raw.push((b - d, 0));
    }

    Ok(raw
        .into_iter()
        .filter_map(|(x, y)| DifferencePair::canonical_signed(base, x, y))
        .collect())
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

/// Distinct orderings of a four-element multiset.
fn arrangements(mut offsets: [u32; 4]) -> u64 {
    offsets.sort_unstable();
    let mut denom = 1;
    let mut run = 1;
    for i in 1..4 {
        if offsets[i] == offsets[i - 1] {
            run += 1;
        } else {
            denom *= factorial(run);
            run = 1;
        }
    }
    denom *= factorial(run);
    24 / denom
}

/// Number of the `b⁴` ordered numerals whose difference pair is `p`.
///
/// Sorted digits are `a₀ = s`, `a₁ = s + t`, `a₂ = s + t + d′`, `a₃ = s + d`
/// with `0 ≤ s < b − d` and `0 ≤ t ≤ d − d′`; each sorted tuple contributes
/// its number of distinct orderings.
pub fn count_representatives(p: &DifferencePair) -> u64 {
    let b = u64::from(p.base.get());
    let (d, dp) = (p.d, p.d_prime);
    let per_offset: u64 = (0..=d - dp).map(|t| arrangements([0, t, t + dp, d])).sum();
    (b - u64::from(d)) * per_offset
}

/// Every ordered numeral whose difference pair is `p`.
pub fn numerals_with_pair(p: &DifferencePair) -> Vec<DigitQuad> {
    let b = p.base.get();
    let (d, dp) = (p.d, p.d_prime);
    let mut out = Vec::new();
    for s in 0..b - d {
        for t in 0..=d - dp {
            let sorted = [s + d, s + t + dp, s + t, s];
            let mut seen = BTreeSet::new();
            for perm in PERMUTATIONS {
                let digits = [
                    sorted[perm[0]],
                    sorted[perm[1]],
                    sorted[perm[2]],
                    sorted[perm[3]],
                ];
                if seen.insert(digits) {
                    out.push(DigitQuad::new(p.base, digits).expect("digits below base"));
                }
            }
        }
    }
    out
}

const PERMUTATIONS: [[usize; 4]; 24] = [
    [0, 1, 2, 3],
    [0, 1, 3, 2],
    [0, 2, 1, 3],
    [0, 2, 3, 1],
    [0, 3, 1, 2],
    [0, 3, 2, 1],
    [1, 0, 2, 3],
    [1, 0, 3, 2],
    [1, 2, 0, 3],
    [1, 2, 3, 0],
    [1, 3, 0, 2],
    [1, 3, 2, 0],
    [2, 0, 1, 3],
    [2, 0, 3, 1],
    [2, 1, 0, 3],
    [2, 1, 3, 0],
    [2, 3, 0, 1],
    [2, 3, 1, 0],
    [3, 0, 1, 2],
    [3, 0, 2, 1],
    [3, 1, 0, 2],
    [3, 1, 2, 0],
    [3, 2, 0, 1],
    [3, 2, 1, 0],
];
