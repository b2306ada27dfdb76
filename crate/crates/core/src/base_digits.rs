//! Four-digit base-`b` numerals and the integer-level Kaprekar step.
//!
//! A [`DigitQuad`] always carries exactly four digits, most significant
//! first, so leading zeros are part of the value: `0309` in base 10 is
//! `[0, 3, 0, 9]`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported base. `b⁴ − 1` must fit in a `u64`, and so must `b⁴`
/// itself, which is why the bound stops one short of `2¹⁶`.
pub const MAX_BASE: u32 = (1 << 16) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Base(u32);

impl Base {
    pub fn new(b: u32) -> Result<Self> {
        if (2..=MAX_BASE).contains(&b) {
            Ok(Base(b))
        } else {
            Err(Error::InvalidBase(b))
        }
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Number of four-digit numerals, `b⁴`.
    #[inline]
    pub fn numeral_count(self) -> u64 {
        let b = u64::from(self.0);
        b * b * b * b
    }
}

impl TryFrom<u32> for Base {
    type Error = Error;

    fn try_from(b: u32) -> Result<Self> {
        Base::new(b)
    }
}

impl From<Base> for u32 {
    fn from(b: Base) -> u32 {
        b.0
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DigitQuad {
    base: Base,
    digits: [u32; 4],
}

impl DigitQuad {
    /// Builds a numeral from its written digits, most significant first.
    pub fn new(base: Base, digits: [u32; 4]) -> Result<Self> {
        if let Some(&digit) = digits.iter().find(|&&d| d >= base.get()) {
            return Err(Error::DigitOutOfRange {
                digit,
                base: base.get(),
            });
        }
        Ok(DigitQuad { base, digits })
    }

    #[inline]
    pub fn base(&self) -> Base {
        self.base
    }

    #[inline]
    pub fn digits(&self) -> [u32; 4] {
        self.digits
    }

    #[inline]
    pub fn value(&self) -> u64 {
        let b = u64::from(self.base.get());
        self.digits.iter().fold(0, |acc, &d| acc * b + u64::from(d))
    }

    /// Digits sorted descending: `a₃ ≥ a₂ ≥ a₁ ≥ a₀`.
    #[inline]
    pub fn sorted_desc(&self) -> [u32; 4] {
        let mut s = self.digits;
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    pub fn is_repdigit(&self) -> bool {
        is_repdigit(self)
    }

    pub fn is_zero(&self) -> bool {
        self.digits == [0; 4]
    }

    /// Renders as a compact string for `b ≤ 10` (`0889`) and as a bracketed
    /// list otherwise (`[12,3,15,8]`).
    pub fn render(&self) -> String {
        if self.base.get() <= 10 {
            self.digits
                .iter()
                .map(|d| char::from(b'0' + *d as u8))
                .collect()
        } else {
            let parts: Vec<String> = self.digits.iter().map(u32::to_string).collect();
            format!("[{}]", parts.join(","))
        }
    }
}

impl Serialize for DigitQuad {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.digits.serialize(s)
    }
}

impl fmt::Display for DigitQuad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub fn to_digits(x: u64, base: Base) -> Result<DigitQuad> {
    if x >= base.numeral_count() {
        return Err(Error::ValueOutOfRange {
            value: x,
            base: base.get(),
        });
    }
    let b = u64::from(base.get());
    let mut digits = [0u32; 4];
    let mut rest = x;
    for slot in digits.iter_mut().rev() {
        *slot = (rest % b) as u32;
        rest /= b;
    }
    Ok(DigitQuad { base, digits })
}

#[inline]
pub fn from_digits(q: &DigitQuad) -> u64 {
    q.value()
}

/// One application of the Kaprekar map: descending rearrangement minus
/// ascending rearrangement, done as a column subtraction with borrows.
pub fn kaprekar_step(q: &DigitQuad) -> DigitQuad {
    let b = q.base.get() as i64;
    let desc = q.sorted_desc();
    let mut out = [0u32; 4];
    let mut borrow = 0i64;
    // D is `desc` and A is `desc` reversed, both most-significant first.
    for col in (0..4).rev() {
        let mut v = desc[col] as i64 - desc[3 - col] as i64 - borrow;
        if v < 0 {
            v += b;
            borrow = 1;
        } else {
            borrow = 0;
        }
        out[col] = v as u32;
    }
    debug_assert_eq!(
        borrow, 0,
        "descending rearrangement is never below ascending"
    );
    DigitQuad {
        base: q.base,
        digits: out,
    }
}

pub fn is_repdigit(q: &DigitQuad) -> bool {
    q.digits.iter().all(|&d| d == q.digits[0])
}
