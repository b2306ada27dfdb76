//! Closed-form predictions for `M_b`, `C_b` and the landing length `L`, and
//! the appendix tables for `b = 5·2ⁿ`.
//!
//! Nothing in this module feeds back into [`crate::dynamics`]; the
//! [`verify`] harness measures and compares.

pub mod tables;
pub mod verify;

use num_rational::Ratio;
use serde::Serialize;

use crate::base_digits::{kaprekar_step, Base, DigitQuad};
use crate::diff_pairs::{pair_step, DifferencePair};
use crate::error::{Error, Result};

pub use tables::{
    appendix_table1_trajectory, appendix_table3_steps, appendix_table4_bound, Table1Entry,
    Table4Entry, Table4Value,
};
pub use verify::{verify_base, Check, Depth, PredictionReport, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BaseClass {
    TwoOrFour,
    /// `b = 5·m·2ⁿ` with `m` odd.
    FiveDecomposition {
        m: u32,
        n: u32,
    },
    NoFixedPoint,
}

pub fn classify_base(base: Base) -> BaseClass {
    let b = base.get();
    match b {
        2 | 4 => BaseClass::TwoOrFour,
        _ if b.is_multiple_of(5) => {
            let rest = b / 5;
            let n = rest.trailing_zeros();
            BaseClass::FiveDecomposition { m: rest >> n, n }
        }
        _ => BaseClass::NoFixedPoint,
    }
}

/// The numeral `(3b/5)(b/5 − 1)(4b/5 − 1)(2b/5)`.
pub fn fixed_point_digits(base: Base) -> Result<DigitQuad> {
    let b = base.get();
    if !b.is_multiple_of(5) {
        return Err(Error::UnsupportedBase {
            base: b,
            requirement: "5 | b",
        });
    }
    let f = b / 5;
    let q = DigitQuad::new(base, [3 * f, f - 1, 4 * f - 1, 2 * f])?;
    assert_eq!(
        kaprekar_step(&q),
        q,
        "fixed numeral formula failed for b={b}"
    );
    Ok(q)
}

pub fn predict_mb(base: Base) -> Option<u32> {
    match base.get() {
        2 => return Some(1),
        4 => return Some(3),
        5 => return Some(4),
        10 => return Some(7),
        20 => return Some(10),
        _ => {}
    }
    match classify_base(base) {
        BaseClass::FiveDecomposition { m, n } if m > 1 => Some(n + 2),
        BaseClass::FiveDecomposition { n, .. } if n >= 3 => Some(match n % 4 {
            0 => 4 * n + 6,
            1 | 2 => 3 * n + 5,
            _ => 5 * n + 6,
        }),
        _ => None,
    }
}

/// `8/(5b²) + 8/(25m²)` for `m > 1`; `(b⁴ − b)/b⁴` for `b = 5·2ⁿ` with `n = 0`
/// or `n` odd; absent otherwise.
pub fn predict_cb(base: Base) -> Option<Ratio<u128>> {
    let b = u128::from(base.get());
    match classify_base(base) {
        BaseClass::FiveDecomposition { m, .. } if m > 1 => {
            let m = u128::from(m);
            Some(Ratio::new(8, 5 * b * b) + Ratio::new(8, 25 * m * m))
        }
        BaseClass::FiveDecomposition { n, .. } if n == 0 || n % 2 == 1 => {
            let b4 = b.pow(4);
            Some(Ratio::new(b4 - b, b4))
        }
        _ => None,
    }
}

fn check_class(p: u32, q: u32) -> Result<()> {
    if q <= p && p <= 4 {
        Ok(())
    } else {
        Err(Error::NotInTable {
            p,
            q,
            table: "the landing classes 0 ≤ q ≤ p ≤ 4",
        })
    }
}

/// Upper bound on the landing length `L` for class `(p, q)`.
pub fn proposition_bound_l(p: u32, q: u32, n: u32) -> Result<u32> {
    check_class(p, q)?;
    Ok(match (p, q) {
        (3, 1) => 0,
        _ if p == q => 0,
        (4, 1) | (3, 0) | (4, 0) => n,
        (4, 2) | (2, 0) => 2 * n,
        _ => 2 * n + 2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Landing {
    pub steps: u32,
    pub class: (u32, u32),
}

/// The `n` of `b = 5·2ⁿ`, if `b` has that form.
pub fn power_of_two_exponent(base: Base) -> Option<u32> {
    match classify_base(base) {
        BaseClass::FiveDecomposition { m: 1, n } => Some(n),
        _ => None,
    }
}

/// Least `L` with both coordinates of `pair_stepᴸ(p)` divisible by `2ⁿ`,
/// and the class `(p, q)` of the pair reached.
pub fn measure_l(p: &DifferencePair) -> Result<Landing> {
    let base = p.base();
    let n = match power_of_two_exponent(base) {
        Some(n) if n >= 2 => n,
        _ => {
            return Err(Error::UnsupportedBase {
                base: base.get(),
                requirement: "b = 5·2ⁿ with n ≥ 2",
            })
        }
    };
    let unit = 1u32 << n;
    // a pair orbit that never lands would repeat within this many steps
    let budget = crate::diff_pairs::pair_count(base) as u32;
    let mut current = *p;
    for steps in 0..=budget {
        if current.d().is_multiple_of(unit) && current.d_prime().is_multiple_of(unit) {
            let class = (current.d() / unit, current.d_prime() / unit);
            return Ok(Landing { steps, class });
        }
        current = pair_step(&current);
    }
    Err(Error::Undetermined {
        steps: u64::from(budget) + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_digits::to_digits;

    fn base(b: u32) -> Base {
        Base::new(b).unwrap()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify_base(base(40)),
            BaseClass::FiveDecomposition { m: 1, n: 3 }
        );
        assert_eq!(
            classify_base(base(60)),
            BaseClass::FiveDecomposition { m: 3, n: 2 }
        );
        assert_eq!(classify_base(base(7)), BaseClass::NoFixedPoint);
        assert_eq!(classify_base(base(4)), BaseClass::TwoOrFour);
        assert_eq!(
            classify_base(base(5)),
            BaseClass::FiveDecomposition { m: 1, n: 0 }
        );
    }

    #[test]
    fn decomposition_reconstructs_base() {
        for b in 2..=3000 {
            if let BaseClass::FiveDecomposition { m, n } = classify_base(base(b)) {
                assert_eq!(5 * m * (1 << n), b);
                assert_eq!(m % 2, 1);
            }
        }
    }

    #[test]
    fn fixed_point_digits_examples() {
        assert_eq!(fixed_point_digits(base(10)).unwrap().digits(), [6, 1, 7, 4]);
        assert_eq!(fixed_point_digits(base(5)).unwrap().digits(), [3, 0, 3, 2]);
        assert_eq!(
            fixed_point_digits(base(20)).unwrap().digits(),
            [12, 3, 15, 8]
        );
        assert!(fixed_point_digits(base(12)).is_err());
    }

    #[test]
    fn fixed_point_digits_agree_with_scan() {
        for b in (5..=40).step_by(5) {
            let bb = base(b);
            let fixed: Vec<DigitQuad> = (0..bb.numeral_count())
                .map(|x| to_digits(x, bb).unwrap())
                .filter(|q| !q.is_zero() && kaprekar_step(q) == *q)
                .collect();
            assert_eq!(fixed, vec![fixed_point_digits(bb).unwrap()], "b={b}");
        }
    }

    #[test]
    fn predict_mb_examples() {
        let cases = [
            (20, 10),
            (30, 3),
            (40, 21),
            (80, 22),
            (160, 20),
            (320, 23),
            (45, 2),
            (2, 1),
        ];
        for (b, m) in cases {
            assert_eq!(predict_mb(base(b)), Some(m), "b={b}");
        }
        assert_eq!(predict_mb(base(7)), None);
        assert_eq!(predict_mb(base(640)), Some(5 * 7 + 6));
    }

    #[test]
    fn predict_cb_examples() {
        assert_eq!(predict_cb(base(15)), Some(Ratio::new(2160, 50625)));
        assert_eq!(predict_cb(base(15)), Some(Ratio::new(48, 1125)));
        assert_eq!(predict_cb(base(30)), Some(Ratio::new(30240, 810000)));
        assert_eq!(predict_cb(base(10)), Some(Ratio::new(9990, 10000)));
        assert_eq!(predict_cb(base(20)), None);
        assert_eq!(predict_cb(base(4)), None);
    }

    #[test]
    fn cb_formula_matches_closed_count() {
        for b in 2..=400 {
            if let BaseClass::FiveDecomposition { m, n } = classify_base(base(b)) {
                if m > 1 {
                    let four_n = 4u128.pow(n);
                    let count = 40 * four_n * u128::from(m * m) * (1 + 5 * four_n);
                    let b4 = u128::from(b).pow(4);
                    assert_eq!(predict_cb(base(b)), Some(Ratio::new(count, b4)), "b={b}");
                }
            }
        }
    }

    #[test]
    fn bound_examples() {
        assert_eq!(proposition_bound_l(3, 1, 9).unwrap(), 0);
        assert_eq!(proposition_bound_l(4, 0, 5).unwrap(), 5);
        assert_eq!(proposition_bound_l(3, 2, 7).unwrap(), 16);
        assert_eq!(proposition_bound_l(0, 0, 7).unwrap(), 0);
        assert!(proposition_bound_l(1, 2, 3).is_err());
        assert!(proposition_bound_l(5, 0, 3).is_err());
    }

    #[test]
    fn measure_l_examples() {
        let p = DifferencePair::new(base(20), 4, 1).unwrap();
        assert_eq!(
            measure_l(&p).unwrap(),
            Landing {
                steps: 2,
                class: (4, 1)
            }
        );
        let b = 5 << 5;
        let fixed = DifferencePair::new(base(b), 3 << 5, 1 << 5).unwrap();
        assert_eq!(
            measure_l(&fixed).unwrap(),
            Landing {
                steps: 0,
                class: (3, 1)
            }
        );
        let far = DifferencePair::new(base(b), 80, 5).unwrap();
        assert_eq!(
            measure_l(&far).unwrap(),
            Landing {
                steps: 12,
                class: (1, 0)
            }
        );
        assert!(measure_l(&DifferencePair::new(base(30), 1, 0).unwrap()).is_err());
        assert!(measure_l(&DifferencePair::new(base(10), 1, 0).unwrap()).is_err());
    }
}
