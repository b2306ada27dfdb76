//! C interface to the kaprekar crate.
//!
//! Every function returns a [`KaprekarStatus`] and writes results through
//! out-pointers. Trajectories and base reports are opaque heap handles
//! released with their `_free` function. Digit arrays always hold four
//! elements, most significant first.

#![allow(clippy::missing_safety_doc)]

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use kaprekar::dynamics::{self, BaseReport, Terminal, Trajectory};
use kaprekar::theorems;
use kaprekar::{Base, DifferencePair, DigitQuad, Error};
use num_rational::Ratio;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KaprekarStatus {
    Ok = 0,
    InvalidBase = 1,
    DigitOutOfRange = 2,
    ValueOutOfRange = 3,
    InvalidPair = 4,
    UnsupportedBase = 5,
    Undetermined = 6,
    NullPointer = 7,
    IndexOutOfRange = 8,
    /// The quantity is not defined for this input, e.g. no prediction.
    NoValue = 9,
    /// The result does not fit the output type.
    Overflow = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KaprekarTerminal {
    FixedNumeral = 0,
    ZeroSink = 1,
    Cycle = 2,
}

/// Opaque orbit of one numeral.
pub struct KaprekarTrajectory {
    inner: Trajectory,
}

/// Opaque per-base statistics.
pub struct KaprekarReport {
    inner: BaseReport,
    histogram: Vec<(u32, u64)>,
}

impl From<Error> for KaprekarStatus {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidBase(_) => KaprekarStatus::InvalidBase,
            Error::ValueOutOfRange { .. } => KaprekarStatus::ValueOutOfRange,
            Error::DigitOutOfRange { .. } => KaprekarStatus::DigitOutOfRange,
            Error::InvalidPair { .. } => KaprekarStatus::InvalidPair,
            Error::UnsupportedBase { .. }
            | Error::BaseMismatch { .. }
            | Error::NotInTable { .. } => KaprekarStatus::UnsupportedBase,
            Error::Undetermined { .. } => KaprekarStatus::Undetermined,
        }
    }
}

type Outcome = Result<(), KaprekarStatus>;

fn guard(f: impl FnOnce() -> Outcome) -> KaprekarStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KaprekarStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => KaprekarStatus::Panic,
    }
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, KaprekarStatus> {
    p.as_mut().ok_or(KaprekarStatus::NullPointer)
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, KaprekarStatus> {
    p.as_ref().ok_or(KaprekarStatus::NullPointer)
}

unsafe fn read_quad(base: u32, digits: *const u32) -> Result<DigitQuad, KaprekarStatus> {
    if digits.is_null() {
        return Err(KaprekarStatus::NullPointer);
    }
    let ds: [u32; 4] = std::slice::from_raw_parts(digits, 4)
        .try_into()
        .expect("four digits");
    Ok(DigitQuad::new(Base::new(base)?, ds)?)
}

unsafe fn write_quad(q: &DigitQuad, dst: *mut u32) -> Outcome {
    if dst.is_null() {
        return Err(KaprekarStatus::NullPointer);
    }
    std::slice::from_raw_parts_mut(dst, 4).copy_from_slice(&q.digits());
    Ok(())
}

fn ratio_parts(r: &Ratio<u128>) -> Result<(u64, u64), KaprekarStatus> {
    let num = u64::try_from(*r.numer()).map_err(|_| KaprekarStatus::Overflow)?;
    let den = u64::try_from(*r.denom()).map_err(|_| KaprekarStatus::Overflow)?;
    Ok((num, den))
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn kaprekar_status_message(status: KaprekarStatus) -> *const c_char {
    let s: &'static std::ffi::CStr = match status {
        KaprekarStatus::Ok => c"ok",
        KaprekarStatus::InvalidBase => c"base out of range",
        KaprekarStatus::DigitOutOfRange => c"digit not below the base",
        KaprekarStatus::ValueOutOfRange => c"value does not fit in four digits",
        KaprekarStatus::InvalidPair => c"not a canonical difference pair",
        KaprekarStatus::UnsupportedBase => c"operation not defined for this base",
        KaprekarStatus::Undetermined => c"orbit undetermined within the step budget",
        KaprekarStatus::NullPointer => c"null pointer argument",
        KaprekarStatus::IndexOutOfRange => c"index out of range",
        KaprekarStatus::NoValue => c"no value for this input",
        KaprekarStatus::Overflow => c"result does not fit the output type",
        KaprekarStatus::Panic => c"internal error",
    };
    s.as_ptr()
}

/// One application of the Kaprekar map to `digits`, written to `result`.
#[no_mangle]
pub unsafe extern "C" fn kaprekar_step(
    base: u32,
    digits: *const u32,
    result: *mut u32,
) -> KaprekarStatus {
    guard(|| {
        let q = read_quad(base, digits)?;
        write_quad(&kaprekar::kaprekar_step(&q), result)
    })
}

/// Difference pair `(d, d′)` of a numeral.
#[no_mangle]
pub unsafe extern "C" fn kaprekar_pair_of(
    base: u32,
    digits: *const u32,
    d: *mut u32,
    d_prime: *mut u32,
) -> KaprekarStatus {
    guard(|| {
        let p = kaprekar::pair_of(&read_quad(base, digits)?);
        *out(d)? = p.d();
        *out(d_prime)? = p.d_prime();
        Ok(())
    })
}

/// Pair of the image of any numeral with pair `(d, d′)`.
#[no_mangle]
pub unsafe extern "C" fn kaprekar_pair_step(
    base: u32,
    d: u32,
    d_prime: u32,
    next_d: *mut u32,
    next_d_prime: *mut u32,
) -> KaprekarStatus {
    guard(|| {
        let p = DifferencePair::new(Base::new(base)?, d, d_prime)?;
        let next = kaprekar::pair_step(&p);
        *out(next_d)? = next.d();
        *out(next_d_prime)? = next.d_prime();
        Ok(())
    })
}

/// Number of four-digit numerals whose pair is `(d, d′)`.
#[no_mangle]
pub unsafe extern "C" fn kaprekar_count_representatives(
    base: u32,
    d: u32,
    d_prime: u32,
    count: *mut u64,
) -> KaprekarStatus {
    guard(|| {
        let p = DifferencePair::new(Base::new(base)?, d, d_prime)?;
        *out(count)? = kaprekar::count_representatives(&p);
        Ok(())
    })
}

/// Closed-form largest distance to the fixed numeral; `NO_VALUE` when no
/// prediction applies.
#[no_mangle]
pub unsafe extern "C" fn kaprekar_predict_mb(base: u32, mb: *mut u32) -> KaprekarStatus {
    guard(|| {
        let v = theorems::predict_mb(Base::new(base)?).ok_or(KaprekarStatus::NoValue)?;
        *out(mb)? = v;
        Ok(())
    })
}

/// Closed-form convergence fraction as a reduced `numerator/denominator`.
#[no_mangle]
pub unsafe extern "C" fn kaprekar_predict_cb(
    base: u32,
    numerator: *mut u64,
    denominator: *mut u64,
) -> KaprekarStatus {
    guard(|| {
        let r = theorems::predict_cb(Base::new(base)?).ok_or(KaprekarStatus::NoValue)?;
        let (n, d) = ratio_parts(&r)?;
        *out(numerator)? = n;
        *out(denominator)? = d;
        Ok(())
    })
}

/// Iterates from `digits` for at most `max_steps` steps (0 selects the
/// default budget). On success `*trajectory` owns a new handle.
#[no_mangle]
pub unsafe extern "C" fn kaprekar_trajectory_new(
    base: u32,
    digits: *const u32,
    max_steps: u64,
    trajectory: *mut *mut KaprekarTrajectory,
) -> KaprekarStatus {
    guard(|| {
        let slot = out(trajectory)?;
        let start = read_quad(base, digits)?;
        let budget = if max_steps == 0 {
            dynamics::default_max_steps(start.base())
        } else {
            max_steps
        };
        let inner = dynamics::trajectory(start, budget)?;
        *slot = Box::into_raw(Box::new(KaprekarTrajectory { inner }));
        Ok(())
    })
}

/// Number of recorded states, the start included; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn kaprekar_trajectory_len(trajectory: *const KaprekarTrajectory) -> usize {
    trajectory.as_ref().map_or(0, |t| t.inner.states.len())
}

#[no_mangle]
pub unsafe extern "C" fn kaprekar_trajectory_state(
    trajectory: *const KaprekarTrajectory,
    index: usize,
    digits: *mut u32,
) -> KaprekarStatus {
    guard(|| {
        let t = handle(trajectory)?;
        let q = t
            .inner
            .states
            .get(index)
            .ok_or(KaprekarStatus::IndexOutOfRange)?;
        write_quad(q, digits)
    })
}

/// How the orbit ends. `period` and `entry_step` are written only for
/// cycles and may be null otherwise.
#[no_mangle]
pub unsafe extern "C" fn kaprekar_trajectory_terminal(
    trajectory: *const KaprekarTrajectory,
    kind: *mut KaprekarTerminal,
    period: *mut usize,
    entry_step: *mut usize,
) -> KaprekarStatus {
    guard(|| {
        let t = handle(trajectory)?;
        let kind = out(kind)?;
        match t.inner.terminal {
            Terminal::FixedNumeral(_) => *kind = KaprekarTerminal::FixedNumeral,
            Terminal::ZeroSink => *kind = KaprekarTerminal::ZeroSink,
            Terminal::Cycle {
                period: p,
                entry_step: e,
            } => {
                *kind = KaprekarTerminal::Cycle;
                *out(period)? = p;
                *out(entry_step)? = e;
            }
        }
        Ok(())
    })
}

/// Steps to the fixed numeral; `NO_VALUE` if the orbit never reaches it.
#[no_mangle]
pub unsafe extern "C" fn kaprekar_trajectory_distance(
    trajectory: *const KaprekarTrajectory,
    distance: *mut u32,
) -> KaprekarStatus {
    guard(|| {
        let t = handle(trajectory)?;
        *out(distance)? = t.inner.distance.ok_or(KaprekarStatus::NoValue)?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn kaprekar_trajectory_free(trajectory: *mut KaprekarTrajectory) {
    if !trajectory.is_null() {
        drop(Box::from_raw(trajectory));
    }
}

/// Computes the statistics of `base`. On success `*report` owns a new
/// handle.
#[no_mangle]
pub unsafe extern "C" fn kaprekar_report_new(
    base: u32,
    report: *mut *mut KaprekarReport,
) -> KaprekarStatus {
    guard(|| {
        let slot = out(report)?;
        let inner = dynamics::base_report(Base::new(base)?);
        let histogram = inner.histogram.iter().map(|(&k, &c)| (k, c)).collect();
        *slot = Box::into_raw(Box::new(KaprekarReport { inner, histogram }));
        Ok(())
    })
}

/// Largest distance to a fixed numeral; `NO_VALUE` when nothing converges.
#[no_mangle]
pub unsafe extern "C" fn kaprekar_report_mb(
    report: *const KaprekarReport,
    mb: *mut u32,
) -> KaprekarStatus {
    guard(|| {
        let r = handle(report)?;
        *out(mb)? = r.inner.mb.ok_or(KaprekarStatus::NoValue)?;
        Ok(())
    })
}

/// Number of numerals whose orbit reaches a non-zero fixed numeral.
#[no_mangle]
pub unsafe extern "C" fn kaprekar_report_sb_size(
    report: *const KaprekarReport,
    size: *mut u64,
) -> KaprekarStatus {
    guard(|| {
        *out(size)? = handle(report)?.inner.sb_size;
        Ok(())
    })
}

/// Converging fraction of all numerals, reduced.
#[no_mangle]
pub unsafe extern "C" fn kaprekar_report_cb(
    report: *const KaprekarReport,
    numerator: *mut u64,
    denominator: *mut u64,
) -> KaprekarStatus {
    guard(|| {
        let (n, d) = ratio_parts(&handle(report)?.inner.cb)?;
        *out(numerator)? = n;
        *out(denominator)? = d;
        Ok(())
    })
}

/// Number of distinct distances in the histogram.
#[no_mangle]
pub unsafe extern "C" fn kaprekar_report_histogram_len(report: *const KaprekarReport) -> usize {
    report.as_ref().map_or(0, |r| r.histogram.len())
}

/// The `index`-th histogram entry, in increasing distance.
#[no_mangle]
pub unsafe extern "C" fn kaprekar_report_histogram_entry(
    report: *const KaprekarReport,
    index: usize,
    distance: *mut u32,
    count: *mut u64,
) -> KaprekarStatus {
    guard(|| {
        let r = handle(report)?;
        let &(k, c) = r
            .histogram
            .get(index)
            .ok_or(KaprekarStatus::IndexOutOfRange)?;
        *out(distance)? = k;
        *out(count)? = c;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn kaprekar_report_free(report: *mut KaprekarReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
