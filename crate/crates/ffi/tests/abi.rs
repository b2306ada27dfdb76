use std::ffi::CStr;
use std::ptr;

use kaprekar_ffi::*;

#[test]
fn step_and_pairs() {
    let mut out = [0u32; 4];
    let s = unsafe { kaprekar_step(10, [3, 2, 2, 3].as_ptr(), out.as_mut_ptr()) };
    assert_eq!(s, KaprekarStatus::Ok);
    assert_eq!(out, [1, 0, 8, 9]);

    let (mut d, mut e) = (0, 0);
    assert_eq!(
        unsafe { kaprekar_pair_of(10, [0, 8, 8, 9].as_ptr(), &mut d, &mut e) },
        KaprekarStatus::Ok
    );
    assert_eq!((d, e), (9, 0));
    let (mut nd, mut ne) = (0, 0);
    assert_eq!(
        unsafe { kaprekar_pair_step(10, 9, 0, &mut nd, &mut ne) },
        KaprekarStatus::Ok
    );
    assert_eq!((nd, ne), (8, 1));

    let mut count = 0;
    assert_eq!(
        unsafe { kaprekar_count_representatives(10, 9, 0, &mut count) },
        KaprekarStatus::Ok
    );
    assert_eq!(count, 104);
}

#[test]
fn error_codes() {
    let mut out = [0u32; 4];
    assert_eq!(
        unsafe { kaprekar_step(1, [0; 4].as_ptr(), out.as_mut_ptr()) },
        KaprekarStatus::InvalidBase
    );
    assert_eq!(
        unsafe { kaprekar_step(10, [0, 0, 0, 10].as_ptr(), out.as_mut_ptr()) },
        KaprekarStatus::DigitOutOfRange
    );
    assert_eq!(
        unsafe { kaprekar_step(10, ptr::null(), out.as_mut_ptr()) },
        KaprekarStatus::NullPointer
    );
    assert_eq!(
        unsafe { kaprekar_step(10, [1, 2, 3, 4].as_ptr(), ptr::null_mut()) },
        KaprekarStatus::NullPointer
    );
    let (mut d, mut e) = (0, 0);
    assert_eq!(
        unsafe { kaprekar_pair_step(10, 3, 4, &mut d, &mut e) },
        KaprekarStatus::InvalidPair
    );
    let mut mb = 0;
    assert_eq!(
        unsafe { kaprekar_predict_mb(7, &mut mb) },
        KaprekarStatus::NoValue
    );
    let mut t = ptr::null_mut();
    let s = unsafe { kaprekar_trajectory_new(10, [0, 8, 8, 9].as_ptr(), 3, &mut t) };
    assert_eq!(s, KaprekarStatus::Undetermined);
    assert!(t.is_null());
}

#[test]
fn status_messages_are_static_strings() {
    for s in [
        KaprekarStatus::Ok,
        KaprekarStatus::NoValue,
        KaprekarStatus::Panic,
    ] {
        let msg = unsafe { CStr::from_ptr(kaprekar_status_message(s)) };
        assert!(!msg.to_bytes().is_empty());
    }
}

#[test]
fn predictions() {
    let mut mb = 0;
    assert_eq!(
        unsafe { kaprekar_predict_mb(320, &mut mb) },
        KaprekarStatus::Ok
    );
    assert_eq!(mb, 23);
    let (mut n, mut d) = (0, 0);
    assert_eq!(
        unsafe { kaprekar_predict_cb(15, &mut n, &mut d) },
        KaprekarStatus::Ok
    );
    // 2160 of the 15⁴ numerals converge
    assert_eq!((n, d), (16, 375));
    assert_eq!(n * 50625, 2160 * d);
}

#[test]
fn trajectory_handle() {
    let mut t = ptr::null_mut();
    assert_eq!(
        unsafe { kaprekar_trajectory_new(10, [0, 8, 8, 9].as_ptr(), 0, &mut t) },
        KaprekarStatus::Ok
    );
    assert_eq!(unsafe { kaprekar_trajectory_len(t) }, 5);
    let mut last = [0u32; 4];
    assert_eq!(
        unsafe { kaprekar_trajectory_state(t, 4, last.as_mut_ptr()) },
        KaprekarStatus::Ok
    );
    assert_eq!(last, [6, 1, 7, 4]);
    assert_eq!(
        unsafe { kaprekar_trajectory_state(t, 5, last.as_mut_ptr()) },
        KaprekarStatus::IndexOutOfRange
    );
    let mut kind = KaprekarTerminal::Cycle;
    let s = unsafe { kaprekar_trajectory_terminal(t, &mut kind, ptr::null_mut(), ptr::null_mut()) };
    assert_eq!(
        (s, kind),
        (KaprekarStatus::Ok, KaprekarTerminal::FixedNumeral)
    );
    let mut dist = 0;
    assert_eq!(
        unsafe { kaprekar_trajectory_distance(t, &mut dist) },
        KaprekarStatus::Ok
    );
    assert_eq!(dist, 4);
    unsafe { kaprekar_trajectory_free(t) };

    // base 6 has no fixed numeral; every non-repdigit orbit cycles
    let mut t = ptr::null_mut();
    assert_eq!(
        unsafe { kaprekar_trajectory_new(6, [0, 0, 0, 1].as_ptr(), 0, &mut t) },
        KaprekarStatus::Ok
    );
    let (mut period, mut entry) = (0, 0);
    let s = unsafe { kaprekar_trajectory_terminal(t, &mut kind, &mut period, &mut entry) };
    assert_eq!((s, kind), (KaprekarStatus::Ok, KaprekarTerminal::Cycle));
    assert!(period >= 2);
    assert_eq!(
        unsafe { kaprekar_trajectory_distance(t, &mut dist) },
        KaprekarStatus::NoValue
    );
    unsafe { kaprekar_trajectory_free(t) };
    unsafe { kaprekar_trajectory_free(ptr::null_mut()) };
    assert_eq!(unsafe { kaprekar_trajectory_len(ptr::null()) }, 0);
}

#[test]
fn report_handle() {
    let mut r = ptr::null_mut();
    assert_eq!(
        unsafe { kaprekar_report_new(10, &mut r) },
        KaprekarStatus::Ok
    );
    let mut mb = 0;
    assert_eq!(
        unsafe { kaprekar_report_mb(r, &mut mb) },
        KaprekarStatus::Ok
    );
    assert_eq!(mb, 7);
    let mut size = 0;
    assert_eq!(
        unsafe { kaprekar_report_sb_size(r, &mut size) },
        KaprekarStatus::Ok
    );
    assert_eq!(size, 9990);
    let (mut n, mut d) = (0, 0);
    assert_eq!(
        unsafe { kaprekar_report_cb(r, &mut n, &mut d) },
        KaprekarStatus::Ok
    );
    assert_eq!((n, d), (999, 1000));
    let len = unsafe { kaprekar_report_histogram_len(r) };
    assert_eq!(len, 8);
    let mut total = 0;
    for i in 0..len {
        let (mut k, mut c) = (0, 0);
        assert_eq!(
            unsafe { kaprekar_report_histogram_entry(r, i, &mut k, &mut c) },
            KaprekarStatus::Ok
        );
        assert_eq!(k as usize, i);
        total += c;
    }
    assert_eq!(total, 9990);
    unsafe { kaprekar_report_free(r) };

    let mut r = ptr::null_mut();
    assert_eq!(
        unsafe { kaprekar_report_new(7, &mut r) },
        KaprekarStatus::Ok
    );
    assert_eq!(
        unsafe { kaprekar_report_mb(r, &mut mb) },
        KaprekarStatus::NoValue
    );
    unsafe { kaprekar_report_free(r) };
}
