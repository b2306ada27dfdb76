//! Randomised invariants over large bases, where exhaustive checks are out
//! of reach.

use kaprekar::diff_pairs::{numerals_with_pair, DifferencePair};
use kaprekar::dynamics::{default_max_steps, trajectory, Terminal};
use kaprekar::theorems::{fixed_point_digits, predict_cb, predict_mb};
use kaprekar::{
    classify, count_representatives, kaprekar_step, pair_of, pair_step, predecessors, Base,
    DigitQuad, PairType,
};
use proptest::prelude::*;

fn quad() -> impl Strategy<Value = DigitQuad> {
    (2u32..=5000).prop_flat_map(|b| {
        prop::array::uniform4(0..b)
            .prop_map(move |d| DigitQuad::new(Base::new(b).unwrap(), d).unwrap())
    })
}

fn pair() -> impl Strategy<Value = DifferencePair> {
    (2u32..=400).prop_flat_map(|b| {
        (0..b).prop_flat_map(move |d| {
            (0..=d).prop_map(move |e| DifferencePair::new(Base::new(b).unwrap(), d, e).unwrap())
        })
    })
}

proptest! {
    #[test]
    fn pair_step_commutes_with_the_map(q in quad()) {
        prop_assert_eq!(pair_of(&kaprekar_step(&q)), pair_step(&pair_of(&q)));
    }

    #[test]
    fn predecessors_are_exactly_preimages(p in pair()) {
        for pre in predecessors(&p) {
            prop_assert_eq!(pair_step(&pre), p);
        }
        let target = pair_step(&p);
        prop_assert!(predecessors(&target).contains(&p));
    }

    #[test]
    fn counts_are_positive_and_type_a_is_closed_form(p in pair()) {
        let n = count_representatives(&p);
        prop_assert!(n > 0);
        if classify(&p) == PairType::A {
            let (b, d, e) = (u64::from(p.base().get()), u64::from(p.d()), u64::from(p.d_prime()));
            prop_assert_eq!(n, 24 * (b - d) * (d - e));
        }
    }

    #[test]
    fn trajectories_end_at_a_periodic_state(q in quad()) {
        let t = trajectory(q, default_max_steps(q.base())).unwrap();
        let last = *t.states.last().unwrap();
        match t.terminal {
            Terminal::FixedNumeral(f) => {
                prop_assert_eq!(f, last);
                prop_assert_eq!(kaprekar_step(&f), f);
                prop_assert_eq!(t.distance, Some((t.states.len() - 1) as u32));
            }
            Terminal::ZeroSink => prop_assert!(last.is_zero()),
            Terminal::Cycle { period, entry_step } => {
                prop_assert!(period >= 2);
                prop_assert_eq!(kaprekar_step(&last), t.states[entry_step]);
                prop_assert_eq!(t.states.len() - entry_step, period);
            }
        }
    }

    #[test]
    fn multiples_of_five_have_the_fixed_numeral(k in 1u32..=13000) {
        let base = Base::new(5 * k).unwrap();
        let f = fixed_point_digits(base).unwrap();
        prop_assert_eq!(kaprekar_step(&f), f);
    }

    #[test]
    fn predictions_are_consistent(k in 1u32..=13000) {
        let base = Base::new(5 * k).unwrap();
        if let Some(cb) = predict_cb(base) {
            prop_assert!(cb > num_rational::Ratio::new(0, 1) && cb <= num_rational::Ratio::new(1, 1));
        }
        let m = k >> k.trailing_zeros();
        if m > 1 {
            prop_assert_eq!(predict_mb(base), Some(k.trailing_zeros() + 2));
        }
    }
}

#[test]
fn numerals_with_pair_matches_count_in_mid_size_base() {
    let base = Base::new(37).unwrap();
    for (d, e) in [(36, 0), (20, 20), (19, 18), (30, 7)] {
        let p = DifferencePair::new(base, d, e).unwrap();
        assert_eq!(
            numerals_with_pair(&p).len() as u64,
            count_representatives(&p)
        );
    }
}
