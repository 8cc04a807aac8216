use num_traits::Signed;

use toric_apery::apery::{convergence_ratio, solve_pair};
use toric_apery::catalog;
use toric_apery::hpreal::{pi, sqrt_int, zeta3, HpReal};
use toric_apery::periods::period_sequence;
use toric_apery::pfops::{operator_from_series, singular_points};
use toric_apery::Rational;

fn discovered(name: &str) -> toric_apery::DifferentialOperator {
    let e = catalog::entry(name).unwrap();
    let series = period_sequence(&e.phi, 29).values;
    operator_from_series(&series, 4, 4, 8).unwrap()
}

#[test]
fn a_branch_reproduces_periods() {
    for name in catalog::NAMES {
        let op = discovered(name);
        let pair = solve_pair(&op.to_recurrence(), 40).unwrap();
        let periods = period_sequence(&catalog::entry(name).unwrap().phi, 40).values;
        assert_eq!(pair.a, periods, "{name}");
    }
}

#[test]
fn increments_decay_at_the_singular_ratio() {
    for name in catalog::NAMES {
        let op = discovered(name);
        let rho = convergence_ratio(&singular_points(&op), 128).unwrap().to_f64();
        let pair = solve_pair(&op.to_recurrence(), 201).unwrap();
        let ratio = |n: usize| &pair.b[n] / &pair.a[n];
        let increment = |n: usize| (ratio(n) - ratio(n - 1)).abs();
        for n in 50..200 {
            let observed = HpReal::from_rational(&(increment(n + 1) / increment(n)), 64).to_f64();
            assert!(
                (observed / rho - 1.0).abs() < 0.1,
                "{name} n={n}: {observed} vs {rho}"
            );
        }
    }
}

fn agree(a: &HpReal, b: &HpReal, digits: i64) -> bool {
    (a - b).abs_below_pow10(-digits)
}

#[test]
fn refinement_is_monotone_across_doublings() {
    let sqrt2 = |d| sqrt_int(2, d);
    let sqrt3 = |d| sqrt_int(3, d);
    let constants: [(&str, &dyn Fn(u32) -> HpReal); 4] =
        [("pi", &pi), ("zeta3", &zeta3), ("sqrt2", &sqrt2), ("sqrt3", &sqrt3)];
    for (name, f) in constants {
        let mut previous = f(25);
        for digits in [50, 100, 200] {
            let next = f(digits);
            assert!(agree(&previous, &next, digits as i64 / 2 - 1), "{name} at {digits}");
            // the coarse value already carries the digits it claims
            assert_eq!(
                previous.to_fixed(digits / 2 - 2),
                next.to_fixed(digits / 2 - 2),
                "{name} at {digits}"
            );
            previous = next;
        }
    }
}

#[test]
fn sqrt_squares_back() {
    let two = HpReal::from_rational(&Rational::from_integer(2.into()), 700);
    assert!(agree(&sqrt_int(2, 200).square(), &two, 198));
}
