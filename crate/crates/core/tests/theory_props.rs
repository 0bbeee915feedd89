use interval_probe::heat::heat_fd_flux;
use interval_probe::theory::{
    admissible_lengths, commensurate_initial_data, rational_approximation, scale_free_trace_bound,
    trace_constant_probe, TraceFamily, MAX_DENOMINATOR, RATIO_TOLERANCE,
};
use interval_probe::wave::wave_fd_flux_unit_courant;
use interval_probe::{BoundaryInput, Grid, HeatProblem, Profile, WaveProblem};
use proptest::prelude::*;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

proptest! {
    #[test]
    fn fractions_come_back_in_lowest_terms(p in 1u64..5000, q in 1u64..5000) {
        let g = gcd(p, q);
        let x = p as f64 / q as f64;
        prop_assert_eq!(rational_approximation(x, MAX_DENOMINATOR, RATIO_TOLERANCE), Some((p / g, q / g)));
    }

    #[test]
    fn admissible_lengths_are_closed(ell in 0.1f64..5.0, n0 in 1u64..6, span in 0.0f64..30.0) {
        let l_max = ell + span;
        let v = admissible_lengths(ell, n0, l_max);
        prop_assert!(!v.is_empty());
        prop_assert!((v[0] - ell).abs() <= 1e-12 * ell);
        for (k, len) in v.iter().enumerate() {
            // L = N l / n0 with integer N >= n0, and nothing admissible is skipped.
            let n = len * n0 as f64 / ell;
            prop_assert!((n - n.round()).abs() < 1e-9 && n.round() as u64 == n0 + k as u64);
            prop_assert!(*len <= l_max * (1.0 + 1e-12));
        }
        let next = (n0 + v.len() as u64) as f64 * ell / n0 as f64;
        prop_assert!(next > l_max);
    }

    #[test]
    fn trace_ratio_respects_the_bound(c in proptest::collection::vec(-3.0f64..3.0, 4), ell in 0.05f64..20.0) {
        let f = Profile::Polynomial(c);
        let bound = scale_free_trace_bound();
        for fam in [TraceFamily::Fixed(f.clone()), TraceFamily::Scaled(f)] {
            let r = trace_constant_probe(&fam, &[ell]).unwrap();
            prop_assert!(r[0].scale_free <= bound, "{:?}", r[0]);
        }
    }

    #[test]
    fn scaled_families_have_one_ratio(k in 0.2f64..6.0, a in 0.05f64..10.0, b in 0.05f64..10.0) {
        let fam = TraceFamily::Scaled(Profile::sine(1.0, k));
        let r = trace_constant_probe(&fam, &[a, b]).unwrap();
        prop_assert!((r[0].scale_free - r[1].scale_free).abs() <= 1e-9 * r[0].scale_free.max(1e-300));
    }
}

fn sup_gap(a: &[f64], b: &[f64], from: usize) -> f64 {
    a[from..]
        .iter()
        .zip(&b[from..])
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn shared_mode_fluxes_agree_on_matching_grids() {
    // Same dx and dt on both intervals: the shared mode is a discrete eigenvector of each.
    let heat = commensurate_initial_data(2.0, 6.0, 1).unwrap();
    let small = HeatProblem::new(2.0, 5.0, BoundaryInput::Zero, heat.profile()).unwrap();
    let big = HeatProblem::new(6.0, 5.0, BoundaryInput::Zero, heat.profile_on_big()).unwrap();
    let a = heat_fd_flux(&small, Grid::new(200, 1000).unwrap()).unwrap();
    let b = heat_fd_flux(&big, Grid::new(600, 1000).unwrap()).unwrap();
    assert!(sup_gap(a.samples(), b.samples(), 2) < 1e-5);

    let wave = commensurate_initial_data(2.0, 4.0, 1).unwrap();
    for (u0, u1) in [(wave.profile(), Profile::Zero), (Profile::Zero, wave.profile())] {
        let small = WaveProblem::new(2.0, 8.0, BoundaryInput::Zero, u0.clone(), u1.clone()).unwrap();
        let big = WaveProblem::new(4.0, 8.0, BoundaryInput::Zero, u0, u1).unwrap();
        let a = wave_fd_flux_unit_courant(&small, 400).unwrap();
        let b = wave_fd_flux_unit_courant(&big, 800).unwrap();
        let n = a.len().min(b.len());
        assert!(sup_gap(&a.samples()[..n], &b.samples()[..n], 0) < 1e-5);
    }
}
