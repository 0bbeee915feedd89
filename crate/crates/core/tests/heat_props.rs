use std::f64::consts::PI;

use interval_probe::heat::{heat_fd_solve, heat_series_flux, HeatSeriesSolution};
use interval_probe::{boundary_flux_left, BoundaryInput, Grid, HeatProblem, Profile, TimeGrid};
use proptest::prelude::*;

fn nonnegative_data() -> impl Strategy<Value = (BoundaryInput, Profile, f64)> {
    let eta = prop_oneof![
        Just(BoundaryInput::Zero),
        (0.1f64..5.0, 0.2f64..3.0).prop_map(|(a, w)| BoundaryInput::SinePower {
            amplitude: a,
            frequency: w,
            power: 2
        }),
        (0.0f64..1.0, 0.0f64..1.0).prop_map(|(c0, c1)| BoundaryInput::Polynomial(vec![c0, c1])),
    ];
    (eta, 0.5f64..4.0, 0.0f64..3.0, 0usize..3).prop_map(|(eta, ell, amp, kind)| {
        let u0 = match kind {
            0 => Profile::mode(1, ell),
            1 => Profile::Polynomial(vec![0.0, amp * ell, -amp]),
            _ => Profile::Bump {
                amplitude: amp,
                center: 0.5 * ell,
                half_width: 0.25 * ell,
            },
        };
        (eta, u0, ell)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    // The classical bound for a discrete maximum principle: dt <= dx^2.
    #[test]
    fn maximum_principle((eta, u0, ell) in nonnegative_data(), nx in 10usize..60) {
        let horizon = 2.0;
        let dx = ell / nx as f64;
        let nt = (horizon / (dx * dx)).ceil() as usize;
        let p = HeatProblem::new(ell, horizon, eta, u0).unwrap();
        let f = heat_fd_solve(&p, Grid::new(nx, nt).unwrap());
        prop_assert!(f.min_value() >= -1e-10, "min {}", f.min_value());
    }

    // Beyond that bound, on the grids used for reconstruction (dt/dx^2 up to
    // about 80), the startup steps keep undershoots below the same level.
    #[test]
    fn no_undershoot_on_working_grids((eta, u0, ell) in nonnegative_data().prop_filter("long", |d| d.2 >= 1.0)) {
        let p = HeatProblem::new(ell, 5.0, eta, u0).unwrap();
        let f = heat_fd_solve(&p, Grid::new(200, 1000).unwrap());
        prop_assert!(f.min_value() >= -1e-10, "min {}", f.min_value());
    }

    #[test]
    fn l2_norm_decays_without_input(ell in 0.5f64..4.0, k in 1u32..6, a in -3.0f64..3.0, c in -1.0f64..1.0, nx in 20usize..150) {
        let u0 = Profile::Sum(vec![Profile::mode(k, ell), Profile::sine(a, PI / ell), Profile::Polynomial(vec![0.0, c * ell, -c])]);
        let p = HeatProblem::new(ell, 1.0, BoundaryInput::Zero, u0).unwrap();
        let f = heat_fd_solve(&p, Grid::new(nx, 2 * nx).unwrap());
        let norm = |j: usize| f.level(j).iter().map(|u| u * u).sum::<f64>();
        for j in 1..=f.nt() {
            prop_assert!(norm(j) <= norm(j - 1) * (1.0 + 1e-12));
        }
    }
}

#[test]
fn series_and_fd_flux_converge_at_second_order() {
    let u0 = Profile::Polynomial(vec![0.0, 10.0, -5.0]);
    let sol = HeatSeriesSolution::from_profile(&u0, 2.0, 0.1).unwrap();
    let p = HeatProblem::new(2.0, 2.0, BoundaryInput::Zero, u0).unwrap();
    let gaps: Vec<f64> = [40usize, 80, 160]
        .iter()
        .map(|&nx| {
            let f = heat_fd_solve(&p, Grid::new(nx, 10 * nx).unwrap());
            let fd = boundary_flux_left(&f).unwrap();
            let start = fd.grid().len() / 20;
            let times = TimeGrid::new(fd.time(start), fd.dt(), fd.len() - start).unwrap();
            let series = heat_series_flux(&sol, times).unwrap();
            fd.samples()[start..]
                .iter()
                .zip(series.samples())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    for w in gaps.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((1.8..=2.3).contains(&order), "gaps {gaps:?}");
    }
}
