//! Randomized invariants for the shape codecs and particle systems.

use droplets::clock::ClockField;
use droplets::geometry::{
    hausdorff_distance, offset_shape, sandwich_check, PlanarShape, Point, SupportFunction,
};
use droplets::lattice::FieldParameter;
use droplets::particles::{
    height_from_occupation, sep_occupation_from_height, simulate_exclusion, simulate_zero_range,
    ClockKeying, OccupationField, ZeroRangeState, ZrpRateMode,
};
use proptest::prelude::*;

/// Random strictly convex shape via a smooth support function.
fn convex_shape_strategy() -> impl Strategy<Value = PlanarShape> {
    (0.4f64..1.0, -0.08f64..0.08, -0.05f64..0.05, 0.0f64..std::f64::consts::TAU).prop_map(
        |(r, c3, c4, phase)| {
            let n = 256;
            SupportFunction::new(
                (0..n)
                    .map(|i| {
                        let t = std::f64::consts::TAU * i as f64 / n as f64;
                        r + c3 * (3.0 * t + phase).cos() + c4 * (4.0 * t).sin()
                    })
                    .collect(),
            )
            .to_shape()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn support_round_trip_bound(shape in convex_shape_strategy()) {
        let n = 512;
        let recon = SupportFunction::from_shape(&shape, n).to_shape();
        let d = hausdorff_distance(&shape, &recon);
        let diam = 2.2; // radius capped at 1.1 by construction
        prop_assert!(d <= std::f64::consts::TAU * diam / n as f64, "round trip error {d}");
    }

    #[test]
    fn offsets_nest_and_open(shape in convex_shape_strategy(), delta in 0.02f64..0.12) {
        let outer = offset_shape(&shape, delta).unwrap();
        let inner = offset_shape(&shape, -delta).unwrap();
        let v = sandwich_check(&inner, &shape, &outer);
        prop_assert!(v.holds(), "{v:?}");
        // opening stays inside the original
        if !inner.is_empty() {
            let opened = offset_shape(&inner, delta).unwrap();
            let w = sandwich_check(&opened, &shape, &outer);
            prop_assert!(w.inner_inside, "opening escaped: {w:?}");
        }
    }

    #[test]
    fn hausdorff_translation_is_exact(
        shape in convex_shape_strategy(),
        dx in -0.4f64..0.4,
        dy in -0.4f64..0.4,
    ) {
        let t = shape.translated(Point::new(dx, dy));
        let d = hausdorff_distance(&shape, &t);
        let norm = (dx * dx + dy * dy).sqrt();
        prop_assert!((d - norm).abs() < 1e-9, "d={d} |v|={norm}");
    }

    #[test]
    fn exclusion_conserves_particles(
        word in 0u64..(1 << 16),
        h_code in 0usize..3,
        seed in 0u64..1000,
    ) {
        let occ = OccupationField::new(-8, (0..16).map(|k| word >> k & 1 == 1).collect(), 4);
        let h = [0.0, 1.0, f64::INFINITY][h_code];
        let params = FieldParameter::zero_temperature(h);
        let clocks = ClockField::new(seed);
        let traj = simulate_exclusion(&occ, &params, &clocks, 10.0, &[5.0, 10.0], ClockKeying::Columns)
            .unwrap();
        for snap in &traj.occupations {
            prop_assert_eq!(snap.particle_count(), occ.particle_count());
        }
        // and the height round trip stays the identity along the way
        for snap in &traj.occupations {
            prop_assert_eq!(&sep_occupation_from_height(&height_from_occupation(snap)), snap);
        }
    }

    #[test]
    fn zero_range_signed_mass_invariant(
        piles in proptest::collection::vec(-3i64..=3, 12..24),
        seed in 0u64..500,
    ) {
        let z = ZeroRangeState::new(0, piles);
        let mass = z.signed_mass();
        let clocks = ClockField::new(seed);
        let traj = simulate_zero_range(&z, &clocks, 50.0, &[25.0, 50.0], ZrpRateMode::UnitSiteRate)
            .unwrap();
        for snap in &traj.snapshots {
            prop_assert_eq!(snap.signed_mass(), mass);
        }
    }
}
