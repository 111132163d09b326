mod common;

use common::*;
use falsebottom::bundle::Bundle;
use falsebottom::detect::{
    angle_mask, detect_aliased_seabed, fill_holes, grow_regions, mean_square_window, Connectivity,
    DetectionConfig,
};
use falsebottom::ek60::{parse_raw0, read_datagrams, write_raw, CalibrationParams, PingData, RAW0};
use falsebottom::geometry::{aliased_range, candidate_true_depths, AliasGeometry};
use falsebottom::grid::{apply_mask, combine_masks};
use falsebottom::{AngleChannels, Echogram, Mask, NO_DATA};
use ndarray::Array2;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn mask_strategy(rows: usize, cols: usize) -> impl Strategy<Value = Mask> {
    proptest::collection::vec(any::<bool>(), rows * cols)
        .prop_map(move |v| Mask::new(Array2::from_shape_vec((rows, cols), v).unwrap()))
}

fn three_masks() -> impl Strategy<Value = (Mask, Mask, Mask)> {
    (1usize..12, 1usize..12).prop_flat_map(|(r, c)| (mask_strategy(r, c), mask_strategy(r, c), mask_strategy(r, c)))
}

fn sv_grid(rows: usize, cols: usize) -> impl Strategy<Value = Array2<f64>> {
    proptest::collection::vec(prop_oneof![1 => Just(NO_DATA), 6 => -100.0f64..-30.0], rows * cols)
        .prop_map(move |v| Array2::from_shape_vec((rows, cols), v).unwrap())
}

fn calib() -> CalibrationParams {
    CalibrationParams {
        transmit_power: 1000.0,
        gain: 25.0,
        equivalent_beam_angle: -21.0,
        pulse_duration: 0.001024,
        absorption: 0.01,
        sound_speed: 1480.0,
        sa_correction: -0.5,
        frequency: 38.0,
        sample_interval: 0.000256,
    }
}

proptest! {
    #[test]
    fn combine_is_commutative_associative_idempotent((a, b, c) in three_masks()) {
        prop_assert_eq!(combine_masks(&a, &b).unwrap(), combine_masks(&b, &a).unwrap());
        let left = combine_masks(&combine_masks(&a, &b).unwrap(), &c).unwrap();
        let right = combine_masks(&a, &combine_masks(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(combine_masks(&a, &a).unwrap(), a);
    }

    #[test]
    fn apply_mask_idempotent_and_counts(sv in sv_grid(6, 7), m in mask_strategy(6, 7)) {
        let e = Echogram::from_sv(sv, 1.0).unwrap();
        let token = -500.0;
        let once = apply_mask(&e, &m, token).unwrap();
        prop_assert_eq!(apply_mask(&once, &m, token).unwrap(), once.clone());
        let replaced = m.bits().indexed_iter()
            .filter(|(ix, &b)| b && once.sv()[*ix] == token)
            .count();
        prop_assert_eq!(replaced, m.stats().0);
    }

    #[test]
    fn mean_square_matches_naive(seed in any::<u64>(), rows in 1usize..40, cols in 1usize..40,
                                 w in prop::sample::select(vec![1usize, 2, 3, 4, 7, 28, 52])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_angles(&mut rng, rows, cols, 0.2);
        let fast = mean_square_window(&g, w).unwrap();
        let slow = naive_mean_square(&g, w);
        for (f, s) in fast.iter().zip(slow.iter()) {
            match (f, s) {
                (Some(f), Some(s)) => prop_assert!(rel_diff(*f, *s) <= 1e-9 && *f >= 0.0),
                (None, None) => {}
                _ => prop_assert!(false, "validity differs: {:?} vs {:?}", f, s),
            }
        }
    }

    #[test]
    fn angle_mask_is_monotone_in_thresholds(seed in any::<u64>(), bump in 0.0f64..2000.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let angles = AngleChannels::new(
            random_angles(&mut rng, 30, 30, 0.1),
            random_angles(&mut rng, 30, 30, 0.1),
        ).unwrap();
        let cfg = DetectionConfig { window_along: 5, window_athwart: 7, t_theta: 4000.0, t_phi: 4000.0, ..Default::default() };
        let raised = DetectionConfig { t_theta: cfg.t_theta + bump, t_phi: cfg.t_phi + bump / 2.0, ..cfg.clone() };
        let low = angle_mask(&angles, &cfg).unwrap();
        let high = angle_mask(&angles, &raised).unwrap();
        prop_assert!(high.is_subset_of(&low));
    }

    #[test]
    fn grow_contains_seed_and_is_monotone_in_threshold(sv in sv_grid(15, 15), m in mask_strategy(15, 15),
                                                       t in -90.0f64..-40.0, dt in 0.0f64..20.0,
                                                       eight in any::<bool>()) {
        let conn = if eight { Connectivity::Eight } else { Connectivity::Four };
        let e = Echogram::from_sv(sv, 1.0).unwrap();
        let hi = grow_regions(&e, &m, t, conn).unwrap();
        let lo = grow_regions(&e, &m, t - dt, conn).unwrap();
        prop_assert!(m.is_subset_of(&hi));
        prop_assert!(hi.is_subset_of(&lo));
    }

    #[test]
    fn fill_is_idempotent_and_never_clears(m in (1usize..15, 1usize..15).prop_flat_map(|(r, c)| mask_strategy(r, c))) {
        let once = fill_holes(&m);
        prop_assert!(m.is_subset_of(&once));
        prop_assert_eq!(fill_holes(&once), once.clone());
        prop_assert_eq!(once.bits(), &fill_oracle(m.bits()));
    }

    #[test]
    fn pipeline_never_marks_no_data(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sv = Array2::from_shape_fn((40, 40), |_| {
            use rand::Rng;
            if rng.gen_bool(0.15) { NO_DATA } else { rng.gen_range(-90.0..-40.0) }
        });
        let e = Echogram::from_sv(sv, 1.0).unwrap();
        let angles = AngleChannels::new(random_angles(&mut rng, 40, 40, 0.0), random_angles(&mut rng, 40, 40, 0.0))
            .unwrap()
            .align_validity(&e)
            .unwrap();
        let r = detect_aliased_seabed(&e, &angles, None, &DetectionConfig { window_along: 4, window_athwart: 6, ..Default::default() }).unwrap();
        prop_assert!(r.m_angle.is_subset_of(&r.mask));
        for ((row, col), &b) in r.mask.bits().indexed_iter() {
            prop_assert!(!b || e.is_valid(row, col));
        }
    }

    #[test]
    fn alias_round_trip(ping_interval in 0.2f64..5.0, sound_speed in 1400.0f64..1560.0,
                        logging_range in 50.0f64..1500.0, frac in 0.0f64..1.0,
                        freq in prop::sample::select(vec![18.0, 38.0, 70.0, 120.0, 200.0])) {
        let g = AliasGeometry::new(ping_interval, logging_range).unwrap().with_sound_speed(sound_speed).unwrap();
        let r_max = g.max_range(freq).unwrap();
        prop_assume!(r_max > logging_range + 2.0);
        let r_s = logging_range + 1.0 + frac * (r_max - logging_range - 2.0);
        let r_a = aliased_range(r_s, &g).unwrap();
        prop_assert!(r_a >= 0.0 && r_a < g.alias_period());
        let cands = candidate_true_depths(r_a, &g, freq).unwrap();
        prop_assert!(cands.iter().any(|&c| (c - r_s).abs() <= 1e-9 * r_s), "{} not in {:?}", r_s, cands);
        prop_assert!(cands.iter().all(|&c| c > logging_range && c < r_max));
        for w in cands.windows(2) {
            prop_assert!(w[1] > w[0]);
            prop_assert!(((w[1] - w[0]) - g.alias_period()).abs() <= 1e-9 * w[1]);
        }
    }

    #[test]
    fn raw_write_read_identity(pings in proptest::collection::vec(
        (0u64..1u64 << 60, proptest::collection::vec((any::<i16>(), any::<i8>(), any::<i8>()), 0..40)), 0..6)) {
        let mut t = 0u64;
        let data: Vec<PingData> = pings.iter().map(|(dt, s)| {
            t = t.saturating_add(*dt % 100_000_000);
            PingData {
                timestamp: t,
                power: s.iter().map(|x| x.0).collect(),
                along: s.iter().map(|x| i16::from(x.1)).collect(),
                athwart: s.iter().map(|x| i16::from(x.2)).collect(),
            }
        }).collect();
        // Zero-sample pings are written power-only and come back without angles.
        let bytes = write_raw(&data, &calib()).unwrap();
        let raw: Vec<_> = read_datagrams(&bytes[..]).unwrap().into_iter().filter(|d| d.tag == RAW0).collect();
        prop_assert_eq!(raw.len(), data.len());
        for (d, p) in raw.iter().zip(&data) {
            let rec = parse_raw0(d).unwrap();
            prop_assert_eq!(rec.timestamp, p.timestamp);
            prop_assert_eq!(&rec.power, &p.power);
            let (along, athwart) = rec.angles.map(|a| (a.along, a.athwart)).unwrap_or_default();
            prop_assert_eq!(along.iter().map(|&v| i16::from(v)).collect::<Vec<_>>(), p.along.clone());
            prop_assert_eq!(athwart.iter().map(|&v| i16::from(v)).collect::<Vec<_>>(), p.athwart.clone());
        }
    }

    #[test]
    fn concatenated_streams_parse_as_concatenation(a in 0usize..4, b in 0usize..4) {
        let ping = |t| PingData { timestamp: t, power: vec![1, 2], along: vec![3, -4], athwart: vec![-5, 6] };
        let s1 = write_raw(&(0..a as u64).map(ping).collect::<Vec<_>>(), &calib()).unwrap();
        let s2 = write_raw(&(0..b as u64).map(ping).collect::<Vec<_>>(), &calib()).unwrap();
        let mut joined = s1.clone();
        joined.extend_from_slice(&s2);
        let mut expect = read_datagrams(&s1[..]).unwrap();
        expect.extend(read_datagrams(&s2[..]).unwrap());
        prop_assert_eq!(read_datagrams(&joined[..]).unwrap(), expect);
    }

    #[test]
    fn sv_increases_with_power(word in -30000i16..30000, step in 1i16..100, sample in 1usize..500) {
        use falsebottom::ek60::{power_to_sv, PingRecord, Raw0Header};
        let n = sample + 1;
        let mk = |w: i16| PingRecord { timestamp: 0, header: Raw0Header::default(), power: vec![w; n], angles: None };
        let lo = power_to_sv(&mk(word), &calib(), NO_DATA).unwrap().sv[sample];
        let hi = power_to_sv(&mk(word.saturating_add(step)), &calib(), NO_DATA).unwrap().sv[sample];
        prop_assert!(hi > lo);
    }

    #[test]
    fn bundle_round_trip_is_bit_exact(sv in sv_grid(5, 4), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = Echogram::new(sv, 0.19, vec![1, 5, 5, 9], 38.0, NO_DATA).unwrap();
        let a = AngleChannels::new(random_angles(&mut rng, 5, 4, 0.1), random_angles(&mut rng, 5, 4, 0.1)).unwrap();
        let mut b = Bundle::new(e, a).unwrap();
        b.ping_interval = Some(1.75);
        b.sound_speed = Some(1471.3);
        let dir = tempfile::tempdir().unwrap();
        b.write(dir.path()).unwrap();
        let back = Bundle::read(dir.path()).unwrap();
        for (x, y) in back.echogram.sv().iter().zip(b.echogram.sv().iter()) {
            prop_assert_eq!(x.to_bits(), y.to_bits());
        }
        prop_assert_eq!(back, b);
    }
}

#[test]
fn grow_matches_labeling_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        use rand::Rng;
        let sv = Array2::from_shape_fn((50, 50), |_| if rng.gen_bool(0.1) { NO_DATA } else { rng.gen_range(-90.0..-40.0) });
        let m = random_mask(&mut rng, 50, 50, 0.02);
        let t = rng.gen_range(-75.0..-55.0);
        let e = Echogram::from_sv(sv.clone(), 1.0).unwrap();
        for conn in [Connectivity::Four, Connectivity::Eight] {
            let fast = grow_regions(&e, &Mask::new(m.clone()), t, conn).unwrap();
            assert_eq!(fast.bits(), &grow_oracle(&sv, NO_DATA, &m, t, conn));
        }
    }
}
