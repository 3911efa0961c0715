use std::collections::HashMap;

use proptest::prelude::*;

use chanmeas_core::{
    dequantize, generate_pilots, grid_dimensions, lane_bytes, pack_lanes, pilot_res,
    quantize_block, unpack_lanes, zscore, BandwidthClass, Complex64, EstimateBlock, Grant, Iq16,
};

fn iq16() -> impl Strategy<Value = Iq16> {
    (any::<i16>(), any::<i16>()).prop_map(|(re, im)| Iq16::new(re, im))
}

proptest! {
    #[test]
    fn lanes_round_trip(samples in prop::collection::vec(iq16(), 0..200)) {
        let bytes = pack_lanes(&samples);
        prop_assert_eq!(bytes.len(), lane_bytes(samples.len()));
        prop_assert_eq!(bytes.len(), 16 * samples.len().div_ceil(4));
        let back = unpack_lanes(&bytes, samples.len()).unwrap();
        prop_assert_eq!(&back, &samples);
        prop_assert_eq!(pack_lanes(&back), bytes);
    }

    #[test]
    fn quantization_error_within_half_step(
        points in prop::collection::vec((0.0f64..1.0, 0.0f64..std::f64::consts::TAU), 1..64),
        exponent in 0i8..=14,
    ) {
        let estimates: Vec<Complex64> = points.iter().map(|&(r, phi)| Complex64::from_polar(r, phi)).collect();
        let block = EstimateBlock { slot_counter: 0, estimates };
        let q = quantize_block(&block, exponent);
        prop_assert_eq!(q.saturated, 0);
        let half_step = 0.5 / f64::powi(2.0, exponent as i32);
        for (v, s) in block.estimates.iter().zip(&q.samples) {
            let back = dequantize(*s, exponent);
            prop_assert!((back.re - v.re).abs() <= half_step);
            prop_assert!((back.im - v.im).abs() <= half_step);
        }
    }

    #[test]
    fn zscore_standardizes(values in prop::collection::vec(-1e3f64..1e3, 2..300)) {
        prop_assume!(values.iter().any(|v| (v - values[0]).abs() > 1e-3));
        let z = zscore(&values).unwrap();
        let n = z.values.len() as f64;
        let mean = z.values.iter().sum::<f64>() / n;
        let std = (z.values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt();
        prop_assert!(mean.abs() < 1e-12);
        prop_assert!((std - 1.0).abs() < 1e-12);
        for (a, b) in z.denormalize().iter().zip(&values) {
            prop_assert!((a - b).abs() < 1e-12 * b.abs().max(1.0));
        }
    }

    #[test]
    fn pilot_res_covers_each_subcarrier_twice(start in 0usize..25, count in 1usize..=25, sf in any::<u32>()) {
        prop_assume!(start + count <= 25);
        let grid = grid_dimensions(BandwidthClass::Mhz5);
        let grant = Grant::new(start, count, sf as u64).unwrap();
        let res = pilot_res(&grid, &grant).unwrap();
        prop_assert_eq!(res.len(), 2 * count * 12);
        let mut hits: HashMap<usize, usize> = HashMap::new();
        for re in &res {
            prop_assert!(re.l == 3 || re.l == 10);
            *hits.entry(re.k).or_default() += 1;
        }
        prop_assert_eq!(hits.len(), count * 12);
        prop_assert!(hits.iter().all(|(k, n)| *n == 2 && grant.subcarriers().contains(k)));
    }

    #[test]
    fn pilots_unit_magnitude(seed in any::<u64>(), slot in any::<u64>(), count in 1usize..=100) {
        let p = generate_pilots(seed, slot, &Grant::new(0, count, 0).unwrap()).unwrap();
        prop_assert_eq!(p.values.len(), count * 12);
        for v in &p.values {
            prop_assert!((v.norm() - 1.0).abs() < 1e-15);
        }
    }
}

#[test]
fn quantization_bound_over_unit_disk_sweep() {
    // Deterministic grid over the unit disk, scale 2^14.
    let mut max_err = 0.0f64;
    let n = 100;
    let estimates: Vec<Complex64> = (0..n)
        .flat_map(|i| (0..n).map(move |j| Complex64::from_polar(i as f64 / n as f64, j as f64 * 0.0628318)))
        .collect();
    assert_eq!(estimates.len(), 10_000);
    let block = EstimateBlock { slot_counter: 0, estimates };
    let q = quantize_block(&block, 14);
    for (v, s) in block.estimates.iter().zip(&q.samples) {
        let back = dequantize(*s, 14);
        max_err = max_err.max((back.re - v.re).abs()).max((back.im - v.im).abs());
    }
    assert!(max_err <= 2f64.powi(-15), "max error {max_err}");
}
