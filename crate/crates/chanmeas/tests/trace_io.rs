use proptest::prelude::*;

use chanmeas::trace::HEADER_LEN;
use chanmeas::{
    export_csv, measure_to_vec, read_trace, write_trace, CsvSelection, Error, RunConfig, TraceHeader,
};
use chanmeas_core::{dequantize, BandwidthClass, ChannelModel, Complex64, Iq16};

fn header(start_rb: u16, rb_count: u16, n_instants: u64) -> TraceHeader {
    TraceHeader {
        bandwidth: BandwidthClass::Mhz5,
        start_rb,
        rb_count,
        pilot_interval: 1,
        scale_exponent: 14,
        n_instants,
        seed: 7,
        channel_model: ChannelModel::FlatRayleighJakes,
        doppler_hz: 10.0,
        snr_db: 20.0,
    }
}

fn arb_trace() -> impl Strategy<Value = (TraceHeader, Vec<Vec<Iq16>>)> {
    (0u16..10, 1u16..=5, 0usize..12).prop_flat_map(|(start, count, n)| {
        let block = prop::collection::vec((any::<i16>(), any::<i16>()).prop_map(|(a, b)| Iq16::new(a, b)), count as usize * 12);
        prop::collection::vec(block, n).prop_map(move |blocks| (header(start, count, blocks.len() as u64), blocks))
    })
}

proptest! {
    #[test]
    fn write_read_write_is_byte_identical((h, blocks) in arb_trace()) {
        let bytes = write_trace(&h, &blocks).unwrap();
        prop_assert_eq!(bytes.len(), HEADER_LEN + blocks.len() * 16 * (h.rb_count as usize * 3));
        let trace = read_trace(&bytes).unwrap();
        prop_assert_eq!(trace.header, h);
        for (i, block) in blocks.iter().enumerate() {
            prop_assert_eq!(&trace.instant(i), block);
        }
        prop_assert_eq!(write_trace(&trace.header, &(0..blocks.len()).map(|i| trace.instant(i)).collect::<Vec<_>>()).unwrap(), bytes.clone());
        prop_assert_eq!(trace.to_bytes(), bytes);
    }

    #[test]
    fn truncation_is_always_a_format_error(cut in 0usize..34_600) {
        let (bytes, _) = measure_to_vec(&RunConfig::default()).unwrap();
        let result = read_trace(&bytes[..cut]);
        let is_format = matches!(result, Err(Error::Format { .. }));
        prop_assert!(is_format);
    }

    #[test]
    fn corrupted_magic_is_rejected(pos in 0usize..4, byte in any::<u8>()) {
        let mut bytes = write_trace(&header(0, 3, 0), &[]).unwrap();
        prop_assume!(bytes[pos] != byte);
        bytes[pos] = byte;
        let result = read_trace(&bytes);
        let is_format = matches!(result, Err(Error::Format { offset: 0, .. }));
        prop_assert!(is_format);
    }

    #[test]
    fn arbitrary_bytes_never_panic(bytes in prop::collection::vec(any::<u8>(), 0..200)) {
        let _ = read_trace(&bytes);
        let mut framed = b"CHTR\x01\x00".to_vec();
        framed.extend_from_slice(&bytes);
        let _ = read_trace(&framed);
    }
}

#[test]
fn reference_geometry_sizes() {
    let blocks = vec![vec![Iq16::default(); 36]; 240];
    let bytes = write_trace(&header(0, 3, 240), &blocks).unwrap();
    assert_eq!(bytes.len(), 40 + 34_560);
    assert_eq!(write_trace(&header(0, 3, 0), &[]).unwrap().len(), 40);
}

#[test]
fn truncated_by_one_names_expected_size() {
    let (bytes, _) = measure_to_vec(&RunConfig::default()).unwrap();
    match read_trace(&bytes[..bytes.len() - 1]) {
        Err(Error::Format { offset, reason }) => {
            assert_eq!(offset, 34_599);
            assert!(reason.contains("34600"), "{reason}");
        }
        other => panic!("unexpected {other:?}"),
    }
    let mut longer = bytes.clone();
    longer.push(0);
    assert!(matches!(read_trace(&longer), Err(Error::Format { offset: 34_600, .. })));
}

#[test]
fn dequantized_view_matches_estimates_within_half_step() {
    let mut config = RunConfig::default();
    config.n_instants = 50;
    let (bytes, _) = measure_to_vec(&config).unwrap();
    let trace = read_trace(&bytes).unwrap();
    for i in 0..50 {
        let raw = trace.instant(i);
        for (s, v) in raw.iter().zip(trace.dequantized(i)) {
            assert_eq!(dequantize(*s, 14), v);
        }
    }
    // Compose with the estimator: re-quantizing the dequantized view is lossless.
    let series = trace.subcarrier_series(5).unwrap();
    for (i, h) in series.iter().enumerate() {
        assert_eq!(*h, trace.dequantized(i)[5]);
    }
}

#[test]
fn surface_and_subcarrier_csv() {
    let (bytes, _) = measure_to_vec(&RunConfig::default()).unwrap();
    let trace = read_trace(&bytes).unwrap();
    let surface = export_csv(&trace, CsvSelection::Surface).unwrap();
    let lines: Vec<&str> = surface.lines().collect();
    assert_eq!(lines.len(), 8641);
    assert_eq!(lines[0], "instant,subcarrier,magnitude");
    assert!(lines[36].starts_with("0,35,"));
    assert!(lines[37].starts_with("1,0,"));

    let single = export_csv(&trace, CsvSelection::Subcarrier(0)).unwrap();
    let rows: Vec<&str> = single.lines().collect();
    assert_eq!(rows.len(), 241);
    assert_eq!(rows[0], "instant,wall_time_s,real,imag,magnitude");
    assert!(rows[240].starts_with("239,0.1195,"), "{}", rows[240]);

    let err = export_csv(&trace, CsvSelection::Subcarrier(36)).unwrap_err();
    assert!(err.to_string().contains("0..35"));
}

#[test]
fn unit_channel_magnitudes_are_one() {
    let mut config = RunConfig::default();
    config.channel_model = ChannelModel::Unit;
    config.snr_db = f64::INFINITY;
    let (bytes, _) = measure_to_vec(&config).unwrap();
    let trace = read_trace(&bytes).unwrap();
    let csv = export_csv(&trace, CsvSelection::Subcarrier(3)).unwrap();
    let step = 2f64.powi(-14);
    for row in csv.lines().skip(1) {
        let magnitude: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!((magnitude - 1.0).abs() <= step);
    }
    assert!(trace.subcarrier_series(0).unwrap().iter().all(|h| *h == Complex64::new(1.0, 0.0)));
}
