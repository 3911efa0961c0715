//! `.chtr` channel-estimate trace container, version 1.
//!
//! A trace is a fixed 40-byte little-endian header followed by one record per
//! pilot instant. Each record holds the instant's estimates packed four REs
//! per 16-byte lane group (see `chanmeas_core::estimator`).
//!
//! ```text
//! offset size field
//!      0    4 magic "CHTR"
//!      4    2 version (u16, = 1)
//!      6    1 bandwidth class code (u8: 0=1.4, 1=3, 2=5, 3=10, 4=15, 5=20 MHz)
//!      7    2 start_rb (u16)
//!      9    2 rb_count (u16, >= 1)
//!     11    2 pilot_interval in slots (u16, = 1)
//!     13    1 scale_exponent (i8)
//!     14    8 n_instants (u64)
//!     22    8 seed (u64)
//!     30    1 channel model code (u8: 0=flat_rayleigh_jakes, 1=static, 2=unit)
//!     31    4 doppler_hz (f32)
//!     35    4 snr_db (f32, +inf = noiseless)
//!     39    1 zero padding
//! ```

use std::io::Write;

use chanmeas_core::{
    dequantize, grid_dimensions, lane_bytes, pack_lanes_into, unpack_lanes, BandwidthClass,
    ChannelModel, Complex64, Grant, Iq16,
};

use crate::error::{Error, Result};

pub const MAGIC: [u8; 4] = *b"CHTR";
pub const VERSION: u16 = 1;
pub const HEADER_LEN: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceHeader {
    pub bandwidth: BandwidthClass,
    pub start_rb: u16,
    pub rb_count: u16,
    pub pilot_interval: u16,
    pub scale_exponent: i8,
    pub n_instants: u64,
    pub seed: u64,
    pub channel_model: ChannelModel,
    pub doppler_hz: f32,
    pub snr_db: f32,
}

impl TraceHeader {
    pub fn n_subcarriers(&self) -> usize {
        self.rb_count as usize * chanmeas_core::grid::SUBCARRIERS_PER_RB
    }

    pub fn instant_bytes(&self) -> usize {
        lane_bytes(self.n_subcarriers())
    }

    /// Payload size implied by the header, `None` if it overflows.
    pub fn payload_len(&self) -> Option<usize> {
        usize::try_from(self.n_instants).ok()?.checked_mul(self.instant_bytes())
    }

    pub fn grant(&self) -> Grant {
        Grant { start_rb: self.start_rb as usize, rb_count: self.rb_count as usize, subframe_index: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        let n_rb = grid_dimensions(self.bandwidth).n_rb_total;
        if self.rb_count == 0 {
            return Err(Error::Config("trace rb_count must be at least 1".into()));
        }
        if self.start_rb as usize + self.rb_count as usize > n_rb {
            return Err(Error::Config(format!(
                "grant {}+{} RBs exceeds {} RBs of the {} MHz grid",
                self.start_rb, self.rb_count, n_rb, self.bandwidth
            )));
        }
        if self.pilot_interval != 1 {
            return Err(Error::Config(format!("pilot interval must be 1 slot, got {}", self.pilot_interval)));
        }
        Ok(())
    }

    pub fn encode(&self) -> [u8; HEADER_LEN] {
        let mut out = [0u8; HEADER_LEN];
        out[0..4].copy_from_slice(&MAGIC);
        out[4..6].copy_from_slice(&VERSION.to_le_bytes());
        out[6] = self.bandwidth.code();
        out[7..9].copy_from_slice(&self.start_rb.to_le_bytes());
        out[9..11].copy_from_slice(&self.rb_count.to_le_bytes());
        out[11..13].copy_from_slice(&self.pilot_interval.to_le_bytes());
        out[13] = self.scale_exponent as u8;
        out[14..22].copy_from_slice(&self.n_instants.to_le_bytes());
        out[22..30].copy_from_slice(&self.seed.to_le_bytes());
        out[30] = self.channel_model.code();
        out[31..35].copy_from_slice(&self.doppler_hz.to_le_bytes());
        out[35..39].copy_from_slice(&self.snr_db.to_le_bytes());
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let format = |offset: usize, reason: String| Error::Format { offset, reason };
        if bytes.len() < MAGIC.len() || bytes[..4] != MAGIC {
            return Err(format(0, "bad magic, expected \"CHTR\"".into()));
        }
        if bytes.len() < HEADER_LEN {
            return Err(format(
                bytes.len(),
                format!("truncated header: expected {HEADER_LEN} bytes, found {}", bytes.len()),
            ));
        }
        let u16_at = |o: usize| u16::from_le_bytes([bytes[o], bytes[o + 1]]);
        let u64_at = |o: usize| u64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
        let f32_at = |o: usize| f32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());

        let version = u16_at(4);
        if version > VERSION {
            return Err(Error::UnsupportedVersion { found: version, supported: VERSION });
        }
        if version == 0 {
            return Err(format(4, "version 0 is not a valid trace version".into()));
        }
        let bandwidth = BandwidthClass::from_code(bytes[6]).map_err(|e| format(6, e.to_string()))?;
        let channel_model = ChannelModel::from_code(bytes[30]).map_err(|e| format(30, e.to_string()))?;
        if bytes[39] != 0 {
            return Err(format(39, "non-zero header padding".into()));
        }
        let header = TraceHeader {
            bandwidth,
            start_rb: u16_at(7),
            rb_count: u16_at(9),
            pilot_interval: u16_at(11),
            scale_exponent: bytes[13] as i8,
            n_instants: u64_at(14),
            seed: u64_at(22),
            channel_model,
            doppler_hz: f32_at(31),
            snr_db: f32_at(35),
        };
        header.validate().map_err(|e| match e {
            Error::Config(reason) => format(7, reason),
            other => other,
        })?;
        Ok(header)
    }
}

/// A decoded trace: header plus the packed per-instant payload.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelTrace {
    pub header: TraceHeader,
    payload: Vec<u8>,
}

impl ChannelTrace {
    pub fn n_instants(&self) -> usize {
        self.header.n_instants as usize
    }

    pub fn n_subcarriers(&self) -> usize {
        self.header.n_subcarriers()
    }

    pub fn payload(&self) -> &[u8] {
        &self.payload
    }

    fn record(&self, instant: usize) -> &[u8] {
        let size = self.header.instant_bytes();
        &self.payload[instant * size..(instant + 1) * size]
    }

    /// Raw int16 estimates of one instant, ascending subcarrier.
    pub fn instant(&self, instant: usize) -> Vec<Iq16> {
        assert!(instant < self.n_instants(), "instant {instant} out of range");
        // Record sizes were validated on construction.
        unpack_lanes(self.record(instant), self.n_subcarriers()).expect("validated record")
    }

    pub fn dequantized(&self, instant: usize) -> Vec<Complex64> {
        let exp = self.header.scale_exponent;
        self.instant(instant).into_iter().map(|s| dequantize(s, exp)).collect()
    }

    /// Estimate series of subcarrier `k` (0-based within the grant).
    pub fn subcarrier_series(&self, k: usize) -> Result<Vec<Complex64>> {
        let n = self.n_subcarriers();
        if k >= n {
            return Err(Error::Config(format!("subcarrier {k} out of range (valid k: 0..{})", n - 1)));
        }
        let exp = self.header.scale_exponent;
        let word = 4 * k;
        Ok((0..self.n_instants())
            .map(|i| {
                let rec = &self.record(i)[word..word + 4];
                let s = Iq16::new(i16::from_le_bytes([rec[0], rec[1]]), i16::from_le_bytes([rec[2], rec[3]]));
                dequantize(s, exp)
            })
            .collect())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.payload.len());
        out.extend_from_slice(&self.header.encode());
        out.extend_from_slice(&self.payload);
        out
    }
}

/// Streams a trace: header first, then one block per instant.
pub struct TraceWriter<W: Write> {
    inner: W,
    header: TraceHeader,
    written: u64,
    buf: Vec<u8>,
}

impl<W: Write> TraceWriter<W> {
    pub fn new(mut inner: W, header: TraceHeader) -> Result<Self> {
        header.validate()?;
        inner.write_all(&header.encode()).map_err(|e| Error::io("writing trace header", e))?;
        Ok(TraceWriter { inner, header, written: 0, buf: Vec::with_capacity(header.instant_bytes()) })
    }

    pub fn write_block(&mut self, block: &[Iq16]) -> Result<()> {
        let expected = self.header.n_subcarriers();
        if block.len() != expected {
            return Err(Error::Config(format!(
                "block {} holds {} estimates, expected {expected}",
                self.written,
                block.len()
            )));
        }
        if self.written >= self.header.n_instants {
            return Err(Error::Config(format!(
                "trace declares {} instants but more blocks were written",
                self.header.n_instants
            )));
        }
        self.buf.clear();
        pack_lanes_into(block, &mut self.buf);
        self.inner.write_all(&self.buf).map_err(|e| Error::io("writing trace payload", e))?;
        self.written += 1;
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        if self.written != self.header.n_instants {
            return Err(Error::Config(format!(
                "trace declares {} instants but {} blocks were written",
                self.header.n_instants, self.written
            )));
        }
        self.inner.flush().map_err(|e| Error::io("flushing trace", e))?;
        Ok(self.inner)
    }
}

pub fn write_trace(header: &TraceHeader, blocks: &[Vec<Iq16>]) -> Result<Vec<u8>> {
    if blocks.len() as u64 != header.n_instants {
        return Err(Error::Config(format!(
            "header declares {} instants but {} blocks were given",
            header.n_instants,
            blocks.len()
        )));
    }
    let capacity = HEADER_LEN + header.payload_len().unwrap_or(0);
    let mut writer = TraceWriter::new(Vec::with_capacity(capacity), *header)?;
    for block in blocks {
        writer.write_block(block)?;
    }
    writer.finish()
}

pub fn read_trace(bytes: &[u8]) -> Result<ChannelTrace> {
    let header = TraceHeader::decode(bytes)?;
    let payload_len = header.payload_len().ok_or_else(|| Error::Format {
        offset: 14,
        reason: format!("n_instants {} overflows the addressable payload", header.n_instants),
    })?;
    let total = HEADER_LEN.checked_add(payload_len).ok_or_else(|| Error::Format {
        offset: 14,
        reason: "payload size overflows".into(),
    })?;
    if bytes.len() < total {
        return Err(Error::Format {
            offset: bytes.len(),
            reason: format!("truncated trace: expected {total} bytes, found {}", bytes.len()),
        });
    }
    if bytes.len() > total {
        return Err(Error::Format {
            offset: total,
            reason: format!("{} trailing bytes after {total}-byte trace", bytes.len() - total),
        });
    }
    let payload = bytes[HEADER_LEN..].to_vec();
    // Records are always a whole number of lane groups; padding only
    // exists when the subcarrier count is not a multiple of four.
    if header.n_subcarriers() % 4 != 0 {
        let size = header.instant_bytes();
        for (i, rec) in payload.chunks_exact(size).enumerate() {
            unpack_lanes(rec, header.n_subcarriers()).map_err(|e| match e {
                chanmeas_core::Error::Format { offset, reason } => {
                    Error::Format { offset: HEADER_LEN + i * size + offset, reason }
                }
                other => other.into(),
            })?;
        }
    }
    Ok(ChannelTrace { header, payload })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn header(n_instants: u64) -> TraceHeader {
        TraceHeader {
            bandwidth: BandwidthClass::Mhz5,
            start_rb: 0,
            rb_count: 3,
            pilot_interval: 1,
            scale_exponent: 14,
            n_instants,
            seed: 1,
            channel_model: ChannelModel::FlatRayleighJakes,
            doppler_hz: 10.0,
            snr_db: 20.0,
        }
    }

    #[test]
    fn header_layout() {
        let bytes = header(240).encode();
        assert_eq!(&bytes[..4], b"CHTR");
        assert_eq!(&bytes[4..6], &[1, 0]);
        assert_eq!(bytes[6], 2);
        assert_eq!(&bytes[9..11], &[3, 0]);
        assert_eq!(bytes[13], 14);
        assert_eq!(&bytes[14..22], &240u64.to_le_bytes());
        assert_eq!(&bytes[31..35], &10.0f32.to_le_bytes());
        assert_eq!(bytes[39], 0);
        assert_eq!(TraceHeader::decode(&bytes).unwrap(), header(240));
    }

    #[test]
    fn empty_trace_is_header_only() {
        let bytes = write_trace(&header(0), &[]).unwrap();
        assert_eq!(bytes.len(), HEADER_LEN);
        let trace = read_trace(&bytes).unwrap();
        assert_eq!(trace.n_instants(), 0);
        assert!(trace.subcarrier_series(0).unwrap().is_empty());
    }

    #[test]
    fn block_count_mismatch() {
        let err = write_trace(&header(2), &[vec![Iq16::default(); 36]]).unwrap_err();
        assert!(err.to_string().contains("2 instants"), "{err}");
        let err = write_trace(&header(1), &[vec![Iq16::default(); 35]]).unwrap_err();
        assert!(err.to_string().contains("expected 36"), "{err}");
    }

    #[test]
    fn rejects_bad_header_fields() {
        let mut bytes = write_trace(&header(0), &[]).unwrap();
        bytes[4] = 2;
        assert!(matches!(read_trace(&bytes), Err(Error::UnsupportedVersion { found: 2, supported: 1 })));
        bytes[4] = 1;
        bytes[6] = 9;
        assert!(matches!(read_trace(&bytes), Err(Error::Format { offset: 6, .. })));
        bytes[6] = 2;
        bytes[9] = 0;
        assert!(matches!(read_trace(&bytes), Err(Error::Format { .. })));
        bytes[9] = 3;
        bytes[11] = 2;
        assert!(matches!(read_trace(&bytes), Err(Error::Format { .. })));
        bytes[11] = 1;
        bytes[7] = 23;
        assert!(matches!(read_trace(&bytes), Err(Error::Format { .. })));
    }

    #[test]
    fn huge_instant_count_is_a_format_error() {
        let mut h = header(0);
        h.n_instants = u64::MAX;
        let bytes = h.encode();
        assert!(matches!(read_trace(&bytes), Err(Error::Format { .. })));
    }
}
