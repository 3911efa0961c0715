//! Known reference symbols for each pilot instant.
//!
//! Pilots are QPSK points `(±1 ± j)/√2` drawn from a ChaCha8 stream keyed by
//! the run seed, with the slot counter selecting the stream. Two bits are
//! consumed per absolute subcarrier index, so a subcarrier carries the same
//! symbol in a given slot regardless of where the grant starts.

use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::rng;
use crate::scheduler::Grant;

#[derive(Debug, Clone, PartialEq)]
pub struct PilotSequence {
    pub seed: u64,
    pub slot_counter: u64,
    /// One unit-magnitude symbol per allocated subcarrier, ascending.
    pub values: Vec<Complex64>,
}

impl PilotSequence {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

const QPSK: [Complex64; 4] = [
    Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2),
    Complex64::new(-FRAC_1_SQRT_2, FRAC_1_SQRT_2),
    Complex64::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
    Complex64::new(-FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
];

pub fn generate_pilots(seed: u64, slot_counter: u64, grant: &Grant) -> Result<PilotSequence> {
    if grant.rb_count == 0 {
        return Err(Error::invalid("pilot generation needs a grant of at least one RB"));
    }
    let subcarriers = grant.subcarriers();
    let mut stream = rng::seeded(seed, slot_counter);
    let mut values = Vec::with_capacity(subcarriers.len());
    let mut word = 0u64;
    for k in 0..subcarriers.end {
        if k % 32 == 0 {
            word = stream.next_u64();
        }
        if k >= subcarriers.start {
            values.push(QPSK[(word & 0b11) as usize]);
        }
        word >>= 2;
    }
    Ok(PilotSequence { seed, slot_counter, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grant(start: usize, count: usize) -> Grant {
        Grant::new(start, count, 0).unwrap()
    }

    #[test]
    fn three_rb_sequence_is_unit_magnitude() {
        let p = generate_pilots(0, 0, &grant(0, 3)).unwrap();
        assert_eq!(p.len(), 36);
        for v in &p.values {
            assert!((v.norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn deterministic() {
        let a = generate_pilots(42, 9, &grant(2, 5)).unwrap();
        let b = generate_pilots(42, 9, &grant(2, 5)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pilots_follow_absolute_subcarrier() {
        let wide = generate_pilots(5, 3, &grant(0, 10)).unwrap();
        let narrow = generate_pilots(5, 3, &grant(4, 2)).unwrap();
        assert_eq!(&wide.values[48..72], &narrow.values[..]);
    }

    #[test]
    fn slots_differ() {
        let g = grant(0, 3);
        let mut seqs: Vec<Vec<Complex64>> = (0..1000)
            .map(|slot| generate_pilots(1, slot, &g).unwrap().values)
            .collect();
        seqs.sort_by(|a, b| a.iter().map(|c| (c.re, c.im)).partial_cmp(b.iter().map(|c| (c.re, c.im))).unwrap());
        seqs.dedup();
        assert_eq!(seqs.len(), 1000);
    }

    #[test]
    fn rejects_zero_width_grant() {
        let g = Grant { start_rb: 0, rb_count: 0, subframe_index: 0 };
        assert!(matches!(generate_pilots(0, 0, &g), Err(Error::InvalidInput(_))));
    }
}
