//! Uplink grant allocation.
//!
//! Channel measurement needs the UE on the same contiguous RBs in every
//! subframe, so the normal SNR-driven scheduler is bypassed: the reported
//! SNR is pinned to a fixed CQI and the configured grant template is
//! reissued unchanged. `SchedulerMode::DynamicStub` keeps a randomized
//! allocator around to show what measurement would see without freezing.

use core::ops::Range;

use rand_chacha::ChaCha8Rng;
use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::grid::SUBCARRIERS_PER_RB;
use crate::rng;

/// Contiguous RB allocation valid for one subframe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Grant {
    pub start_rb: usize,
    pub rb_count: usize,
    pub subframe_index: u64,
}

impl Grant {
    pub fn new(start_rb: usize, rb_count: usize, subframe_index: u64) -> Result<Self> {
        if rb_count == 0 {
            return Err(Error::invalid("grant must cover at least one RB"));
        }
        Ok(Grant { start_rb, rb_count, subframe_index })
    }

    pub fn n_subcarriers(&self) -> usize {
        self.rb_count * SUBCARRIERS_PER_RB
    }

    /// Allocated subcarrier indices, ascending.
    pub fn subcarriers(&self) -> Range<usize> {
        let first = self.start_rb * SUBCARRIERS_PER_RB;
        first..first + self.n_subcarriers()
    }

    pub fn check_fits(&self, n_rb_total: usize) -> Result<()> {
        if self.rb_count == 0 {
            return Err(Error::invalid("grant must cover at least one RB"));
        }
        match self.start_rb.checked_add(self.rb_count) {
            Some(end) if end <= n_rb_total => Ok(()),
            _ => Err(Error::invalid(alloc::format!(
                "grant RBs {}..{} exceed grid width of {} RBs",
                self.start_rb,
                self.start_rb.saturating_add(self.rb_count),
                n_rb_total
            ))),
        }
    }

    pub fn same_allocation(&self, other: &Grant) -> bool {
        self.start_rb == other.start_rb && self.rb_count == other.rb_count
    }
}

/// Channel quality index, 1..=15.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cqi(u8);

impl Cqi {
    pub const MIN: Cqi = Cqi(1);
    pub const MAX: Cqi = Cqi(15);

    pub fn value(self) -> u8 {
        self.0
    }
}

pub const SNR_RANGE_DB: (f64, f64) = (-10.0, 40.0);

// Linear segment of the SNR->CQI map; clamped to CQI 1 below and 15 above.
const CQI_FLOOR_DB: f64 = -6.0;
const CQI_CEIL_DB: f64 = 20.0;

/// Maps an SNR report to the CQI the scheduler is pinned to.
///
/// CQI rises linearly from 1 at -6 dB to 15 at 20 dB and is clamped outside
/// that span. SNRs outside [-10, 40] dB are not a plausible operating point
/// and are rejected.
pub fn override_cqi(snr_db: f64) -> Result<Cqi> {
    let (lo, hi) = SNR_RANGE_DB;
    if !(lo..=hi).contains(&snr_db) {
        return Err(Error::invalid(alloc::format!(
            "SNR {snr_db} dB outside the valid range [{lo}, {hi}] dB"
        )));
    }
    let t = (snr_db - CQI_FLOOR_DB) / (CQI_CEIL_DB - CQI_FLOOR_DB);
    let index = libm::floor(t * 14.0) + 1.0;
    Ok(Cqi(index.clamp(1.0, 15.0) as u8))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchedulerMode {
    Frozen,
    DynamicStub,
}

/// Scheduler state owned by the single caller issuing grants.
#[derive(Debug, Clone)]
pub struct Scheduler {
    mode: SchedulerMode,
    frozen_cqi: Option<Cqi>,
    template: Grant,
    n_rb_total: usize,
    next_subframe: u64,
    rng: ChaCha8Rng,
}

impl Scheduler {
    /// Frozen scheduler reissuing `template` every subframe.
    pub fn frozen(template: Grant, n_rb_total: usize, snr_db: f64) -> Result<Self> {
        template.check_fits(n_rb_total)?;
        let cqi = override_cqi(snr_db)?;
        Ok(Scheduler {
            mode: SchedulerMode::Frozen,
            frozen_cqi: Some(cqi),
            template,
            n_rb_total,
            next_subframe: template.subframe_index,
            rng: rng::seeded(0, rng::STREAM_SCHEDULER),
        })
    }

    /// Randomized allocator emitting a fresh valid contiguous grant per subframe.
    pub fn dynamic_stub(n_rb_total: usize, seed: u64) -> Result<Self> {
        if n_rb_total == 0 {
            return Err(Error::invalid("grid has no RBs to allocate"));
        }
        Ok(Scheduler {
            mode: SchedulerMode::DynamicStub,
            frozen_cqi: None,
            template: Grant { start_rb: 0, rb_count: 1, subframe_index: 0 },
            n_rb_total,
            next_subframe: 0,
            rng: rng::seeded(seed, rng::STREAM_SCHEDULER),
        })
    }

    pub fn mode(&self) -> SchedulerMode {
        self.mode
    }

    pub fn frozen_cqi(&self) -> Option<Cqi> {
        self.frozen_cqi
    }

    pub fn template(&self) -> &Grant {
        &self.template
    }

    pub fn next_grant(&mut self) -> Grant {
        let subframe_index = self.next_subframe;
        self.next_subframe += 1;
        match self.mode {
            SchedulerMode::Frozen => Grant { subframe_index, ..self.template },
            SchedulerMode::DynamicStub => {
                let n = self.n_rb_total as u64;
                let rb_count = 1 + (self.rng.next_u64() % n) as usize;
                let slack = (self.n_rb_total - rb_count) as u64;
                let start_rb = (self.rng.next_u64() % (slack + 1)) as usize;
                Grant { start_rb, rb_count, subframe_index }
            }
        }
    }
}

impl Iterator for Scheduler {
    type Item = Grant;

    fn next(&mut self) -> Option<Grant> {
        Some(self.next_grant())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn cqi_clamps() {
        assert_eq!(override_cqi(40.0).unwrap(), Cqi::MAX);
        assert_eq!(override_cqi(-10.0).unwrap(), Cqi::MIN);
        assert_eq!(override_cqi(15.0).unwrap().value(), 12);
    }

    #[test]
    fn cqi_rejects_out_of_range() {
        let err = override_cqi(45.0).unwrap_err();
        match err {
            Error::InvalidInput(msg) => assert!(msg.contains("[-10, 40]")),
            other => panic!("unexpected {other:?}"),
        }
        assert!(override_cqi(-10.5).is_err());
        assert!(override_cqi(f64::NAN).is_err());
    }

    #[test]
    fn cqi_is_monotone_over_sweep() {
        let mut prev = 0u8;
        let mut seen = Vec::new();
        for step in 0..=5000 {
            let snr = -10.0 + step as f64 * 0.01;
            let cqi = override_cqi(snr).unwrap().value();
            assert!(cqi >= prev, "CQI fell at {snr} dB");
            assert!((1..=15).contains(&cqi));
            if cqi != prev {
                seen.push(cqi);
            }
            prev = cqi;
        }
        assert_eq!(seen, (1..=15).collect::<Vec<u8>>());
    }

    #[test]
    fn frozen_grants_are_constant() {
        let template = Grant::new(0, 3, 0).unwrap();
        let mut sched = Scheduler::frozen(template, 25, 20.0).unwrap();
        let grants: Vec<Grant> = (&mut sched).take(1000).collect();
        for (i, g) in grants.iter().enumerate() {
            assert_eq!((g.start_rb, g.rb_count), (0, 3));
            assert_eq!(g.subframe_index, i as u64);
        }
        assert_eq!(sched.frozen_cqi().unwrap().value(), 15);
    }

    #[test]
    fn frozen_rejects_bad_template() {
        assert!(Scheduler::frozen(Grant::new(24, 2, 0).unwrap(), 25, 20.0).is_err());
        assert!(Scheduler::frozen(Grant::new(0, 3, 0).unwrap(), 25, 80.0).is_err());
        assert!(Grant::new(0, 0, 0).is_err());
    }

    #[test]
    fn dynamic_stub_grants_are_valid() {
        let mut sched = Scheduler::dynamic_stub(25, 7).unwrap();
        let mut distinct = false;
        let first = sched.next_grant();
        for _ in 0..10_000 {
            let g = sched.next_grant();
            assert!(g.rb_count >= 1);
            assert!(g.start_rb + g.rb_count <= 25);
            distinct |= !g.same_allocation(&first);
        }
        assert!(distinct);
    }
}
