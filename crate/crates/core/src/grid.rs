//! LTE FDD uplink frame and resource-grid arithmetic (normal cyclic prefix).
//!
//! A 10 ms radio frame holds 10 subframes of two 0.5 ms slots, each slot
//! carrying 7 SC-FDMA symbols. The demodulation reference signal occupies
//! symbol 3 of every slot, i.e. `l = 3` and `l = 10` within a subframe, on
//! every allocated subcarrier. One pilot instant is therefore one slot.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;
use core::time::Duration;

use crate::error::{Error, Result};
use crate::scheduler::Grant;

pub const SUBCARRIERS_PER_RB: usize = 12;
pub const SYMBOLS_PER_SLOT: usize = 7;
pub const SLOTS_PER_SUBFRAME: usize = 2;
pub const SUBFRAMES_PER_FRAME: usize = 10;
pub const SYMBOLS_PER_SUBFRAME: usize = SYMBOLS_PER_SLOT * SLOTS_PER_SUBFRAME;
pub const PILOT_SYMBOL_IN_SLOT: usize = 3;
pub const SLOT_DURATION: Duration = Duration::from_micros(500);
pub const PILOT_INSTANTS_PER_SECOND: u64 = 2000;

/// Uplink channel bandwidth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BandwidthClass {
    Mhz1_4,
    Mhz3,
    Mhz5,
    Mhz10,
    Mhz15,
    Mhz20,
}

impl BandwidthClass {
    pub const ALL: [BandwidthClass; 6] = [
        BandwidthClass::Mhz1_4,
        BandwidthClass::Mhz3,
        BandwidthClass::Mhz5,
        BandwidthClass::Mhz10,
        BandwidthClass::Mhz15,
        BandwidthClass::Mhz20,
    ];

    /// Transmission bandwidth configuration in resource blocks.
    pub const fn n_rb(self) -> usize {
        match self {
            BandwidthClass::Mhz1_4 => 6,
            BandwidthClass::Mhz3 => 15,
            BandwidthClass::Mhz5 => 25,
            BandwidthClass::Mhz10 => 50,
            BandwidthClass::Mhz15 => 75,
            BandwidthClass::Mhz20 => 100,
        }
    }

    pub const fn mhz(self) -> f64 {
        match self {
            BandwidthClass::Mhz1_4 => 1.4,
            BandwidthClass::Mhz3 => 3.0,
            BandwidthClass::Mhz5 => 5.0,
            BandwidthClass::Mhz10 => 10.0,
            BandwidthClass::Mhz15 => 15.0,
            BandwidthClass::Mhz20 => 20.0,
        }
    }

    /// Single-byte code used by the trace header.
    pub const fn code(self) -> u8 {
        match self {
            BandwidthClass::Mhz1_4 => 0,
            BandwidthClass::Mhz3 => 1,
            BandwidthClass::Mhz5 => 2,
            BandwidthClass::Mhz10 => 3,
            BandwidthClass::Mhz15 => 4,
            BandwidthClass::Mhz20 => 5,
        }
    }

    pub fn from_code(code: u8) -> Result<Self> {
        Self::ALL
            .get(code as usize)
            .copied()
            .ok_or_else(|| Error::invalid(alloc::format!("unknown bandwidth class code {code}")))
    }

    pub fn from_mhz(mhz: f64) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|bw| libm::fabs(bw.mhz() - mhz) < 1e-9)
            .ok_or_else(|| {
                Error::invalid(alloc::format!(
                    "unknown bandwidth class {mhz} MHz (expected one of 1.4, 3, 5, 10, 15, 20)"
                ))
            })
    }
}

impl fmt::Display for BandwidthClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.mhz())
    }
}

impl FromStr for BandwidthClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        let number = trimmed
            .strip_suffix("MHz")
            .or_else(|| trimmed.strip_suffix("mhz"))
            .unwrap_or(trimmed)
            .trim();
        let mhz: f64 = number
            .parse()
            .map_err(|_| Error::invalid(alloc::format!("unknown bandwidth class {s:?}")))?;
        Self::from_mhz(mhz)
    }
}

/// Uplink grid dimensions and timing for one bandwidth class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridConfig {
    pub bandwidth: BandwidthClass,
    pub n_rb_total: usize,
    pub subcarriers_per_rb: usize,
    pub symbols_per_slot: usize,
    pub slots_per_subframe: usize,
    pub subframes_per_frame: usize,
    pub slot_duration: Duration,
    pub pilot_symbol_in_slot: usize,
}

impl GridConfig {
    pub fn n_subcarriers(&self) -> usize {
        self.n_rb_total * self.subcarriers_per_rb
    }

    pub fn symbols_per_frame(&self) -> usize {
        self.subframes_per_frame * self.slots_per_subframe * self.symbols_per_slot
    }

    pub fn symbols_per_subframe(&self) -> usize {
        self.slots_per_subframe * self.symbols_per_slot
    }

    /// Pilot symbol indices within a subframe, in time order.
    pub fn pilot_symbols(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.slots_per_subframe).map(|slot| slot * self.symbols_per_slot + self.pilot_symbol_in_slot)
    }
}

pub fn grid_dimensions(bandwidth: BandwidthClass) -> GridConfig {
    GridConfig {
        bandwidth,
        n_rb_total: bandwidth.n_rb(),
        subcarriers_per_rb: SUBCARRIERS_PER_RB,
        symbols_per_slot: SYMBOLS_PER_SLOT,
        slots_per_subframe: SLOTS_PER_SUBFRAME,
        subframes_per_frame: SUBFRAMES_PER_FRAME,
        slot_duration: SLOT_DURATION,
        pilot_symbol_in_slot: PILOT_SYMBOL_IN_SLOT,
    }
}

/// Resource element coordinate: subcarrier `k`, symbol `l` within the subframe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReIndex {
    pub k: usize,
    pub l: usize,
}

/// Pilot REs carried by one subframe under `grant`: every allocated
/// subcarrier at each slot's pilot symbol, slot 0 first.
pub fn pilot_res(grid: &GridConfig, grant: &Grant) -> Result<Vec<ReIndex>> {
    grant.check_fits(grid.n_rb_total)?;
    let subcarriers = grant.subcarriers();
    let mut res = Vec::with_capacity(grid.slots_per_subframe * subcarriers.len());
    for l in grid.pilot_symbols() {
        res.extend(subcarriers.clone().map(|k| ReIndex { k, l }));
    }
    Ok(res)
}

/// One channel-estimate epoch; pilot instants are one slot (7 symbols) apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PilotInstant {
    pub slot_counter: u64,
}

impl PilotInstant {
    pub fn new(slot_counter: u64) -> Self {
        PilotInstant { slot_counter }
    }

    pub fn from_subframe(subframe_index: u64, slot_in_subframe: usize) -> Self {
        PilotInstant {
            slot_counter: subframe_index * SLOTS_PER_SUBFRAME as u64 + slot_in_subframe as u64,
        }
    }

    pub fn wall_time(&self) -> Duration {
        instants_to_duration(self.slot_counter)
    }

    pub fn wall_time_s(&self) -> f64 {
        self.slot_counter as f64 / PILOT_INSTANTS_PER_SECOND as f64
    }

    /// Offset in symbol units from the start of the trace.
    pub fn symbol_offset(&self) -> u64 {
        self.slot_counter * SYMBOLS_PER_SLOT as u64
    }

    pub fn next(&self) -> Self {
        PilotInstant { slot_counter: self.slot_counter + 1 }
    }
}

pub fn instants_to_duration(n_instants: u64) -> Duration {
    Duration::from_micros(n_instants.saturating_mul(SLOT_DURATION.as_micros() as u64))
}
