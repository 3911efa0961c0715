//! CSV views of a trace for plotting.
//!
//! `Surface` emits `instant,subcarrier,magnitude` for every estimate (the
//! time-frequency magnitude surface); `Subcarrier(k)` emits
//! `instant,wall_time_s,real,imag,magnitude` for one subcarrier. Subcarrier
//! indices are 0-based within the allocated grant.

use std::fmt::Write as _;

use chanmeas_core::PilotInstant;

use crate::error::Result;
use crate::trace::ChannelTrace;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsvSelection {
    Surface,
    Subcarrier(usize),
}

pub fn export_csv(trace: &ChannelTrace, selection: CsvSelection) -> Result<String> {
    let mut out = String::new();
    match selection {
        CsvSelection::Surface => {
            out.push_str("instant,subcarrier,magnitude\n");
            for i in 0..trace.n_instants() {
                for (k, h) in trace.dequantized(i).iter().enumerate() {
                    let _ = writeln!(out, "{i},{k},{}", h.norm());
                }
            }
        }
        CsvSelection::Subcarrier(k) => {
            let series = trace.subcarrier_series(k)?;
            out.push_str("instant,wall_time_s,real,imag,magnitude\n");
            for (i, h) in series.iter().enumerate() {
                let t = PilotInstant::new(i as u64).wall_time_s();
                let _ = writeln!(out, "{i},{t},{},{},{}", h.re, h.im, h.norm());
            }
        }
    }
    Ok(out)
}
