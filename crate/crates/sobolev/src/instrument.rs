//! Optional side channels: spectral data dumps and solver traces, both as
//! JSON lines.

use std::io::Write;

use serde_json::json;
use sobolev_core::hiep::{solve_traced, HiepSolution, Solver, TraceEvent};
use sobolev_core::jordan::SpectralData;

use crate::spectral_json::SpectralDto;
use crate::AppResult;

pub trait Instrument {
    fn spectral(&mut self, _label: &str, _data: &SpectralData) -> AppResult<()> {
        Ok(())
    }

    fn trace(&mut self, _label: &str, _event: &TraceEvent) {}
}

/// Discards everything.
pub struct Silent;

impl Instrument for Silent {}

/// Writes to optional sinks.
#[derive(Default)]
pub struct JsonLines {
    pub spectral: Option<Box<dyn Write>>,
    pub trace: Option<Box<dyn Write>>,
    /// First write error on the trace sink, surfaced by [`JsonLines::finish`].
    trace_error: Option<std::io::Error>,
}

impl JsonLines {
    pub fn new(spectral: Option<Box<dyn Write>>, trace: Option<Box<dyn Write>>) -> Self {
        JsonLines {
            spectral,
            trace,
            trace_error: None,
        }
    }

    pub fn finish(mut self) -> AppResult<()> {
        if let Some(e) = self.trace_error.take() {
            return Err(e.into());
        }
        for w in [self.spectral.as_mut(), self.trace.as_mut()].into_iter().flatten() {
            w.flush()?;
        }
        Ok(())
    }
}

impl Instrument for JsonLines {
    fn spectral(&mut self, label: &str, data: &SpectralData) -> AppResult<()> {
        if let Some(w) = self.spectral.as_mut() {
            serde_json::to_writer(&mut *w, &SpectralDto::from_data(data, Some(label)))?;
            writeln!(w)?;
        }
        Ok(())
    }

    fn trace(&mut self, label: &str, event: &TraceEvent) {
        let Some(w) = self.trace.as_mut() else { return };
        if self.trace_error.is_some() {
            return;
        }
        let line = event_json(label, event);
        if let Err(e) = writeln!(w, "{line}") {
            self.trace_error = Some(e);
        }
    }
}

pub fn event_json(label: &str, event: &TraceEvent) -> serde_json::Value {
    match *event {
        TraceEvent::ArnoldiStep {
            step,
            subdiagonal,
            reorthogonalization,
        } => json!({
            "label": label,
            "event": "arnoldi_step",
            "step": step,
            "subdiagonal": subdiagonal,
            "reorthogonalization": reorthogonalization,
        }),
        TraceEvent::BlockMerged {
            block,
            dim,
            rotation_a,
            rotation_b,
        } => json!({
            "label": label,
            "event": "block_merged",
            "block": block,
            "dim": dim,
            "rotation_a": rotation_a,
            "rotation_b": rotation_b,
        }),
        TraceEvent::ColumnRestored {
            block,
            column,
            bulge_len,
            eliminated_norm,
        } => json!({
            "label": label,
            "event": "column_restored",
            "block": block,
            "column": column,
            "bulge_len": bulge_len,
            "eliminated_norm": eliminated_norm,
        }),
    }
}

/// Dumps the data, then solves with tracing routed to the instrument.
pub fn solve_instrumented(
    data: &SpectralData,
    solver: Solver,
    label: &str,
    inst: &mut dyn Instrument,
) -> AppResult<HiepSolution> {
    inst.spectral(label, data)?;
    Ok(solve_traced(data, solver, &mut |e| inst.trace(label, e))?)
}
