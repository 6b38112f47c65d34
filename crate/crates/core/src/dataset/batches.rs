//! Pretext minibatches with cyclically shifted patch slots.

use serde::{Deserialize, Serialize};

use crate::crop::NUM_PATCHES;
use crate::error::{Error, Result};

/// One patch of one record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatchRef {
    pub record: usize,
    pub slot: u8,
}

/// Cut `num_records` records into batches of `batch_size` and pick, for the
/// `b`-th record of batch `t`, the patch at slot `(b + t) mod 16`. Each slot
/// then appears `batch_size / 16` times in every batch. A trailing partial
/// batch is dropped.
pub fn assemble_pretext_batches(
    num_records: usize,
    batch_size: usize,
) -> Result<Vec<Vec<PatchRef>>> {
    if batch_size == 0 || !batch_size.is_multiple_of(NUM_PATCHES) {
        return Err(Error::Argument(format!(
            "batch size must be a positive multiple of {NUM_PATCHES}, got {batch_size}"
        )));
    }
    Ok((0..num_records / batch_size)
        .map(|t| {
            (0..batch_size)
                .map(|b| PatchRef {
                    record: t * batch_size + b,
                    slot: ((b + t) % NUM_PATCHES) as u8,
                })
                .collect()
        })
        .collect())
}

/// Per-slot counts of one batch.
pub fn slot_histogram(batch: &[PatchRef]) -> [usize; NUM_PATCHES] {
    let mut h = [0; NUM_PATCHES];
    for p in batch {
        h[p.slot as usize] += 1;
    }
    h
}
