use rand::seq::SliceRandom;

use super::manifest::{DatasetManifest, Split};
use crate::error::{Error, Result};
use crate::rng::{rng_for, splitmix64, Stream};

/// Entry counts for a three-way split of `n` items.
pub fn split_sizes(n: usize, fractions: [f64; 3]) -> [usize; 3] {
    let train = ((n as f64 * fractions[0]).round() as usize).min(n);
    let val = ((n as f64 * fractions[1]).round() as usize).min(n - train);
    [train, val, n - train - val]
}

/// Seeded shuffle into contiguous train/val/test blocks, then mark exactly
/// `floor(n_split / 2)` entries of every split for cropping. Entries keep
/// their path order.
pub fn assign_splits(
    manifest: &DatasetManifest,
    master_seed: u64,
    fractions: [f64; 3],
) -> Result<DatasetManifest> {
    if manifest.entries.is_empty() {
        return Err(Error::EmptyCorpus(manifest.root.clone()));
    }
    if fractions.iter().any(|f| !(f.is_finite() && *f >= 0.0))
        || (fractions.iter().sum::<f64>() - 1.0).abs() > 1e-9
    {
        return Err(Error::Argument(format!(
            "split fractions {fractions:?} must be non-negative and sum to 1"
        )));
    }
    let n = manifest.entries.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng_for(master_seed, Stream::SplitShuffle));

    let sizes = split_sizes(n, fractions);
    let mut out = manifest.clone();
    out.master_seed = master_seed;
    let mut start = 0;
    for (split, &size) in Split::ALL.iter().zip(&sizes) {
        let mut members: Vec<usize> = order[start..start + size].to_vec();
        start += size;
        members.sort_unstable();
        members.shuffle(&mut rng_for(
            splitmix64(master_seed ^ *split as u64),
            Stream::CropShuffle,
        ));
        let cropped = size / 2;
        for (rank, &idx) in members.iter().enumerate() {
            let e = &mut out.entries[idx];
            e.split = Some(*split);
            e.crop_assigned = rank < cropped;
        }
    }
    for e in &mut out.entries {
        e.sample_seed = crate::rng::mix_seed(master_seed, &e.source_path);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::manifest::{ManifestEntry, Rotation};
    use std::path::PathBuf;

    fn manifest(n: usize) -> DatasetManifest {
        DatasetManifest {
            root: PathBuf::from("corpus"),
            master_seed: 0,
            config_digest: String::new(),
            entries: (0..n)
                .map(|i| ManifestEntry {
                    source_path: format!("img_{i:05}.png"),
                    width: 1536,
                    height: 1024,
                    rotated: Rotation::None,
                    split: None,
                    crop_assigned: false,
                    sample_seed: 0,
                })
                .collect(),
        }
    }

    const STANDARD: [f64; 3] = [0.9, 0.05, 0.05];

    #[test]
    fn thousand_entries_split_900_50_50() {
        let m = assign_splits(&manifest(1000), 3, STANDARD).unwrap();
        assert_eq!(m.split_counts(), [900, 50, 50]);
        for split in Split::ALL {
            let members: Vec<_> = m
                .entries
                .iter()
                .filter(|e| e.split == Some(split))
                .collect();
            let cropped = members.iter().filter(|e| e.crop_assigned).count();
            assert_eq!(cropped, members.len() / 2);
        }
    }

    #[test]
    fn proportions_within_one_entry() {
        for n in 1..300 {
            let m = assign_splits(&manifest(n), n as u64, STANDARD).unwrap();
            let counts = m.split_counts();
            assert_eq!(counts.iter().sum::<usize>(), n);
            for (c, f) in counts.iter().zip(STANDARD) {
                assert!((*c as f64 - f * n as f64).abs() <= 1.0, "n={n} {counts:?}");
            }
        }
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        let a = assign_splits(&manifest(200), 11, STANDARD).unwrap();
        let b = assign_splits(&manifest(200), 11, STANDARD).unwrap();
        assert_eq!(a, b);
        let c = assign_splits(&manifest(200), 12, STANDARD).unwrap();
        assert_ne!(a, c);
        let paths: Vec<_> = a.entries.iter().map(|e| e.source_path.clone()).collect();
        let mut sorted = paths.clone();
        sorted.sort();
        assert_eq!(paths, sorted);
    }

    #[test]
    fn empty_and_bad_fractions() {
        assert!(assign_splits(&manifest(0), 0, STANDARD).is_err());
        assert!(assign_splits(&manifest(5), 0, [0.5, 0.5, 0.5]).is_err());
    }
}
