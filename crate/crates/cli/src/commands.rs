use std::path::Path;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use cropforge::dataset::json::{read_json, to_line, write_pretty};
use cropforge::dataset::{
    assemble_pretext_batches, assign_splits, digest_of, generate, list_samples, sample_id,
    scan_and_filter, stats, sweep, DatasetManifest, GenerateOptions, GenerationConfig, Split,
    MANIFEST_FILE,
};
use cropforge::image::{decode_image, encode_png, BitDepth};
use cropforge::lens::apply_profile;
use cropforge::{Error, Image, Profile, Result};
use log::{info, warn};
use serde_json::json;

use crate::{
    BatchesArgs, Cli, Command, GenerateArgs, ProfileArgs, RenderArgs, ScanArgs, SimulateArgs,
    SourceArgs, StatsArgs, SweepArgs,
};

pub fn run(cli: Cli) -> Result<()> {
    let Cli {
        seed,
        workers,
        command,
    } = cli;
    match command {
        Command::Scan(a) => scan_cmd(seed, a),
        Command::Generate(a) => generate_cmd(seed, workers, a),
        Command::Simulate(a) => simulate_cmd(a),
        Command::Sweep(a) => sweep_cmd(seed, workers, a),
        Command::Stats(a) => stats_cmd(a),
        Command::Batches(a) => batches_cmd(a),
    }
}

/// Log the resolved settings and their digest.
fn log_config(value: &serde_json::Value) {
    info!("config {}", to_line(value));
    info!("config digest {}", digest_of(value));
}

fn parse_bits(s: &str) -> Result<BitDepth> {
    BitDepth::from_bits(
        s.parse()
            .map_err(|_| Error::Argument(format!("bad bit depth {s:?}")))?,
    )
}

fn load_config(path: Option<&Path>) -> Result<GenerationConfig> {
    path.map_or_else(|| Ok(GenerationConfig::default()), read_json)
}

fn resolve_profile(a: &ProfileArgs) -> Result<Profile> {
    let mut p = match &a.profile {
        Some(path) => read_json(path)?,
        None => Profile::neutral(),
    };
    for (c, v) in [a.tca_r, a.tca_g, a.tca_b].into_iter().enumerate() {
        if let Some(v) = v {
            p.tca_scale[c] = v;
        }
    }
    if let Some(v) = a.vignette {
        p.vignette_strength = v;
    }
    if let Some(v) = a.distortion {
        p.distortion_k1 = v;
    }
    if let Some(v) = a.saturation {
        p.saturation = v;
    }
    p.validate()?;
    Ok(p)
}

fn scan_with(input: &Path, config: &GenerationConfig, seed: u64) -> Result<DatasetManifest> {
    // manifests must stay usable from any working directory
    let input = std::fs::canonicalize(input).map_err(|e| Error::Io {
        path: input.into(),
        source: e,
    })?;
    let (m, rejected) = scan_and_filter(&input, config, seed)?;
    info!(
        "accepted {} images, rejected {}",
        m.entries.len(),
        rejected.len()
    );
    assign_splits(&m, seed, config.split_fractions)
}

fn resolve_source(src: &SourceArgs, seed: u64) -> Result<(DatasetManifest, GenerationConfig)> {
    let config = load_config(src.config.as_deref())?;
    match (&src.input, &src.manifest) {
        (Some(input), _) => Ok((scan_with(input, &config, seed)?, config)),
        (None, Some(path)) => {
            let m = DatasetManifest::load(path)?;
            if m.entries.iter().any(|e| e.split.is_none()) {
                return Err(Error::Argument(format!(
                    "{} has entries without a split",
                    path.display()
                )));
            }
            if m.master_seed != seed {
                info!(
                    "using master seed {} recorded in {}",
                    m.master_seed,
                    path.display()
                );
            }
            Ok((m, config))
        }
        (None, None) => Err(Error::Argument(
            "one of --input or --manifest is required".into(),
        )),
    }
}

fn render_options(
    r: &RenderArgs,
    config: &GenerationConfig,
    workers: usize,
) -> Result<GenerateOptions> {
    let cancel = Arc::new(AtomicBool::new(false));
    let flag = cancel.clone();
    let handler = ctrlc::set_handler(move || {
        if flag.swap(true, Ordering::SeqCst) {
            std::process::exit(130);
        }
        warn!("interrupt received; finishing in-flight samples (press again to abort)");
    });
    if let Err(e) = handler {
        warn!("cannot install interrupt handler: {e}");
    }
    Ok(GenerateOptions {
        workers,
        bit_depth: match &r.bit_depth {
            Some(b) => parse_bits(b)?,
            None => config.bit_depth,
        },
        resume: r.resume,
        debug_provenance: r.debug_provenance || config.debug_provenance,
        failure_budget: r.failure_budget.unwrap_or(config.failure_budget),
        cancel: Some(cancel),
    })
}

fn options_json(o: &GenerateOptions) -> serde_json::Value {
    json!({
        "bit_depth": o.bit_depth,
        "resume": o.resume,
        "debug_provenance": o.debug_provenance,
        "failure_budget": o.failure_budget,
    })
}

fn scan_cmd(seed: u64, a: ScanArgs) -> Result<()> {
    let config = load_config(a.config.as_deref())?;
    log_config(&json!({"command": "scan", "input": a.input, "seed": seed, "generation": config}));
    let m = scan_with(&a.input, &config, seed)?;
    match &a.out {
        Some(path) => m.save(path),
        None => m.write_to(std::io::stdout().lock()).map_err(|e| Error::Io {
            path: "<stdout>".into(),
            source: e,
        }),
    }
}

fn generate_cmd(seed: u64, workers: usize, a: GenerateArgs) -> Result<()> {
    let profile = resolve_profile(&a.profile)?;
    let (manifest, config) = resolve_source(&a.source, seed)?;
    let options = render_options(&a.render, &config, workers)?;
    log_config(&json!({
        "command": "generate",
        "source": a.source.input.as_ref().or(a.source.manifest.as_ref()),
        "out": a.out,
        "master_seed": manifest.master_seed,
        "manifest_config_digest": manifest.config_digest,
        "profile": profile,
        "options": options_json(&options),
    }));
    let summary = generate(&manifest, &profile, &a.out, &options)?;
    info!("run digest {}", summary.run_digest);
    Ok(())
}

fn simulate_cmd(a: SimulateArgs) -> Result<()> {
    let profile = resolve_profile(&a.profile)?;
    let depth = parse_bits(&a.bit_depth)?;
    log_config(&json!({
        "command": "simulate",
        "input": a.input,
        "output": a.output,
        "profile": profile,
        "bit_depth": depth,
    }));
    if !a
        .output
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("png"))
    {
        return Err(Error::Argument(format!(
            "{}: output must be a .png file",
            a.output.display()
        )));
    }
    let bytes = std::fs::read(&a.input).map_err(|e| Error::Io {
        path: a.input.clone(),
        source: e,
    })?;
    let img: Image = decode_image(&bytes)?;
    let out = apply_profile(&img, &profile)?;
    std::fs::write(&a.output, encode_png(&out, depth)?).map_err(|e| Error::Io {
        path: a.output.clone(),
        source: e,
    })
}

fn sweep_cmd(seed: u64, workers: usize, a: SweepArgs) -> Result<()> {
    let axis = a.axis.parse()?;
    let base = resolve_profile(&a.profile)?;
    let (manifest, config) = resolve_source(&a.source, seed)?;
    let options = render_options(&a.render, &config, workers)?;
    log_config(&json!({
        "command": "sweep",
        "source": a.source.input.as_ref().or(a.source.manifest.as_ref()),
        "out": a.out,
        "master_seed": manifest.master_seed,
        "manifest_config_digest": manifest.config_digest,
        "base_profile": base,
        "axis": axis,
        "strengths": a.strengths,
        "options": options_json(&options),
    }));
    let runs = sweep(&manifest, &base, axis, &a.strengths, &a.out, &options)?;
    info!("wrote {} datasets under {}", runs.len(), a.out.display());
    Ok(())
}

fn stats_cmd(a: StatsArgs) -> Result<()> {
    let out = a.out.unwrap_or_else(|| a.dataset.join("stats.json"));
    log_config(&json!({"command": "stats", "dataset": a.dataset, "out": out}));
    let s = stats(&a.dataset)?;
    for c in &s.corrupt {
        warn!("corrupt record {}: {}", c.sample_id, c.reason);
    }
    if !s.label_mismatches.is_empty() {
        warn!(
            "{} records have labels inconsistent with their geometry",
            s.label_mismatches.len()
        );
    }
    write_pretty(&out, &s)
}

fn batches_cmd(a: BatchesArgs) -> Result<()> {
    log_config(&json!({
        "command": "batches",
        "dataset": a.dataset,
        "batch_size": a.batch_size,
        "split": a.split,
        "out": a.out,
    }));
    let split: Option<Split> = a
        .split
        .as_deref()
        .map(|s| serde_json::from_value(json!(s)).map_err(|e| Error::Argument(e.to_string())))
        .transpose()?;
    let mut ids: Vec<String> = list_samples(&a.dataset)?
        .into_iter()
        .map(|(id, _)| id)
        .collect();
    if let Some(split) = split {
        let m = DatasetManifest::load(&a.dataset.join(MANIFEST_FILE))?;
        let wanted: std::collections::HashSet<String> = m
            .entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.split == Some(split))
            .map(|(i, _)| sample_id(i))
            .collect();
        ids.retain(|id| wanted.contains(id));
    }
    let batches = assemble_pretext_batches(ids.len(), a.batch_size)?;
    let dropped = ids.len() - batches.len() * a.batch_size;
    if dropped > 0 {
        info!("dropping {dropped} records that do not fill a batch");
    }
    let doc = json!({
        "batch_size": a.batch_size,
        "split": a.split,
        "batches": batches
            .iter()
            .map(|b| b.iter().map(|p| json!({"sample_id": ids[p.record], "slot": p.slot})).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    });
    write_pretty(&a.out, &doc)
}
