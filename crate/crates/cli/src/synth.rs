use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use hopscan::ingest::{Format, RecordWriter};
use hopscan::synth::{gen_adversarial, golden_table1, golden_with_noise, plant, NoiseConfig, PlantSpec, PlantedPath, DEFAULT_START};
use hopscan::{Chain, DetectionConfig, Usd, ValueTolerance};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::manifest::{self, Clock};
use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// The ten reference paths in 5,000 noise records (or `--count`).
    Golden,
    /// Seeded noise plus any planted paths from the spec.
    Noise,
    /// Dense near-boundary records for oracle checks.
    Adversarial,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// TOML spec; flags override its top-level keys.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Number of noise (or adversarial) records.
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Noise actor pool size; 0 gives one actor per record.
    #[arg(long)]
    pub actors: Option<usize>,
    #[arg(long)]
    pub format: Option<String>,
    /// Dataset file to write.
    #[arg(short, long)]
    pub out: PathBuf,
    /// Ground-truth file; defaults to `<out>.truth.json`.
    #[arg(long)]
    pub truth: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    preset: Option<Preset>,
    count: Option<usize>,
    seed: Option<u64>,
    format: Option<String>,
    window_secs: Option<i64>,
    value_tolerance: Option<ValueTolerance>,
    #[serde(default)]
    noise: NoiseSection,
    #[serde(default, rename = "plant")]
    plants: Vec<PlantSection>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct NoiseSection {
    actors: Option<usize>,
    start: Option<i64>,
    span_secs: Option<i64>,
    chains: Option<Vec<Chain>>,
    tokens: Option<Vec<String>>,
    bridge_share: Option<f64>,
    multi_leg_share: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlantSection {
    tag: Option<String>,
    chains: Vec<Chain>,
    tokens: Vec<String>,
    #[serde(default)]
    bridge_tokens_out: Vec<String>,
    start: Option<i64>,
    duration_secs: Option<i64>,
    gaps: Option<Vec<i64>>,
    initial_value: Option<Usd>,
    final_value: Option<Usd>,
    retention_ppm: Option<Vec<u32>>,
    actor: Option<String>,
    actors: Option<Vec<String>>,
}

impl PlantSection {
    fn into_spec(self, k: usize, seed: u64) -> Result<PlantSpec, Failure> {
        let tag = self.tag.unwrap_or_else(|| format!("plant-{seed}-{k}"));
        let actor = self.actor.unwrap_or_else(|| format!("0x{:040x}", 0xa11ce_u64 << 32 | k as u64));
        let duration = self.duration_secs.unwrap_or(0);
        let mut spec = PlantSpec::simple(
            &tag,
            &self.chains,
            &self.tokens.iter().map(String::as_str).collect::<Vec<_>>(),
            self.start.unwrap_or(DEFAULT_START),
            duration,
            &actor,
        );
        match (self.gaps, self.duration_secs) {
            (Some(g), _) => spec.gaps = g,
            (None, Some(_)) => {}
            (None, None) => return Err(Failure::config(format!("plant {tag}: give duration_secs or gaps"))),
        }
        if let Some(a) = self.actors {
            spec.actors = a;
        }
        if let Some(r) = self.retention_ppm {
            spec.retention_ppm = r;
        }
        if let Some(v) = self.initial_value {
            spec.initial_value = v;
        }
        if let Some(v) = self.final_value {
            spec.final_value = v;
        }
        for (slot, t) in spec.bridge_tokens_out.iter_mut().zip(self.bridge_tokens_out) {
            if !t.is_empty() {
                *slot = Some(t);
            }
        }
        Ok(spec)
    }
}

#[derive(Serialize)]
struct Truth<'a> {
    preset: Preset,
    seed: u64,
    records: usize,
    planted: &'a [PlantedPath],
    #[serde(skip_serializing_if = "Option::is_none")]
    expected_summary: Option<hopscan::analytics::SummaryReport>,
}

pub fn run(args: SynthArgs) -> Result<(), Failure> {
    let clock = Clock::start();
    let file = match &args.spec {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Failure::config(format!("{}: {e}", p.display())))?;
            toml::from_str::<SpecFile>(&text).map_err(|e| Failure::config(format!("{}: {e}", p.display())))?
        }
        None => SpecFile::default(),
    };
    let preset = args.preset.or(file.preset).unwrap_or(Preset::Noise);
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let count = args.count.or(file.count).unwrap_or(10_000);
    let format = match args.format.clone().or(file.format.clone()) {
        Some(f) => f.parse::<Format>().map_err(|e| Failure::config(e.to_string()))?,
        None => Format::from_path(&args.out).unwrap_or(Format::Csv),
    };
    let mut cfg = DetectionConfig::default();
    if let Some(w) = file.window_secs {
        cfg = cfg.with_window_secs(w).map_err(|e| Failure::config(e.to_string()))?;
    }
    if let Some(t) = file.value_tolerance {
        cfg = cfg.with_value_tolerance(t);
    }

    let truth_path = args.truth.clone().unwrap_or_else(|| {
        let mut name = args.out.as_os_str().to_owned();
        name.push(".truth.json");
        PathBuf::from(name)
    });
    if let Some(parent) = args.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        manifest::create_dir(parent)?;
    }
    let out = File::create(&args.out).map_err(|e| Failure::output(format!("{}: {e}", args.out.display())))?;
    let mut writer = RecordWriter::new(BufWriter::with_capacity(1 << 20, out), format).map_err(Failure::output)?;

    let (written, planted, expected) = match preset {
        Preset::Golden => {
            // --count only changes the golden noise when given explicitly.
            let g = match args.count.or(file.count) {
                Some(n) => golden_with_noise(n),
                None => golden_table1(),
            };
            for r in &g.records {
                writer.write(r).map_err(Failure::output)?;
            }
            (g.records.len(), g.planted, Some(g.expected))
        }
        Preset::Adversarial => {
            let recs = gen_adversarial(count, seed, &cfg);
            for r in &recs {
                writer.write(r).map_err(Failure::output)?;
            }
            (recs.len(), Vec::new(), None)
        }
        Preset::Noise => {
            let mut planted = Vec::new();
            let mut written = 0;
            for (k, section) in file.plants.into_iter().enumerate() {
                let spec = section.into_spec(k, seed)?;
                let (recs, truth) = plant(&spec, &cfg).map_err(|e| Failure::config(e.to_string()))?;
                for r in &recs {
                    writer.write(r).map_err(Failure::output)?;
                }
                written += recs.len();
                planted.push(truth);
            }
            let noise = noise_config(count, seed, args.actors, &file.noise)?;
            for r in noise.stream() {
                writer.write(&r).map_err(Failure::output)?;
                written += 1;
            }
            (written, planted, None)
        }
    };
    writer.finish().map_err(Failure::output)?;

    let truth = Truth { preset, seed, records: written, planted: &planted, expected_summary: expected };
    let mut text = serde_json::to_string_pretty(&truth).map_err(Failure::output)?;
    text.push('\n');
    fs::write(&truth_path, text).map_err(Failure::output)?;

    let dir = manifest_dir(&args.out);
    let config = json!({ "preset": preset, "seed": seed, "count": count, "format": format, "detection": cfg });
    let inputs: Vec<PathBuf> = args.spec.iter().cloned().collect();
    let stats = json!({ "records": written, "planted": planted.len() });
    eprintln!("hopscan: wrote {written} records to {}", args.out.display());
    manifest::write_named(&dir, &manifest_name(&args.out), "synth", &clock, &inputs, config, &[args.out.clone(), truth_path], stats)
}

fn noise_config(count: usize, seed: u64, actors: Option<usize>, s: &NoiseSection) -> Result<NoiseConfig, Failure> {
    let mut n = NoiseConfig::new(count, seed);
    if let Some(a) = actors.or(s.actors) {
        n.actors = a;
    }
    if let Some(v) = s.start {
        n.start = v;
    }
    if let Some(v) = s.span_secs {
        n.span_secs = v;
    }
    if let Some(v) = &s.chains {
        n.chains = v.clone();
    }
    if let Some(v) = &s.tokens {
        n.tokens = v.clone();
    }
    if let Some(v) = s.bridge_share {
        n.bridge_share = v;
    }
    if let Some(v) = s.multi_leg_share {
        n.multi_leg_share = v;
    }
    let share_ok = |x: f64| (0.0..=1.0).contains(&x);
    if n.chains.is_empty() || n.tokens.is_empty() || n.span_secs <= 0 || !share_ok(n.bridge_share) || !share_ok(n.multi_leg_share) {
        return Err(Failure::config("noise: need chains, tokens, a positive span and shares in [0, 1]"));
    }
    Ok(n)
}

fn manifest_dir(out: &Path) -> PathBuf {
    out.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn manifest_name(out: &Path) -> String {
    let stem = out.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    format!("{stem}.manifest.json")
}
