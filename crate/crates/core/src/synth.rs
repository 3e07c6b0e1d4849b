//! Synthetic datasets: seeded noise, planted paths with known ground truth,
//! a near-boundary generator for oracle fuzzing, and a reconstruction of the
//! published three- and four-hop results.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::analytics::{PathRow, SummaryReport};
use crate::ingest::{canonicalize, TokenEquivalenceMap};
use crate::matcher::DetectionConfig;
use crate::model::{ArbitragePath, CanonicalToken, Chain, RecordParts, TransactionRecord, TxKind};
use crate::usd::Usd;

/// 2023-09-01T00:00:00Z.
pub const DEFAULT_START: i64 = 1_693_526_400;
pub const DEFAULT_SPAN_SECS: i64 = 30 * 86_400;

const PPM: i64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("invalid plant spec: {0}")]
    InvalidSpec(String),
}

fn invalid(msg: impl Into<String>) -> SynthError {
    SynthError::InvalidSpec(msg.into())
}

/// Everything needed to emit one path that passes every pairwise check.
///
/// Swap `i` runs on `chains[i]`, sent by `actors[i]`, and turns `tokens[i]`
/// into `tokens[i + 1]`. The bridge after swap `i` carries `tokens[i + 1]`
/// from `actors[i]` to `actors[i + 1]`; `bridge_tokens_out[i]` replaces the
/// raw symbol it delivers, which must then be equivalent under the token map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlantSpec {
    pub tag: String,
    pub chains: Vec<Chain>,
    pub tokens: Vec<String>,
    pub bridge_tokens_out: Vec<Option<String>>,
    pub start: i64,
    /// Gap before each record after the first: `2n - 2` entries.
    pub gaps: Vec<i64>,
    pub initial_value: Usd,
    pub final_value: Usd,
    /// Share of value carried across each gap, in ppm: `2n - 2` entries.
    pub retention_ppm: Vec<u32>,
    pub actors: Vec<String>,
}

impl PlantSpec {
    /// One actor throughout, gaps split equally, fixed retention.
    pub fn simple(tag: &str, chains: &[Chain], tokens: &[&str], start: i64, duration: i64, actor: &str) -> Self {
        let hops = chains.len();
        let links = (2 * hops).saturating_sub(2);
        PlantSpec {
            tag: tag.to_string(),
            chains: chains.to_vec(),
            tokens: tokens.iter().map(|t| t.to_string()).collect(),
            bridge_tokens_out: vec![None; hops.saturating_sub(1)],
            start,
            gaps: equal_gaps(duration, links),
            initial_value: Usd::from_cents(100_000),
            final_value: Usd::from_cents(100_000),
            retention_ppm: vec![999_000; links],
            actors: vec![actor.to_string(); hops],
        }
    }

    pub fn hops(&self) -> usize {
        self.chains.len()
    }

    pub fn duration_secs(&self) -> i64 {
        self.gaps.iter().sum()
    }

    pub fn validate(&self, cfg: &DetectionConfig) -> Result<(), SynthError> {
        let n = self.hops();
        if n == 0 {
            return Err(invalid("at least one hop is required"));
        }
        let links = 2 * n - 2;
        if self.tokens.len() != n + 1 {
            return Err(invalid(format!("{n} hops need {} tokens, got {}", n + 1, self.tokens.len())));
        }
        if self.bridge_tokens_out.len() != n - 1 {
            return Err(invalid("one bridge token override slot per bridge is required"));
        }
        if self.actors.len() != n {
            return Err(invalid(format!("{n} hops need {n} actors, got {}", self.actors.len())));
        }
        if self.gaps.len() != links || self.retention_ppm.len() != links {
            return Err(invalid(format!("{n} hops need {links} gaps and retention factors")));
        }
        if let Some(w) = self.chains.windows(2).find(|w| w[0] == w[1]) {
            return Err(invalid(format!("consecutive hops on the same chain ({})", w[0])));
        }
        if let Some(&g) = self.gaps.iter().find(|&&g| g <= 0 || g > cfg.window_secs()) {
            return Err(invalid(format!("gap {g} outside (0, {}]", cfg.window_secs())));
        }
        let tol = cfg.value_tolerance().ppm();
        if let Some(&r) = self.retention_ppm.iter().find(|&&r| r < tol || r > PPM as u32) {
            return Err(invalid(format!("retention {r} ppm outside [{tol}, {PPM}]")));
        }
        if self.initial_value.is_negative() || self.final_value.is_negative() {
            return Err(invalid("values must be non-negative"));
        }
        if self.tokens.iter().chain(&self.actors).any(|s| s.trim().is_empty()) || self.tag.is_empty() {
            return Err(invalid("empty token, actor or tag"));
        }
        if self.tokens.windows(2).all(|w| w[0] == w[1]) {
            return Err(invalid("every swap leaves its token unchanged"));
        }
        Ok(())
    }
}

/// Splits `total` into `parts` near-equal gaps; earlier gaps take the
/// remainder.
pub fn equal_gaps(total: i64, parts: usize) -> Vec<i64> {
    if parts == 0 {
        return Vec::new();
    }
    let p = parts as i64;
    (0..p).map(|i| total / p + i64::from(i < total % p)).collect()
}

/// Ground truth for one planted path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlantedPath {
    pub tag: String,
    pub hops: usize,
    pub chains: Vec<Chain>,
    pub duration_secs: i64,
    pub profit_usd: Usd,
    pub actor: String,
    pub hashes: Vec<String>,
}

pub fn plant(spec: &PlantSpec, cfg: &DetectionConfig) -> Result<(Vec<TransactionRecord>, PlantedPath), SynthError> {
    plant_with_map(spec, cfg, &TokenEquivalenceMap::builtin())
}

/// Emits the `2n - 1` records of `spec` and checks the result is a valid
/// path once tokens are resolved through `map`.
pub fn plant_with_map(
    spec: &PlantSpec,
    cfg: &DetectionConfig,
    map: &TokenEquivalenceMap,
) -> Result<(Vec<TransactionRecord>, PlantedPath), SynthError> {
    spec.validate(cfg)?;
    let n = spec.hops();
    let mut records = Vec::with_capacity(2 * n - 1);
    let mut ts = spec.start;
    let mut value = spec.initial_value.micros();
    let mut link = 0;

    for i in 0..n {
        let actor: Arc<str> = spec.actors[i].as_str().into();
        let out = if i + 1 == n { spec.final_value.micros() } else { value };
        records.push(record(
            hash_of(&spec.tag, records.len()),
            ts,
            actor.clone(),
            actor.clone(),
            spec.chains[i],
            None,
            (&spec.tokens[i], &spec.tokens[i + 1]),
            (value, out),
        ));
        if i + 1 == n {
            break;
        }
        ts += spec.gaps[link];
        value = retained(out, spec.retention_ppm[link]);
        link += 1;

        let carried = &spec.tokens[i + 1];
        let delivered = spec.bridge_tokens_out[i].as_ref().unwrap_or(carried);
        records.push(record(
            hash_of(&spec.tag, records.len()),
            ts,
            actor,
            spec.actors[i + 1].as_str().into(),
            spec.chains[i],
            Some(spec.chains[i + 1]),
            (carried, delivered),
            (value, value),
        ));
        ts += spec.gaps[link];
        value = retained(value, spec.retention_ppm[link]);
        link += 1;
    }

    let path = ArbitragePath::try_new(canonicalize(records.clone(), map), cfg)
        .map_err(|e| invalid(format!("emitted records do not form a path: {e}")))?;
    let truth = PlantedPath {
        tag: spec.tag.clone(),
        hops: n,
        chains: spec.chains.clone(),
        duration_secs: path.duration_secs(),
        profit_usd: path.gross_profit_usd(),
        actor: spec.actors[0].clone(),
        hashes: records.iter().map(|r| r.hash().to_string()).collect(),
    };
    Ok((records, truth))
}

/// `ceil(v * r / 10^6)`: the smallest value still inside the tolerance band
/// when `r` is the tolerance itself.
fn retained(micros: i64, ppm: u32) -> i64 {
    let num = micros as i128 * ppm as i128;
    ((num + PPM as i128 - 1) / PPM as i128) as i64
}

fn hash_of(tag: &str, i: usize) -> String {
    let digest = Sha256::digest(format!("{tag}/{i}").as_bytes());
    let mut s = String::with_capacity(66);
    s.push_str("0x");
    for b in digest {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

#[allow(clippy::too_many_arguments)]
fn record(
    hash: String,
    timestamp: i64,
    sender: Arc<str>,
    receiver: Arc<str>,
    chain: Chain,
    dest_chain: Option<Chain>,
    tokens: (&str, &str),
    values: (i64, i64),
) -> TransactionRecord {
    TransactionRecord::new(RecordParts {
        hash,
        timestamp,
        sender,
        receiver,
        chain,
        dest_chain,
        token_in: CanonicalToken::raw(tokens.0),
        token_out: CanonicalToken::raw(tokens.1),
        value_in_usd: Usd::from_micros(values.0),
        value_out_usd: Usd::from_micros(values.1),
        kind: if dest_chain.is_some() { TxKind::Bridge } else { TxKind::Swap },
        leg_count: if dest_chain.is_some() { None } else { Some(1) },
    })
    .expect("generated records are valid")
}

pub const DEFAULT_TOKENS: [&str; 12] = [
    "USDC", "USDT", "WETH", "WBTC", "DAI", "ARB", "OP", "HOP", "BAL", "WMATIC", "ezETH", "axlUSDC",
];

/// Parameters of the noise generator.
///
/// Timestamps are uniform over `[start, start + span_secs)`; input values
/// are log-uniform in `[10, 10^6]` USD. Noise actors live in their own
/// address range (24 leading zero nibbles), so they never meet a planted
/// path.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoiseConfig {
    pub count: usize,
    pub chains: Vec<Chain>,
    pub tokens: Vec<String>,
    pub start: i64,
    pub span_secs: i64,
    pub seed: u64,
    /// Size of the actor pool; 0 means one actor per record.
    pub actors: usize,
    pub bridge_share: f64,
    /// Share of swaps reported as multi-leg.
    pub multi_leg_share: f64,
}

impl NoiseConfig {
    pub fn new(count: usize, seed: u64) -> Self {
        NoiseConfig {
            count,
            chains: Chain::ALL.to_vec(),
            tokens: DEFAULT_TOKENS.iter().map(|t| t.to_string()).collect(),
            start: DEFAULT_START,
            span_secs: DEFAULT_SPAN_SECS,
            seed,
            actors: 0,
            bridge_share: 0.35,
            multi_leg_share: 0.05,
        }
    }

    pub fn stream(&self) -> NoiseStream {
        NoiseStream::new(self.clone())
    }
}

pub fn noise_actor(i: u64) -> String {
    format!("0x{:024x}{i:016x}", 0)
}

pub fn gen_noise(cfg: &NoiseConfig) -> Vec<TransactionRecord> {
    let mut out = Vec::with_capacity(cfg.count);
    out.extend(cfg.stream());
    out
}

/// Record-at-a-time noise, for datasets too large to hold.
pub struct NoiseStream {
    cfg: NoiseConfig,
    tokens: Vec<Arc<str>>,
    rng: ChaCha8Rng,
    next: usize,
}

impl NoiseStream {
    fn new(cfg: NoiseConfig) -> Self {
        let tokens = cfg.tokens.iter().map(|t| Arc::from(t.as_str())).collect();
        NoiseStream {
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            tokens,
            cfg,
            next: 0,
        }
    }

    fn token(&mut self) -> Arc<str> {
        self.tokens[self.rng.gen_range(0..self.tokens.len())].clone()
    }
}

impl Iterator for NoiseStream {
    type Item = TransactionRecord;

    fn next(&mut self) -> Option<TransactionRecord> {
        if self.next >= self.cfg.count {
            return None;
        }
        let i = self.next;
        self.next += 1;

        let rng = &mut self.rng;
        let pool = if self.cfg.actors == 0 { self.cfg.count } else { self.cfg.actors } as u64;
        let ts = self.cfg.start + rng.gen_range(0..self.cfg.span_secs.max(1));
        let chains = &self.cfg.chains;
        let chain = chains[rng.gen_range(0..chains.len())];
        let bridge = chains.len() > 1 && rng.gen_bool(self.cfg.bridge_share);
        let dest = bridge.then(|| loop {
            let d = chains[rng.gen_range(0..chains.len())];
            if d != chain {
                break d;
            }
        });
        let sender: Arc<str> = noise_actor(rng.gen_range(0..pool)).into();
        let receiver: Arc<str> = if bridge {
            noise_actor(rng.gen_range(0..pool)).into()
        } else {
            sender.clone()
        };
        let v_in = (10f64.ln() + rng.gen::<f64>() * (1e6f64 / 10.0).ln()).exp();
        let v_out = if bridge {
            v_in * rng.gen_range(0.97..1.0)
        } else {
            v_in * rng.gen_range(0.9..1.1)
        };
        let legs = if !bridge && rng.gen_bool(self.cfg.multi_leg_share) {
            Some(rng.gen_range(2..5))
        } else if bridge {
            None
        } else {
            Some(1)
        };
        let hash = format!("0x{:032x}{:032x}", rng.gen::<u128>(), i);
        let token_in = self.token();
        let token_out = if bridge { token_in.clone() } else { self.token() };

        let rec = TransactionRecord::new(RecordParts {
            hash,
            timestamp: ts,
            sender,
            receiver,
            chain,
            dest_chain: dest,
            token_in: CanonicalToken::raw(token_in),
            token_out: CanonicalToken::raw(token_out),
            value_in_usd: Usd::from_micros((v_in * 1e6).round() as i64),
            value_out_usd: Usd::from_micros((v_out * 1e6).round() as i64),
            kind: if bridge { TxKind::Bridge } else { TxKind::Swap },
            leg_count: legs,
        })
        .expect("noise records are valid");
        Some(rec)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.cfg.count - self.next;
        (left, Some(left))
    }
}

/// Dense datasets whose records sit on or just past the constraint
/// boundaries: gaps of exactly the window or one second more, values at the
/// tolerance edge or one micro-dollar outside, wrong actors, wrong chains,
/// token swaps through equivalent symbols, and multi-leg swaps.
pub fn gen_adversarial(records: usize, seed: u64, cfg: &DetectionConfig) -> Vec<TransactionRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chains = [Chain::Base, Chain::Ethereum, Chain::Optimism, Chain::Arbitrum];
    let actors: Vec<Arc<str>> = (0..5).map(|i| Arc::from(format!("0xad{i:038x}"))).collect();
    let tokens = ["USDC", "axlUSDC", "WETH", "ETH", "HOP"];
    let window = cfg.window_secs();
    let tol = cfg.value_tolerance().ppm();
    let span = window * (records as i64 / 8).max(4);

    let mut out: Vec<TransactionRecord> = Vec::with_capacity(records);
    for i in 0..records {
        let hash = format!("0x{:016x}{i:08x}", rng.gen::<u64>());
        let parent = if !out.is_empty() && rng.gen_bool(0.85) {
            Some(out[rng.gen_range(0..out.len())].clone())
        } else {
            None
        };
        let rec = match parent {
            None => {
                let bridge = rng.gen_bool(0.4);
                let chain = *chains.choose(&mut rng).unwrap();
                let dest = bridge.then(|| loop {
                    let d = *chains.choose(&mut rng).unwrap();
                    if d != chain {
                        break d;
                    }
                });
                let v = rng.gen_range(1_000_000..1_000_000_000i64);
                let sender = actors.choose(&mut rng).unwrap().clone();
                let tin = *tokens.choose(&mut rng).unwrap();
                let tout = if bridge { tin } else { *tokens.choose(&mut rng).unwrap() };
                TransactionRecord::new(RecordParts {
                    hash,
                    timestamp: DEFAULT_START + rng.gen_range(0..span),
                    sender: sender.clone(),
                    receiver: if bridge { actors.choose(&mut rng).unwrap().clone() } else { sender },
                    chain,
                    dest_chain: dest,
                    token_in: CanonicalToken::raw(tin),
                    token_out: CanonicalToken::raw(tout),
                    value_in_usd: Usd::from_micros(v),
                    value_out_usd: Usd::from_micros(v),
                    kind: if bridge { TxKind::Bridge } else { TxKind::Swap },
                    leg_count: None,
                })
                .unwrap()
            }
            Some(p) => successor(&p, hash, &mut rng, &chains, &actors, &tokens, window, tol),
        };
        out.push(rec);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn successor(
    p: &TransactionRecord,
    hash: String,
    rng: &mut ChaCha8Rng,
    chains: &[Chain],
    actors: &[Arc<str>],
    tokens: &[&str],
    window: i64,
    tol: u32,
) -> TransactionRecord {
    let bridge = if rng.gen_bool(0.05) { p.is_bridge() } else { p.is_swap() };
    let gap = match rng.gen_range(0..8) {
        0 => 0,
        1 => 1,
        2 => window,
        3 => window + 1,
        4 => -1,
        _ => rng.gen_range(1..=window),
    };
    let out = p.value_out_usd().micros();
    let edge = ((out as i128 * tol as i128 + PPM as i128 - 1) / PPM as i128) as i64;
    let v_in = match rng.gen_range(0..8) {
        0 => out,
        1 => out + 1,
        2 => edge,
        3 => edge - 1,
        _ => rng.gen_range(edge..=out),
    }
    .max(0);
    let v_out = if bridge {
        v_in
    } else {
        (v_in as f64 * rng.gen_range(0.97..1.04)) as i64
    };

    let mutate = rng.gen_bool(0.15);
    let sender = if mutate && rng.gen_bool(0.3) {
        actors[rng.gen_range(0..actors.len())].clone()
    } else if p.is_bridge() {
        p.receiver().into()
    } else {
        p.sender().into()
    };
    let chain = if mutate && rng.gen_bool(0.3) {
        chains[rng.gen_range(0..chains.len())]
    } else if p.is_bridge() {
        p.output_chain()
    } else {
        p.chain()
    };
    let token_in = if mutate && rng.gen_bool(0.3) {
        tokens[rng.gen_range(0..tokens.len())].to_string()
    } else {
        let t = p.token_out().native_chain_symbol();
        // Move through an equivalent symbol now and then.
        match (t, rng.gen_bool(0.2)) {
            ("USDC", true) => "axlUSDC".to_string(),
            ("WETH", true) if chain != Chain::Base || rng.gen_bool(0.5) => "ETH".to_string(),
            _ => t.to_string(),
        }
    };
    let dest = bridge.then(|| loop {
        let d = chains[rng.gen_range(0..chains.len())];
        if d != chain {
            break d;
        }
    });
    let token_out = if bridge {
        token_in.clone()
    } else {
        tokens[rng.gen_range(0..tokens.len())].to_string()
    };
    let receiver = if bridge && rng.gen_bool(0.8) {
        sender.clone()
    } else if bridge {
        actors[rng.gen_range(0..actors.len())].clone()
    } else {
        sender.clone()
    };
    let legs = (!bridge && rng.gen_bool(0.05)).then_some(2);

    TransactionRecord::new(RecordParts {
        hash,
        timestamp: p.timestamp() + gap,
        sender,
        receiver,
        chain,
        dest_chain: dest,
        token_in: CanonicalToken::raw(token_in.as_str()),
        token_out: CanonicalToken::raw(token_out.as_str()),
        value_in_usd: Usd::from_micros(v_in),
        value_out_usd: Usd::from_micros(v_out.max(0)),
        kind: if bridge { TxKind::Bridge } else { TxKind::Swap },
        leg_count: legs,
    })
    .unwrap()
}

/// Actor of both reconstructed four-hop paths: the published truncated
/// address, zero-padded to full length.
pub const FOUR_HOP_ACTOR: &str = "0xf6c77e0000000000000000000000000000ace28d";

const GOLDEN_NOISE: usize = 5_000;
const GOLDEN_NOISE_SEED: u64 = 0x7ab1e1;

struct GoldenRow {
    chains: &'static [Chain],
    duration: i64,
    profit_cents: i64,
    tokens: &'static [&'static str],
    bridge_out: &'static [Option<&'static str>],
}

fn golden_rows() -> Vec<GoldenRow> {
    use Chain::*;
    let row = |chains, duration, profit_cents, tokens| GoldenRow {
        chains,
        duration,
        profit_cents,
        tokens,
        bridge_out: &[],
    };
    vec![
        row(&[Base, Ethereum, Base], 646, 3278, &["USDC", "BAL", "USDC", "BAL"]),
        row(&[Base, Optimism, Base], 490, 43, &["HOP", "WETH", "HOP", "WETH"]),
        row(&[Arbitrum, Optimism, Base], 311, -25_507, &["ARB", "WETH", "HOP", "WETH"]),
        row(&[Optimism, Base, Arbitrum], 466, 26_404, &["WETH", "HOP", "WETH", "HOP"]),
        // The second bridge delivers axlUSDC while the last swap spends USDC:
        // the path only connects through token equivalence.
        GoldenRow {
            chains: &[Base, Avalanche, Base],
            duration: 448,
            profit_cents: 2140,
            tokens: &["USDC", "axlUSDC", "USDC", "axlUSDC"],
            bridge_out: &[None, Some("axlUSDC")],
        },
        row(&[Arbitrum, Polygon, Arbitrum], 412, -17, &["USDT", "USDC", "WBTC", "USDT"]),
        row(&[Blast, Arbitrum, Ethereum], 458, -817, &["WETH", "ezETH", "WETH", "ezETH"]),
        row(&[Polygon, Arbitrum, Polygon], 242, -2, &["WMATIC", "WBTC", "WETH", "WMATIC"]),
        row(&[Optimism, Base, Optimism, Base], 776, 2069, &["WETH", "HOP", "WETH", "HOP", "WETH"]),
        row(&[Arbitrum, Optimism, Base, Arbitrum], 617, 161, &["ARB", "WETH", "ARB", "WETH", "ARB"]),
    ]
}

/// Specs of the ten reconstructed paths, in table order.
pub fn golden_specs() -> Vec<PlantSpec> {
    golden_rows()
        .into_iter()
        .enumerate()
        .map(|(i, row)| {
            let actor = if row.chains.len() == 4 {
                FOUR_HOP_ACTOR.to_string()
            } else {
                let d = hash_of("golden-actor", i);
                d[..42].to_string()
            };
            let mut spec = PlantSpec::simple(
                &format!("golden-{i}"),
                row.chains,
                row.tokens,
                DEFAULT_START + 3_600 + i as i64 * 2 * 86_400,
                row.duration,
                &actor,
            );
            for (slot, over) in spec.bridge_tokens_out.iter_mut().zip(row.bridge_out) {
                *slot = over.map(str::to_string);
            }
            spec.final_value = Usd::from_cents(100_000 + row.profit_cents);
            spec.retention_ppm = (0..spec.retention_ppm.len())
                .map(|k| if k % 2 == 0 { 999_500 } else { 998_000 })
                .collect();
            spec
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct GoldenDataset {
    /// Planted and noise records, ordered by `(timestamp, hash)`.
    pub records: Vec<TransactionRecord>,
    pub planted: Vec<PlantedPath>,
    pub expected: SummaryReport,
}

/// The ten published paths planted into 5,000 seeded noise records, with
/// the summary a correct detector must produce.
pub fn golden_table1() -> GoldenDataset {
    golden_with_noise(GOLDEN_NOISE)
}

/// Same paths, different amount of noise. Fewer than 1,950 noise records
/// keeps the dataset small enough for the brute-force check.
pub fn golden_with_noise(noise_count: usize) -> GoldenDataset {
    let cfg = DetectionConfig::default();
    let mut records = Vec::new();
    let mut planted = Vec::new();
    for spec in golden_specs() {
        let (recs, truth) = plant(&spec, &cfg).expect("golden specs are valid");
        records.extend(recs);
        planted.push((spec, truth));
    }
    let mut noise = NoiseConfig::new(noise_count, GOLDEN_NOISE_SEED);
    noise.span_secs = 21 * 86_400;
    records.extend(gen_noise(&noise));
    records.sort_by(|a, b| a.order_key().cmp(&b.order_key()));

    planted.sort_by(|a, b| (a.0.start, &a.1.hashes[0]).cmp(&(b.0.start, &b.1.hashes[0])));
    let rows = planted.iter().map(|(spec, truth)| expected_row(spec, truth)).collect();
    GoldenDataset {
        records,
        expected: SummaryReport::from_rows(rows, Vec::new()),
        planted: planted.into_iter().map(|(_, t)| t).collect(),
    }
}

fn expected_row(spec: &PlantSpec, truth: &PlantedPath) -> PathRow {
    let mut tokens: Vec<&str> = Vec::new();
    for t in &spec.tokens {
        if !tokens.contains(&t.as_str()) {
            tokens.push(t);
        }
    }
    PathRow {
        chain_path: spec.chains.iter().map(|c| c.label()).collect::<Vec<_>>().join("→"),
        duration_secs: spec.duration_secs(),
        tokens: tokens.join("/"),
        profit_usd: spec.final_value - spec.initial_value,
        hops: spec.hops(),
        chains: spec.chains.clone(),
        actor: spec.actors[0].clone(),
        first_hash: truth.hashes[0].clone(),
    }
}
