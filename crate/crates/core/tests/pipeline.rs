use std::collections::HashSet;

use hopscan::ingest::{
    build_index, canonicalize, filter_atomic_swaps, parse_dataset, write_records, Format, TokenEquivalenceMap,
};
use hopscan::pathfinder::{brute_force_find, find_paths};
use hopscan::synth::{gen_adversarial, gen_noise, plant, NoiseConfig, PlantSpec};
use hopscan::{prepare, Chain, DetectionConfig, TransactionRecord};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn synthetic_rows_round_trip() {
    let recs = gen_noise(&NoiseConfig::new(10_000, 9));
    for format in [Format::Csv, Format::Jsonl] {
        let bytes = write_records(Vec::new(), format, &recs).unwrap();
        let parsed = parse_dataset(bytes.as_slice(), format).unwrap();
        assert!(parsed.rejected.is_empty(), "{format}: {:?}", &parsed.rejected[..1]);
        assert_eq!(parsed.records, recs, "{format}");
    }
}

#[test]
fn writing_is_stable() {
    let recs = gen_noise(&NoiseConfig::new(500, 1));
    let once = write_records(Vec::new(), Format::Csv, &recs).unwrap();
    let parsed = parse_dataset(once.as_slice(), Format::Csv).unwrap();
    let twice = write_records(Vec::new(), Format::Csv, &parsed.records).unwrap();
    assert_eq!(once, twice);
}

fn ids(index: &hopscan::ingest::TxIndex) -> Vec<String> {
    index.records().iter().map(|r| r.hash().to_string()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn index_ignores_input_order(seed in any::<u64>(), shuffle in any::<u64>()) {
        let cfg = DetectionConfig::default();
        let recs = gen_adversarial(300, seed, &cfg);
        let mut shuffled = recs.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(shuffle));
        let a = prepare(recs, &TokenEquivalenceMap::builtin());
        let b = prepare(shuffled, &TokenEquivalenceMap::builtin());
        prop_assert_eq!(ids(&a), ids(&b));
        prop_assert_eq!(find_paths(&a, &cfg), find_paths(&b, &cfg));
    }

    #[test]
    fn filter_and_canonicalize_commute(seed in any::<u64>()) {
        let recs = gen_adversarial(300, seed, &DetectionConfig::default());
        let map = TokenEquivalenceMap::builtin();
        let a = canonicalize(filter_atomic_swaps(recs.clone()), &map);
        let b = filter_atomic_swaps(canonicalize(recs, &map));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn canonicalize_is_idempotent(seed in any::<u64>()) {
        let recs = gen_adversarial(200, seed, &DetectionConfig::default());
        let map = TokenEquivalenceMap::builtin();
        let once = canonicalize(recs, &map);
        let twice = canonicalize(once.clone(), &map);
        let symbols = |v: &[TransactionRecord]| -> Vec<(String, String)> {
            v.iter().map(|r| (r.token_in().symbol().to_string(), r.token_out().symbol().to_string())).collect()
        };
        prop_assert_eq!(symbols(&once), symbols(&twice));
    }

    #[test]
    fn buckets_cover_every_record(seed in any::<u64>()) {
        let index = build_index(gen_adversarial(300, seed, &DetectionConfig::default()));
        let mut seen = HashSet::new();
        for (chain, sender, bucket) in index.sender_buckets() {
            prop_assert!(bucket.windows(2).all(|w| w[0] < w[1]));
            for &id in bucket {
                let r = index.get(id);
                prop_assert_eq!((r.chain(), r.sender()), (chain, sender));
                seen.insert(id);
            }
        }
        prop_assert_eq!(seen.len(), index.len());
        let bridges = index.records().iter().filter(|r| r.is_bridge()).count();
        let delivered: usize = index.receiver_buckets().map(|(_, _, b)| b.len()).sum();
        prop_assert_eq!(bridges, delivered);
    }
}

#[test]
fn identical_output_across_thread_counts() {
    let cfg = DetectionConfig::default();
    let mut recs = gen_noise(&NoiseConfig::new(20_000, 5));
    for s in 0..10 {
        recs.extend(gen_adversarial(200, s, &cfg));
    }
    let index = prepare(recs, &TokenEquivalenceMap::builtin());
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| find_paths(&index, &cfg))
    };
    let one = run(1);
    assert!(!one.is_empty());
    assert_eq!(one, run(4));
    assert_eq!(one, run(8));
}

fn random_spec(rng: &mut ChaCha8Rng, tag: &str, start: i64) -> PlantSpec {
    use rand::Rng;
    let hops = rng.gen_range(3..=6);
    let pool = [Chain::Base, Chain::Ethereum, Chain::Optimism, Chain::Arbitrum, Chain::Polygon];
    let mut chains = vec![*pool.choose(rng).unwrap()];
    while chains.len() < hops {
        let c = *pool.choose(rng).unwrap();
        if c != *chains.last().unwrap() {
            chains.push(c);
        }
    }
    let tokens: Vec<&str> = (0..=hops).map(|i| if i % 2 == 0 { "USDC" } else { "WETH" }).collect();
    let actor = format!("0xplant{tag}");
    let mut spec = PlantSpec::simple(tag, &chains, &tokens, start, 0, &actor);
    spec.gaps = (0..spec.gaps.len()).map(|_| rng.gen_range(1..=300)).collect();
    spec.retention_ppm = (0..spec.gaps.len()).map(|_| rng.gen_range(980_000..=1_000_000)).collect();
    spec
}

#[test]
fn planted_paths_recalled_in_noise() {
    use rand::Rng;
    let cfg = DetectionConfig::default();
    for seed in 0..5u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut recs = gen_noise(&NoiseConfig::new(20_000, seed));
        let mut truth = Vec::new();
        for k in 0..20 {
            let start = hopscan::synth::DEFAULT_START + rng.gen_range(0..20 * 86_400);
            let (r, t) = plant(&random_spec(&mut rng, &format!("{seed}-{k}"), start), &cfg).unwrap();
            recs.extend(r);
            truth.push(t.hashes);
        }
        let index = prepare(recs, &TokenEquivalenceMap::builtin());
        let found: HashSet<Vec<String>> = find_paths(&index, &cfg)
            .iter()
            .map(|p| p.hash_sequence().into_iter().map(String::from).collect())
            .collect();
        for t in &truth {
            assert!(found.contains(t), "seed {seed}: planted path missing");
        }
    }
}

#[test]
fn single_plant_in_small_noise() {
    let cfg = DetectionConfig::default();
    let spec = PlantSpec::simple("one", &[Chain::Base, Chain::Ethereum, Chain::Base], &["USDC", "BAL", "USDC", "BAL"], hopscan::synth::DEFAULT_START + 500, 600, "0xone");
    let (mut recs, truth) = plant(&spec, &cfg).unwrap();
    recs.extend(gen_noise(&NoiseConfig::new(100, 3)));
    let index = prepare(recs, &TokenEquivalenceMap::builtin());
    let found = find_paths(&index, &cfg);
    assert_eq!(found.len(), 1);
    assert_eq!(found[0].hash_sequence(), truth.hashes);
    assert_eq!(found, brute_force_find(index.records(), &cfg).unwrap());
}

#[test]
fn noise_alone_rarely_forms_paths() {
    let cfg = DetectionConfig::default();
    let clean = (0..100u64)
        .filter(|&seed| {
            let index = prepare(gen_noise(&NoiseConfig::new(1000, seed)), &TokenEquivalenceMap::builtin());
            brute_force_find(index.records(), &cfg).unwrap().is_empty()
        })
        .count();
    assert!(clean >= 99, "{clean} of 100 seeds clean");
}
