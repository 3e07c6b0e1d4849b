//! Dataset ingestion: parsing, admissibility filtering, token
//! canonicalization and indexing.
//!
//! Both input formats share one column schema:
//!
//! ```text
//! hash, timestamp, sender, receiver, chain, dest_chain, token_in, token_out,
//! value_in_usd, value_out_usd, kind, leg_count
//! ```
//!
//! `dest_chain` is empty (or null) for swaps and `leg_count` is optional.
//! Rows are tokenized sequentially and validated in parallel batches; every
//! row that fails validation is returned as a [`RejectedRow`].

mod index;
mod tokens;

use std::borrow::Cow;
use std::collections::HashSet;
use std::fmt;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intern::Interner;
use crate::model::{validate_record_with, RawRecord, RecordError, TransactionRecord};
use crate::usd::Usd;

pub use index::{build_index, TxIndex};
pub use tokens::{canonicalize, canonicalize_record, TokenEquivalenceMap, TokenMapError};

/// Column names, in file order.
pub const COLUMNS: [&str; 12] = [
    "hash",
    "timestamp",
    "sender",
    "receiver",
    "chain",
    "dest_chain",
    "token_in",
    "token_out",
    "value_in_usd",
    "value_out_usd",
    "kind",
    "leg_count",
];

const BATCH_ROWS: usize = 65_536;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Jsonl,
}

impl Format {
    /// Guesses the format from a file extension.
    pub fn from_path(path: &Path) -> Result<Self, IngestError> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .unwrap_or_default();
        ext.parse()
    }
}

impl FromStr for Format {
    type Err = IngestError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "jsonl" | "ndjson" => Ok(Format::Jsonl),
            other => Err(IngestError::UnknownFormat(other.to_string())),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Jsonl => "jsonl",
        })
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("unreadable source: {0}")]
    UnreadableSource(String),
    #[error("unknown format {0:?} (expected csv or jsonl)")]
    UnknownFormat(String),
}

impl From<std::io::Error> for IngestError {
    fn from(err: std::io::Error) -> Self {
        IngestError::UnreadableSource(err.to_string())
    }
}

impl From<csv::Error> for IngestError {
    fn from(err: csv::Error) -> Self {
        IngestError::UnreadableSource(err.to_string())
    }
}

/// An input row that failed validation. `line` is 1-based and counts the
/// header for CSV.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RejectedRow {
    pub line: u64,
    pub hash: Option<String>,
    pub reason: String,
    #[serde(skip)]
    pub error: RecordError,
}

impl RejectedRow {
    fn new(line: u64, hash: Option<&str>, error: RecordError) -> Self {
        RejectedRow {
            line,
            hash: hash.map(str::to_string),
            reason: error.to_string(),
            error,
        }
    }
}

#[derive(Debug, Default)]
pub struct ParsedDataset {
    pub records: Vec<TransactionRecord>,
    pub rejected: Vec<RejectedRow>,
}

impl ParsedDataset {
    /// Appends another shard, re-checking hash uniqueness across shards.
    pub fn merge(mut self, other: ParsedDataset) -> ParsedDataset {
        self.records.extend(other.records);
        self.rejected.extend(other.rejected);
        let seen = reject_duplicate_hashes(&mut self.records);
        self.rejected.extend(seen);
        self
    }
}

/// Parses a whole dataset from `source`.
pub fn parse_dataset(source: impl Read, format: Format) -> Result<ParsedDataset, IngestError> {
    let interner = Interner::new();
    parse_dataset_with(source, format, &interner, None)
}

/// Opens and parses a file. `size_hint` lets the record buffer be reserved
/// once instead of grown.
pub fn parse_file(path: &Path, format: Format) -> Result<ParsedDataset, IngestError> {
    let file = std::fs::File::open(path)
        .map_err(|e| IngestError::UnreadableSource(format!("{}: {e}", path.display())))?;
    let row_hint = count_lines(path).ok();
    // Addresses are the bulk of distinct strings: up to two per row, usually
    // far fewer.
    let interner = Interner::with_capacity(row_hint.unwrap_or(0));
    parse_dataset_with(BufReader::with_capacity(1 << 20, file), format, &interner, row_hint)
}

fn count_lines(path: &Path) -> std::io::Result<usize> {
    let mut file = std::fs::File::open(path)?;
    let mut buf = vec![0u8; 1 << 20];
    let mut lines = 0;
    loop {
        let n = file.read(&mut buf)?;
        if n == 0 {
            return Ok(lines);
        }
        lines += buf[..n].iter().filter(|&&b| b == b'\n').count();
    }
}

pub fn parse_dataset_with(
    source: impl Read,
    format: Format,
    interner: &Interner,
    row_hint: Option<usize>,
) -> Result<ParsedDataset, IngestError> {
    let mut out = ParsedDataset::default();
    if let Some(rows) = row_hint {
        out.records.reserve_exact(rows);
    }
    match format {
        Format::Csv => parse_csv(source, interner, &mut out)?,
        Format::Jsonl => parse_jsonl(source, interner, &mut out)?,
    }
    let dups = reject_duplicate_hashes(&mut out.records);
    out.rejected.extend(dups);
    out.rejected.sort_by_key(|r| r.line);
    Ok(out)
}

/// Keeps the first occurrence of every hash; later ones become rejects.
fn reject_duplicate_hashes(records: &mut Vec<TransactionRecord>) -> Vec<RejectedRow> {
    let mut seen: HashSet<&str, ahash::RandomState> =
        HashSet::with_capacity_and_hasher(records.len(), ahash::RandomState::new());
    let dup_flags: Vec<bool> = records.iter().map(|r| !seen.insert(r.hash())).collect();
    drop(seen);
    if !dup_flags.contains(&true) {
        return Vec::new();
    }
    let mut rejected = Vec::new();
    let mut flags = dup_flags.into_iter();
    records.retain(|r| {
        let dup = flags.next().unwrap_or(false);
        if dup {
            rejected.push(RejectedRow::new(
                0,
                Some(r.hash()),
                RecordError::DuplicateHash(r.hash().to_string()),
            ));
        }
        !dup
    });
    rejected
}

struct ColumnMap([Option<usize>; COLUMNS.len()]);

impl ColumnMap {
    fn from_header(header: &csv::ByteRecord) -> Self {
        let mut positions = [None; COLUMNS.len()];
        for (pos, name) in header.iter().enumerate() {
            let name = String::from_utf8_lossy(name);
            let name = name.trim().trim_start_matches('\u{feff}');
            if let Some(col) = COLUMNS.iter().position(|c| c.eq_ignore_ascii_case(name)) {
                positions[col].get_or_insert(pos);
            }
        }
        ColumnMap(positions)
    }

    fn raw<'r>(&self, row: &'r csv::ByteRecord) -> Result<RawRecord<'r>, RecordError> {
        let mut fields: [Option<Cow<'r, str>>; COLUMNS.len()] = Default::default();
        for (col, pos) in self.0.iter().enumerate() {
            if let Some(bytes) = pos.and_then(|p| row.get(p)) {
                let text = std::str::from_utf8(bytes).map_err(|_| RecordError::InvalidField {
                    field: COLUMNS[col],
                    value: String::from_utf8_lossy(bytes).into_owned(),
                })?;
                fields[col] = Some(Cow::Borrowed(text));
            }
        }
        let [hash, timestamp, sender, receiver, chain, dest_chain, token_in, token_out, value_in_usd, value_out_usd, kind, leg_count] =
            fields;
        Ok(RawRecord {
            hash,
            timestamp,
            sender,
            receiver,
            chain,
            dest_chain,
            token_in,
            token_out,
            value_in_usd,
            value_out_usd,
            kind,
            leg_count,
        })
    }
}

fn parse_csv(source: impl Read, interner: &Interner, out: &mut ParsedDataset) -> Result<(), IngestError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(source);
    let header = rdr.byte_headers()?.clone();
    if header.is_empty() {
        return Ok(());
    }
    let columns = ColumnMap::from_header(&header);

    let mut batch: Vec<csv::ByteRecord> = (0..BATCH_ROWS).map(|_| csv::ByteRecord::new()).collect();
    loop {
        let mut filled = 0;
        while filled < BATCH_ROWS {
            match rdr.read_byte_record(&mut batch[filled]) {
                Ok(true) => filled += 1,
                Ok(false) => break,
                Err(err) => return Err(err.into()),
            }
        }
        if filled == 0 {
            return Ok(());
        }
        let results: Vec<Result<TransactionRecord, RejectedRow>> = batch[..filled]
            .par_iter()
            .map(|row| {
                let line = row.position().map_or(0, |p| p.line());
                let raw = columns.raw(row).map_err(|e| RejectedRow::new(line, None, e))?;
                validate_record_with(&raw, interner)
                    .map_err(|e| RejectedRow::new(line, raw.hash.as_deref(), e))
            })
            .collect();
        absorb(results, out);
        if filled < BATCH_ROWS {
            return Ok(());
        }
    }
}

fn absorb(results: Vec<Result<TransactionRecord, RejectedRow>>, out: &mut ParsedDataset) {
    for result in results {
        match result {
            Ok(rec) => out.records.push(rec),
            Err(rej) => out.rejected.push(rej),
        }
    }
}

/// One JSON object per line. Numbers are accepted where strings are
/// expected and are read through their textual form.
#[derive(Deserialize, Default)]
struct JsonRow<'a> {
    #[serde(default, borrow, deserialize_with = "scalar")]
    hash: Option<Cow<'a, str>>,
    #[serde(default, borrow, deserialize_with = "scalar")]
    timestamp: Option<Cow<'a, str>>,
    #[serde(default, borrow, deserialize_with = "scalar")]
    sender: Option<Cow<'a, str>>,
    #[serde(default, borrow, deserialize_with = "scalar")]
    receiver: Option<Cow<'a, str>>,
    #[serde(default, borrow, deserialize_with = "scalar")]
    chain: Option<Cow<'a, str>>,
    #[serde(default, borrow, deserialize_with = "scalar")]
    dest_chain: Option<Cow<'a, str>>,
    #[serde(default, borrow, deserialize_with = "scalar")]
    token_in: Option<Cow<'a, str>>,
    #[serde(default, borrow, deserialize_with = "scalar")]
    token_out: Option<Cow<'a, str>>,
    #[serde(default, borrow, deserialize_with = "scalar")]
    value_in_usd: Option<Cow<'a, str>>,
    #[serde(default, borrow, deserialize_with = "scalar")]
    value_out_usd: Option<Cow<'a, str>>,
    #[serde(default, borrow, deserialize_with = "scalar")]
    kind: Option<Cow<'a, str>>,
    #[serde(default, borrow, deserialize_with = "scalar")]
    leg_count: Option<Cow<'a, str>>,
}

fn scalar<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Option<Cow<'de, str>>, D::Error> {
    struct ScalarVisitor;

    impl<'de> Visitor<'de> for ScalarVisitor {
        type Value = Option<Cow<'de, str>>;

        fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            f.write_str("a string, number or null")
        }
        fn visit_borrowed_str<E: de::Error>(self, v: &'de str) -> Result<Self::Value, E> {
            Ok(Some(Cow::Borrowed(v)))
        }
        fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
            Ok(Some(Cow::Owned(v.to_string())))
        }
        fn visit_string<E: de::Error>(self, v: String) -> Result<Self::Value, E> {
            Ok(Some(Cow::Owned(v)))
        }
        fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
            Ok(Some(Cow::Owned(v.to_string())))
        }
        fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
            Ok(Some(Cow::Owned(v.to_string())))
        }
        fn visit_f64<E: de::Error>(self, v: f64) -> Result<Self::Value, E> {
            Ok(Some(Cow::Owned(v.to_string())))
        }
        fn visit_unit<E: de::Error>(self) -> Result<Self::Value, E> {
            Ok(None)
        }
        fn visit_none<E: de::Error>(self) -> Result<Self::Value, E> {
            Ok(None)
        }
        fn visit_some<D: Deserializer<'de>>(self, d: D) -> Result<Self::Value, D::Error> {
            d.deserialize_any(ScalarVisitor)
        }
    }

    deserializer.deserialize_any(ScalarVisitor)
}

impl<'a> From<JsonRow<'a>> for RawRecord<'a> {
    fn from(row: JsonRow<'a>) -> Self {
        RawRecord {
            hash: row.hash,
            timestamp: row.timestamp,
            sender: row.sender,
            receiver: row.receiver,
            chain: row.chain,
            dest_chain: row.dest_chain,
            token_in: row.token_in,
            token_out: row.token_out,
            value_in_usd: row.value_in_usd,
            value_out_usd: row.value_out_usd,
            kind: row.kind,
            leg_count: row.leg_count,
        }
    }
}

fn parse_jsonl(source: impl Read, interner: &Interner, out: &mut ParsedDataset) -> Result<(), IngestError> {
    let mut reader = BufReader::new(source);
    let mut line_no: u64 = 0;
    let mut batch: Vec<(u64, String)> = Vec::with_capacity(BATCH_ROWS);
    loop {
        batch.clear();
        while batch.len() < BATCH_ROWS {
            let mut line = String::new();
            if reader.read_line(&mut line)? == 0 {
                break;
            }
            line_no += 1;
            if !line.trim().is_empty() {
                batch.push((line_no, line));
            }
        }
        if batch.is_empty() {
            return Ok(());
        }
        let results: Vec<Result<TransactionRecord, RejectedRow>> = batch
            .par_iter()
            .map(|(line, text)| {
                let row: JsonRow<'_> = serde_json::from_str(text.trim())
                    .map_err(|e| RejectedRow::new(*line, None, RecordError::Malformed(e.to_string())))?;
                let raw = RawRecord::from(row);
                validate_record_with(&raw, interner)
                    .map_err(|e| RejectedRow::new(*line, raw.hash.as_deref(), e))
            })
            .collect();
        absorb(results, out);
    }
}

/// Serialized form of one record, matching the input schema. Tokens are
/// written with their raw chain-local symbols.
#[derive(Debug, Serialize)]
pub struct RecordRow<'a> {
    pub hash: &'a str,
    pub timestamp: i64,
    pub sender: &'a str,
    pub receiver: &'a str,
    pub chain: &'a str,
    pub dest_chain: Option<&'a str>,
    pub token_in: &'a str,
    pub token_out: &'a str,
    pub value_in_usd: Usd,
    pub value_out_usd: Usd,
    pub kind: &'a str,
    pub leg_count: Option<u16>,
}

impl<'a> From<&'a TransactionRecord> for RecordRow<'a> {
    fn from(rec: &'a TransactionRecord) -> Self {
        RecordRow {
            hash: rec.hash(),
            timestamp: rec.timestamp(),
            sender: rec.sender(),
            receiver: rec.receiver(),
            chain: rec.chain().as_str(),
            dest_chain: rec.dest_chain().map(|c| c.as_str()),
            token_in: rec.token_in().native_chain_symbol(),
            token_out: rec.token_out().native_chain_symbol(),
            value_in_usd: rec.value_in_usd(),
            value_out_usd: rec.value_out_usd(),
            kind: rec.kind().as_str(),
            leg_count: rec.leg_count(),
        }
    }
}

/// Streaming writer for the dataset schema.
pub struct RecordWriter<W: Write> {
    inner: WriterInner<W>,
}

#[allow(clippy::large_enum_variant)]
enum WriterInner<W: Write> {
    Csv(csv::Writer<W>),
    Jsonl(W),
}

impl<W: Write> RecordWriter<W> {
    pub fn new(writer: W, format: Format) -> Result<Self, IngestError> {
        let inner = match format {
            Format::Csv => {
                let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
                w.write_record(COLUMNS)?;
                WriterInner::Csv(w)
            }
            Format::Jsonl => WriterInner::Jsonl(writer),
        };
        Ok(RecordWriter { inner })
    }

    pub fn write(&mut self, rec: &TransactionRecord) -> Result<(), IngestError> {
        let row = RecordRow::from(rec);
        match &mut self.inner {
            WriterInner::Csv(w) => w.serialize(row)?,
            WriterInner::Jsonl(w) => {
                serde_json::to_writer(&mut *w, &row)
                    .map_err(|e| IngestError::UnreadableSource(e.to_string()))?;
                w.write_all(b"\n")?;
            }
        }
        Ok(())
    }

    pub fn finish(self) -> Result<W, IngestError> {
        match self.inner {
            WriterInner::Csv(w) => w
                .into_inner()
                .map_err(|e| IngestError::UnreadableSource(e.to_string())),
            WriterInner::Jsonl(mut w) => {
                w.flush()?;
                Ok(w)
            }
        }
    }
}

pub fn write_records<'a, W: Write>(
    writer: W,
    format: Format,
    records: impl IntoIterator<Item = &'a TransactionRecord>,
) -> Result<W, IngestError> {
    let mut w = RecordWriter::new(writer, format)?;
    for rec in records {
        w.write(rec)?;
    }
    w.finish()
}

/// Drops swaps that touch more than two assets (aggregator or multi-path
/// routes, flagged by `leg_count > 1`). Bridges pass through.
pub fn filter_atomic_swaps(records: Vec<TransactionRecord>) -> Vec<TransactionRecord> {
    records.into_iter().filter(is_admissible).collect()
}

pub fn is_admissible(rec: &TransactionRecord) -> bool {
    !rec.is_swap() || rec.leg_count().is_none_or(|legs| legs <= 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::test_support::{bridge, swap};
    use crate::model::{Chain, RecordParts};

    const HEADER: &str = "hash,timestamp,sender,receiver,chain,dest_chain,token_in,token_out,value_in_usd,value_out_usd,kind,leg_count\n";

    #[test]
    fn well_formed_csv() {
        let data = format!(
            "{HEADER}0x1,100,0xa,0xa,base,,USDC,BAL,1000,1005,swap,\n\
             0x2,150,0xa,0xa,base,ethereum,BAL,BAL,1000,1000,bridge,\n\
             0x3,200,0xa,0xa,ethereum,,BAL,USDC,990,1032.78,swap,1\n"
        );
        let parsed = parse_dataset(data.as_bytes(), Format::Csv).unwrap();
        assert_eq!(parsed.records.len(), 3);
        assert!(parsed.rejected.is_empty());
        assert_eq!(parsed.records[2].value_out_usd(), Usd::from_cents(103_278));
        assert_eq!(parsed.records[2].leg_count(), Some(1));
    }

    #[test]
    fn missing_value_out_is_rejected_with_reason() {
        let data = format!("{HEADER}0x1,100,0xa,0xa,base,,USDC,BAL,1000,,swap,\n");
        let parsed = parse_dataset(data.as_bytes(), Format::Csv).unwrap();
        assert!(parsed.records.is_empty());
        assert_eq!(parsed.rejected.len(), 1);
        assert_eq!(parsed.rejected[0].error, RecordError::MissingField("value_out_usd"));
        assert_eq!(parsed.rejected[0].line, 2);
        assert_eq!(parsed.rejected[0].hash.as_deref(), Some("0x1"));
    }

    #[test]
    fn short_rows_and_missing_columns_are_rejects() {
        let data = "hash,timestamp,sender,receiver,chain,token_in,token_out,value_in_usd,value_out_usd,kind\n\
                    0x1,100,0xa,0xa,base,USDC,BAL,1,1,swap\n\
                    0x2,100,0xa\n";
        let parsed = parse_dataset(data.as_bytes(), Format::Csv).unwrap();
        assert_eq!(parsed.records.len(), 1);
        assert_eq!(parsed.rejected.len(), 1);
    }

    #[test]
    fn duplicate_hashes_keep_first() {
        let data = format!(
            "{HEADER}0x1,100,0xa,0xa,base,,USDC,BAL,1,1,swap,\n0x1,101,0xb,0xb,base,,USDC,BAL,1,1,swap,\n"
        );
        let parsed = parse_dataset(data.as_bytes(), Format::Csv).unwrap();
        assert_eq!(parsed.records.len(), 1);
        assert_eq!(parsed.records[0].sender(), "0xa");
        assert!(matches!(parsed.rejected[0].error, RecordError::DuplicateHash(_)));
    }

    #[test]
    fn empty_sources() {
        assert!(parse_dataset(&b""[..], Format::Csv).unwrap().records.is_empty());
        assert!(parse_dataset(HEADER.as_bytes(), Format::Csv).unwrap().records.is_empty());
        assert!(parse_dataset(&b""[..], Format::Jsonl).unwrap().records.is_empty());
    }

    #[test]
    fn jsonl_accepts_numbers_and_nulls() {
        let data = r#"{"hash":"0x1","timestamp":100,"sender":"0xa","receiver":"0xa","chain":"base","dest_chain":null,"token_in":"USDC","token_out":"BAL","value_in_usd":1000,"value_out_usd":"1005.5","kind":"swap"}

{"hash":"0x2","timestamp":"x"}
not json
"#;
        let parsed = parse_dataset(data.as_bytes(), Format::Jsonl).unwrap();
        assert_eq!(parsed.records.len(), 1);
        assert_eq!(parsed.records[0].value_out_usd(), Usd::from_micros(1_005_500_000));
        assert_eq!(parsed.rejected.len(), 2);
        assert_eq!(parsed.rejected[0].line, 3);
        assert!(matches!(parsed.rejected[1].error, RecordError::Malformed(_)));
    }

    #[test]
    fn unknown_format() {
        assert!(matches!("parquet".parse::<Format>(), Err(IngestError::UnknownFormat(_))));
        assert_eq!(Format::from_path(Path::new("a/b.JSONL")).unwrap(), Format::Jsonl);
    }

    #[test]
    fn write_then_parse_round_trips() {
        let recs = vec![
            swap("s", 10, "a", Chain::Base, "USDC", "BAL", 1000, 1005),
            bridge("b", 20, "a", "c", Chain::Base, Chain::Ethereum, "BAL", 1000, 1000),
        ];
        for format in [Format::Csv, Format::Jsonl] {
            let bytes = write_records(Vec::new(), format, &recs).unwrap();
            let parsed = parse_dataset(bytes.as_slice(), format).unwrap();
            assert_eq!(parsed.records, recs, "{format}");
        }
    }

    #[test]
    fn atomic_filter() {
        let mut aggregated = swap("s", 10, "a", Chain::Base, "USDC", "BAL", 1, 1).into_parts();
        aggregated.leg_count = Some(3);
        let aggregated = TransactionRecord::new(aggregated).unwrap();
        let plain = swap("p", 10, "a", Chain::Base, "USDC", "BAL", 1, 1);
        let mut b: RecordParts = bridge("b", 20, "a", "a", Chain::Base, Chain::Ethereum, "BAL", 1, 1).into_parts();
        b.leg_count = Some(4);
        let b = TransactionRecord::new(b).unwrap();
        let kept = filter_atomic_swaps(vec![aggregated, plain.clone(), b.clone()]);
        assert_eq!(kept, vec![plain, b]);
    }
}
