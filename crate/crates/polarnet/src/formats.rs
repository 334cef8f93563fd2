//! Input and output file formats.
//!
//! * Edges: UTF-8 TSV, `retweeted_id <TAB> retweeter_id [<TAB> count]`,
//!   `#` comment lines, count defaults to 1.
//! * Followership: CSV with header `account_id,<medium>,...` and 0/1 cells.
//! * Tweets: JSON lines `{"account", "utc": "YYYY-MM-DDThh:mm:ssZ", "text"}`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use chrono::{DateTime, NaiveDateTime};
use polarnet_core::text::TweetRecord;
use polarnet_core::{EdgeRecord, FollowershipMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TIMESTAMP: &str = "%Y-%m-%dT%H:%M:%SZ";

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::io(path, e))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.position() {
        Some(pos) => Error::parse(path, pos.line(), e.to_string()),
        None => Error::parse(path, 0, e.to_string()),
    }
}

pub fn parse_edges(path: &Path) -> Result<Vec<EdgeRecord>> {
    read_edges(BufReader::new(open(path)?), path)
}

/// `path` only labels errors. Blank lines are skipped like comments.
pub fn read_edges<R: BufRead>(reader: R, path: &Path) -> Result<Vec<EdgeRecord>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i as u64 + 1;
        let line = line.map_err(|e| Error::parse(path, line_no, e.to_string()))?;
        let line = line.trim_end_matches('\r');
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let (target, source, count) = match fields.as_slice() {
            [t, s] => (*t, *s, None),
            [t, s, c] => (*t, *s, Some(*c)),
            _ => {
                return Err(Error::parse(
                    path,
                    line_no,
                    format!("expected `retweeted_id<TAB>retweeter_id[<TAB>count]`, found {} fields", fields.len()),
                ))
            }
        };
        if target.is_empty() || source.is_empty() {
            return Err(Error::parse(path, line_no, "empty account id"));
        }
        let count = match count.map(|c| c.trim().parse::<u64>().map_err(|_| c)) {
            None => 1,
            Some(Ok(0)) => return Err(Error::parse(path, line_no, "retweet count must be at least 1")),
            Some(Ok(n)) => n,
            Some(Err(c)) => return Err(Error::parse(path, line_no, format!("invalid retweet count `{c}`"))),
        };
        out.push(EdgeRecord::new(target, source, count));
    }
    Ok(out)
}

/// Parsed followership with the accounts whose rows were all zero.
#[derive(Debug, Clone)]
pub struct Followership {
    pub matrix: FollowershipMatrix,
    pub dropped: Vec<String>,
}

pub fn parse_followership(path: &Path) -> Result<Followership> {
    read_followership(open(path)?, path)
}

pub fn read_followership<R: Read>(reader: R, path: &Path) -> Result<Followership> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers().map_err(|e| csv_error(path, e))?.clone();
    if header.get(0) != Some("account_id") {
        return Err(Error::parse(path, 1, "header must start with `account_id`"));
    }
    let media: Vec<String> = header.iter().skip(1).map(String::from).collect();
    if media.is_empty() {
        return Err(Error::parse(path, 1, "no media columns"));
    }
    let (mut accounts, mut rows, mut dropped) = (Vec::new(), Vec::new(), Vec::new());
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let line = rec.position().map_or(0, |p| p.line());
        let account = &rec[0];
        if account.is_empty() {
            return Err(Error::parse(path, line, "empty account id"));
        }
        let row = rec
            .iter()
            .skip(1)
            .zip(&media)
            .map(|(cell, medium)| match cell {
                "0" => Ok(false),
                "1" => Ok(true),
                other => Err(Error::parse(path, line, format!("column `{medium}`: expected 0 or 1, found `{other}`"))),
            })
            .collect::<Result<Vec<bool>>>()?;
        if row.iter().any(|&x| x) {
            accounts.push(account.to_string());
            rows.push(row);
        } else {
            dropped.push(account.to_string());
        }
    }
    let matrix = FollowershipMatrix::new(accounts, media, rows)?;
    Ok(Followership { matrix, dropped })
}

#[derive(Deserialize, Serialize)]
struct TweetLine<'a> {
    account: std::borrow::Cow<'a, str>,
    utc: std::borrow::Cow<'a, str>,
    text: std::borrow::Cow<'a, str>,
}

pub fn parse_timestamp(s: &str) -> Option<i64> {
    NaiveDateTime::parse_from_str(s, TIMESTAMP)
        .ok()
        .map(|t| t.and_utc().timestamp())
}

pub fn format_timestamp(utc: i64) -> String {
    DateTime::from_timestamp(utc, 0)
        .map(|t| t.format(TIMESTAMP).to_string())
        .unwrap_or_default()
}

pub fn parse_tweets(path: &Path) -> Result<Vec<TweetRecord>> {
    read_tweets(BufReader::new(open(path)?), path)
}

pub fn read_tweets<R: BufRead>(reader: R, path: &Path) -> Result<Vec<TweetRecord>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let n = i as u64 + 1;
        let line = line.map_err(|e| Error::parse(path, n, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let t: TweetLine = serde_json::from_str(&line).map_err(|e| Error::parse(path, n, e.to_string()))?;
        let utc = parse_timestamp(&t.utc)
            .ok_or_else(|| Error::parse(path, n, format!("bad timestamp `{}`, expected YYYY-MM-DDThh:mm:ssZ", t.utc)))?;
        if t.text.is_empty() {
            return Err(Error::parse(path, n, "empty tweet text"));
        }
        if t.account.is_empty() {
            return Err(Error::parse(path, n, "empty account id"));
        }
        out.push(TweetRecord::new(t.account, utc, t.text));
    }
    Ok(out)
}

pub fn write_edges(path: &Path, records: &[EdgeRecord]) -> Result<()> {
    let mut w = create(path)?;
    let mut body = String::from("# retweeted_id\tretweeter_id\tcount\n");
    for r in records {
        body.push_str(&format!("{}\t{}\t{}\n", r.target, r.source, r.count));
    }
    w.write_all(body.as_bytes()).and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

pub fn write_followership(path: &Path, accounts: &[String], media: &[String], rows: &[Vec<bool>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    let wrap = |e: csv::Error| Error::io(path, e.into());
    w.write_record(std::iter::once("account_id").chain(media.iter().map(String::as_str)))
        .map_err(wrap)?;
    for (account, row) in accounts.iter().zip(rows) {
        w.write_record(std::iter::once(account.as_str()).chain(row.iter().map(|&x| if x { "1" } else { "0" })))
            .map_err(wrap)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_tweets(path: &Path, tweets: &[TweetRecord]) -> Result<()> {
    let mut w = create(path)?;
    for t in tweets {
        let line = TweetLine {
            account: t.account.as_str().into(),
            utc: format_timestamp(t.utc).into(),
            text: t.text.as_str().into(),
        };
        let json = serde_json::to_string(&line).expect("tweet serializes");
        writeln!(w, "{json}").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
