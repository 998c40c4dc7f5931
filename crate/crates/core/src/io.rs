//! File formats.
//!
//! * Datasets are CSV with a header of column names and one row per point. A
//!   final column named `label` holds integer labels.
//! * Merge trees export as CSV `merge_index,left,right,height`, where nodes
//!   `0..N` are leaves and node `N + k` is the `k`-th merge.
//! * Reports are JSON via serde.
//! * Config files are JSON or TOML; a `.toml` extension selects TOML.
//!
//! Reals are written in Rust's shortest round-trip form, so reading a file
//! back reproduces every value bit for bit.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Dataset, Merge, MergeTree};

pub const LABEL_COLUMN: &str = "label";

fn parse_cell<T: std::str::FromStr>(s: &str, row: usize, col: usize) -> Result<T> {
    s.trim().parse().map_err(|_| {
        Error::InvalidParameter(format!("row {row}, column {col}: cannot parse `{s}`"))
    })
}

pub fn read_dataset_csv<R: Read>(reader: R) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let mut names: Vec<String> = rdr
        .headers()?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let has_labels = names.len() > 1 && names.last().is_some_and(|n| n == LABEL_COLUMN);
    if has_labels {
        names.pop();
    }
    let m = names.len();
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (r, record) in rdr.records().enumerate() {
        let record = record?;
        let width = m + usize::from(has_labels);
        if record.len() != width {
            return Err(Error::Ragged {
                row: r,
                expected: width,
                found: record.len(),
            });
        }
        let row = (0..m)
            .map(|c| parse_cell::<f64>(&record[c], r, c))
            .collect::<Result<Vec<_>>>()?;
        if has_labels {
            let raw = &record[m];
            labels.push(raw.trim().parse::<i64>().map_err(|_| Error::InvalidLabel {
                row: r,
                value: raw.to_string(),
            })?);
        }
        rows.push(row);
    }
    Dataset::new(names, rows, has_labels.then_some(labels))
}

pub fn write_dataset_csv<W: Write>(ds: &Dataset, writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let mut header: Vec<&str> = ds.names().iter().map(String::as_str).collect();
    if ds.labels().is_some() {
        header.push(LABEL_COLUMN);
    }
    wtr.write_record(&header)?;
    for (r, row) in ds.rows().enumerate() {
        let mut record: Vec<String> = row.iter().map(f64::to_string).collect();
        if let Some(labels) = ds.labels() {
            record.push(labels[r].to_string());
        }
        wtr.write_record(&record)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    read_dataset_csv(BufReader::new(File::open(path)?))
}

pub fn write_dataset(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    write_dataset_csv(ds, BufWriter::new(File::create(path)?))
}

pub fn write_merges_csv<W: Write>(tree: &MergeTree, writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["merge_index", "left", "right", "height"])?;
    for (k, m) in tree.merges().iter().enumerate() {
        wtr.write_record([
            k.to_string(),
            m.left.to_string(),
            m.right.to_string(),
            m.height.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_merges_csv<R: Read>(reader: R) -> Result<Vec<Merge>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut merges = Vec::new();
    for (r, record) in rdr.records().enumerate() {
        let record = record?;
        let index: usize = parse_cell(&record[0], r, 0)?;
        if index != r {
            return Err(Error::InvalidTree(format!("merge {r} is numbered {index}")));
        }
        merges.push(Merge {
            left: parse_cell(&record[1], r, 1)?,
            right: parse_cell(&record[2], r, 2)?,
            height: parse_cell(&record[3], r, 3)?,
        });
    }
    Ok(merges)
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

pub fn write_json<T: Serialize>(value: &T, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
}

/// Loads a config document. Files ending in `.toml` are parsed as TOML,
/// everything else as JSON.
pub fn load_config<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_config(
        &text,
        path.extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("toml")),
    )
}

pub fn parse_config<T: DeserializeOwned>(text: &str, toml: bool) -> Result<T> {
    if toml {
        Ok(toml::from_str(text)?)
    } else {
        Ok(serde_json::from_str(text)?)
    }
}
