//! The result store: one CSV row per (run, metric).
//!
//! While an experiment runs, finished cells are appended to a journal next to
//! the results file so an interrupted run loses at most the cells in flight.
//! When the matrix completes, journal and results are merged, sorted by cell
//! identity and written atomically, which makes the final file independent of
//! scheduling order.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use crate::format::store_value;

pub const RESULTS_FILE: &str = "results.csv";
pub const JOURNAL_FILE: &str = "results.csv.partial";
pub const HEADER: [&str; 10] = [
    "problem",
    "M",
    "algorithm",
    "cht_mode",
    "seed",
    "metric",
    "value",
    "failed",
    "evals",
    "wall_ms",
];

/// Identity of one independent run.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellKey {
    pub problem: String,
    pub m: usize,
    pub algorithm: String,
    pub cht_mode: String,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub cell: CellKey,
    pub metric: String,
    pub value: f64,
    pub failed: bool,
    pub evals: u64,
    pub wall_ms: u64,
}

impl Record {
    fn fields(&self) -> [String; 10] {
        let c = &self.cell;
        [
            c.problem.clone(),
            c.m.to_string(),
            c.algorithm.clone(),
            c.cht_mode.clone(),
            c.seed.to_string(),
            self.metric.clone(),
            store_value(self.value),
            self.failed.to_string(),
            self.evals.to_string(),
            self.wall_ms.to_string(),
        ]
    }

    fn from_fields(row: &csv::StringRecord) -> Option<Self> {
        if row.len() != HEADER.len() {
            return None;
        }
        Some(Self {
            cell: CellKey {
                problem: row[0].to_string(),
                m: row[1].parse().ok()?,
                algorithm: row[2].to_string(),
                cht_mode: row[3].to_string(),
                seed: row[4].parse().ok()?,
            },
            metric: row[5].to_string(),
            value: row[6].parse().ok()?,
            failed: row[7].parse().ok()?,
            evals: row[8].parse().ok()?,
            wall_ms: row[9].parse().ok()?,
        })
    }
}

type RowKey = (CellKey, String);

/// All records of an output directory, keyed by cell and metric.
#[derive(Clone, Debug, Default)]
pub struct ResultStore {
    rows: BTreeMap<RowKey, Record>,
}

impl ResultStore {
    /// Loads the results file and any journal left by an interrupted run.
    /// Rows that do not parse (a line cut short by a crash) are skipped.
    pub fn load(dir: &Path) -> Result<Self> {
        let mut store = Self::default();
        for name in [RESULTS_FILE, JOURNAL_FILE] {
            let path = dir.join(name);
            if path.exists() {
                store.read_file(&path)?;
            }
        }
        Ok(store)
    }

    fn read_file(&mut self, path: &Path) -> Result<()> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .from_path(path)
            .with_context(|| format!("opening {}", path.display()))?;
        for row in reader.records() {
            let Ok(row) = row else { continue };
            if let Some(record) = Record::from_fields(&row) {
                self.insert(record);
            }
        }
        Ok(())
    }

    pub fn insert(&mut self, record: Record) {
        self.rows
            .insert((record.cell.clone(), record.metric.clone()), record);
    }

    pub fn contains(&self, cell: &CellKey, metric: &str) -> bool {
        self.rows.contains_key(&(cell.clone(), metric.to_string()))
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn records(&self) -> impl Iterator<Item = &Record> {
        self.rows.values()
    }

    /// Writes the sorted results file atomically and drops the journal.
    pub fn save(&self, dir: &Path) -> Result<PathBuf> {
        fs::create_dir_all(dir)?;
        let path = dir.join(RESULTS_FILE);
        let tmp = dir.join(format!(".{RESULTS_FILE}.{}.tmp", std::process::id()));
        {
            let mut w = csv::Writer::from_writer(BufWriter::new(File::create(&tmp)?));
            w.write_record(HEADER)?;
            for r in self.rows.values() {
                w.write_record(r.fields())?;
            }
            w.flush()?;
        }
        fs::rename(&tmp, &path).with_context(|| format!("replacing {}", path.display()))?;
        let journal = dir.join(JOURNAL_FILE);
        if journal.exists() {
            fs::remove_file(journal)?;
        }
        Ok(path)
    }
}

/// Append-only log of finished cells.
pub struct Journal {
    writer: csv::Writer<File>,
}

impl Journal {
    pub fn open(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        let path = dir.join(JOURNAL_FILE);
        let fresh = !path.exists() || fs::metadata(&path)?.len() == 0;
        let mut file = OpenOptions::new().create(true).append(true).open(&path)?;
        if !fresh {
            // a crash can leave a half-written last line; start on a clean one
            file.write_all(b"\n")?;
        }
        let mut writer = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(file);
        if fresh {
            writer.write_record(HEADER)?;
        }
        writer.flush()?;
        Ok(Self { writer })
    }

    /// Appends the records of one cell and flushes them to disk.
    pub fn append(&mut self, records: &[Record]) -> Result<()> {
        for r in records {
            self.writer.write_record(r.fields())?;
        }
        self.writer.flush()?;
        Ok(())
    }
}
