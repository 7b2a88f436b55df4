//! Range sharding with ordered merges and resumable checkpoints.
//!
//! Work is cut into fixed ranges that never straddle a reporting cutoff.
//! Shards run in parallel batches but are merged strictly in order, so the
//! result depends only on the shard plan, never on the worker count or on
//! where a run was interrupted.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

/// Inclusive range `lo..=hi`; `cutoff` is set when a report row follows it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shard {
    pub lo: u64,
    pub hi: u64,
    pub cutoff: Option<u64>,
}

/// Splits `start..=last` at each cutoff and into pieces of at most `size`.
pub fn plan(start: u64, cutoffs: &[u64], size: u64) -> Vec<Shard> {
    let mut out = Vec::new();
    let mut lo = start;
    for &c in cutoffs {
        while lo <= c {
            let hi = c.min(lo.saturating_add(size - 1));
            out.push(Shard { lo, hi, cutoff: (hi == c).then_some(c) });
            lo = hi + 1;
        }
    }
    out
}

pub trait Accumulator: Default {
    type Part: Send;
    fn absorb(&mut self, part: Self::Part);
    fn encode(&self) -> String;
    fn decode(s: &str) -> Option<Self>;
}

/// Hex SHA-256 of the canonical job description.
pub fn config_hash(canonical: &str) -> String {
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

#[derive(Debug, Clone, PartialEq)]
struct State {
    hash: String,
    next: usize,
    acc: String,
    rows: Vec<String>,
}

impl State {
    fn render(&self) -> String {
        let mut s = format!("config={}\nnext={}\nacc={}\n", self.hash, self.next, self.acc);
        for r in &self.rows {
            let _ = writeln!(s, "row={r}");
        }
        s
    }

    fn parse(text: &str) -> Option<State> {
        let mut st = State { hash: String::new(), next: 0, acc: String::new(), rows: Vec::new() };
        for line in text.lines() {
            let (k, v) = line.split_once('=')?;
            match k {
                "config" => st.hash = v.to_string(),
                "next" => st.next = v.parse().ok()?,
                "acc" => st.acc = v.to_string(),
                "row" => st.rows.push(v.to_string()),
                _ => return None,
            }
        }
        (!st.hash.is_empty()).then_some(st)
    }
}

pub struct Runner {
    pub hash: String,
    pub checkpoint: Option<PathBuf>,
    pub workers: usize,
    pub max_shards: Option<usize>,
}

/// Atomically replaces `path` with `contents`.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents).map_err(CliError::io(&tmp))?;
    fs::rename(&tmp, path).map_err(CliError::io(path))
}

impl Runner {
    fn load(&self) -> CliResult<Option<State>> {
        let Some(path) = &self.checkpoint else { return Ok(None) };
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(CliError::Io { path: path.clone(), source: e }),
        };
        let st =
            State::parse(&text).ok_or_else(|| CliError::Config(format!("unreadable checkpoint {}", path.display())))?;
        if st.hash != self.hash {
            return Err(CliError::Config(format!(
                "checkpoint {} belongs to a different configuration; remove it to start over",
                path.display()
            )));
        }
        Ok(Some(st))
    }

    /// Runs every shard, returning one row per cutoff. A checkpoint is
    /// written after each batch and removed on completion.
    pub fn run<A, F, R>(&self, shards: &[Shard], compute: F, row: R) -> CliResult<Vec<String>>
    where
        A: Accumulator,
        F: Fn(&Shard) -> A::Part + Sync,
        R: Fn(u64, &A) -> String,
    {
        let (mut next, mut acc, mut rows) = match self.load()? {
            Some(st) => {
                let acc =
                    A::decode(&st.acc).ok_or_else(|| CliError::Config("corrupt checkpoint accumulator".into()))?;
                (st.next, acc, st.rows)
            }
            None => (0, A::default(), Vec::new()),
        };
        if next > shards.len() {
            return Err(CliError::Config("checkpoint is past the end of the shard plan".into()));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
        let batch = self.workers.max(1) * 2;
        let mut done = 0;
        while next < shards.len() {
            if self.max_shards.is_some_and(|m| done >= m) {
                let checkpoint = self.checkpoint.clone().unwrap_or_default();
                return Err(CliError::Interrupted { done, checkpoint });
            }
            let mut end = (next + batch).min(shards.len());
            if let Some(m) = self.max_shards {
                end = end.min(next + m - done);
            }
            let parts: Vec<A::Part> = pool.install(|| shards[next..end].par_iter().map(&compute).collect());
            for (shard, part) in shards[next..end].iter().zip(parts) {
                acc.absorb(part);
                if let Some(c) = shard.cutoff {
                    rows.push(row(c, &acc));
                }
            }
            done += end - next;
            next = end;
            if let Some(path) = &self.checkpoint {
                let st = State { hash: self.hash.clone(), next, acc: acc.encode(), rows: rows.clone() };
                write_atomic(path, &st.render())?;
            }
        }
        if let Some(path) = &self.checkpoint {
            if path.exists() {
                fs::remove_file(path).map_err(CliError::io(path))?;
            }
        }
        Ok(rows)
    }
}
