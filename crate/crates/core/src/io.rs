//! Import/export of sampled torus functions and spectra.
//!
//! # Binary grid layout (little-endian throughout)
//!
//! | offset | size        | field                                   |
//! |--------|-------------|-----------------------------------------|
//! | 0      | 4           | rank, `u32`                             |
//! | 4      | 4           | grid size `N` per axis, `u32`           |
//! | 8      | 8           | first-node offset, `f64` (always -0.5)  |
//! | 16     | 16 * N^rank | samples, `(re: f64, im: f64)` pairs     |
//!
//! Samples are in row-major flat order with axis 0 slowest, matching
//! [`TorusGrid`] flat indexing; node `j` of an axis sits at `j/N - 1/2`.
//! Round-trips are bit-exact.
//!
//! # CSV grid layout
//!
//! A comment header `# torus-grid rank=<r> n=<N> offset=-0.5`, one column
//! header `index,re,im`, then one row per flat index. Floats are printed
//! with the shortest representation that parses back to the same bits, so
//! CSV round-trips are bit-exact as well.
//!
//! # Spectrum JSON
//!
//! `{"cutoff": c, "entries": [{"lambda": [...], "gamma": [re, im],
//! "dim": d}, ...]}` with entries sorted by weight, suitable for golden
//! comparisons.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectral::CentralSpectrum;
use crate::torus::{GridFunction, TorusGrid};

/// The only node alignment this library produces or accepts.
pub const GRID_OFFSET: f64 = -0.5;

/// Writes a sampled grid function in the documented binary layout.
pub fn write_grid_binary(path: &Path, g: &GridFunction) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let grid = g.grid();
    w.write_all(&(grid.rank() as u32).to_le_bytes())?;
    w.write_all(&(grid.n() as u32).to_le_bytes())?;
    w.write_all(&GRID_OFFSET.to_le_bytes())?;
    for v in g.values() {
        w.write_all(&v.re.to_le_bytes())?;
        w.write_all(&v.im.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a sampled grid function from the documented binary layout.
pub fn read_grid_binary(path: &Path) -> Result<GridFunction> {
    let mut r = BufReader::new(File::open(path)?);
    let mut u32buf = [0u8; 4];
    let mut f64buf = [0u8; 8];
    r.read_exact(&mut u32buf)
        .map_err(|_| Error::Format("truncated header".into()))?;
    let rank = u32::from_le_bytes(u32buf) as usize;
    r.read_exact(&mut u32buf)
        .map_err(|_| Error::Format("truncated header".into()))?;
    let n = u32::from_le_bytes(u32buf) as usize;
    r.read_exact(&mut f64buf)
        .map_err(|_| Error::Format("truncated header".into()))?;
    let offset = f64::from_le_bytes(f64buf);
    if offset != GRID_OFFSET {
        return Err(Error::Format(format!(
            "unsupported node offset {offset}; this library uses {GRID_OFFSET}"
        )));
    }
    let grid = TorusGrid::new(rank, n)?;
    let total = grid.total();
    let mut values = Vec::with_capacity(total);
    for _ in 0..total {
        r.read_exact(&mut f64buf)
            .map_err(|_| Error::Format("truncated sample data".into()))?;
        let re = f64::from_le_bytes(f64buf);
        r.read_exact(&mut f64buf)
            .map_err(|_| Error::Format("truncated sample data".into()))?;
        let im = f64::from_le_bytes(f64buf);
        values.push(Complex64::new(re, im));
    }
    if r.read(&mut f64buf)? != 0 {
        return Err(Error::Format("trailing bytes after sample data".into()));
    }
    GridFunction::from_values(grid, values)
}

/// Writes a sampled grid function as CSV with a self-describing header.
pub fn write_grid_csv(path: &Path, g: &GridFunction) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let grid = g.grid();
    writeln!(
        w,
        "# torus-grid rank={} n={} offset={}",
        grid.rank(),
        grid.n(),
        GRID_OFFSET
    )?;
    writeln!(w, "index,re,im")?;
    for (i, v) in g.values().iter().enumerate() {
        writeln!(w, "{i},{},{}", v.re, v.im)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a sampled grid function from the CSV layout.
pub fn read_grid_csv(path: &Path) -> Result<GridFunction> {
    let r = BufReader::new(File::open(path)?);
    let mut rank: Option<usize> = None;
    let mut n: Option<usize> = None;
    let mut values: Vec<Complex64> = Vec::new();
    for line in r.lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            for token in rest.split_whitespace() {
                if let Some(v) = token.strip_prefix("rank=") {
                    rank = Some(
                        v.parse()
                            .map_err(|_| Error::Format(format!("bad rank `{v}`")))?,
                    );
                } else if let Some(v) = token.strip_prefix("n=") {
                    n = Some(
                        v.parse()
                            .map_err(|_| Error::Format(format!("bad grid size `{v}`")))?,
                    );
                } else if let Some(v) = token.strip_prefix("offset=") {
                    let off: f64 = v
                        .parse()
                        .map_err(|_| Error::Format(format!("bad offset `{v}`")))?;
                    if off != GRID_OFFSET {
                        return Err(Error::Format(format!(
                            "unsupported node offset {off}; this library uses {GRID_OFFSET}"
                        )));
                    }
                }
            }
            continue;
        }
        if line.starts_with("index,") {
            continue;
        }
        let mut parts = line.split(',');
        let idx: usize = parts
            .next()
            .ok_or_else(|| Error::Format("missing index column".into()))?
            .trim()
            .parse()
            .map_err(|_| Error::Format(format!("bad row `{line}`")))?;
        if idx != values.len() {
            return Err(Error::Format(format!(
                "rows out of order: expected index {}, found {idx}",
                values.len()
            )));
        }
        let re: f64 = parts
            .next()
            .ok_or_else(|| Error::Format("missing re column".into()))?
            .trim()
            .parse()
            .map_err(|_| Error::Format(format!("bad row `{line}`")))?;
        let im: f64 = parts
            .next()
            .ok_or_else(|| Error::Format("missing im column".into()))?
            .trim()
            .parse()
            .map_err(|_| Error::Format(format!("bad row `{line}`")))?;
        values.push(Complex64::new(re, im));
    }
    let rank = rank.ok_or_else(|| Error::Format("missing rank in CSV header".into()))?;
    let n = n.ok_or_else(|| Error::Format("missing grid size in CSV header".into()))?;
    let grid = TorusGrid::new(rank, n)?;
    if values.len() != grid.total() {
        return Err(Error::Format(format!(
            "expected {} rows, found {}",
            grid.total(),
            values.len()
        )));
    }
    GridFunction::from_values(grid, values)
}

#[derive(Serialize)]
struct SpectrumEntryOut<'a> {
    lambda: &'a [i64],
    gamma: [f64; 2],
    dim: u64,
}

#[derive(Serialize)]
struct SpectrumOut<'a> {
    cutoff: f64,
    entries: Vec<SpectrumEntryOut<'a>>,
}

/// Serializes a central spectrum to a stable JSON value (entries sorted by
/// weight; `gamma` as an `[re, im]` pair).
pub fn spectrum_to_json(spectrum: &CentralSpectrum) -> Result<serde_json::Value> {
    let mut refs: Vec<&crate::spectral::CentralCoefficient> =
        spectrum.entries.iter().collect();
    refs.sort_by(|a, b| a.lambda.cmp(&b.lambda));
    let entries = refs
        .into_iter()
        .map(|e| {
            let dim = u64::try_from(e.dim)
                .map_err(|_| Error::Internal("dimension exceeds u64".into()))?;
            Ok(SpectrumEntryOut {
                lambda: &e.lambda,
                gamma: [e.gamma.re, e.gamma.im],
                dim,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let out = SpectrumOut {
        cutoff: spectrum.cutoff,
        entries,
    };
    serde_json::to_value(&out).map_err(|e| Error::Internal(format!("json: {e}")))
}

/// Writes a central spectrum as pretty-printed JSON plus a trailing newline.
pub fn write_spectrum_json(path: &Path, spectrum: &CentralSpectrum) -> Result<()> {
    let value = spectrum_to_json(spectrum)?;
    let mut w = BufWriter::new(File::create(path)?);
    let text = serde_json::to_string_pretty(&value)
        .map_err(|e| Error::Internal(format!("json: {e}")))?;
    w.write_all(text.as_bytes())?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}
