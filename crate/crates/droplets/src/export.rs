//! Snapshot interchange formats: run-length-encoded JSON and
//! portable-bitmap rasters for droplets, polygon CSV for shapes.
//! Polygon CSV (one `x,y` pair per row) is the interchange format between
//! all modules and the CLI.

use crate::geometry::{PlanarShape, Point};
use crate::lattice::{DropletSet, Site};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u32),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub const RLE_VERSION: u32 = 1;

/// Run-length encoding of a droplet raster: per row, runs of minus sites as
/// `(start index, length)` pairs.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DropletRle {
    pub version: u32,
    pub half_width: i64,
    pub rows: Vec<RleRow>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RleRow {
    pub j: i64,
    pub runs: Vec<(i64, u32)>,
}

pub fn droplet_to_rle(d: &DropletSet) -> DropletRle {
    let l = d.half_width();
    let mut rows = Vec::new();
    for j in -l..l {
        let mut runs: Vec<(i64, u32)> = Vec::new();
        let mut open: Option<(i64, u32)> = None;
        for i in -l..l {
            if d.contains_site(Site::new(i, j)) {
                match &mut open {
                    Some((_, len)) => *len += 1,
                    None => open = Some((i, 1)),
                }
            } else if let Some(run) = open.take() {
                runs.push(run);
            }
        }
        if let Some(run) = open {
            runs.push(run);
        }
        if !runs.is_empty() {
            rows.push(RleRow { j, runs });
        }
    }
    DropletRle { version: RLE_VERSION, half_width: l, rows }
}

/// Minus sites of an RLE snapshot (the inverse of [`droplet_to_rle`] up to
/// reassembly into a configuration).
pub fn rle_minus_sites(rle: &DropletRle) -> Result<Vec<Site>, ExportError> {
    if rle.version != RLE_VERSION {
        return Err(ExportError::UnsupportedVersion(rle.version));
    }
    let l = rle.half_width;
    let mut sites = Vec::new();
    for row in &rle.rows {
        for &(start, len) in &row.runs {
            if start < -l || start + len as i64 > l || row.j < -l || row.j >= l {
                return Err(ExportError::Malformed(format!(
                    "run ({start},{len}) at row {} leaves the window",
                    row.j
                )));
            }
            for i in start..start + len as i64 {
                sites.push(Site::new(i, row.j));
            }
        }
    }
    Ok(sites)
}

pub fn write_rle_json<W: std::io::Write>(d: &DropletSet, w: W) -> Result<(), ExportError> {
    Ok(serde_json::to_writer_pretty(w, &droplet_to_rle(d))?)
}

pub fn read_rle_json<R: std::io::Read>(r: R) -> Result<DropletRle, ExportError> {
    let rle: DropletRle = serde_json::from_reader(r)?;
    if rle.version != RLE_VERSION {
        return Err(ExportError::UnsupportedVersion(rle.version));
    }
    Ok(rle)
}

/// Plain-text portable bitmap (P1): rows from the top of the window down,
/// `1` for a minus site.
pub fn droplet_to_pbm(d: &DropletSet) -> String {
    let l = d.half_width();
    let w = 2 * l;
    let mut out = String::with_capacity((w * (w + 1) + 32) as usize);
    out.push_str("P1\n");
    out.push_str(&format!("{w} {w}\n"));
    for j in (-l..l).rev() {
        for i in -l..l {
            out.push(if d.contains_site(Site::new(i, j)) { '1' } else { '0' });
            if i < l - 1 {
                out.push(' ');
            }
        }
        out.push('\n');
    }
    out
}

/// Polygon vertex list CSV: one `x,y` per row.
pub fn shape_to_csv(s: &PlanarShape) -> String {
    let mut out = String::new();
    for p in s.vertices() {
        out.push_str(&format!("{},{}\n", p.x, p.y));
    }
    out
}

pub fn shape_from_csv(text: &str) -> Result<PlanarShape, ExportError> {
    let mut pts = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split(',');
        let parse = |tok: Option<&str>| -> Result<f64, ExportError> {
            tok.ok_or_else(|| ExportError::Malformed(format!("line {}", lineno + 1)))?
                .trim()
                .parse::<f64>()
                .map_err(|e| ExportError::Malformed(format!("line {}: {e}", lineno + 1)))
        };
        let x = parse(it.next())?;
        let y = parse(it.next())?;
        pts.push(Point::new(x, y));
    }
    Ok(PlanarShape::new(pts))
}
