//! Binary portable pixmap (P6) output of labelled rasters.
//!
//! Palette:
//!
//! | label | colour |
//! |---|---|
//! | attracted basin `k` | `BASIN_COLORS[k % 4]` (blues) |
//! | drifting track `k` | `TRACK_COLORS[k % 6]` (greens) |
//! | pole-adjacent | `(220, 30, 30)` |
//! | Julia suspect | `(0, 0, 0)` |
//! | unresolved | `(128, 128, 128)` |
//!
//! The top image row is the top (largest imaginary part) of the window.

use std::path::Path;

use crate::dynamics::{PixelLabel, RasterGrid};
use crate::error::{Error, Result};
use crate::topology::ComponentMap;

pub const BASIN_COLORS: [[u8; 3]; 4] = [[40, 80, 200], [90, 150, 240], [20, 40, 130], [140, 190, 255]];
pub const TRACK_COLORS: [[u8; 3]; 6] =
    [[30, 160, 60], [120, 210, 100], [10, 100, 40], [170, 235, 140], [60, 190, 120], [0, 130, 90]];
pub const POLE_COLOR: [u8; 3] = [220, 30, 30];
pub const JULIA_COLOR: [u8; 3] = [0, 0, 0];
pub const UNRESOLVED_COLOR: [u8; 3] = [128, 128, 128];

pub fn label_color(label: PixelLabel) -> [u8; 3] {
    match label {
        PixelLabel::AttractedTo(k) => BASIN_COLORS[k as usize % BASIN_COLORS.len()],
        PixelLabel::Drifting(k) => TRACK_COLORS[k as usize % TRACK_COLORS.len()],
        PixelLabel::PoleAdjacent => POLE_COLOR,
        PixelLabel::JuliaSuspect => JULIA_COLOR,
        PixelLabel::Unresolved => UNRESOLVED_COLOR,
    }
}

/// Encodes the raster. `cm` must have been computed from `grid`.
pub fn encode_pixmap(grid: &RasterGrid, cm: &ComponentMap) -> Result<Vec<u8>> {
    if (grid.width, grid.height) != (cm.width, cm.height) || cm.labels.len() != grid.labels.len() {
        return Err(Error::Domain(format!(
            "grid is {}x{} but component map is {}x{}",
            grid.width, grid.height, cm.width, cm.height
        )));
    }
    let header = format!("P6\n{} {}\n255\n", grid.width, grid.height);
    let mut out = Vec::with_capacity(header.len() + 3 * grid.labels.len());
    out.extend_from_slice(header.as_bytes());
    for j in (0..grid.height).rev() {
        for i in 0..grid.width {
            out.extend_from_slice(&label_color(grid.label(i, j)));
        }
    }
    Ok(out)
}

pub fn render_pixmap(grid: &RasterGrid, cm: &ComponentMap, path: &Path) -> Result<()> {
    let bytes = encode_pixmap(grid, cm)?;
    std::fs::write(path, bytes)?;
    Ok(())
}
