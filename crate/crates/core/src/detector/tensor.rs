//! Dense heatmap/offset/fov grids and their binary container.
//!
//! Container layout, all little-endian:
//!
//! ```text
//! b"SPHM"  u32 W  u32 H  u32 C  u32 flags
//! f64 scores [C][H][W]   f64 offsets [2][H][W]   f64 fovs [2][H][W]
//! ```
//!
//! Flag bit 0 set means the scores were splatted in squared-distance mode.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::DetectorError;
use crate::criteria::ErpImageSpec;

const MAGIC: &[u8; 4] = b"SPHM";
const FLAG_SQUARED: u32 = 1;

/// Exponent used when splatting ground-truth scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum HeatmapMode {
    /// `exp(−d / 2σ²)` with the geodesic distance `d` itself in the exponent.
    #[default]
    AsPrinted,
    /// `exp(−d² / 2σ²)`, the usual Gaussian.
    Squared,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeatmapTensor {
    spec: ErpImageSpec,
    num_classes: usize,
    mode: HeatmapMode,
    scores: Vec<f64>,
    offsets: Vec<f64>,
    fovs: Vec<f64>,
}

impl HeatmapTensor {
    pub fn zeros(spec: ErpImageSpec, num_classes: usize, mode: HeatmapMode) -> Self {
        let plane = spec.pixel_count();
        Self {
            spec,
            num_classes,
            mode,
            scores: vec![0.0; plane * num_classes],
            offsets: vec![0.0; plane * 2],
            fovs: vec![0.0; plane * 2],
        }
    }

    pub fn spec(&self) -> ErpImageSpec {
        self.spec
    }
    pub fn num_classes(&self) -> usize {
        self.num_classes
    }
    pub fn mode(&self) -> HeatmapMode {
        self.mode
    }

    #[inline]
    fn cell(&self, x: usize, y: usize) -> usize {
        debug_assert!(x < self.spec.width && y < self.spec.height);
        y * self.spec.width + x
    }

    #[inline]
    pub fn score(&self, c: usize, x: usize, y: usize) -> f64 {
        self.scores[c * self.spec.pixel_count() + self.cell(x, y)]
    }

    #[inline]
    pub fn set_score(&mut self, c: usize, x: usize, y: usize, v: f64) {
        let i = c * self.spec.pixel_count() + self.cell(x, y);
        self.scores[i] = v;
    }

    /// Scores of class `c` as a row-major `H × W` slice.
    pub fn class_plane(&self, c: usize) -> &[f64] {
        let n = self.spec.pixel_count();
        &self.scores[c * n..(c + 1) * n]
    }

    pub(crate) fn class_plane_mut(&mut self, c: usize) -> &mut [f64] {
        let n = self.spec.pixel_count();
        &mut self.scores[c * n..(c + 1) * n]
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    /// `(Δθ, Δφ)` stored at a cell.
    pub fn offset(&self, x: usize, y: usize) -> (f64, f64) {
        let (i, n) = (self.cell(x, y), self.spec.pixel_count());
        (self.offsets[i], self.offsets[n + i])
    }

    pub fn set_offset(&mut self, x: usize, y: usize, d: (f64, f64)) {
        let (i, n) = (self.cell(x, y), self.spec.pixel_count());
        self.offsets[i] = d.0;
        self.offsets[n + i] = d.1;
    }

    /// `(α, β)` stored at a cell.
    pub fn fov(&self, x: usize, y: usize) -> (f64, f64) {
        let (i, n) = (self.cell(x, y), self.spec.pixel_count());
        (self.fovs[i], self.fovs[n + i])
    }

    pub fn set_fov(&mut self, x: usize, y: usize, f: (f64, f64)) {
        let (i, n) = (self.cell(x, y), self.spec.pixel_count());
        self.fovs[i] = f.0;
        self.fovs[n + i] = f.1;
    }

    /// Copy with every plane rotated `k` columns to the right (θ increases
    /// by `k·2π/W`).
    pub fn roll_columns(&self, k: usize) -> Self {
        let w = self.spec.width;
        let k = k % w;
        let roll = |v: &[f64]| {
            let mut out = vec![0.0; v.len()];
            for (row_in, row_out) in v.chunks(w).zip(out.chunks_mut(w)) {
                row_out[k..].copy_from_slice(&row_in[..w - k]);
                row_out[..k].copy_from_slice(&row_in[w - k..]);
            }
            out
        };
        Self {
            spec: self.spec,
            num_classes: self.num_classes,
            mode: self.mode,
            scores: roll(&self.scores),
            offsets: roll(&self.offsets),
            fovs: roll(&self.fovs),
        }
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<(), DetectorError> {
        w.write_all(MAGIC)?;
        let flags = match self.mode {
            HeatmapMode::AsPrinted => 0,
            HeatmapMode::Squared => FLAG_SQUARED,
        };
        for v in [self.spec.width as u32, self.spec.height as u32, self.num_classes as u32, flags] {
            w.write_all(&v.to_le_bytes())?;
        }
        for plane in [&self.scores, &self.offsets, &self.fovs] {
            for v in plane.iter() {
                w.write_all(&v.to_le_bytes())?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self, DetectorError> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(DetectorError::Format("missing SPHM magic".into()));
        }
        let mut u32s = [0u32; 4];
        for v in u32s.iter_mut() {
            let mut b = [0u8; 4];
            r.read_exact(&mut b)?;
            *v = u32::from_le_bytes(b);
        }
        let [w, h, c, flags] = u32s;
        let spec = ErpImageSpec::new(w as usize, h as usize)
            .map_err(|e| DetectorError::Format(e.to_string()))?;
        if flags & !FLAG_SQUARED != 0 {
            return Err(DetectorError::Format(format!("unknown flags {flags:#x}")));
        }
        let mode = if flags & FLAG_SQUARED != 0 {
            HeatmapMode::Squared
        } else {
            HeatmapMode::AsPrinted
        };
        let mut t = HeatmapTensor::zeros(spec, c as usize, mode);
        let mut b = [0u8; 8];
        for plane in [&mut t.scores, &mut t.offsets, &mut t.fovs] {
            for v in plane.iter_mut() {
                r.read_exact(&mut b)?;
                *v = f64::from_le_bytes(b);
            }
        }
        let mut rest = [0u8; 1];
        if r.read(&mut rest)? != 0 {
            return Err(DetectorError::Format("trailing bytes after tensor".into()));
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> HeatmapTensor {
        let mut t = HeatmapTensor::zeros(ErpImageSpec::new(8, 4).unwrap(), 2, HeatmapMode::Squared);
        t.set_score(1, 7, 2, 0.75);
        t.set_offset(7, 2, (0.01, 0.02));
        t.set_fov(7, 2, (0.5, 0.4));
        t
    }

    #[test]
    fn binary_round_trip_is_exact() {
        let t = sample();
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        assert_eq!(buf.len(), 20 + 8 * 32 * (2 + 2 + 2));
        assert_eq!(&buf[..4], b"SPHM");
        assert_eq!(u32::from_le_bytes(buf[16..20].try_into().unwrap()), 1);
        assert_eq!(HeatmapTensor::read_from(buf.as_slice()).unwrap(), t);
    }

    #[test]
    fn rejects_corrupt_input() {
        let mut buf = Vec::new();
        sample().write_to(&mut buf).unwrap();
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(HeatmapTensor::read_from(bad.as_slice()).is_err());
        assert!(HeatmapTensor::read_from(&buf[..buf.len() - 1]).is_err());
        buf.push(0);
        assert!(HeatmapTensor::read_from(buf.as_slice()).is_err());
    }

    #[test]
    fn roll_moves_columns_right() {
        let t = sample().roll_columns(3);
        assert_eq!(t.score(1, 2, 2), 0.75);
        assert_eq!(t.offset(2, 2), (0.01, 0.02));
        assert_eq!(t.fov(2, 2), (0.5, 0.4));
        assert_eq!(t.roll_columns(5), sample());
    }
}
