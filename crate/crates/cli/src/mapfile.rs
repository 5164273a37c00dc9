//! Self-describing binary container for harmonic coefficients and sampled
//! maps.
//!
//! Layout: 8-byte magic, `u32` little-endian header length, a JSON header,
//! then `count` little-endian `f64` pairs `(re, im)` in the declared axis
//! order.

use crate::error::{CliError, CliResult};
use serde::{Deserialize, Serialize};
use spinlet::so3::{RotationGrid, RotationMap, WignerCoeffs};
use spinlet::sphere::{HarmonicCoeffs, SphereGrid, SphereMap};
use spinlet::wavelet::WaveletParams;
use spinlet::Complex64;
use std::path::Path;

pub const MAGIC: &[u8; 8] = b"SPINLET\x01";

const PREFIX: usize = MAGIC.len() + 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// `ₛf_{ℓm}` at index `ℓ² + ℓ + m`.
    Harmonic,
    /// Samples on the `(θ, φ)` sphere grid.
    Sphere,
    /// Samples on the `(γ, β, α)` rotation grid.
    Rotation,
    /// `f^ℓ_{mn}` at index `(n + N − 1) L² + ℓ² + ℓ + m`.
    Wigner,
}

impl Kind {
    fn grid(self) -> &'static str {
        match self {
            Kind::Harmonic | Kind::Wigner => "harmonic",
            Kind::Sphere => "gauss-legendre-theta/equiangular-phi",
            Kind::Rotation => "equiangular-alpha/gauss-legendre-beta/equiangular-gamma",
        }
    }

    fn axes(self) -> Vec<String> {
        let names: &[&str] = match self {
            Kind::Harmonic => &["l", "m"],
            Kind::Sphere => &["theta", "phi"],
            Kind::Rotation => &["gamma", "beta", "alpha"],
            Kind::Wigner => &["n", "l", "m"],
        };
        names.iter().map(|s| s.to_string()).collect()
    }
}

/// Parameters of the wavelet family that produced a coefficient file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveletHeader {
    pub band_limit: usize,
    pub alpha: f64,
    pub j_min: usize,
    pub azimuthal_band_limit: usize,
    pub spin: i32,
    pub multires: bool,
}

impl WaveletHeader {
    pub fn params(&self) -> spinlet::Result<WaveletParams> {
        WaveletParams::new(self.band_limit, self.alpha, self.j_min, self.azimuthal_band_limit, self.spin)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub kind: Kind,
    pub band_limit: usize,
    pub azimuthal_band_limit: usize,
    pub spin: i32,
    pub grid: String,
    pub axis_order: Vec<String>,
    pub count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavelet: Option<WaveletHeader>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MapData {
    Harmonic(HarmonicCoeffs),
    Sphere(SphereMap),
    Rotation(RotationMap),
    Wigner(WignerCoeffs),
}

/// One stored object with optional wavelet provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct MapFile {
    pub data: MapData,
    pub scale: Option<usize>,
    pub wavelet: Option<WaveletHeader>,
}

/// Where and why decoding failed.
#[derive(Debug, Clone, PartialEq)]
pub struct FormatError {
    pub offset: usize,
    pub message: String,
}

fn fail<T>(offset: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError {
        offset,
        message: message.into(),
    })
}

impl MapFile {
    pub fn new(data: MapData) -> Self {
        MapFile {
            data,
            scale: None,
            wavelet: None,
        }
    }

    pub fn header(&self) -> Header {
        let (kind, band_limit, azimuthal, spin, count) = match &self.data {
            MapData::Harmonic(h) => (Kind::Harmonic, h.band_limit(), 1, h.spin(), h.values().len()),
            MapData::Sphere(m) => (Kind::Sphere, m.grid().band_limit(), 1, m.spin(), m.samples().len()),
            MapData::Rotation(m) => (
                Kind::Rotation,
                m.grid().band_limit(),
                m.grid().azimuthal_band_limit(),
                0,
                m.samples().len(),
            ),
            MapData::Wigner(w) => (
                Kind::Wigner,
                w.band_limit(),
                w.azimuthal_band_limit(),
                0,
                w.values().len(),
            ),
        };
        Header {
            kind,
            band_limit,
            azimuthal_band_limit: azimuthal,
            spin,
            grid: kind.grid().to_string(),
            axis_order: kind.axes(),
            count,
            scale: self.scale,
            wavelet: self.wavelet,
        }
    }

    fn payload(&self) -> &[Complex64] {
        match &self.data {
            MapData::Harmonic(h) => h.values(),
            MapData::Sphere(m) => m.samples(),
            MapData::Rotation(m) => m.samples(),
            MapData::Wigner(w) => w.values(),
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let header = serde_json::to_vec(&self.header()).expect("header serialises");
        let payload = self.payload();
        let mut out = Vec::with_capacity(PREFIX + header.len() + 16 * payload.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&(header.len() as u32).to_le_bytes());
        out.extend_from_slice(&header);
        for v in payload {
            out.extend_from_slice(&v.re.to_le_bytes());
            out.extend_from_slice(&v.im.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, FormatError> {
        if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
            return fail(0, "missing magic tag");
        }
        let Some(len) = bytes.get(MAGIC.len()..PREFIX) else {
            return fail(MAGIC.len(), "truncated header length");
        };
        let len = u32::from_le_bytes(len.try_into().expect("four bytes")) as usize;
        let Some(raw) = bytes.get(PREFIX..PREFIX + len) else {
            return fail(MAGIC.len(), format!("header length {len} exceeds file size"));
        };
        let header: Header = serde_json::from_slice(raw).map_err(|e| FormatError {
            offset: PREFIX + json_offset(raw, e.line(), e.column()),
            message: format!("invalid header: {e}"),
        })?;
        let start = PREFIX + len;
        let payload = &bytes[start..];
        if payload.len() != 16 * header.count {
            return fail(
                start,
                format!("payload has {} bytes, header declares {} values", payload.len(), header.count),
            );
        }
        let values: Vec<Complex64> = payload
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[..8].try_into().expect("eight bytes"));
                let im = f64::from_le_bytes(c[8..].try_into().expect("eight bytes"));
                Complex64::new(re, im)
            })
            .collect();
        let data = decode(&header, values).map_err(|message| FormatError {
            offset: PREFIX,
            message,
        })?;
        Ok(MapFile {
            data,
            scale: header.scale,
            wavelet: header.wavelet,
        })
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
        Self::from_bytes(&bytes).map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            offset: e.offset,
            message: e.message,
        })
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        std::fs::write(path, self.to_bytes()).map_err(|e| CliError::io(path, e))
    }
}

/// Byte offset of a 1-based (line, column) position in `raw`.
fn json_offset(raw: &[u8], line: usize, column: usize) -> usize {
    let mut offset = 0;
    for (i, text) in raw.split(|&b| b == b'\n').enumerate() {
        if i + 1 == line {
            return offset + column.saturating_sub(1).min(text.len());
        }
        offset += text.len() + 1;
    }
    raw.len()
}

fn decode(h: &Header, values: Vec<Complex64>) -> Result<MapData, String> {
    let expect = |n: usize| {
        if h.count != n {
            Err(format!("{:?} with L = {} needs {n} values, header declares {}", h.kind, h.band_limit, h.count))
        } else {
            Ok(())
        }
    };
    let e = |err: spinlet::Error| err.to_string();
    match h.kind {
        Kind::Harmonic => {
            expect(h.band_limit * h.band_limit)?;
            Ok(MapData::Harmonic(HarmonicCoeffs::from_vec(h.band_limit, h.spin, values).map_err(e)?))
        }
        Kind::Sphere => {
            let grid = SphereGrid::new(h.band_limit).map_err(e)?;
            expect(grid.sample_count())?;
            Ok(MapData::Sphere(SphereMap::new(grid, h.spin, values).map_err(e)?))
        }
        Kind::Rotation => {
            let grid = RotationGrid::new(h.band_limit, h.azimuthal_band_limit).map_err(e)?;
            expect(grid.sample_count())?;
            Ok(MapData::Rotation(RotationMap::new(grid, values).map_err(e)?))
        }
        Kind::Wigner => {
            let (l, n) = (h.band_limit, h.azimuthal_band_limit);
            if n == 0 {
                return Err("azimuthal band-limit must be at least 1".into());
            }
            expect((2 * n - 1) * l * l)?;
            let nm = n as i64 - 1;
            let w = WignerCoeffs::from_fn(l, n, |ll, m, nn| {
                values[(nn + nm) as usize * l * l + ll * ll + (ll as i64 + m) as usize]
            })
            .map_err(e)?;
            Ok(MapData::Wigner(w))
        }
    }
}
