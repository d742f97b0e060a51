//! Occupancy grids loaded from Netpbm images.
//!
//! Supported: PGM (`P2` plain, `P5` raw) and PPM (`P3` plain, `P6` raw), any
//! maxval in `1..=65535`, `#` comments in the header. Samples are rescaled to
//! `0..=255` and a pixel is an obstacle iff its luminance is below 128.

use crate::error::{Error, ImageErrorKind, Result};

pub const OBSTACLE_THRESHOLD: u8 = 128;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccupancyGrid {
    width: usize,
    height: usize,
    cells: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetpbmFormat {
    PgmPlain,
    PgmRaw,
    PpmPlain,
    PpmRaw,
}

impl NetpbmFormat {
    pub fn from_magic(magic: &[u8]) -> Option<Self> {
        match magic {
            b"P2" => Some(Self::PgmPlain),
            b"P5" => Some(Self::PgmRaw),
            b"P3" => Some(Self::PpmPlain),
            b"P6" => Some(Self::PpmRaw),
            _ => None,
        }
    }

    fn channels(self) -> usize {
        match self {
            Self::PgmPlain | Self::PgmRaw => 1,
            Self::PpmPlain | Self::PpmRaw => 3,
        }
    }

    fn is_raw(self) -> bool {
        matches!(self, Self::PgmRaw | Self::PpmRaw)
    }
}

impl OccupancyGrid {
    /// Row-major cells, `true` = occupied.
    pub fn new(width: usize, height: usize, cells: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Contract(format!("grid must be non-empty, got {width}x{height}")));
        }
        if cells.len() != width * height {
            return Err(Error::Contract(format!(
                "grid {width}x{height} needs {} cells, got {}",
                width * height,
                cells.len()
            )));
        }
        Ok(Self { width, height, cells })
    }

    pub fn empty(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, vec![false; width * height])
    }

    /// Builds a grid from a predicate over `(x, y)`.
    pub fn from_fn(width: usize, height: usize, occupied: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let cells = (0..height)
            .flat_map(|y| (0..width).map(move |x| (x, y)))
            .map(|(x, y)| occupied(x, y))
            .collect();
        Self::new(width, height, cells)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    /// `x` is the column, `y` the row, origin top-left. Anything outside the
    /// image is solid.
    pub fn is_occupied(&self, x: i64, y: i64) -> bool {
        if x < 0 || y < 0 || x >= self.width as i64 || y >= self.height as i64 {
            return true;
        }
        self.cells[y as usize * self.width + x as usize]
    }

    /// Parses a Netpbm image, detecting the format from its magic number.
    pub fn from_netpbm(bytes: &[u8]) -> Result<Self> {
        let magic = bytes.get(..2).unwrap_or(bytes);
        let format = NetpbmFormat::from_magic(magic).ok_or_else(|| Error::Image {
            offset: 0,
            kind: ImageErrorKind::UnsupportedMagic(String::from_utf8_lossy(magic).into_owned()),
        })?;
        Self::from_netpbm_as(bytes, format)
    }

    /// Parses a Netpbm image that must be of the given format.
    pub fn from_netpbm_as(bytes: &[u8], format: NetpbmFormat) -> Result<Self> {
        let found = bytes.get(..2).and_then(NetpbmFormat::from_magic);
        if found != Some(format) {
            let magic = bytes.get(..2).unwrap_or(bytes);
            return Err(Error::Image {
                offset: 0,
                kind: ImageErrorKind::UnsupportedMagic(String::from_utf8_lossy(magic).into_owned()),
            });
        }
        let mut rd = Reader { bytes, pos: 2 };
        if !rd.peek().is_some_and(|b| b.is_ascii_whitespace() || b == b'#') {
            return Err(rd.header_err("expected whitespace after magic number"));
        }
        let width = rd.header_uint("width")?;
        let height = rd.header_uint("height")?;
        let maxval = rd.header_uint("maxval")?;
        if width == 0 || height == 0 {
            return Err(rd.header_err(format!("zero image size {width}x{height}")));
        }
        if !(1..=65535).contains(&maxval) {
            return Err(rd.header_err(format!("maxval {maxval} outside 1..=65535")));
        }
        let channels = format.channels();
        let n = width
            .checked_mul(height)
            .and_then(|p| p.checked_mul(channels))
            .ok_or_else(|| rd.header_err("image dimensions overflow"))?;

        let mut samples = Vec::with_capacity(n);
        if format.is_raw() {
            // exactly one whitespace byte separates the header from the raster
            match rd.peek() {
                Some(b) if b.is_ascii_whitespace() => rd.pos += 1,
                _ => return Err(rd.header_err("expected single whitespace before raster")),
            }
            let width_bytes = if maxval > 255 { 2 } else { 1 };
            let need = n * width_bytes;
            let avail = bytes.len() - rd.pos;
            if avail < need {
                return Err(Error::Image {
                    offset: bytes.len(),
                    kind: ImageErrorKind::Truncated(format!("expected {need} raster bytes, found {avail}")),
                });
            }
            let raster = &bytes[rd.pos..rd.pos + need];
            for (i, chunk) in raster.chunks_exact(width_bytes).enumerate() {
                let v = chunk.iter().fold(0usize, |acc, &b| (acc << 8) | b as usize);
                if v > maxval {
                    return Err(Error::Image {
                        offset: rd.pos + i * width_bytes,
                        kind: ImageErrorKind::MalformedPixel(format!("sample {v} exceeds maxval {maxval}")),
                    });
                }
                samples.push(v);
            }
        } else {
            for i in 0..n {
                let start = rd.skip_ws_and_comments();
                let v = match rd.uint() {
                    Some(v) => v,
                    None if rd.pos >= bytes.len() => {
                        return Err(Error::Image {
                            offset: bytes.len(),
                            kind: ImageErrorKind::Truncated(format!("expected {n} samples, found {i}")),
                        })
                    }
                    None => {
                        return Err(Error::Image {
                            offset: start,
                            kind: ImageErrorKind::MalformedPixel("expected a decimal sample".into()),
                        })
                    }
                };
                if v > maxval {
                    return Err(Error::Image {
                        offset: start,
                        kind: ImageErrorKind::MalformedPixel(format!("sample {v} exceeds maxval {maxval}")),
                    });
                }
                samples.push(v);
            }
        }

        let cells = samples
            .chunks_exact(channels)
            .map(|px| {
                let lum = match px {
                    [g] => rescale(*g, maxval),
                    [r, g, b] => luminance(rescale(*r, maxval), rescale(*g, maxval), rescale(*b, maxval)),
                    _ => unreachable!(),
                };
                lum < OBSTACLE_THRESHOLD
            })
            .collect();
        Self::new(width, height, cells)
    }

    /// Encodes the grid as a binary PGM (obstacles 0, free 255).
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend(self.cells.iter().map(|&occ| if occ { 0u8 } else { 255 }));
        out
    }
}

/// Scales a sample in `0..=maxval` to `0..=255`, rounding to nearest.
fn rescale(v: usize, maxval: usize) -> u8 {
    if maxval == 255 {
        return v as u8;
    }
    ((v as f64) * 255.0 / maxval as f64).round() as u8
}

/// Rec. 601 luma, rounded to nearest.
pub fn luminance(r: u8, g: u8, b: u8) -> u8 {
    (0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64).round() as u8
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws_and_comments(&mut self) -> usize {
        while let Some(b) = self.peek() {
            if b == b'#' {
                while let Some(c) = self.peek() {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.pos
    }

    fn uint(&mut self) -> Option<usize> {
        let start = self.pos;
        let mut v: usize = 0;
        while let Some(b) = self.peek().filter(u8::is_ascii_digit) {
            v = v.checked_mul(10)?.checked_add((b - b'0') as usize)?;
            self.pos += 1;
        }
        (self.pos > start).then_some(v)
    }

    fn header_uint(&mut self, field: &str) -> Result<usize> {
        let start = self.skip_ws_and_comments();
        if self.pos >= self.bytes.len() {
            return Err(Error::Image {
                offset: start,
                kind: ImageErrorKind::MalformedHeader(format!("unexpected end of file reading {field}")),
            });
        }
        let v = self.uint().ok_or_else(|| Error::Image {
            offset: start,
            kind: ImageErrorKind::MalformedHeader(format!("expected decimal {field}")),
        })?;
        if self.peek().is_some_and(|b| !(b.is_ascii_whitespace() || b == b'#')) {
            return Err(self.header_err(format!("unexpected byte after {field}")));
        }
        Ok(v)
    }

    fn header_err(&self, msg: impl Into<String>) -> Error {
        Error::Image {
            offset: self.pos,
            kind: ImageErrorKind::MalformedHeader(msg.into()),
        }
    }
}
