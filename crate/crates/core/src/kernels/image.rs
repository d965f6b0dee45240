//! 8-bit grayscale rasters and the PGM formats (P2 ASCII, P5 binary).

use std::io::Write;
use std::path::Path;

use crate::error::{AxError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width * height != pixels.len() {
            return Err(AxError::DimensionMismatch(format!("{width}x{height} image with {} pixels", pixels.len())));
        }
        Ok(Self { width, height, pixels })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        Self { width, height, pixels: vec![value; width * height] }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.pixels[y * self.width + x] = v;
    }

    /// Pixel at signed coordinates, zero outside the image.
    pub fn get_padded(&self, x: isize, y: isize) -> u8 {
        if x < 0 || y < 0 || x as usize >= self.width || y as usize >= self.height {
            0
        } else {
            self.get(x as usize, y as usize)
        }
    }

    pub fn to_pgm_binary(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }

    pub fn to_pgm_ascii(&self) -> Vec<u8> {
        let mut out = format!("P2\n{} {}\n255\n", self.width, self.height);
        for row in self.pixels.chunks(self.width.max(1)) {
            let line: Vec<String> = row.iter().map(|p| p.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out.into_bytes()
    }

    pub fn from_pgm(bytes: &[u8]) -> Result<Self> {
        let mut cur = Cursor { bytes, pos: 0 };
        let magic = cur.token()?;
        let binary = match magic.as_str() {
            "P5" => true,
            "P2" => false,
            m => return Err(AxError::MalformedImage(format!("unsupported magic '{m}'"))),
        };
        let width = cur.number()?;
        let height = cur.number()?;
        let maxval = cur.number()?;
        if maxval != 255 {
            return Err(AxError::MalformedImage(format!("maxval {maxval}, expected 255")));
        }
        let count = width * height;
        let pixels = if binary {
            let start = cur.pos + 1;
            if cur.pos >= bytes.len() || !bytes[cur.pos].is_ascii_whitespace() {
                return Err(AxError::MalformedImage("missing separator before raster".into()));
            }
            let data = bytes.get(start..start + count).ok_or_else(|| AxError::MalformedImage("truncated raster".into()))?;
            data.to_vec()
        } else {
            let mut px = Vec::with_capacity(count);
            for _ in 0..count {
                let v = cur.number().map_err(|_| AxError::MalformedImage("truncated raster".into()))?;
                if v > 255 {
                    return Err(AxError::MalformedImage(format!("sample {v} above maxval")));
                }
                px.push(v as u8);
            }
            px
        };
        Self::new(width, height, pixels)
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_space(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn token(&mut self) -> Result<String> {
        self.skip_space();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() && self.bytes[self.pos] != b'#' {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(AxError::MalformedImage("unexpected end of header".into()));
        }
        Ok(String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned())
    }

    fn number(&mut self) -> Result<usize> {
        let t = self.token()?;
        t.parse().map_err(|_| AxError::MalformedImage(format!("bad number '{t}'")))
    }
}

pub fn pgm_read(path: impl AsRef<Path>) -> Result<GrayImage> {
    GrayImage::from_pgm(&std::fs::read(path)?)
}

/// Writes binary PGM.
pub fn pgm_write(path: impl AsRef<Path>, img: &GrayImage) -> Result<()> {
    std::fs::write(path, img.to_pgm_binary())?;
    Ok(())
}

pub fn pgm_write_ascii(path: impl AsRef<Path>, img: &GrayImage) -> Result<()> {
    std::fs::write(path, img.to_pgm_ascii())?;
    Ok(())
}

/// Generic row-major raster of kernel outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster<T> {
    pub width: usize,
    pub height: usize,
    pub data: Vec<T>,
}

impl<T: Copy + std::fmt::Display> Raster<T> {
    pub fn get(&self, x: usize, y: usize) -> T {
        self.data[y * self.width + x]
    }

    /// One CSV line per row.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        for row in self.data.chunks(self.width.max(1)) {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }
}

/// The 256×256 test image shipped with the crate.
pub fn bundled_image() -> GrayImage {
    GrayImage::from_pgm(include_bytes!("../../data/camera256.pgm")).expect("bundled image is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ascii_and_binary_agree() {
        let img = GrayImage::new(3, 2, vec![0, 1, 2, 253, 254, 255]).unwrap();
        assert_eq!(GrayImage::from_pgm(&img.to_pgm_binary()).unwrap(), img);
        assert_eq!(GrayImage::from_pgm(&img.to_pgm_ascii()).unwrap(), img);
    }

    #[test]
    fn comments_and_single_pixel() {
        let img = GrayImage::from_pgm(b"P2\n# made by hand\n1 1 # size\n255\n7\n").unwrap();
        assert_eq!((img.width(), img.height(), img.get(0, 0)), (1, 1, 7));
    }

    #[test]
    fn malformed_inputs() {
        assert!(GrayImage::from_pgm(b"P6\n1 1\n255\n\x00\x00\x00").is_err());
        assert!(GrayImage::from_pgm(b"P5\n2 2\n255\n\x00\x00").is_err());
        assert!(GrayImage::from_pgm(b"P2\n2 2\n255\n1 2 3").is_err());
        assert!(GrayImage::from_pgm(b"P5\n2 2\n65535\n").is_err());
        assert!(GrayImage::new(2, 2, vec![0; 3]).is_err());
    }

    #[test]
    fn bundled_image_dimensions() {
        let img = bundled_image();
        assert_eq!((img.width(), img.height()), (256, 256));
    }
}
