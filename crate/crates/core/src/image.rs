//! Dense binary images and PBM (P1/P4) input/output.
//!
//! Pixels are stored row-major as `u8` values, `1` for ink and `0` for
//! background. PBM uses the same polarity (`1` = black), so no inversion
//! happens on load or save.

use crate::error::{Error, PbmErrorKind, Result};

/// Largest width or height accepted from a PBM header.
pub const MAX_DIMENSION: usize = i32::MAX as usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PbmVariant {
    /// Plain ASCII.
    P1,
    /// Packed, eight pixels per byte, rows padded to a byte boundary.
    P4,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if width.checked_mul(height) != Some(pixels.len()) {
            return Err(Error::InvalidImage(format!(
                "{} pixels for a {width}x{height} image",
                pixels.len()
            )));
        }
        if let Some(i) = pixels.iter().position(|&p| p > 1) {
            return Err(Error::InvalidImage(format!("pixel {i} has value {}", pixels[i])));
        }
        Ok(BinaryImage { width, height, pixels })
    }

    /// All-background image.
    pub fn blank(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, vec![0; width.saturating_mul(height)])
    }

    /// Builds an image from a per-pixel function of `(x, y)`.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width.saturating_mul(height));
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y) as u8);
            }
        }
        Self::new(width, height, pixels)
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

    pub fn row(&self, y: usize) -> &[u8] {
        &self.pixels[y * self.width..(y + 1) * self.width]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, u8> {
        self.pixels.chunks_exact(self.width)
    }

    pub fn ink_count(&self) -> usize {
        self.pixels.iter().map(|&p| p as usize).sum()
    }

    /// Swaps rows and columns.
    pub fn transpose(&self) -> BinaryImage {
        let mut pixels = Vec::with_capacity(self.pixels.len());
        for x in 0..self.width {
            for y in 0..self.height {
                pixels.push(self.get(x, y));
            }
        }
        BinaryImage {
            width: self.height,
            height: self.width,
            pixels,
        }
    }

    /// Reorders rows so that row `i` of the result is row `order[i]` of `self`.
    pub fn permute_rows(&self, order: &[usize]) -> Result<BinaryImage> {
        let mut seen = vec![false; self.height];
        if order.len() != self.height {
            return Err(Error::InvalidArgument(format!(
                "permutation of length {} for {} rows",
                order.len(),
                self.height
            )));
        }
        let mut pixels = Vec::with_capacity(self.pixels.len());
        for &src in order {
            if src >= self.height || std::mem::replace(&mut seen[src], true) {
                return Err(Error::InvalidArgument(format!(
                    "row order is not a permutation (entry {src})"
                )));
            }
            pixels.extend_from_slice(self.row(src));
        }
        BinaryImage::new(self.width, self.height, pixels)
    }
}

/// Builds an image from text rows; `ink` becomes 1, anything else 0.
pub fn from_ascii_art<S: AsRef<str>>(lines: &[S], ink: char) -> Result<BinaryImage> {
    let first = lines.first().ok_or(Error::EmptyArt)?;
    let width = first.as_ref().chars().count();
    if width == 0 {
        return Err(Error::EmptyArt);
    }
    let mut pixels = Vec::with_capacity(width * lines.len());
    for (i, line) in lines.iter().enumerate() {
        let len = line.as_ref().chars().count();
        if len != width {
            return Err(Error::RaggedLine {
                line: i,
                len,
                expected: width,
            });
        }
        pixels.extend(line.as_ref().chars().map(|c| (c == ink) as u8));
    }
    BinaryImage::new(width, lines.len(), pixels)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn err(&self, kind: PbmErrorKind) -> Error {
        Error::Pbm { kind, offset: self.pos }
    }

    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn dimension(&mut self) -> Result<usize> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        if start >= self.bytes.len() {
            return Err(self.err(PbmErrorKind::Truncated));
        }
        let mut value: usize = 0;
        while let Some(&b) = self.bytes.get(self.pos) {
            if !b.is_ascii_digit() {
                break;
            }
            value = value.saturating_mul(10).saturating_add((b - b'0') as usize);
            self.pos += 1;
        }
        let at_start = Error::Pbm {
            kind: PbmErrorKind::BadDimension,
            offset: start,
        };
        if self.pos == start {
            return Err(at_start);
        }
        if let Some(&b) = self.bytes.get(self.pos) {
            if !b.is_ascii_whitespace() && b != b'#' {
                return Err(at_start);
            }
        }
        if value == 0 {
            return Err(at_start);
        }
        if value > MAX_DIMENSION {
            return Err(Error::Pbm {
                kind: PbmErrorKind::DimensionTooLarge,
                offset: start,
            });
        }
        Ok(value)
    }
}

/// Parses a PBM stream in either the plain (P1) or packed (P4) variant.
pub fn load_pbm(bytes: &[u8]) -> Result<BinaryImage> {
    let mut cur = Cursor { bytes, pos: 0 };
    let variant = match bytes.get(..2) {
        Some(b"P1") => PbmVariant::P1,
        Some(b"P4") => PbmVariant::P4,
        _ => return Err(cur.err(PbmErrorKind::BadMagic)),
    };
    cur.pos = 2;
    match bytes.get(2) {
        Some(b) if b.is_ascii_whitespace() || *b == b'#' => {}
        None => return Err(cur.err(PbmErrorKind::Truncated)),
        _ => return Err(cur.err(PbmErrorKind::BadMagic)),
    }
    let width = cur.dimension()?;
    let height = cur.dimension()?;
    let total = width
        .checked_mul(height)
        .ok_or(cur.err(PbmErrorKind::DimensionTooLarge))?;

    match variant {
        PbmVariant::P1 => {
            cur.skip_whitespace_and_comments();
            // Every pixel takes at least one byte.
            if bytes.len() - cur.pos < total {
                return Err(Error::Pbm {
                    kind: PbmErrorKind::Truncated,
                    offset: bytes.len(),
                });
            }
            let mut pixels = Vec::with_capacity(total);
            while pixels.len() < total {
                match bytes.get(cur.pos) {
                    Some(b'0') => pixels.push(0),
                    Some(b'1') => pixels.push(1),
                    Some(b) if b.is_ascii_whitespace() => {}
                    Some(_) => return Err(cur.err(PbmErrorKind::BadPixel)),
                    None => return Err(cur.err(PbmErrorKind::Truncated)),
                }
                cur.pos += 1;
            }
            BinaryImage::new(width, height, pixels)
        }
        PbmVariant::P4 => {
            // Exactly one whitespace byte separates the header from the raster.
            match bytes.get(cur.pos) {
                Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
                None => return Err(cur.err(PbmErrorKind::Truncated)),
                _ => return Err(cur.err(PbmErrorKind::BadDimension)),
            }
            let stride = width.div_ceil(8);
            let needed = stride
                .checked_mul(height)
                .ok_or(cur.err(PbmErrorKind::DimensionTooLarge))?;
            let raster = &bytes[cur.pos..];
            if raster.len() < needed {
                return Err(Error::Pbm {
                    kind: PbmErrorKind::Truncated,
                    offset: bytes.len(),
                });
            }
            let mut pixels = Vec::with_capacity(total);
            for row in raster[..needed].chunks_exact(stride) {
                pixels.extend((0..width).map(|x| (row[x / 8] >> (7 - x % 8)) & 1));
            }
            BinaryImage::new(width, height, pixels)
        }
    }
}

pub fn save_pbm(img: &BinaryImage, variant: PbmVariant) -> Vec<u8> {
    let mut out = Vec::new();
    match variant {
        PbmVariant::P1 => {
            out.extend_from_slice(format!("P1\n{} {}\n", img.width, img.height).as_bytes());
            out.reserve(img.pixels.len() * 2);
            for row in img.rows() {
                for (i, &p) in row.iter().enumerate() {
                    if i > 0 {
                        out.push(b' ');
                    }
                    out.push(b'0' + p);
                }
                out.push(b'\n');
            }
        }
        PbmVariant::P4 => {
            out.extend_from_slice(format!("P4\n{} {}\n", img.width, img.height).as_bytes());
            let stride = img.width.div_ceil(8);
            for row in img.rows() {
                let mut packed = vec![0u8; stride];
                for (x, &p) in row.iter().enumerate() {
                    packed[x / 8] |= p << (7 - x % 8);
                }
                out.extend_from_slice(&packed);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn kind_of(e: Error) -> (PbmErrorKind, usize) {
        match e {
            Error::Pbm { kind, offset } => (kind, offset),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn minimal_p1() {
        let img = load_pbm(b"P1\n1 1\n0").unwrap();
        assert_eq!((img.width(), img.height()), (1, 1));
        assert_eq!(img.pixels(), &[0]);
    }

    #[test]
    fn p1_identity_layout() {
        let img = load_pbm(b"P1\n2 2\n1 0 0 1").unwrap();
        assert_eq!(img.pixels(), &[1, 0, 0, 1]);
    }

    #[test]
    fn p1_whitespace_and_comments() {
        let img = load_pbm(b"P1 # scanner\n# another\n 3\n\t2 \n10\n0 0\r\n01").unwrap();
        assert_eq!((img.width(), img.height()), (3, 2));
        assert_eq!(img.pixels(), &[1, 0, 0, 0, 0, 1]);
    }

    #[test]
    fn save_p1_format() {
        let img = BinaryImage::new(1, 1, vec![0]).unwrap();
        assert_eq!(save_pbm(&img, PbmVariant::P1), b"P1\n1 1\n0\n");
        let img = BinaryImage::new(2, 2, vec![1, 0, 0, 1]).unwrap();
        assert_eq!(save_pbm(&img, PbmVariant::P1), b"P1\n2 2\n1 0\n0 1\n");
    }

    #[test]
    fn p4_discards_padding_bits() {
        // width 3: row bits 101 then five padding ones that must be ignored.
        let bytes = [b"P4\n3 2\n".as_slice(), &[0b1011_1111, 0b0100_0000]].concat();
        let img = load_pbm(&bytes).unwrap();
        assert_eq!(img.pixels(), &[1, 0, 1, 0, 1, 0]);
    }

    #[test]
    fn errors_name_offsets() {
        assert_eq!(
            kind_of(load_pbm(b"P2\n1 1\n0").unwrap_err()),
            (PbmErrorKind::BadMagic, 0)
        );
        assert_eq!(kind_of(load_pbm(b"").unwrap_err()).0, PbmErrorKind::BadMagic);
        assert_eq!(
            kind_of(load_pbm(b"P1\n0 1\n").unwrap_err()),
            (PbmErrorKind::BadDimension, 3)
        );
        assert_eq!(
            kind_of(load_pbm(b"P1\n2 x\n").unwrap_err()),
            (PbmErrorKind::BadDimension, 5)
        );
        assert_eq!(
            kind_of(load_pbm(b"P1\n-2 1\n").unwrap_err()),
            (PbmErrorKind::BadDimension, 3)
        );
        assert_eq!(
            kind_of(load_pbm(b"P1\n2 2\n1 0 1").unwrap_err()),
            (PbmErrorKind::Truncated, 12)
        );
        assert_eq!(
            kind_of(load_pbm(b"P1\n2 1\n1 2").unwrap_err()),
            (PbmErrorKind::BadPixel, 9)
        );
        assert_eq!(
            kind_of(load_pbm(b"P4\n9 2\n\x00\x00\x00").unwrap_err()),
            (PbmErrorKind::Truncated, 10)
        );
        assert_eq!(
            kind_of(load_pbm(b"P4\n2147483648 1\n").unwrap_err()),
            (PbmErrorKind::DimensionTooLarge, 3)
        );
        assert_eq!(kind_of(load_pbm(b"P1\n3").unwrap_err()).0, PbmErrorKind::Truncated);
    }

    #[test]
    fn ascii_art() {
        let blank = from_ascii_art(&["00", "00"], '1').unwrap();
        assert_eq!(blank.pixels(), &[0, 0, 0, 0]);
        let checker = from_ascii_art(&["01", "10"], '1').unwrap();
        assert_eq!(checker.pixels(), &[0, 1, 1, 0]);
        let dots = from_ascii_art(&[".#.", "#.."], '#').unwrap();
        assert_eq!(dots.pixels(), &[0, 1, 0, 1, 0, 0]);
        match from_ascii_art(&["01", "1", "00"], '1') {
            Err(Error::RaggedLine {
                line: 1,
                len: 1,
                expected: 2,
            }) => {}
            other => panic!("{other:?}"),
        }
        assert!(from_ascii_art::<&str>(&[], '1').is_err());
    }

    #[test]
    fn invalid_construction() {
        assert!(BinaryImage::new(0, 1, vec![]).is_err());
        assert!(BinaryImage::new(2, 1, vec![0]).is_err());
        assert!(BinaryImage::new(1, 1, vec![2]).is_err());
    }

    #[test]
    fn transpose_and_permute() {
        let img = from_ascii_art(&["110", "001"], '1').unwrap();
        let t = img.transpose();
        assert_eq!((t.width(), t.height()), (2, 3));
        assert_eq!(t.pixels(), &[1, 0, 1, 0, 0, 1]);
        assert_eq!(t.transpose(), img);
        let p = img.permute_rows(&[1, 0]).unwrap();
        assert_eq!(p.pixels(), &[0, 0, 1, 1, 1, 0]);
        assert!(img.permute_rows(&[0, 0]).is_err());
    }

    fn arb_image(max: usize) -> impl Strategy<Value = BinaryImage> {
        (1..=max, 1..=max).prop_flat_map(|(w, h)| {
            proptest::collection::vec(0u8..=1, w * h).prop_map(move |px| BinaryImage::new(w, h, px).unwrap())
        })
    }

    proptest! {
        #[test]
        fn round_trip_both_variants(img in arb_image(50)) {
            let p1 = load_pbm(&save_pbm(&img, PbmVariant::P1)).unwrap();
            let p4 = load_pbm(&save_pbm(&img, PbmVariant::P4)).unwrap();
            prop_assert_eq!(&p1, &img);
            prop_assert_eq!(&p4, &img);
        }
    }
}
