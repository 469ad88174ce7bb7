//! Row-wise run-length representation of binary images.
//!
//! A row is stored as alternating run lengths, starting with a run of
//! background (0) pixels. That first run is zero when the row starts with
//! ink; every other stored run is at least one pixel long, so an image has
//! exactly one encoding. Runs at even 0-based indices count 0-pixels, runs at
//! odd indices count 1-pixels.
//!
//! The on-disk `.rld` format is plain ASCII:
//!
//! ```text
//! RLD1 <width> <height>
//! <run> <run> ...      (one line per row, canonical form)
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::image::{BinaryImage, MAX_DIMENSION};

pub type Run = u32;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RleRow {
    runs: Vec<Run>,
    width: usize,
}

impl RleRow {
    /// Validates canonical form: runs sum to `width`, only the first run may
    /// be zero, and the row is non-empty.
    pub fn new(runs: Vec<Run>, width: usize) -> Result<Self> {
        if width == 0 {
            return Err(Error::EmptyRow);
        }
        if runs.is_empty() {
            return Err(Error::InvalidRun {
                index: 0,
                reason: "row has no runs".into(),
            });
        }
        let mut sum: u64 = 0;
        for (i, &r) in runs.iter().enumerate() {
            if r == 0 && i > 0 {
                let reason = if i + 1 == runs.len() {
                    "trailing zero run"
                } else {
                    "interior zero run"
                };
                return Err(Error::InvalidRun {
                    index: i,
                    reason: reason.into(),
                });
            }
            sum += r as u64;
            if sum > width as u64 {
                return Err(Error::InvalidRun {
                    index: i,
                    reason: format!("runs exceed row width {width}"),
                });
            }
        }
        if sum != width as u64 {
            return Err(Error::InvalidRun {
                index: runs.len() - 1,
                reason: format!("runs sum to {sum}, row width is {width}"),
            });
        }
        Ok(RleRow { runs, width })
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Stored run count, `k`.
    pub fn len(&self) -> usize {
        self.runs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn is_blank(&self) -> bool {
        self.runs.len() == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RleDocument {
    rows: Vec<RleRow>,
    width: usize,
}

impl RleDocument {
    pub fn new(rows: Vec<RleRow>, width: usize) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidArgument("document has no rows".into()));
        }
        if let Some(i) = rows.iter().position(|r| r.width != width) {
            return Err(Error::InvalidArgument(format!(
                "row {i} has width {}, document width is {width}",
                rows[i].width
            )));
        }
        Ok(RleDocument { rows, width })
    }

    /// Builds a document from raw run lists, validating every row.
    pub fn from_runs<I, R>(rows: I, width: usize) -> Result<Self>
    where
        I: IntoIterator<Item = R>,
        R: Into<Vec<Run>>,
    {
        let rows = rows
            .into_iter()
            .map(|r| RleRow::new(r.into(), width))
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows, width)
    }

    pub fn rows(&self) -> &[RleRow] {
        &self.rows
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.rows.len()
    }

    pub fn stored_runs(&self) -> usize {
        self.rows.iter().map(RleRow::len).sum()
    }
}

pub fn encode_row(bits: &[u8]) -> Result<RleRow> {
    if bits.is_empty() {
        return Err(Error::EmptyRow);
    }
    let mut runs = Vec::new();
    let mut current = 0u8;
    let mut len: Run = 0;
    for &b in bits {
        let b = (b != 0) as u8;
        if b == current {
            len += 1;
        } else {
            runs.push(len);
            current = b;
            len = 1;
        }
    }
    runs.push(len);
    Ok(RleRow {
        runs,
        width: bits.len(),
    })
}

pub fn decode_row(row: &RleRow) -> Vec<u8> {
    let mut out = Vec::with_capacity(row.width);
    decode_row_into(row, &mut out);
    out
}

fn decode_row_into(row: &RleRow, out: &mut Vec<u8>) {
    for (i, &r) in row.runs.iter().enumerate() {
        let value = (i % 2) as u8;
        out.extend(std::iter::repeat_n(value, r as usize));
    }
}

pub fn encode_image(img: &BinaryImage) -> RleDocument {
    let rows = img
        .rows()
        .map(|r| encode_row(r).expect("image rows are non-empty"))
        .collect();
    RleDocument {
        rows,
        width: img.width(),
    }
}

pub fn decode_image(doc: &RleDocument) -> BinaryImage {
    let mut pixels = Vec::with_capacity(doc.width * doc.height());
    for row in &doc.rows {
        decode_row_into(row, &mut pixels);
    }
    BinaryImage::new(doc.width, doc.height(), pixels).expect("valid document decodes to a valid image")
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CompressionStats {
    /// Longest stored run sequence over all rows.
    pub max_k: usize,
    pub mean_k: f64,
    /// Pixel count over stored run count.
    pub ratio: f64,
}

pub fn compression_stats(doc: &RleDocument) -> CompressionStats {
    let total = doc.stored_runs();
    CompressionStats {
        max_k: doc.rows.iter().map(RleRow::len).max().unwrap_or(0),
        mean_k: total as f64 / doc.height() as f64,
        ratio: (doc.width * doc.height()) as f64 / total as f64,
    }
}

pub fn write_rld(doc: &RleDocument) -> String {
    let mut out = format!("RLD1 {} {}\n", doc.width, doc.height());
    for row in &doc.rows {
        for (i, r) in row.runs.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            write!(out, "{r}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Parses `.rld` text. Line numbers in errors are 1-based.
pub fn read_rld(text: &str) -> Result<RleDocument> {
    let mut lines = text.lines();
    let header = lines.next().ok_or(Error::Rld {
        line: 1,
        reason: "missing header".into(),
    })?;
    let fields: Vec<&str> = header.split_ascii_whitespace().collect();
    let bad_header = |reason: &str| Error::Rld {
        line: 1,
        reason: reason.into(),
    };
    if fields.first() != Some(&"RLD1") {
        return Err(bad_header("expected magic RLD1"));
    }
    if fields.len() != 3 {
        return Err(bad_header("expected `RLD1 <width> <height>`"));
    }
    let parse_dim = |s: &str| -> Result<usize> {
        match s.parse::<usize>() {
            Ok(0) | Err(_) => Err(bad_header(&format!("invalid dimension {s:?}"))),
            Ok(v) if v > MAX_DIMENSION => Err(bad_header(&format!("dimension {v} too large"))),
            Ok(v) => Ok(v),
        }
    };
    let width = parse_dim(fields[1])?;
    let height = parse_dim(fields[2])?;

    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        if rows.len() == height {
            if line.trim().is_empty() {
                continue;
            }
            return Err(Error::Rld {
                line: line_no,
                reason: format!("more than {height} rows"),
            });
        }
        let runs = line
            .split_ascii_whitespace()
            .map(|t| {
                t.parse::<Run>().map_err(|_| Error::Rld {
                    line: line_no,
                    reason: format!("invalid run {t:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let row = RleRow::new(runs, width).map_err(|e| Error::Rld {
            line: line_no,
            reason: e.to_string(),
        })?;
        rows.push(row);
    }
    if rows.len() != height {
        return Err(Error::Rld {
            line: rows.len() + 2,
            reason: format!("expected {height} rows, found {}", rows.len()),
        });
    }
    RleDocument::new(rows, width)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bits(s: &str) -> Vec<u8> {
        s.bytes().map(|b| b - b'0').collect()
    }

    #[test]
    fn encode_rows() {
        assert_eq!(encode_row(&[0; 14]).unwrap().runs(), &[14]);
        assert_eq!(encode_row(&bits("00110000111110")).unwrap().runs(), &[2, 2, 4, 5, 1]);
        assert_eq!(encode_row(&bits("10000000000000")).unwrap().runs(), &[0, 1, 13]);
        assert_eq!(encode_row(&bits("1111")).unwrap().runs(), &[0, 4]);
        assert!(matches!(encode_row(&[]), Err(Error::EmptyRow)));
    }

    #[test]
    fn decode_rows() {
        let r = RleRow::new(vec![14], 14).unwrap();
        assert_eq!(decode_row(&r), vec![0; 14]);
        let r = RleRow::new(vec![2, 2, 4, 5, 1], 14).unwrap();
        assert_eq!(decode_row(&r), bits("00110000111110"));
        let r = RleRow::new(vec![0, 4], 4).unwrap();
        assert_eq!(decode_row(&r), bits("1111"));
    }

    #[test]
    fn validation_names_run_index() {
        let idx = |runs: Vec<Run>, w| match RleRow::new(runs, w) {
            Err(Error::InvalidRun { index, .. }) => index,
            other => panic!("{other:?}"),
        };
        assert_eq!(idx(vec![2, 0, 3], 5), 1);
        assert_eq!(idx(vec![2, 3, 0], 5), 2);
        assert_eq!(idx(vec![2, 2], 5), 1);
        assert_eq!(idx(vec![4, 2], 5), 1);
        assert_eq!(idx(vec![], 5), 0);
        assert!(RleRow::new(vec![0], 0).is_err());
    }

    #[test]
    fn blank_image_and_stats() {
        let doc = encode_image(&BinaryImage::blank(5, 5).unwrap());
        assert!(doc.rows().iter().all(|r| r.runs() == [5]));
        let s = compression_stats(&doc);
        assert_eq!(s.max_k, 1);
        assert_eq!(s.ratio, 5.0);
        assert_eq!(s.mean_k, 1.0);
    }

    #[test]
    fn alternating_row_is_worst_case() {
        let row: Vec<u8> = (0..8).map(|i| (i % 2) as u8).collect();
        let doc = encode_image(&BinaryImage::new(8, 1, row).unwrap());
        assert_eq!(doc.rows()[0].runs(), &[1, 1, 1, 1, 1, 1, 1, 1]);
        assert_eq!(compression_stats(&doc).ratio, 1.0);
        let row: Vec<u8> = (0..8).map(|i| ((i + 1) % 2) as u8).collect();
        let doc = encode_image(&BinaryImage::new(8, 1, row).unwrap());
        assert_eq!(doc.rows()[0].runs(), &[0, 1, 1, 1, 1, 1, 1, 1, 1]);
        // 8 pixels over 9 stored entries once the leading zero run is counted.
        assert_eq!(compression_stats(&doc).max_k, 9);
    }

    #[test]
    fn rld_text() {
        let doc = RleDocument::from_runs([vec![2, 2, 4, 5, 1], vec![0, 1, 13]], 14).unwrap();
        let text = write_rld(&doc);
        assert_eq!(text, "RLD1 14 2\n2 2 4 5 1\n0 1 13\n");
        assert_eq!(read_rld(&text).unwrap(), doc);
        assert_eq!(read_rld("RLD1 14 2\n2 2 4 5 1\n0 1 13").unwrap(), doc);
    }

    #[test]
    fn rld_errors() {
        let line = |t: &str| match read_rld(t) {
            Err(Error::Rld { line, .. }) => line,
            other => panic!("{other:?}"),
        };
        assert_eq!(line(""), 1);
        assert_eq!(line("RLE1 1 1\n1\n"), 1);
        assert_eq!(line("RLD1 0 1\n"), 1);
        assert_eq!(line("RLD1 3 2\n3\n1 x\n"), 3);
        assert_eq!(line("RLD1 3 2\n3\n1 0 2\n"), 3);
        assert_eq!(line("RLD1 3 2\n3\n"), 3);
        assert_eq!(line("RLD1 3 1\n3\n3\n"), 3);
    }

    #[test]
    fn exhaustive_round_trip_small_widths() {
        for width in 1..=12usize {
            for pattern in 0u32..(1 << width) {
                let row: Vec<u8> = (0..width).map(|i| ((pattern >> i) & 1) as u8).collect();
                let enc = encode_row(&row).unwrap();
                assert_eq!(RleRow::new(enc.runs().to_vec(), width).unwrap(), enc);
                assert!(enc.len() <= width + 1);
                if row[0] == 0 {
                    assert!(enc.len() <= width);
                }
                assert_eq!(enc.is_blank(), pattern == 0);
                assert_eq!(decode_row(&enc), row);
            }
        }
    }

    proptest! {
        #[test]
        fn image_round_trip(w in 1usize..64, h in 1usize..64, seed in any::<u64>()) {
            let mut state = seed | 1;
            let img = BinaryImage::from_fn(w, h, |_, _| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                state & 1 == 1
            }).unwrap();
            let doc = encode_image(&img);
            prop_assert_eq!(decode_image(&doc), img);
            prop_assert_eq!(read_rld(&write_rld(&doc)).unwrap(), doc);
        }
    }
}
