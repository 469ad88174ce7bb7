//! Uncompressed-domain baseline: transitions found by scanning adjacent
//! pixels of a decoded image, then fed to the same kernels.
//!
//! Nothing here touches run-length data. A background pixel is implied
//! before the first pixel of every line, so a line starting with ink has a
//! 0→1 transition at position 1.

use rayon::prelude::*;

use super::{ceq_row, seq_kernel, Direction, EntropyFeatures, EntropyOptions, LogBase, Quantifier};
use crate::image::BinaryImage;

/// Visits every transition of a line as `(rising, 1-based position)`.
#[inline]
fn scan_line(pixels: impl Iterator<Item = u8>, mut visit: impl FnMut(bool, usize)) {
    let mut prev = 0u8;
    for (i, px) in pixels.enumerate() {
        if px != prev {
            visit(px == 1, i + 1);
            prev = px;
        }
    }
}

fn ceq_scan(pixels: impl Iterator<Item = u8>, len: usize, base: LogBase) -> (f64, f64) {
    let mut up = 0;
    let mut down = 0;
    scan_line(pixels, |rising, _| {
        if rising {
            up += 1;
        } else {
            down += 1;
        }
    });
    (
        ceq_row(up, len, base).expect("count bounded by line length"),
        ceq_row(down, len, base).expect("count bounded by line length"),
    )
}

/// CEQ counts of a contiguous row from its adjacent pixel pairs.
fn ceq_row_scan(row: &[u8], base: LogBase) -> (f64, f64) {
    let mut up = row[0] as u32;
    let mut down = 0u32;
    for (&a, &b) in row.iter().zip(&row[1..]) {
        up += (b & !a & 1) as u32;
        down += (a & !b & 1) as u32;
    }
    (
        ceq_row(up as usize, row.len(), base).expect("count bounded by line length"),
        ceq_row(down as usize, row.len(), base).expect("count bounded by line length"),
    )
}

fn seq_scan(pixels: impl Iterator<Item = u8>, alpha: usize, lines: usize, len: usize, base: LogBase) -> (f64, f64) {
    let mut plus = 0.0;
    let mut minus = 0.0;
    scan_line(pixels, |rising, pos| {
        let term = seq_kernel(pos, alpha, lines, len, base);
        if rising {
            plus += term;
        } else {
            minus += term;
        }
    });
    (plus, minus)
}

fn line_terms(
    img: &BinaryImage,
    quantifier: Quantifier,
    direction: Direction,
    opts: EntropyOptions,
) -> Vec<(f64, f64)> {
    let base = opts.log_base;
    let (w, h) = (img.width(), img.height());
    match direction {
        Direction::Horizontal => {
            let term = |(y, row): (usize, &[u8])| match quantifier {
                Quantifier::Ceq => ceq_row_scan(row, base),
                Quantifier::Seq => seq_scan(row.iter().copied(), y + 1, h, w, base),
            };
            if opts.parallel {
                img.pixels().par_chunks_exact(w).enumerate().map(term).collect()
            } else {
                img.rows().enumerate().map(term).collect()
            }
        }
        Direction::Vertical => (0..w)
            .map(|x| {
                let column = (0..h).map(|y| img.get(x, y));
                match quantifier {
                    Quantifier::Ceq => ceq_scan(column, h, base),
                    Quantifier::Seq => seq_scan(column, x + 1, w, h, base),
                }
            })
            .collect(),
    }
}

pub fn oracle_features(
    img: &BinaryImage,
    quantifier: Quantifier,
    direction: Direction,
    opts: EntropyOptions,
) -> EntropyFeatures {
    let per_line = line_terms(img, quantifier, direction, opts);
    EntropyFeatures::from_lines(quantifier, direction, opts.log_base, per_line)
}

pub fn oracle_ceq(img: &BinaryImage, direction: Direction, base: LogBase) -> EntropyFeatures {
    oracle_features(img, Quantifier::Ceq, direction, EntropyOptions::with_base(base))
}

pub fn oracle_seq(img: &BinaryImage, direction: Direction, base: LogBase) -> EntropyFeatures {
    oracle_features(img, Quantifier::Seq, direction, EntropyOptions::with_base(base))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::features;
    use crate::fixtures;
    use crate::rle::encode_image;
    use proptest::prelude::*;

    #[test]
    fn blank_is_zero() {
        let img = BinaryImage::blank(9, 3).unwrap();
        for dir in [Direction::Horizontal, Direction::Vertical] {
            assert_eq!(oracle_ceq(&img, dir, LogBase::E).f3, 0.0);
            assert_eq!(oracle_seq(&img, dir, LogBase::E).f3, 0.0);
        }
    }

    #[test]
    fn sample_matches_compressed_exactly() {
        let img = fixtures::sample_image();
        let doc = fixtures::sample_document();
        let opts = EntropyOptions::default();
        for q in [Quantifier::Ceq, Quantifier::Seq] {
            for d in [Direction::Horizontal, Direction::Vertical] {
                assert_eq!(oracle_features(&img, q, d, opts), features(&doc, q, d, opts), "{q} {d}");
            }
        }
    }

    #[test]
    fn single_ink_pixel() {
        let img = BinaryImage::new(1, 1, vec![1]).unwrap();
        let f = oracle_ceq(&img, Direction::Horizontal, LogBase::E);
        assert_eq!(f.per_row, vec![(0.0, 0.0)]);
        let f = oracle_seq(&img, Direction::Vertical, LogBase::E);
        assert_eq!(f.per_row, vec![(0.0, 0.0)]);
    }

    proptest! {
        #[test]
        fn agrees_with_compressed(w in 1usize..30, h in 1usize..30, seed in any::<u64>(), par in any::<bool>()) {
            let mut s = seed | 1;
            let img = BinaryImage::from_fn(w, h, |_, _| {
                s ^= s << 13; s ^= s >> 7; s ^= s << 17;
                s % 3 == 0
            }).unwrap();
            let doc = encode_image(&img);
            let opts = EntropyOptions { log_base: LogBase::Two, parallel: par };
            for q in [Quantifier::Ceq, Quantifier::Seq] {
                for d in [Direction::Horizontal, Direction::Vertical] {
                    let a = oracle_features(&img, q, d, opts);
                    let b = features(&doc, q, d, opts);
                    prop_assert_eq!(a.f3.to_bits(), b.f3.to_bits());
                }
            }
        }
    }
}
