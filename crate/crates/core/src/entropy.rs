//! Conventional (CEQ) and spatial (SEQ) entropy quantifiers.
//!
//! Both quantifiers are computed from transitions: CEQ from the number of
//! 0→1 and 1→0 transitions per line, SEQ from their positions. The functions
//! here work on run-length data only; [`oracle`] recomputes the same features
//! from raw pixels for comparison.
//!
//! For a line of `len` pixels with `count` transitions of one kind, CEQ is
//! the binary entropy of `p = count / len`:
//!
//! ```text
//! E(t) = p·log(1/p) + (1 − p)·log(1/(1 − p)),   0·log(1/0) := 0
//! ```
//!
//! SEQ sums, over every transition at position `pos` of line `alpha` (out of
//! `lines` lines), the kernel
//!
//! ```text
//! (alpha/lines)·((pos/len)·log(len/pos) + (lines − pos/len)·log(lines/(lines + len − pos)))
//! ```
//!
//! The second term is evaluated as written and is never positive.
//!
//! Vertical features apply the same formulas to columns: a column has `m`
//! pixels and the column index runs over `n` columns.

pub mod oracle;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rle::{RleDocument, RleRow};
use crate::sum::exact_sum;
use crate::transition::{column_transition_sets, count_transitions, Edge, TransitionIter, TransitionSet};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LogBase {
    #[default]
    #[serde(rename = "e")]
    E,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "10")]
    Ten,
}

impl LogBase {
    #[inline]
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::E => x.ln(),
            LogBase::Two => x.log2(),
            LogBase::Ten => x.log10(),
        }
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "e" | "ln" => Ok(LogBase::E),
            "2" => Ok(LogBase::Two),
            "10" => Ok(LogBase::Ten),
            _ => Err(Error::InvalidArgument(format!(
                "log base must be e, 2 or 10, got {s:?}"
            ))),
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogBase::E => "e",
            LogBase::Two => "2",
            LogBase::Ten => "10",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantifier {
    Ceq,
    Seq,
}

impl FromStr for Quantifier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ceq" => Ok(Quantifier::Ceq),
            "seq" => Ok(Quantifier::Seq),
            _ => Err(Error::InvalidArgument(format!(
                "quantifier must be ceq or seq, got {s:?}"
            ))),
        }
    }
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantifier::Ceq => "ceq",
            Quantifier::Seq => "seq",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Horizontal,
    Vertical,
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "h" | "horizontal" => Ok(Direction::Horizontal),
            "v" | "vertical" => Ok(Direction::Vertical),
            _ => Err(Error::InvalidArgument(format!("direction must be h or v, got {s:?}"))),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Horizontal => "h",
            Direction::Vertical => "v",
        })
    }
}

/// F1 = E⁺ total, F2 = E⁻ total, F3 = F1 + F2.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyFeatures {
    pub quantifier: Quantifier,
    pub direction: Direction,
    pub log_base: LogBase,
    #[serde(rename = "F1")]
    pub f1: f64,
    #[serde(rename = "F2")]
    pub f2: f64,
    #[serde(rename = "F3")]
    pub f3: f64,
    /// `(E⁺, E⁻)` per line: rows for horizontal, columns for vertical.
    pub per_row: Vec<(f64, f64)>,
}

impl EntropyFeatures {
    /// Totals are exactly rounded sums of the per-line terms, so they do not
    /// depend on line order.
    pub fn from_lines(
        quantifier: Quantifier,
        direction: Direction,
        log_base: LogBase,
        per_row: Vec<(f64, f64)>,
    ) -> Self {
        let f1 = exact_sum(per_row.iter().map(|t| t.0));
        let f2 = exact_sum(per_row.iter().map(|t| t.1));
        EntropyFeatures {
            quantifier,
            direction,
            log_base,
            f1,
            f2,
            f3: f1 + f2,
            per_row,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EntropyOptions {
    pub log_base: LogBase,
    /// Compute horizontal line terms on the rayon pool. Totals are
    /// unaffected.
    pub parallel: bool,
}

impl EntropyOptions {
    pub fn with_base(log_base: LogBase) -> Self {
        EntropyOptions {
            log_base,
            parallel: false,
        }
    }
}

#[inline]
fn plogp_inv(p: f64, base: LogBase) -> f64 {
    if p == 0.0 {
        0.0
    } else {
        p * base.log(1.0 / p)
    }
}

/// Binary entropy of `count` transitions over a line of `len` pixels.
pub fn ceq_row(count: usize, len: usize, base: LogBase) -> Result<f64> {
    if count > len || len == 0 {
        return Err(Error::CountOutOfRange { count, len });
    }
    let p = count as f64 / len as f64;
    Ok(plogp_inv(p, base) + plogp_inv(1.0 - p, base))
}

/// Contribution of one transition at `pos` on line `alpha`.
#[inline]
pub fn seq_kernel(pos: usize, alpha: usize, lines: usize, len: usize, base: LogBase) -> f64 {
    let pos = pos as f64;
    let lines = lines as f64;
    let len = len as f64;
    let weight = alpha as f64 / lines;
    let rel = pos / len;
    weight * (rel * base.log(len / pos) + (lines - rel) * base.log(lines / (lines + len - pos)))
}

/// `(E⁺, E⁻)` of one line from its transition positions.
pub fn seq_row(
    pos01: &[usize],
    pos10: &[usize],
    alpha: usize,
    lines: usize,
    len: usize,
    base: LogBase,
) -> Result<(f64, f64)> {
    if alpha == 0 || alpha > lines {
        return Err(Error::IndexOutOfRange {
            index: alpha,
            count: lines,
        });
    }
    let sum = |positions: &[usize]| -> Result<f64> {
        let mut total = 0.0;
        for &pos in positions {
            if pos == 0 || pos > len {
                return Err(Error::PositionOutOfRange { pos, len });
            }
            total += seq_kernel(pos, alpha, lines, len, base);
        }
        Ok(total)
    };
    Ok((sum(pos01)?, sum(pos10)?))
}

fn ceq_line(count01: usize, count10: usize, len: usize, base: LogBase) -> (f64, f64) {
    (
        ceq_row(count01, len, base).expect("transition count bounded by line length"),
        ceq_row(count10, len, base).expect("transition count bounded by line length"),
    )
}

fn ceq_compressed_row(row: &RleRow, base: LogBase) -> (f64, f64) {
    let (up, down) = count_transitions(row);
    ceq_line(up, down, row.width(), base)
}

/// Kernel sums over the row's transitions, E⁺ and E⁻ each in ascending
/// position order.
fn seq_compressed_row(row: &RleRow, alpha: usize, lines: usize, base: LogBase) -> (f64, f64) {
    let len = row.width();
    let mut plus = 0.0;
    let mut minus = 0.0;
    for (edge, pos) in TransitionIter::new(row) {
        let term = seq_kernel(pos, alpha, lines, len, base);
        match edge {
            Edge::Rising => plus += term,
            Edge::Falling => minus += term,
        }
    }
    (plus, minus)
}

fn map_rows<F>(doc: &RleDocument, parallel: bool, f: F) -> Vec<(f64, f64)>
where
    F: Fn(usize, &RleRow) -> (f64, f64) + Sync,
{
    if parallel {
        doc.rows().par_iter().enumerate().map(|(i, r)| f(i, r)).collect()
    } else {
        doc.rows().iter().enumerate().map(|(i, r)| f(i, r)).collect()
    }
}

pub fn ceq_horizontal(doc: &RleDocument, opts: EntropyOptions) -> EntropyFeatures {
    let base = opts.log_base;
    let per_row = map_rows(doc, opts.parallel, |_, row| ceq_compressed_row(row, base));
    EntropyFeatures::from_lines(Quantifier::Ceq, Direction::Horizontal, base, per_row)
}

pub fn seq_horizontal(doc: &RleDocument, opts: EntropyOptions) -> EntropyFeatures {
    let base = opts.log_base;
    let m = doc.height();
    let per_row = map_rows(doc, opts.parallel, |i, row| seq_compressed_row(row, i + 1, m, base));
    EntropyFeatures::from_lines(Quantifier::Seq, Direction::Horizontal, base, per_row)
}

/// CEQ terms for every line of a transition set.
pub fn ceq_lines(set: &TransitionSet, base: LogBase) -> Vec<(f64, f64)> {
    set.lines
        .iter()
        .map(|l| ceq_line(l.count01, l.count10, set.line_len, base))
        .collect()
}

/// SEQ terms for every line of a transition set; line `i` has index `i + 1`.
pub fn seq_lines(set: &TransitionSet, base: LogBase) -> Vec<(f64, f64)> {
    let lines = set.line_count();
    set.lines
        .iter()
        .enumerate()
        .map(|(i, l)| {
            seq_row(&l.pos01, &l.pos10, i + 1, lines, set.line_len, base)
                .expect("transition positions lie within the line")
        })
        .collect()
}

/// Vertical features stream columns out of the run-length rows; the image is
/// never decoded.
pub fn ceq_vertical(doc: &RleDocument, opts: EntropyOptions) -> EntropyFeatures {
    let set = column_transition_sets(doc);
    let per_col = ceq_lines(&set, opts.log_base);
    EntropyFeatures::from_lines(Quantifier::Ceq, Direction::Vertical, opts.log_base, per_col)
}

pub fn seq_vertical(doc: &RleDocument, opts: EntropyOptions) -> EntropyFeatures {
    let set = column_transition_sets(doc);
    let per_col = seq_lines(&set, opts.log_base);
    EntropyFeatures::from_lines(Quantifier::Seq, Direction::Vertical, opts.log_base, per_col)
}

/// Compressed-domain features for any quantifier/direction pair.
pub fn features(
    doc: &RleDocument,
    quantifier: Quantifier,
    direction: Direction,
    opts: EntropyOptions,
) -> EntropyFeatures {
    match (quantifier, direction) {
        (Quantifier::Ceq, Direction::Horizontal) => ceq_horizontal(doc, opts),
        (Quantifier::Seq, Direction::Horizontal) => seq_horizontal(doc, opts),
        (Quantifier::Ceq, Direction::Vertical) => ceq_vertical(doc, opts),
        (Quantifier::Seq, Direction::Vertical) => seq_vertical(doc, opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::image::{from_ascii_art, BinaryImage};
    use crate::rle::{decode_image, encode_image};
    use crate::transition::transition_positions;
    use proptest::prelude::*;

    const E: EntropyOptions = EntropyOptions {
        log_base: LogBase::E,
        parallel: false,
    };

    /// Direct evaluation of the printed binary-entropy expression.
    fn binary_entropy_reference(p: f64) -> f64 {
        p * (1.0 / p).ln() + (1.0 - p) * (1.0 / (1.0 - p)).ln()
    }

    fn doc(lines: &[&str]) -> RleDocument {
        encode_image(&from_ascii_art(lines, '1').unwrap())
    }

    #[test]
    fn ceq_row_values() {
        assert_eq!(ceq_row(0, 14, LogBase::E).unwrap(), 0.0);
        // 1/7·ln 7 + 6/7·ln(7/6) and 1/14·ln 14 + 13/14·ln(14/13).
        let two = ceq_row(2, 14, LogBase::E).unwrap();
        let one = ceq_row(1, 14, LogBase::E).unwrap();
        assert!((two - 0.4101163).abs() < 1e-6, "{two}");
        assert!((one - 0.2573186).abs() < 1e-6, "{one}");
        assert!((two - binary_entropy_reference(1.0 / 7.0)).abs() < 1e-15);
        assert!((one - binary_entropy_reference(1.0 / 14.0)).abs() < 1e-15);
        assert_eq!(ceq_row(1, 1, LogBase::E).unwrap(), 0.0);
        assert!(matches!(
            ceq_row(3, 2, LogBase::E),
            Err(Error::CountOutOfRange { count: 3, len: 2 })
        ));
    }

    #[test]
    fn ceq_row_bases_and_maximum() {
        assert!((ceq_row(1, 2, LogBase::Two).unwrap() - 1.0).abs() < 1e-15);
        assert!((ceq_row(5, 10, LogBase::Ten).unwrap() - 2f64.log10()).abs() < 1e-15);
        let e = ceq_row(3, 17, LogBase::E).unwrap();
        let two = ceq_row(3, 17, LogBase::Two).unwrap();
        assert!((two - e / std::f64::consts::LN_2).abs() < 1e-14);
    }

    #[test]
    fn single_row_ceq() {
        let d = RleDocument::from_runs([vec![2, 2, 4, 5, 1]], 14).unwrap();
        let f = ceq_horizontal(&d, E);
        assert!((f.f3 - 0.8202326).abs() < 1e-6);
        assert_eq!(f.f3, 2.0 * ceq_row(2, 14, LogBase::E).unwrap());
    }

    #[test]
    fn seq_row_cases() {
        assert_eq!(seq_row(&[], &[], 1, 1, 1, LogBase::E).unwrap(), (0.0, 0.0));
        assert_eq!(seq_row(&[1], &[], 1, 1, 1, LogBase::E).unwrap(), (0.0, 0.0));
        assert!(matches!(
            seq_row(&[15], &[], 1, 13, 14, LogBase::E),
            Err(Error::PositionOutOfRange { pos: 15, len: 14 })
        ));
        assert!(matches!(
            seq_row(&[], &[0], 1, 13, 14, LogBase::E),
            Err(Error::PositionOutOfRange { .. })
        ));
        assert!(matches!(
            seq_row(&[], &[], 14, 13, 14, LogBase::E),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn seq_row_sample_row_two() {
        let row = &fixtures::sample_document().rows()[1].clone();
        let (up, down) = transition_positions(row);
        assert_eq!(
            (up.as_slice(), down.as_slice()),
            ([3, 9].as_slice(), [5, 14].as_slice())
        );
        let got = seq_row(&up, &down, 2, 13, 14, LogBase::E).unwrap();
        // Hand-expanded kernel for each position.
        let k = |pos: f64| {
            (2.0 / 13.0) * ((pos / 14.0) * (14.0 / pos).ln() + (13.0 - pos / 14.0) * (13.0 / (27.0 - pos)).ln())
        };
        assert!((got.0 - (k(3.0) + k(9.0))).abs() < 1e-12);
        assert!((got.1 - (k(5.0) + k(14.0))).abs() < 1e-12);
        let oracle = oracle::oracle_seq(
            &decode_image(&fixtures::sample_document()),
            Direction::Horizontal,
            LogBase::E,
        );
        assert_eq!(oracle.per_row[1], got);
    }

    #[test]
    fn blank_documents_are_zero() {
        let d = encode_image(&BinaryImage::blank(7, 4).unwrap());
        for q in [Quantifier::Ceq, Quantifier::Seq] {
            for dir in [Direction::Horizontal, Direction::Vertical] {
                let f = features(&d, q, dir, E);
                assert_eq!((f.f1, f.f2, f.f3), (0.0, 0.0, 0.0), "{q} {dir}");
            }
        }
    }

    #[test]
    fn seq_sees_position_ceq_does_not() {
        let a = doc(&["0110000000"]);
        let b = doc(&["0000000110"]);
        assert_eq!(ceq_horizontal(&a, E).f3, ceq_horizontal(&b, E).f3);
        assert_ne!(seq_horizontal(&a, E).f3, seq_horizontal(&b, E).f3);
    }

    #[test]
    fn seq_weights_row_index() {
        let a = doc(&["0110", "0000"]);
        let b = doc(&["0000", "0110"]);
        assert_eq!(ceq_horizontal(&a, E).f3, ceq_horizontal(&b, E).f3);
        assert_ne!(seq_horizontal(&a, E).f3, seq_horizontal(&b, E).f3);
    }

    #[test]
    fn ceq_reversal_symmetry() {
        let a = doc(&["0011101000"]);
        let b = doc(&["0001011100"]);
        assert_eq!(ceq_horizontal(&a, E).per_row, ceq_horizontal(&b, E).per_row);
    }

    #[test]
    fn vertical_matches_transpose() {
        let d = fixtures::sample_document();
        let t = encode_image(&decode_image(&d).transpose());
        let cv = ceq_vertical(&d, E);
        let sv = seq_vertical(&d, E);
        assert_eq!(cv.per_row, ceq_horizontal(&t, E).per_row);
        assert_eq!(sv.per_row, seq_horizontal(&t, E).per_row);
        assert_eq!(cv.per_row.len(), 14);
    }

    #[test]
    fn parallel_matches_sequential() {
        let d = fixtures::sample_document();
        let par = EntropyOptions {
            log_base: LogBase::E,
            parallel: true,
        };
        assert_eq!(ceq_horizontal(&d, par), ceq_horizontal(&d, E));
        assert_eq!(seq_horizontal(&d, par), seq_horizontal(&d, E));
    }

    #[test]
    fn parse_and_display() {
        for b in [LogBase::E, LogBase::Two, LogBase::Ten] {
            assert_eq!(b.to_string().parse::<LogBase>().unwrap(), b);
        }
        assert_eq!("V".parse::<Direction>().unwrap(), Direction::Vertical);
        assert_eq!("SEQ".parse::<Quantifier>().unwrap(), Quantifier::Seq);
        assert!("3".parse::<LogBase>().is_err());
    }

    #[test]
    fn features_serialize_with_feature_names() {
        let f = ceq_horizontal(&fixtures::sample_document(), E);
        let v = serde_json::to_value(&f).unwrap();
        assert_eq!(v["F3"].as_f64().unwrap(), f.f3);
        assert_eq!(v["quantifier"], "ceq");
        assert_eq!(v["log_base"], "e");
    }

    fn arb_image(max: usize) -> impl Strategy<Value = BinaryImage> {
        (1..=max, 1..=max).prop_flat_map(|(w, h)| {
            proptest::collection::vec(0u8..=1, w * h).prop_map(move |px| BinaryImage::new(w, h, px).unwrap())
        })
    }

    proptest! {
        #[test]
        fn totals_are_exact_sums(img in arb_image(24)) {
            let d = encode_image(&img);
            for q in [Quantifier::Ceq, Quantifier::Seq] {
                for dir in [Direction::Horizontal, Direction::Vertical] {
                    let f = features(&d, q, dir, E);
                    prop_assert_eq!(f.f3, f.f1 + f.f2);
                    prop_assert_eq!(f.f1, exact_sum(f.per_row.iter().map(|t| t.0)));
                    prop_assert_eq!(f.f2, exact_sum(f.per_row.iter().map(|t| t.1)));
                }
            }
        }

        #[test]
        fn ceq_terms_bounded(img in arb_image(24), base in prop_oneof![Just(LogBase::E), Just(LogBase::Two), Just(LogBase::Ten)]) {
            let d = encode_image(&img);
            let bound = 2.0 * base.log(2.0) + 1e-12;
            for (up, down) in ceq_horizontal(&d, EntropyOptions::with_base(base)).per_row {
                prop_assert!(up >= 0.0 && down >= 0.0);
                prop_assert!(up + down <= bound);
            }
        }

        #[test]
        fn ceq_blind_to_row_order(img in arb_image(24), seed in any::<u64>()) {
            let mut order: Vec<usize> = (0..img.height()).collect();
            let mut s = seed;
            for i in (1..order.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                order.swap(i, (s >> 33) as usize % (i + 1));
            }
            let p = img.permute_rows(&order).unwrap();
            let a = ceq_horizontal(&encode_image(&img), E);
            let b = ceq_horizontal(&encode_image(&p), E);
            prop_assert_eq!(a.f1.to_bits(), b.f1.to_bits());
            prop_assert_eq!(a.f2.to_bits(), b.f2.to_bits());
        }
    }
}
