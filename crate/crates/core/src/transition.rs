//! Transition extraction straight from run-length rows, and column-wise
//! streaming of an [`RleDocument`] without materializing the image
//! ("virtual decompression").
//!
//! Positions are 1-based and name the pixel *after* the change. A row that
//! starts with ink has a 0→1 transition at position 1 (background is implied
//! before the first pixel); a row that ends with ink has no closing 1→0.

use serde::Serialize;

use crate::rle::{RleDocument, RleRow, Run};

/// Direction of a single transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edge {
    /// 0→1, into ink.
    Rising,
    /// 1→0, out of ink.
    Falling,
}

/// Transitions of one line (a row, or a column for vertical analysis).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LineTransitions {
    pub count01: usize,
    pub count10: usize,
    pub pos01: Vec<usize>,
    pub pos10: Vec<usize>,
}

impl LineTransitions {
    fn push(&mut self, edge: Edge, pos: usize) {
        match edge {
            Edge::Rising => {
                self.count01 += 1;
                self.pos01.push(pos);
            }
            Edge::Falling => {
                self.count10 += 1;
                self.pos10.push(pos);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransitionSet {
    pub lines: Vec<LineTransitions>,
    /// Pixels per line.
    pub line_len: usize,
}

impl TransitionSet {
    pub fn line_count(&self) -> usize {
        self.lines.len()
    }
}

/// Counts nonzero runs in the even (1-based) columns and in the odd columns
/// after the first: `(count01, count10)`.
pub fn count_transitions(row: &RleRow) -> (usize, usize) {
    let mut rising = 0;
    let mut falling = 0;
    for (i, &r) in row.runs().iter().enumerate().skip(1) {
        if r != 0 {
            if i % 2 == 1 {
                rising += 1;
            } else {
                falling += 1;
            }
        }
    }
    (rising, falling)
}

/// Walks a row's runs, yielding each transition with its 1-based position
/// (sum of all earlier runs plus one), in ascending order.
#[derive(Debug, Clone)]
pub struct TransitionIter<'a> {
    runs: std::iter::Enumerate<std::slice::Iter<'a, Run>>,
    offset: usize,
}

impl<'a> TransitionIter<'a> {
    pub fn new(row: &'a RleRow) -> Self {
        TransitionIter {
            runs: row.runs().iter().enumerate(),
            offset: 0,
        }
    }
}

impl Iterator for TransitionIter<'_> {
    type Item = (Edge, usize);

    fn next(&mut self) -> Option<Self::Item> {
        for (i, &r) in self.runs.by_ref() {
            let start = self.offset;
            self.offset += r as usize;
            if i == 0 || r == 0 {
                continue;
            }
            let edge = if i % 2 == 1 { Edge::Rising } else { Edge::Falling };
            return Some((edge, start + 1));
        }
        None
    }
}

pub fn transition_positions(row: &RleRow) -> (Vec<usize>, Vec<usize>) {
    let mut pos01 = Vec::new();
    let mut pos10 = Vec::new();
    for (edge, pos) in TransitionIter::new(row) {
        match edge {
            Edge::Rising => pos01.push(pos),
            Edge::Falling => pos10.push(pos),
        }
    }
    (pos01, pos10)
}

pub fn row_transitions(row: &RleRow) -> LineTransitions {
    let mut line = LineTransitions::default();
    for (edge, pos) in TransitionIter::new(row) {
        line.push(edge, pos);
    }
    line
}

pub fn row_transition_sets(doc: &RleDocument) -> TransitionSet {
    TransitionSet {
        lines: doc.rows().iter().map(row_transitions).collect(),
        line_len: doc.width(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PopStatus {
    Pop,
    /// Both leading entries were exhausted; the window moved two runs right
    /// before popping.
    ShiftPop,
}

impl std::fmt::Display for PopStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PopStatus::Pop => "pop",
            PopStatus::ShiftPop => "shift-pop",
        })
    }
}

/// Per-row state of virtual decompression: a two-run window over the row.
///
/// `head` is what remains of the 0-run at `col`, `next` what remains of the
/// 1-run after it. Shifting moves `col` by two, so the window always starts
/// on a 0-run.
#[derive(Debug, Clone)]
pub struct VirtualCursor<'a> {
    runs: &'a [Run],
    col: usize,
    head: Run,
    next: Run,
    emitted: usize,
}

impl<'a> VirtualCursor<'a> {
    pub fn new(row: &'a RleRow) -> Self {
        let runs = row.runs();
        VirtualCursor {
            runs,
            col: 0,
            head: runs[0],
            next: runs.get(1).copied().unwrap_or(0),
            emitted: 0,
        }
    }

    /// Emits the next pixel of the row, or `None` once the row is exhausted.
    pub fn pop(&mut self) -> Option<(u8, PopStatus)> {
        let mut status = PopStatus::Pop;
        if self.head == 0 && self.next == 0 {
            if self.col + 2 >= self.runs.len() {
                return None;
            }
            self.col += 2;
            self.head = self.runs[self.col];
            self.next = self.runs.get(self.col + 1).copied().unwrap_or(0);
            status = PopStatus::ShiftPop;
        }
        self.emitted += 1;
        if self.head > 0 {
            self.head -= 1;
            Some((0, status))
        } else {
            self.next -= 1;
            Some((1, status))
        }
    }

    pub fn emitted(&self) -> usize {
        self.emitted
    }

    pub fn is_terminal(&self) -> bool {
        self.head == 0 && self.next == 0 && self.col + 2 >= self.runs.len()
    }

    /// Run values as currently seen from the window onwards.
    pub fn remaining_runs(&self) -> Vec<Run> {
        let mut out = vec![self.head];
        if self.col + 1 < self.runs.len() {
            out.push(self.next);
            out.extend_from_slice(&self.runs[self.col + 2..]);
        }
        out
    }
}

/// Column-major pixel stream over a document. Pass `p` yields pixel
/// `(row, p)` for every row, top to bottom.
#[derive(Debug, Clone)]
pub struct VirtualDecompressor<'a> {
    cursors: Vec<VirtualCursor<'a>>,
    width: usize,
    pass: usize,
    row: usize,
}

impl<'a> VirtualDecompressor<'a> {
    pub fn new(doc: &'a RleDocument) -> Self {
        VirtualDecompressor {
            cursors: doc.rows().iter().map(VirtualCursor::new).collect(),
            width: doc.width(),
            pass: 0,
            row: 0,
        }
    }

    /// Completed passes.
    pub fn passes(&self) -> usize {
        self.pass
    }

    pub fn cursors(&self) -> &[VirtualCursor<'a>] {
        &self.cursors
    }

    /// Runs one full pass, writing one pixel per row into `column`.
    /// Returns `false` once all columns have been emitted.
    ///
    /// Must not be mixed with a partially consumed pixel iterator.
    pub fn next_column(&mut self, column: &mut Vec<u8>) -> bool {
        debug_assert_eq!(self.row, 0);
        column.clear();
        if self.pass == self.width {
            return false;
        }
        column.extend(
            self.cursors
                .iter_mut()
                .map(|c| c.pop().expect("cursor emits exactly width pixels").0),
        );
        self.pass += 1;
        true
    }

    /// One pass with the per-row status and post-pop runs recorded.
    pub fn next_traced_pass(&mut self) -> Option<TracePass> {
        if self.pass == self.width {
            return None;
        }
        self.pass += 1;
        let rows = self
            .cursors
            .iter_mut()
            .enumerate()
            .map(|(i, c)| {
                let (bit, status) = c.pop().expect("cursor emits exactly width pixels");
                TraceRow {
                    line: i + 1,
                    bit,
                    runs: c.remaining_runs(),
                    status,
                }
            })
            .collect();
        Some(TracePass { pass: self.pass, rows })
    }
}

impl Iterator for VirtualDecompressor<'_> {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        if self.pass == self.width {
            return None;
        }
        let (bit, _) = self.cursors[self.row].pop().expect("cursor emits exactly width pixels");
        self.row += 1;
        if self.row == self.cursors.len() {
            self.row = 0;
            self.pass += 1;
        }
        Some(bit)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.width - self.pass) * self.cursors.len() - self.row;
        (left, Some(left))
    }
}

impl ExactSizeIterator for VirtualDecompressor<'_> {}

pub fn virtual_decompress(doc: &RleDocument) -> VirtualDecompressor<'_> {
    VirtualDecompressor::new(doc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceRow {
    /// 1-based row number.
    pub line: usize,
    pub bit: u8,
    pub runs: Vec<Run>,
    pub status: PopStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TracePass {
    /// 1-based pass number.
    pub pass: usize,
    pub rows: Vec<TraceRow>,
}

/// Records the first `passes` passes of virtual decompression.
pub fn trace(doc: &RleDocument, passes: usize) -> Vec<TracePass> {
    let mut vd = VirtualDecompressor::new(doc);
    std::iter::from_fn(|| vd.next_traced_pass()).take(passes).collect()
}

/// Column transitions gathered pass by pass from virtual decompression.
/// Line `j` of the result is column `j + 1`; positions are row numbers.
pub fn column_transition_sets(doc: &RleDocument) -> TransitionSet {
    let mut vd = VirtualDecompressor::new(doc);
    let mut lines = Vec::with_capacity(doc.width());
    let mut column = Vec::with_capacity(doc.height());
    while vd.next_column(&mut column) {
        let mut line = LineTransitions::default();
        let mut prev = 0u8;
        for (r, &bit) in column.iter().enumerate() {
            if bit != prev {
                let edge = if bit == 1 { Edge::Rising } else { Edge::Falling };
                line.push(edge, r + 1);
                prev = bit;
            }
        }
        lines.push(line);
    }
    TransitionSet {
        lines,
        line_len: doc.height(),
    }
}
