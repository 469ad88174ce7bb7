//! Small reference inputs: the classic 14×13 run-length sample and a tiny
//! bitmap font for building word images.

use crate::error::Result;
use crate::image::{from_ascii_art, BinaryImage};
use crate::rle::{RleDocument, Run};

/// Run columns of the 14-pixel-wide, 13-row sample, canonical (unpadded).
pub const SAMPLE_RUNS: [&[Run]; 13] = [
    &[14],
    &[2, 2, 4, 5, 1],
    &[1, 4, 3, 5, 1],
    &[1, 4, 3, 5, 1],
    &[1, 4, 3, 5, 1],
    &[2, 2, 10],
    &[0, 1, 13],
    &[0, 1, 13],
    &[2, 1, 4, 5, 2],
    &[1, 3, 3, 5, 2],
    &[1, 4, 2, 5, 2],
    &[1, 5, 8],
    &[14],
];

pub const SAMPLE_WIDTH: usize = 14;

pub fn sample_document() -> RleDocument {
    RleDocument::from_runs(SAMPLE_RUNS.iter().map(|r| r.to_vec()), SAMPLE_WIDTH).expect("sample runs are canonical")
}

/// The sample as ASCII art, expanded from its run columns.
pub fn sample_art() -> Vec<String> {
    SAMPLE_RUNS
        .iter()
        .map(|runs| {
            runs.iter()
                .enumerate()
                .flat_map(|(i, &r)| std::iter::repeat_n(if i % 2 == 0 { '0' } else { '1' }, r as usize))
                .collect()
        })
        .collect()
}

pub fn sample_image() -> BinaryImage {
    from_ascii_art(&sample_art(), '1').expect("sample art is rectangular")
}

const GLYPH_HEIGHT: usize = 9;

/// 5×9 lowercase glyphs, `#` = ink.
fn glyph(c: char) -> Option<[&'static str; GLYPH_HEIGHT]> {
    Some(match c {
        'b' => [
            "#....", "#....", "#....", "####.", "#...#", "#...#", "#...#", "####.", ".....",
        ],
        't' => [
            ".....", ".#...", ".#...", "####.", ".#...", ".#...", ".#..#", "..##.", ".....",
        ],
        'u' => [
            ".....", ".....", ".....", "#...#", "#...#", "#...#", "#..##", ".##.#", ".....",
        ],
        'o' => [
            ".....", ".....", ".....", ".###.", "#...#", "#...#", "#...#", ".###.", ".....",
        ],
        'p' => [
            ".....", ".....", ".....", "####.", "#...#", "#...#", "####.", "#....", "#....",
        ],
        'c' => [
            ".....", ".....", ".....", ".####", "#....", "#....", "#....", ".####", ".....",
        ],
        's' => [
            ".....", ".....", ".....", ".####", "#....", ".###.", "....#", "####.", ".....",
        ],
        'd' => [
            "....#", "....#", "....#", ".####", "#...#", "#...#", "#...#", ".####", ".....",
        ],
        _ => return None,
    })
}

/// Renders a word with one background column before, between and after
/// glyphs. Only the letters `b c d o p s t u` are available.
pub fn render_word(word: &str) -> Result<BinaryImage> {
    let glyphs = word
        .chars()
        .map(|c| glyph(c).ok_or_else(|| crate::Error::InvalidArgument(format!("no glyph for {c:?}"))))
        .collect::<Result<Vec<_>>>()?;
    let lines: Vec<String> = (0..GLYPH_HEIGHT)
        .map(|y| {
            let mut line = String::from(".");
            for g in &glyphs {
                line.push_str(g[y]);
                line.push('.');
            }
            line
        })
        .collect();
    from_ascii_art(&lines, '#')
}
