//! Synthetic fixtures and the compressed-vs-uncompressed timing harness.
//!
//! Each scenario times the compressed-domain feature computation on an
//! [`RleDocument`] against the pixel-scan baseline on the decoded
//! [`BinaryImage`]. Both inputs are held in memory; decoding is excluded from
//! the baseline unless [`BenchOptions::include_decode`] is set. Times are the
//! median over the repetitions after one untimed warm-up run.

use std::fmt;
use std::hint::black_box;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::entropy::oracle::oracle_features;
use crate::entropy::{features, Direction, EntropyOptions, LogBase, Quantifier};
use crate::error::{Error, Result};
use crate::image::BinaryImage;
use crate::rle::{compression_stats, decode_image, RleDocument};

pub const DEFAULT_SEED: u64 = 42;

/// Mean length of an ink run in text-like fixtures, in pixels.
const TEXT_RUN_MEAN: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FixtureKind {
    Blank,
    Checkerboard,
    TextLike,
}

impl FromStr for FixtureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "blank" => Ok(FixtureKind::Blank),
            "checkerboard" => Ok(FixtureKind::Checkerboard),
            "text-like" | "text" => Ok(FixtureKind::TextLike),
            _ => Err(Error::InvalidArgument(format!(
                "fixture kind must be blank, checkerboard or text-like, got {s:?}"
            ))),
        }
    }
}

impl fmt::Display for FixtureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FixtureKind::Blank => "blank",
            FixtureKind::Checkerboard => "checkerboard",
            FixtureKind::TextLike => "text-like",
        })
    }
}

/// Builds a synthetic page.
///
/// Text-like rows alternate background gaps and ink runs with uniformly
/// distributed lengths whose means give roughly `density` ink. The output
/// depends only on the arguments.
pub fn generate_fixture(
    kind: FixtureKind,
    width: usize,
    height: usize,
    density: f64,
    seed: u64,
) -> Result<BinaryImage> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidDensity(density));
    }
    match kind {
        FixtureKind::Blank => BinaryImage::blank(width, height),
        FixtureKind::Checkerboard => BinaryImage::from_fn(width, height, |x, y| (x + y) % 2 == 1),
        FixtureKind::TextLike => {
            if density == 0.0 {
                return BinaryImage::blank(width, height);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ink_max = (2.0 * TEXT_RUN_MEAN - 1.0) as usize;
            let gap_mean = TEXT_RUN_MEAN * (1.0 - density) / density;
            let gap_max = ((2.0 * gap_mean - 1.0).round() as usize).max(1);
            let mut pixels = Vec::with_capacity(width.saturating_mul(height));
            for _ in 0..height {
                let mut x = 0;
                let mut ink = false;
                while x < width {
                    let run = if ink {
                        rng.random_range(1..=ink_max)
                    } else if density == 1.0 {
                        0
                    } else {
                        rng.random_range(1..=gap_max)
                    };
                    let run = run.min(width - x);
                    pixels.extend(std::iter::repeat_n(ink as u8, run));
                    x += run;
                    ink = !ink;
                }
            }
            BinaryImage::new(width, height, pixels)
        }
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub label: String,
    pub doc: RleDocument,
    pub quantifier: Quantifier,
    pub direction: Direction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchOptions {
    pub repetitions: usize,
    pub log_base: LogBase,
    /// Charge decoding to the uncompressed path.
    pub include_decode: bool,
    /// Row-parallel horizontal processing in both paths.
    pub parallel: bool,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            repetitions: 11,
            log_base: LogBase::E,
            include_decode: false,
            parallel: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub label: String,
    pub quantifier: Quantifier,
    pub direction: Direction,
    /// Median seconds, compressed domain.
    pub t_compressed: f64,
    /// Median seconds, pixel-scan baseline.
    pub t_uncompressed: f64,
    /// `t_uncompressed / t_compressed`.
    pub ratio: f64,
    pub repetitions: usize,
    pub width: usize,
    pub height: usize,
    pub compression_ratio: f64,
    pub include_decode: bool,
    /// A median was within a few ticks of the clock resolution.
    pub unreliable: bool,
    #[serde(rename = "F3")]
    pub f3: f64,
}

/// Smallest observable nonzero step of the monotonic clock.
pub fn timer_resolution() -> Duration {
    let mut best = Duration::MAX;
    for _ in 0..200 {
        let a = Instant::now();
        let mut b = Instant::now();
        while b == a {
            b = Instant::now();
        }
        best = best.min(b - a);
    }
    best
}

fn median(mut samples: Vec<Duration>) -> Duration {
    samples.sort_unstable();
    let n = samples.len();
    if n % 2 == 1 {
        samples[n / 2]
    } else {
        (samples[n / 2 - 1] + samples[n / 2]) / 2
    }
}

fn time_median<T>(reps: usize, mut f: impl FnMut() -> T) -> Duration {
    black_box(f());
    let samples = (0..reps)
        .map(|_| {
            let start = Instant::now();
            black_box(f());
            start.elapsed()
        })
        .collect();
    median(samples)
}

pub(crate) fn relative_eq(a: f64, b: f64, rel: f64) -> bool {
    a == b || (a - b).abs() <= rel * a.abs().max(b.abs())
}

/// Times one scenario. Fails with [`Error::PathMismatch`] if the two paths
/// disagree on F3 beyond 1e-12 relative error, before any time is reported.
pub fn bench(scenario: &Scenario, opts: BenchOptions) -> Result<BenchReport> {
    if opts.repetitions < 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least 3 repetitions, got {}",
            opts.repetitions
        )));
    }
    let doc = &scenario.doc;
    let (q, d) = (scenario.quantifier, scenario.direction);
    let eopts = EntropyOptions {
        log_base: opts.log_base,
        parallel: opts.parallel,
    };
    let img = decode_image(doc);

    let compressed = features(doc, q, d, eopts).f3;
    let uncompressed = oracle_features(&img, q, d, eopts).f3;
    if !relative_eq(compressed, uncompressed, 1e-12) {
        return Err(Error::PathMismatch {
            compressed,
            uncompressed,
        });
    }

    let t_comp = time_median(opts.repetitions, || features(black_box(doc), q, d, eopts));
    let t_raw = if opts.include_decode {
        time_median(opts.repetitions, || {
            let img = decode_image(black_box(doc));
            oracle_features(&img, q, d, eopts)
        })
    } else {
        time_median(opts.repetitions, || oracle_features(black_box(&img), q, d, eopts))
    };

    let resolution = timer_resolution();
    let floor = resolution * 10;
    let unreliable = t_comp < floor || t_raw < floor;
    let t_compressed = t_comp.max(resolution).as_secs_f64();
    let t_uncompressed = t_raw.max(resolution).as_secs_f64();

    Ok(BenchReport {
        label: scenario.label.clone(),
        quantifier: q,
        direction: d,
        t_compressed,
        t_uncompressed,
        ratio: t_uncompressed / t_compressed,
        repetitions: opts.repetitions,
        width: doc.width(),
        height: doc.height(),
        compression_ratio: compression_stats(doc).ratio,
        include_decode: opts.include_decode,
        unreliable,
        f3: compressed,
    })
}

pub fn reports_to_csv(reports: &[BenchReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in reports {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
