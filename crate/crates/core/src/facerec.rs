//! LBP face recognition: region selection, local binary pattern codes,
//! grid histogram templates, chi-square matching and the accept/reject
//! decision against an enrolled database.

use crate::imaging::{crop, resize_nearest, GrayImage};
use thiserror::Error;

/// Side length every face crop is resampled to before coding.
pub const NORMALIZED_SIZE: usize = 128;
/// Cells per side of the histogram grid.
pub const GRID: usize = 8;
pub const CELL_SIZE: usize = NORMALIZED_SIZE / GRID;
pub const BINS: usize = 256;
pub const DEFAULT_THRESHOLD: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FaceError {
    #[error("template label must not be empty")]
    EmptyLabel,
    #[error("template label {0:?} must not contain whitespace")]
    InvalidLabel(String),
    #[error("label {0:?} is already enrolled")]
    DuplicateLabel(String),
    #[error("histogram length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("face region {0:?} lies outside the {1}x{2} frame")]
    RectOutOfBounds(Rect, usize, usize),
    #[error("template must hold {expected} cells, got {found}")]
    GridSize { expected: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rect {
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
}

impl Rect {
    pub fn new(x: usize, y: usize, w: usize, h: usize) -> Self {
        Self { x, y, w, h }
    }

    pub fn full(img: &GrayImage) -> Self {
        Self::new(0, 0, img.width(), img.height())
    }

    pub fn fits(&self, img: &GrayImage) -> bool {
        self.w >= 1
            && self.h >= 1
            && self.x + self.w <= img.width()
            && self.y + self.h <= img.height()
    }
}

/// Locates the face region in a frame.
pub trait FaceDetector {
    fn detect(&self, img: &GrayImage) -> Rect;
}

/// Treats the whole frame as the face. Used when no real detector is wired in.
#[derive(Debug, Clone, Copy, Default)]
pub struct WholeFrame;

impl FaceDetector for WholeFrame {
    fn detect(&self, img: &GrayImage) -> Rect {
        Rect::full(img)
    }
}

pub fn detect_face(img: &GrayImage) -> Rect {
    WholeFrame.detect(img)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LbpImage {
    width: usize,
    height: usize,
    codes: Vec<u8>,
}

impl LbpImage {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn codes(&self) -> &[u8] {
        &self.codes
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.codes[y * self.width + x]
    }

    /// Views the code map as a grayscale image (for debugging output).
    pub fn to_image(&self) -> GrayImage {
        GrayImage::new(self.width, self.height, self.codes.clone())
            .expect("lbp map keeps source dimensions")
    }
}

// (dy, dx) neighbour offsets, clockwise from the top-left; index i sets bit 7 - i.
const NEIGHBOURS: [(isize, isize); 8] = [
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
    (1, 0),
    (1, -1),
    (0, -1),
];

/// Computes the 8-neighbour LBP code of every pixel. A neighbour sets its bit
/// when it is greater than or equal to the centre; coordinates outside the
/// frame are clamped to the nearest edge pixel.
pub fn lbp_map(img: &GrayImage) -> LbpImage {
    let (w, h) = (img.width(), img.height());
    let data = img.data();
    let mut codes = Vec::with_capacity(w * h);
    let clamp = |v: usize, d: isize, max: usize| (v as isize + d).clamp(0, max as isize - 1) as usize;
    for y in 0..h {
        for x in 0..w {
            let centre = data[y * w + x];
            let mut code = 0u8;
            for (i, &(dy, dx)) in NEIGHBOURS.iter().enumerate() {
                let n = data[clamp(y, dy, h) * w + clamp(x, dx, w)];
                if n >= centre {
                    code |= 1 << (7 - i);
                }
            }
            codes.push(code);
        }
    }
    LbpImage {
        width: w,
        height: h,
        codes,
    }
}

/// A 256-bin LBP code histogram.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram(Box<[f64; BINS]>);

impl Default for Histogram {
    fn default() -> Self {
        Self(Box::new([0.0; BINS]))
    }
}

impl Histogram {
    pub fn from_bins(bins: &[f64]) -> Result<Self, FaceError> {
        let arr: [f64; BINS] = bins
            .try_into()
            .map_err(|_| FaceError::LengthMismatch(bins.len(), BINS))?;
        Ok(Self(Box::new(arr)))
    }

    /// Normalized histogram of a set of codes. An empty set gives all zeros.
    pub fn of_codes(codes: impl IntoIterator<Item = u8>) -> Self {
        let mut counts = [0u64; BINS];
        let mut total = 0u64;
        for c in codes {
            counts[usize::from(c)] += 1;
            total += 1;
        }
        let mut bins = [0.0; BINS];
        if total > 0 {
            for (b, &n) in bins.iter_mut().zip(&counts) {
                *b = n as f64 / total as f64;
            }
        }
        Self(Box::new(bins))
    }

    pub fn bins(&self) -> &[f64] {
        &self.0[..]
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn chi_square(&self, other: &Histogram) -> f64 {
        chi_square_bins(&self.0[..], &other.0[..])
    }
}

fn chi_square_bins(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .filter(|(x, y)| *x + *y != 0.0)
        .map(|(x, y)| (x - y) * (x - y) / (x + y))
        .sum()
}

/// Chi-square histogram distance, `sum (a - b)^2 / (a + b)` over bins with a
/// non-zero denominator.
pub fn chi_square(a: &[f64], b: &[f64]) -> Result<f64, FaceError> {
    if a.len() != b.len() {
        return Err(FaceError::LengthMismatch(a.len(), b.len()));
    }
    Ok(chi_square_bins(a, b))
}

/// One enrolled identity: an 8×8 grid of LBP histograms in row-major cell
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceTemplate {
    label: String,
    cells: Vec<Histogram>,
}

fn check_label(label: &str) -> Result<(), FaceError> {
    if label.is_empty() {
        return Err(FaceError::EmptyLabel);
    }
    if label.chars().any(char::is_whitespace) {
        return Err(FaceError::InvalidLabel(label.to_owned()));
    }
    Ok(())
}

impl FaceTemplate {
    pub fn new(label: impl Into<String>, cells: Vec<Histogram>) -> Result<Self, FaceError> {
        let label = label.into();
        check_label(&label)?;
        if cells.len() != GRID * GRID {
            return Err(FaceError::GridSize {
                expected: GRID * GRID,
                found: cells.len(),
            });
        }
        Ok(Self { label, cells })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn cells(&self) -> &[Histogram] {
        &self.cells
    }

    pub fn cell(&self, row: usize, col: usize) -> &Histogram {
        &self.cells[row * GRID + col]
    }

    /// Sum of per-cell chi-square distances.
    pub fn distance(&self, other: &FaceTemplate) -> f64 {
        self.cells
            .iter()
            .zip(&other.cells)
            .map(|(a, b)| a.chi_square(b))
            .sum()
    }
}

pub fn template_distance(a: &FaceTemplate, b: &FaceTemplate) -> f64 {
    a.distance(b)
}

/// Crop, normalize to 128×128, code, and histogram each 16×16 cell.
pub fn extract_template(img: &GrayImage, face: Rect, label: &str) -> Result<FaceTemplate, FaceError> {
    check_label(label)?;
    if !face.fits(img) {
        return Err(FaceError::RectOutOfBounds(face, img.width(), img.height()));
    }
    let region = if face == Rect::full(img) {
        img.clone()
    } else {
        crop(img, face.x, face.y, face.w, face.h).expect("rect checked above")
    };
    let normalized =
        resize_nearest(&region, NORMALIZED_SIZE, NORMALIZED_SIZE).expect("non-zero target size");
    let lbp = lbp_map(&normalized);
    let mut cells = Vec::with_capacity(GRID * GRID);
    for gy in 0..GRID {
        for gx in 0..GRID {
            let codes = (0..CELL_SIZE).flat_map(|dy| {
                let row = gy * CELL_SIZE + dy;
                let start = row * NORMALIZED_SIZE + gx * CELL_SIZE;
                lbp.codes[start..start + CELL_SIZE].iter().copied()
            });
            cells.push(Histogram::of_codes(codes));
        }
    }
    FaceTemplate::new(label, cells)
}

#[derive(Debug, Clone, PartialEq)]
pub enum MatchResult {
    Match { label: String, distance: f64 },
    /// `best_distance` is `None` when the database is empty.
    NoMatch { best_distance: Option<f64> },
}

impl MatchResult {
    pub fn is_match(&self) -> bool {
        matches!(self, MatchResult::Match { .. })
    }
}

/// The enrolled face database, in enrollment order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FaceDb {
    templates: Vec<FaceTemplate>,
}

impl FaceDb {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a database from existing templates, rejecting duplicate labels.
    pub fn from_templates(templates: Vec<FaceTemplate>) -> Result<Self, FaceError> {
        let mut db = Self::new();
        for t in templates {
            db = db.insert(t)?;
        }
        Ok(db)
    }

    pub fn templates(&self) -> &[FaceTemplate] {
        &self.templates
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.templates.iter().any(|t| t.label == label)
    }

    pub fn insert(mut self, template: FaceTemplate) -> Result<Self, FaceError> {
        if self.contains(&template.label) {
            return Err(FaceError::DuplicateLabel(template.label));
        }
        self.templates.push(template);
        Ok(self)
    }

    pub fn enroll(self, label: &str, img: &GrayImage) -> Result<Self, FaceError> {
        self.enroll_with(&WholeFrame, label, img)
    }

    pub fn enroll_with(
        self,
        detector: &dyn FaceDetector,
        label: &str,
        img: &GrayImage,
    ) -> Result<Self, FaceError> {
        if self.contains(label) {
            return Err(FaceError::DuplicateLabel(label.to_owned()));
        }
        let template = extract_template(img, detector.detect(img), label)?;
        self.insert(template)
    }

    /// Nearest template to `probe`; ties go to the earliest enrollment.
    pub fn nearest(&self, probe: &FaceTemplate) -> Option<(&FaceTemplate, f64)> {
        let mut best: Option<(&FaceTemplate, f64)> = None;
        for t in &self.templates {
            let d = t.distance(probe);
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((t, d));
            }
        }
        best
    }

    pub fn identify(&self, img: &GrayImage, threshold: f64) -> MatchResult {
        self.identify_with(&WholeFrame, img, threshold)
    }

    pub fn identify_with(
        &self,
        detector: &dyn FaceDetector,
        img: &GrayImage,
        threshold: f64,
    ) -> MatchResult {
        if self.templates.is_empty() {
            return MatchResult::NoMatch {
                best_distance: None,
            };
        }
        let face = detector.detect(img);
        let probe = match extract_template(img, face, "probe") {
            Ok(t) => t,
            Err(_) => {
                return MatchResult::NoMatch {
                    best_distance: None,
                }
            }
        };
        match self.nearest(&probe) {
            Some((t, d)) if d <= threshold => MatchResult::Match {
                label: t.label.clone(),
                distance: d,
            },
            Some((_, d)) => MatchResult::NoMatch {
                best_distance: Some(d),
            },
            None => MatchResult::NoMatch {
                best_distance: None,
            },
        }
    }
}

pub fn enroll(db: FaceDb, label: &str, img: &GrayImage) -> Result<FaceDb, FaceError> {
    db.enroll(label, img)
}

pub fn identify(db: &FaceDb, img: &GrayImage, threshold: f64) -> MatchResult {
    db.identify(img, threshold)
}
