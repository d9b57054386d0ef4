//! Netpbm (PGM/PPM) codecs and the grayscale conversion that feeds the face
//! pipeline.
//!
//! Only `maxval` 255 is accepted. Header tokens may be separated by any
//! whitespace and `#` comments run to the end of the line. For the binary
//! variants (P5/P6) the raster starts right after the single whitespace byte
//! that follows `maxval`.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ImageError {
    #[error("unknown magic number (expected P2/P3/P5/P6)")]
    UnknownMagic,
    #[error("unsupported maxval {0} (only 255 is supported)")]
    UnsupportedMaxval(u32),
    #[error("truncated raster: expected {expected} samples, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("malformed sample {0:?}")]
    MalformedSample(String),
    #[error("image dimensions must be at least 1x1")]
    ZeroDimension,
    #[error("raster length {found} does not match {width}x{height}")]
    LengthMismatch {
        width: usize,
        height: usize,
        found: usize,
    },
}

/// 8-bit single-channel raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self, ImageError> {
        if width == 0 || height == 0 {
            return Err(ImageError::ZeroDimension);
        }
        if data.len() != width * height {
            return Err(ImageError::LengthMismatch {
                width,
                height,
                found: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Builds an image by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> u8,
    ) -> Result<Self, ImageError> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }
}

/// 8-bit RGB raster, row-major interleaved `r, g, b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self, ImageError> {
        if width == 0 || height == 0 {
            return Err(ImageError::ZeroDimension);
        }
        if data.len() != 3 * width * height {
            return Err(ImageError::LengthMismatch {
                width,
                height,
                found: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = 3 * (y * self.width + x);
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Encoding {
    Ascii,
    Binary,
}

struct Header {
    encoding: Encoding,
    width: usize,
    height: usize,
    /// Offset of the first raster byte.
    raster_start: usize,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn next_token(&mut self) -> Option<&'a [u8]> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() || b == b'#' {
                break;
            }
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.bytes[start..self.pos])
    }

    fn header_number(&mut self, what: &str) -> Result<usize, ImageError> {
        let tok = self
            .next_token()
            .ok_or_else(|| ImageError::MalformedHeader(format!("missing {what}")))?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(|| {
                ImageError::MalformedHeader(format!(
                    "bad {what} {:?}",
                    String::from_utf8_lossy(tok)
                ))
            })
    }
}

fn parse_header(bytes: &[u8], ascii: &[u8; 2], binary: &[u8; 2]) -> Result<Header, ImageError> {
    if bytes.len() < 2 {
        return Err(ImageError::UnknownMagic);
    }
    let encoding = match &bytes[..2] {
        m if m == ascii => Encoding::Ascii,
        m if m == binary => Encoding::Binary,
        _ => return Err(ImageError::UnknownMagic),
    };
    let mut cur = Cursor { bytes, pos: 2 };
    // The magic must be followed by whitespace or a comment.
    match bytes.get(2) {
        Some(b) if b.is_ascii_whitespace() || *b == b'#' => {}
        _ => return Err(ImageError::MalformedHeader("magic not delimited".into())),
    }
    let width = cur.header_number("width")?;
    let height = cur.header_number("height")?;
    let maxval = cur.header_number("maxval")?;
    if width == 0 || height == 0 {
        return Err(ImageError::ZeroDimension);
    }
    if maxval != 255 {
        return Err(ImageError::UnsupportedMaxval(
            u32::try_from(maxval).unwrap_or(u32::MAX),
        ));
    }
    let raster_start = match encoding {
        Encoding::Ascii => cur.pos,
        Encoding::Binary => match bytes.get(cur.pos) {
            Some(b) if b.is_ascii_whitespace() => cur.pos + 1,
            Some(_) => {
                return Err(ImageError::MalformedHeader(
                    "maxval must be followed by a single whitespace byte".into(),
                ))
            }
            None => cur.pos,
        },
    };
    Ok(Header {
        encoding,
        width,
        height,
        raster_start,
    })
}

fn read_samples(bytes: &[u8], header: &Header, count: usize) -> Result<Vec<u8>, ImageError> {
    match header.encoding {
        Encoding::Binary => {
            let raster = &bytes[header.raster_start.min(bytes.len())..];
            if raster.len() < count {
                return Err(ImageError::Truncated {
                    expected: count,
                    found: raster.len(),
                });
            }
            Ok(raster[..count].to_vec())
        }
        Encoding::Ascii => {
            let mut cur = Cursor {
                bytes,
                pos: header.raster_start,
            };
            let mut out = Vec::with_capacity(count);
            while out.len() < count {
                let Some(tok) = cur.next_token() else {
                    return Err(ImageError::Truncated {
                        expected: count,
                        found: out.len(),
                    });
                };
                let v = std::str::from_utf8(tok)
                    .ok()
                    .and_then(|s| s.parse::<u32>().ok())
                    .filter(|&v| v <= 255)
                    .ok_or_else(|| {
                        ImageError::MalformedSample(String::from_utf8_lossy(tok).into_owned())
                    })?;
                out.push(v as u8);
            }
            Ok(out)
        }
    }
}

/// Decodes a P2 or P5 graymap.
pub fn load_pgm(bytes: &[u8]) -> Result<GrayImage, ImageError> {
    let header = parse_header(bytes, b"P2", b"P5")?;
    let data = read_samples(bytes, &header, header.width * header.height)?;
    GrayImage::new(header.width, header.height, data)
}

/// Encodes as binary P5 with `maxval` 255.
pub fn save_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend_from_slice(&img.data);
    out
}

/// Decodes a P3 or P6 pixmap.
pub fn load_ppm(bytes: &[u8]) -> Result<RgbImage, ImageError> {
    let header = parse_header(bytes, b"P3", b"P6")?;
    let data = read_samples(bytes, &header, 3 * header.width * header.height)?;
    RgbImage::new(header.width, header.height, data)
}

/// Encodes as binary P6 with `maxval` 255.
pub fn save_ppm(img: &RgbImage) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend_from_slice(&img.data);
    out
}

/// Decodes any supported netpbm frame into grayscale, converting color
/// frames with [`rgb_to_gray`].
pub fn load_frame(bytes: &[u8]) -> Result<GrayImage, ImageError> {
    match bytes.get(..2) {
        Some(b"P3") | Some(b"P6") => load_ppm(bytes).map(|rgb| rgb_to_gray(&rgb)),
        _ => load_pgm(bytes),
    }
}

/// BT.601 luma, rounded half-up. Computed in integer thousandths so the
/// rounding is exact.
#[inline]
pub fn luma(r: u8, g: u8, b: u8) -> u8 {
    let weighted = 299 * u32::from(r) + 587 * u32::from(g) + 114 * u32::from(b);
    ((weighted + 500) / 1000).min(255) as u8
}

pub fn rgb_to_gray(img: &RgbImage) -> GrayImage {
    let data = img
        .data
        .chunks_exact(3)
        .map(|px| luma(px[0], px[1], px[2]))
        .collect();
    GrayImage {
        width: img.width,
        height: img.height,
        data,
    }
}

/// Nearest-neighbour resampling: destination index `i` reads source index
/// `floor(i * src / dst)` on each axis.
pub fn resize_nearest(img: &GrayImage, out_w: usize, out_h: usize) -> Result<GrayImage, ImageError> {
    if out_w == 0 || out_h == 0 {
        return Err(ImageError::ZeroDimension);
    }
    if out_w == img.width && out_h == img.height {
        return Ok(img.clone());
    }
    let cols: Vec<usize> = (0..out_w).map(|x| x * img.width / out_w).collect();
    let mut data = Vec::with_capacity(out_w * out_h);
    for y in 0..out_h {
        let sy = y * img.height / out_h;
        let row = &img.data[sy * img.width..(sy + 1) * img.width];
        data.extend(cols.iter().map(|&sx| row[sx]));
    }
    GrayImage::new(out_w, out_h, data)
}

/// Copies the `w`×`h` window whose top-left corner is `(x, y)`.
pub fn crop(img: &GrayImage, x: usize, y: usize, w: usize, h: usize) -> Result<GrayImage, ImageError> {
    if w == 0 || h == 0 {
        return Err(ImageError::ZeroDimension);
    }
    let mut data = Vec::with_capacity(w * h);
    for row in y..y + h {
        let start = row * img.width + x;
        data.extend_from_slice(&img.data[start..start + w]);
    }
    GrayImage::new(w, h, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> GrayImage {
        GrayImage::new(2, 2, vec![0, 255, 128, 64]).unwrap()
    }

    #[test]
    fn ascii_pgm() {
        assert_eq!(load_pgm(b"P2\n2 2\n255\n0 255 128 64").unwrap(), sample());
    }

    #[test]
    fn binary_pgm_matches_ascii() {
        let mut bytes = b"P5\n2 2\n255\n".to_vec();
        bytes.extend_from_slice(&[0x00, 0xFF, 0x80, 0x40]);
        assert_eq!(load_pgm(&bytes).unwrap(), sample());
    }

    #[test]
    fn comments_between_header_tokens() {
        let img = load_pgm(b"P2\n# cam0\n2 # width\n2\n#max\n255\n0 255\n128 64\n").unwrap();
        assert_eq!(img, sample());
        // A raw 0x23 ('#') sample right after maxval is data, not a comment.
        let mut bytes = b"P5 1 1 255\n".to_vec();
        bytes.push(b'#');
        assert_eq!(load_pgm(&bytes).unwrap().data(), b"#");
    }

    #[test]
    fn pgm_errors() {
        assert_eq!(
            load_pgm(b"P2\n2 2\n65535\n0 0 0 0"),
            Err(ImageError::UnsupportedMaxval(65535))
        );
        assert_eq!(load_pgm(b"P7\n2 2\n255\n"), Err(ImageError::UnknownMagic));
        assert_eq!(load_pgm(b""), Err(ImageError::UnknownMagic));
        assert_eq!(
            load_pgm(b"P2\n2 2\n255\n0 1 2"),
            Err(ImageError::Truncated {
                expected: 4,
                found: 3
            })
        );
        assert_eq!(
            load_pgm(b"P5\n2 2\n255\n\x01\x02"),
            Err(ImageError::Truncated {
                expected: 4,
                found: 2
            })
        );
        assert!(matches!(
            load_pgm(b"P2\nx 2\n255\n"),
            Err(ImageError::MalformedHeader(_))
        ));
        assert!(matches!(
            load_pgm(b"P2\n2 2\n"),
            Err(ImageError::MalformedHeader(_))
        ));
        assert_eq!(load_pgm(b"P2\n0 2\n255\n"), Err(ImageError::ZeroDimension));
        assert!(matches!(
            load_pgm(b"P2\n1 1\n255\n300"),
            Err(ImageError::MalformedSample(_))
        ));
    }

    #[test]
    fn save_pgm_layout() {
        let one = GrayImage::new(1, 1, vec![7]).unwrap();
        assert_eq!(save_pgm(&one), b"P5\n1 1\n255\n\x07".to_vec());
        assert_eq!(save_pgm(&sample()), b"P5\n2 2\n255\n\x00\xFF\x80\x40".to_vec());
    }

    #[test]
    fn ppm_variants() {
        let red = RgbImage::new(1, 1, vec![255, 0, 0]).unwrap();
        assert_eq!(load_ppm(b"P3\n1 1\n255\n255 0 0").unwrap(), red);
        assert_eq!(load_ppm(b"P6\n1 1\n255\n\xFF\x00\x00").unwrap(), red);
        assert_eq!(load_ppm(&save_ppm(&red)).unwrap(), red);
        assert!(matches!(
            load_ppm(b"P6\n1 1\n255\n\xFF\x00"),
            Err(ImageError::Truncated { .. })
        ));
        assert_eq!(load_ppm(b"P5\n1 1\n255\n\x00"), Err(ImageError::UnknownMagic));
    }

    #[test]
    fn luma_values() {
        assert_eq!(luma(255, 255, 255), 255);
        assert_eq!(luma(0, 0, 0), 0);
        // round(0.299 * 255) = round(76.245)
        assert_eq!(luma(255, 0, 0), 76);
        assert_eq!(luma(0, 255, 0), 150);
        assert_eq!(luma(0, 0, 255), 29);
    }

    #[test]
    fn load_frame_converts_color() {
        let g = load_frame(b"P3\n1 1\n255\n255 0 0").unwrap();
        assert_eq!(g.data(), &[76]);
        assert_eq!(load_frame(b"P2\n1 1\n255\n9").unwrap().data(), &[9]);
    }

    #[test]
    fn resize_examples() {
        let s = sample();
        assert_eq!(resize_nearest(&s, 2, 2).unwrap(), s);
        let dot = GrayImage::new(1, 1, vec![9]).unwrap();
        assert_eq!(resize_nearest(&dot, 3, 3).unwrap().data(), &[9; 9]);
        let row = GrayImage::new(2, 1, vec![10, 20]).unwrap();
        assert_eq!(resize_nearest(&row, 4, 1).unwrap().data(), &[10, 10, 20, 20]);
        assert_eq!(resize_nearest(&row, 0, 1), Err(ImageError::ZeroDimension));
    }

    #[test]
    fn crop_window() {
        let img = GrayImage::from_fn(4, 3, |x, y| (10 * y + x) as u8).unwrap();
        let c = crop(&img, 1, 1, 2, 2).unwrap();
        assert_eq!(c.data(), &[11, 12, 21, 22]);
    }

    fn any_gray() -> impl Strategy<Value = GrayImage> {
        (1usize..12, 1usize..12).prop_flat_map(|(w, h)| {
            proptest::collection::vec(any::<u8>(), w * h)
                .prop_map(move |d| GrayImage::new(w, h, d).unwrap())
        })
    }

    proptest! {
        #[test]
        fn pgm_round_trip(img in any_gray()) {
            prop_assert_eq!(load_pgm(&save_pgm(&img)).unwrap(), img);
        }

        #[test]
        fn balanced_rgb_is_identity(v in any::<u8>()) {
            prop_assert_eq!(luma(v, v, v), v);
        }

        #[test]
        fn resize_only_reuses_source_values(img in any_gray(), w in 1usize..20, h in 1usize..20) {
            let out = resize_nearest(&img, w, h).unwrap();
            prop_assert_eq!((out.width(), out.height()), (w, h));
            for v in out.data() {
                prop_assert!(img.data().contains(v));
            }
        }
    }
}
