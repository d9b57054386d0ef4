//! Deterministic synthetic frames for demos and tests. Each pattern has a
//! distinct LBP texture, so they stand in for different people's faces.

use crate::imaging::GrayImage;

fn build(w: usize, h: usize, f: impl FnMut(usize, usize) -> u8) -> GrayImage {
    GrayImage::from_fn(w, h, f).expect("synthetic frames are at least 1x1")
}

pub fn constant(w: usize, h: usize, value: u8) -> GrayImage {
    build(w, h, |_, _| value)
}

/// Brightness increases left to right.
pub fn horizontal_gradient(w: usize, h: usize) -> GrayImage {
    let span = w.saturating_sub(1).max(1);
    build(w, h, |x, _| (x * 255 / span) as u8)
}

/// Brightness increases top to bottom.
pub fn vertical_gradient(w: usize, h: usize) -> GrayImage {
    let span = h.saturating_sub(1).max(1);
    build(w, h, |_, y| (y * 255 / span) as u8)
}

pub fn checkerboard(w: usize, h: usize, cell: usize) -> GrayImage {
    let cell = cell.max(1);
    build(w, h, |x, y| if (x / cell + y / cell) % 2 == 0 { 30 } else { 220 })
}

/// Concentric sawtooth rings around the centre.
pub fn rings(w: usize, h: usize, period: usize) -> GrayImage {
    let period = period.max(1) as f64;
    let (cx, cy) = (w as f64 / 2.0, h as f64 / 2.0);
    build(w, h, |x, y| {
        let r = ((x as f64 - cx).powi(2) + (y as f64 - cy).powi(2)).sqrt();
        ((r % period) / period * 255.0) as u8
    })
}

/// Diagonal stripes of the given width.
pub fn stripes(w: usize, h: usize, width: usize) -> GrayImage {
    let width = width.max(1);
    build(w, h, |x, y| (((x + y) / width) % 4 * 60 + 20) as u8)
}

/// A crude face: bright oval on a dark background with darker eyes and mouth.
pub fn face(w: usize, h: usize, variant: u8) -> GrayImage {
    let (cx, cy) = (w as f64 / 2.0, h as f64 / 2.0);
    let (rx, ry) = (w as f64 * 0.38, h as f64 * 0.46);
    let eye_dx = w as f64 * (0.14 + f64::from(variant % 4) * 0.02);
    let eye_y = cy - h as f64 * 0.12;
    let mouth_w = w as f64 * (0.12 + f64::from(variant % 3) * 0.05);
    build(w, h, |x, y| {
        let (fx, fy) = (x as f64 + 0.5, y as f64 + 0.5);
        let inside = ((fx - cx) / rx).powi(2) + ((fy - cy) / ry).powi(2) <= 1.0;
        if !inside {
            return 20 + ((x * 7 + y * 3 + usize::from(variant) * 11) % 16) as u8;
        }
        let eye_r = w as f64 * 0.06;
        let near_eye = [cx - eye_dx, cx + eye_dx]
            .iter()
            .any(|ex| (fx - ex).hypot(fy - eye_y) <= eye_r);
        let mouth = (fy - (cy + h as f64 * 0.22)).abs() <= h as f64 * 0.03 && (fx - cx).abs() <= mouth_w;
        if near_eye || mouth {
            40
        } else {
            150 + ((x + y * 2) % 40) as u8 + variant.wrapping_mul(13) % 40
        }
    })
}
