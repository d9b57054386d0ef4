//! Enroll faces and identify probes, including a custom face detector.
//!
//! ```bash
//! cargo run -p motoguard --example face_enroll_identify
//! ```

use motoguard::facerec::{FaceDb, FaceDetector, MatchResult, Rect, DEFAULT_THRESHOLD};
use motoguard::imaging::GrayImage;
use motoguard::synth;

/// Assumes the rider's face fills the centre of a wider dashboard frame.
struct CentreCrop;

impl FaceDetector for CentreCrop {
    fn detect(&self, img: &GrayImage) -> Rect {
        let side = img.width().min(img.height());
        Rect::new((img.width() - side) / 2, (img.height() - side) / 2, side, side)
    }
}

fn describe(result: &MatchResult) -> String {
    match result {
        MatchResult::Match { label, distance } => format!("MATCH {label} ({distance:.3})"),
        MatchResult::NoMatch { best_distance: Some(d) } => format!("NOMATCH (best {d:.3})"),
        MatchResult::NoMatch { best_distance: None } => "NOMATCH (empty db)".into(),
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let db = FaceDb::new()
        .enroll("rider", &synth::face(96, 96, 0))?
        .enroll("spouse", &synth::face(100, 120, 2))?;
    println!("enrolled: {:?}", db.templates().iter().map(|t| t.label()).collect::<Vec<_>>());

    let probes = [
        ("rider again", synth::face(96, 96, 0)),
        ("spouse again", synth::face(100, 120, 2)),
        ("stranger", synth::face(96, 96, 1)),
        ("checkerboard", synth::checkerboard(64, 64, 8)),
    ];
    for (name, img) in &probes {
        println!("{name:14} -> {}", describe(&db.identify(img, DEFAULT_THRESHOLD)));
    }

    // Widen the rider's frame with dark side bars; the centre-crop detector
    // recovers the face region.
    let face = synth::face(96, 96, 0);
    let wide = GrayImage::from_fn(160, 96, |x, y| {
        if (32..128).contains(&x) { face.get(x - 32, y) } else { 0 }
    })?;
    println!("wide frame, whole-frame -> {}", describe(&db.identify(&wide, DEFAULT_THRESHOLD)));
    println!(
        "wide frame, centre crop -> {}",
        describe(&db.identify_with(&CentreCrop, &wide, DEFAULT_THRESHOLD))
    );
    Ok(())
}
