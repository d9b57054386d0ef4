//! Local binary pattern codes and the per-cell histograms that make up a
//! face template.
//!
//! ```bash
//! cargo run -p motoguard --example lbp_texture -- /tmp/lbp.pgm
//! ```

use motoguard::facerec::{extract_template, lbp_map, Rect};
use motoguard::imaging::{save_pgm, GrayImage};
use motoguard::synth;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let patch = GrayImage::new(3, 3, vec![9, 1, 1, 1, 5, 1, 1, 1, 9])?;
    let codes = lbp_map(&patch);
    println!("centre code of the diagonal patch: {} ({:08b})", codes.get(1, 1), codes.get(1, 1));

    let face = synth::face(96, 96, 0);
    let template = extract_template(&face, Rect::full(&face), "owner")?;
    // Most frequent codes in the cell over the left eye.
    let cell = template.cell(2, 2);
    let mut top: Vec<(usize, f64)> = cell.bins().iter().copied().enumerate().collect();
    top.sort_by(|a, b| b.1.total_cmp(&a.1));
    println!("cell (2,2) top codes:");
    for (code, share) in top.iter().take(5) {
        println!("  {code:3} {code:08b}  {:.3}", share);
    }

    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, save_pgm(&lbp_map(&face).to_image()))?;
        println!("wrote LBP map to {path}");
    }
    Ok(())
}
