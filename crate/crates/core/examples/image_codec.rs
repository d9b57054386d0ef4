//! Netpbm round trips and the grayscale stage of the face pipeline.
//!
//! ```bash
//! cargo run -p motoguard --example image_codec
//! ```

use motoguard::imaging::{load_pgm, load_ppm, resize_nearest, rgb_to_gray, save_pgm};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // A 3x2 colour frame, written as ASCII P3 with a header comment.
    let ppm = b"P3\n# webcam test card\n3 2\n255\n\
        255 0 0   0 255 0   0 0 255\n\
        255 255 255   128 128 128   0 0 0\n";
    let rgb = load_ppm(ppm)?;
    let gray = rgb_to_gray(&rgb);
    println!("luma of test card: {:?}", gray.data());

    let bigger = resize_nearest(&gray, 6, 4)?;
    for row in bigger.data().chunks(bigger.width()) {
        println!("  {row:?}");
    }

    let encoded = save_pgm(&bigger);
    let header_len = encoded.len() - bigger.data().len();
    println!(
        "P5 encoding: {} bytes, header {:?}",
        encoded.len(),
        String::from_utf8_lossy(&encoded[..header_len])
    );
    assert_eq!(load_pgm(&encoded)?, bigger);

    match load_pgm(b"P2\n2 2\n65535\n0 0 0 0") {
        Err(e) => println!("16-bit input rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
