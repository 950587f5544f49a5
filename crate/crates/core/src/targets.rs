//! Procedural test targets.

use crate::frame::Frame;

/// Binary bright letter G on a black background, `size × size`.
pub fn letter_g(size: usize) -> Frame {
    assert!(size >= 16, "letter G needs at least 16 pixels");
    let s = size as f64;
    let (cx, cy) = (s / 2.0 - 0.5, s / 2.0 - 0.5);
    let outer = 0.41 * s;
    let inner = 0.22 * s;
    let bar_half = 0.05 * s;
    Frame::from_fn(size, size, 1, |x, y, _| {
        let (dx, dy) = (x as f64 - cx, y as f64 - cy);
        let r = (dx * dx + dy * dy).sqrt();
        let ring = r >= inner && r <= outer;
        // Upper-right opening of the G.
        let gap = dx > 0.06 * s && dy < -bar_half;
        let bar = dx >= 0.0 && dx <= outer && dy.abs() <= bar_half;
        if (ring && !gap) || bar {
            1.0
        } else {
            0.0
        }
    })
    .expect("valid target")
}

/// Three small color targets: stripes, disks and a checkerboard.
pub fn color_targets(size: usize) -> [Frame; 3] {
    const PALETTE: [[f64; 3]; 6] = [
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [1.0, 1.0, 0.0],
        [0.0, 1.0, 1.0],
        [1.0, 0.0, 1.0],
    ];
    let s = size as f64;
    let stripes =
        Frame::from_fn(size, size, 3, |x, _, c| PALETTE[x * 6 / size][c]).expect("valid target");
    let disks = Frame::from_fn(size, size, 3, |x, y, c| {
        let centers = [(0.3, 0.3, 0), (0.7, 0.35, 1), (0.5, 0.72, 2)];
        let mut v = 0.0;
        for (fx, fy, k) in centers {
            let (dx, dy) = (x as f64 - fx * s, y as f64 - fy * s);
            if (dx * dx + dy * dy).sqrt() <= 0.2 * s {
                v = f64::max(v, PALETTE[k][c]);
            }
        }
        v
    })
    .expect("valid target");
    let cell = (size / 4).max(1);
    let checker = Frame::from_fn(size, size, 3, |x, y, c| {
        let k = (x / cell + 2 * (y / cell)) % PALETTE.len();
        if ((x / cell) + (y / cell)).is_multiple_of(2) {
            PALETTE[k][c]
        } else {
            0.1
        }
    })
    .expect("valid target");
    [stripes, disks, checker]
}

/// Resolves `builtin:letter-g`, `builtin:color-1` … `builtin:color-3`.
pub fn builtin(name: &str) -> Option<Frame> {
    match name {
        "letter-g" => Some(letter_g(64)),
        "color-1" | "color-2" | "color-3" => {
            let i = name.as_bytes()[6] - b'1';
            Some(color_targets(64)[i as usize].clone())
        }
        _ => None,
    }
}
