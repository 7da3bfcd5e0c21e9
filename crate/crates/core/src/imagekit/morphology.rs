//! Dilation, erosion and border extraction with the 3x3 cross.
//!
//! Pixels outside the image always count as background, so object pixels on
//! the image frame are border pixels and erode away.

use super::BinaryMask;

const CROSS: [(i64, i64); 4] = [(-1, 0), (0, -1), (0, 1), (1, 0)];

fn any_neighbor(mask: &BinaryMask, row: usize, col: usize, want: bool) -> bool {
    CROSS
        .iter()
        .any(|(dr, dc)| mask.get_or_background(row as i64 + dr, col as i64 + dc) == want)
}

/// A pixel becomes object when it or one of its 4-neighbours is object.
pub fn dilate(mask: &BinaryMask) -> BinaryMask {
    BinaryMask::from_fn(mask.width(), mask.height(), |r, c| {
        mask.get(r, c) || any_neighbor(mask, r, c, true)
    })
}

/// An object pixel survives only when all four neighbours are object pixels.
pub fn erode(mask: &BinaryMask) -> BinaryMask {
    BinaryMask::from_fn(mask.width(), mask.height(), |r, c| {
        mask.get(r, c) && !any_neighbor(mask, r, c, false)
    })
}

/// Repeated erosion.
pub fn erode_times(mask: &BinaryMask, times: u32) -> BinaryMask {
    let mut out = mask.clone();
    for _ in 0..times {
        out = erode(&out);
    }
    out
}

/// Object pixels with at least one background 4-neighbour.
pub fn borders(mask: &BinaryMask) -> BinaryMask {
    BinaryMask::from_fn(mask.width(), mask.height(), |r, c| {
        mask.get(r, c) && any_neighbor(mask, r, c, false)
    })
}
