use crate::algebra::{compare, AlgebraicNumber};

/// Axis-parallel box [x0, x1) x [y0, y1] with exact corners.
#[derive(Debug, Clone)]
pub(crate) struct Box2 {
    pub x0: AlgebraicNumber,
    pub x1: AlgebraicNumber,
    pub y0: AlgebraicNumber,
    pub y1: AlgebraicNumber,
}

impl Box2 {
    pub fn new(xa: AlgebraicNumber, xb: AlgebraicNumber, ya: AlgebraicNumber, yb: AlgebraicNumber) -> Box2 {
        let (x0, x1) = if xa <= xb { (xa, xb) } else { (xb, xa) };
        let (y0, y1) = if ya <= yb { (ya, yb) } else { (yb, ya) };
        Box2 { x0, x1, y0, y1 }
    }

    fn is_empty(&self) -> bool {
        self.x0 == self.x1 || self.y0 == self.y1
    }
}

/// Outcome of comparing a union of boxes against a target region.
#[derive(Debug, Clone, Default)]
pub(crate) struct SweepResult {
    pub slabs: usize,
    /// Slabs where two boxes overlap in positive length.
    pub overlapping_slabs: usize,
    /// Slabs where the union differs from the target.
    pub mismatched_slabs: usize,
}

impl SweepResult {
    pub fn tiles(&self) -> bool {
        self.overlapping_slabs == 0 && self.mismatched_slabs == 0
    }
}

fn sorted_unique(mut v: Vec<AlgebraicNumber>) -> Vec<AlgebraicNumber> {
    v.sort_by(compare);
    v.dedup();
    v
}

/// Union of the y-intervals of the boxes spanning the slab [a, b]; also reports positive overlaps.
fn column(boxes: &[Box2], a: &AlgebraicNumber, b: &AlgebraicNumber) -> (Vec<(AlgebraicNumber, AlgebraicNumber)>, bool) {
    let mut iv: Vec<(AlgebraicNumber, AlgebraicNumber)> =
        boxes.iter().filter(|bx| bx.x0 <= *a && *b <= bx.x1).map(|bx| (bx.y0.clone(), bx.y1.clone())).collect();
    iv.sort_by(|p, q| compare(&p.0, &q.0));
    let mut merged: Vec<(AlgebraicNumber, AlgebraicNumber)> = Vec::new();
    let mut overlap = false;
    for (lo, hi) in iv {
        match merged.last_mut() {
            Some(last) if lo <= last.1 => {
                if lo < last.1 {
                    overlap = true;
                }
                if hi > last.1 {
                    last.1 = hi;
                }
            }
            _ => merged.push((lo, hi)),
        }
    }
    (merged, overlap)
}

/// Compare the union of `pieces` with the union of `target` slab by slab over all x-breakpoints.
pub(crate) fn compare_regions(pieces: &[Box2], target: &[Box2]) -> SweepResult {
    let pieces: Vec<Box2> = pieces.iter().filter(|b| !b.is_empty()).cloned().collect();
    let target: Vec<Box2> = target.iter().filter(|b| !b.is_empty()).cloned().collect();
    let xs = sorted_unique(pieces.iter().chain(&target).flat_map(|b| [b.x0.clone(), b.x1.clone()]).collect());
    let mut out = SweepResult::default();
    for w in xs.windows(2) {
        let (mine, overlap) = column(&pieces, &w[0], &w[1]);
        let (want, _) = column(&target, &w[0], &w[1]);
        out.slabs += 1;
        if overlap {
            out.overlapping_slabs += 1;
        }
        if mine != want {
            out.mismatched_slabs += 1;
        }
    }
    out
}
