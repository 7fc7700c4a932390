use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

/// Exact nearest-neighbour queries over a fixed planar point set.
///
/// Points live in uniform square buckets over their bounding box. Queries
/// visit buckets best-first through an occupancy pyramid (level `L` cell =
/// `2^L x 2^L` buckets), so empty regions are skipped in blocks and the
/// search stops as soon as no unvisited bucket can beat the current best.
/// Ties in distance resolve to the smallest point index, which makes results
/// identical to an exhaustive scan.
#[derive(Clone, Debug)]
pub struct NearestIndex {
    points: Vec<Complex64>,
    x0: f64,
    y0: f64,
    side: f64,
    nx: usize,
    ny: usize,
    starts: Vec<u32>,
    order: Vec<u32>,
    levels: Vec<Level>,
}

#[derive(Clone, Debug)]
struct Level {
    nx: usize,
    ny: usize,
    occupied: Vec<bool>,
}

#[derive(PartialEq)]
struct Candidate {
    bound: f64,
    level: usize,
    cx: usize,
    cy: usize,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on the lower bound, then a fixed order for determinism
        other
            .bound
            .total_cmp(&self.bound)
            .then_with(|| other.level.cmp(&self.level))
            .then_with(|| other.cy.cmp(&self.cy))
            .then_with(|| other.cx.cmp(&self.cx))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

const MAX_BUCKETS: f64 = 16_777_216.0;

impl NearestIndex {
    /// Builds the index with bucket side at least `min_side`.
    pub fn build(points: Vec<Complex64>, min_side: f64) -> Self {
        let (mut xl, mut xh, mut yl, mut yh) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for p in &points {
            xl = xl.min(p.re);
            xh = xh.max(p.re);
            yl = yl.min(p.im);
            yh = yh.max(p.im);
        }
        if points.is_empty() {
            (xl, xh, yl, yh) = (0.0, 0.0, 0.0, 0.0);
        }
        let w = (xh - xl).max(1e-300);
        let hgt = (yh - yl).max(1e-300);
        let n = points.len().max(1) as f64;
        // about two points per bucket along a curve-like set
        let mut side = (w.max(hgt) * 2.0 / n).max((w * hgt / n).sqrt() * 0.5);
        side = side.max(min_side).max(w.max(hgt) * 1e-9);
        if (w / side) * (hgt / side) > MAX_BUCKETS {
            side = (w * hgt / MAX_BUCKETS).sqrt();
        }
        let nx = ((w / side).floor() as usize + 1).max(1);
        let ny = ((hgt / side).floor() as usize + 1).max(1);

        let cell = |p: &Complex64| {
            let cx = (((p.re - xl) / side) as usize).min(nx - 1);
            let cy = (((p.im - yl) / side) as usize).min(ny - 1);
            cy * nx + cx
        };
        let mut counts = vec![0u32; nx * ny + 1];
        for p in &points {
            counts[cell(p) + 1] += 1;
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        let starts = counts;
        let mut fill = starts.clone();
        let mut order = vec![0u32; points.len()];
        for (i, p) in points.iter().enumerate() {
            let c = cell(p);
            order[fill[c] as usize] = i as u32;
            fill[c] += 1;
        }

        let mut levels = vec![Level {
            nx,
            ny,
            occupied: (0..nx * ny).map(|c| starts[c + 1] > starts[c]).collect(),
        }];
        while {
            let top = levels.last().unwrap();
            top.nx > 2 || top.ny > 2
        } {
            let prev = levels.last().unwrap();
            let (pnx, pny) = (prev.nx.div_ceil(2), prev.ny.div_ceil(2));
            let mut occupied = vec![false; pnx * pny];
            for cy in 0..prev.ny {
                for cx in 0..prev.nx {
                    if prev.occupied[cy * prev.nx + cx] {
                        occupied[(cy / 2) * pnx + cx / 2] = true;
                    }
                }
            }
            levels.push(Level {
                nx: pnx,
                ny: pny,
                occupied,
            });
        }

        NearestIndex {
            points,
            x0: xl,
            y0: yl,
            side,
            nx,
            ny,
            starts,
            order,
            levels,
        }
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn bucket_side(&self) -> f64 {
        self.side
    }

    pub fn bucket_dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    /// Index of and distance to the nearest point, or `None` for an empty set.
    pub fn nearest(&self, q: Complex64) -> Option<(usize, f64)> {
        self.search(q, None)
    }

    /// Nearest point other than `skip`.
    pub fn nearest_excluding(&self, q: Complex64, skip: usize) -> Option<(usize, f64)> {
        self.search(q, Some(skip))
    }

    pub fn nearest_exhaustive(&self, q: Complex64) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (i, p) in self.points.iter().enumerate() {
            let d2 = (p - q).norm_sqr();
            if best.is_none_or(|(_, b)| d2 < b) {
                best = Some((i, d2));
            }
        }
        best.map(|(i, d2)| (i, d2.sqrt()))
    }

    fn bound(&self, q: Complex64, level: usize, cx: usize, cy: usize) -> f64 {
        let s = self.side * (1u64 << level) as f64;
        let xl = self.x0 + cx as f64 * s;
        let yl = self.y0 + cy as f64 * s;
        let dx = (xl - q.re).max(q.re - (xl + s)).max(0.0);
        let dy = (yl - q.im).max(q.im - (yl + s)).max(0.0);
        dx * dx + dy * dy
    }

    fn search(&self, q: Complex64, skip: Option<usize>) -> Option<(usize, f64)> {
        if self.points.is_empty() {
            return None;
        }
        let mut best_i = usize::MAX;
        let mut best_d2 = f64::INFINITY;
        let mut heap = BinaryHeap::new();
        let top = self.levels.len() - 1;
        let tl = &self.levels[top];
        for cy in 0..tl.ny {
            for cx in 0..tl.nx {
                if tl.occupied[cy * tl.nx + cx] {
                    heap.push(Candidate {
                        bound: self.bound(q, top, cx, cy),
                        level: top,
                        cx,
                        cy,
                    });
                }
            }
        }
        while let Some(c) = heap.pop() {
            if c.bound > best_d2 {
                break;
            }
            if c.level == 0 {
                let b = c.cy * self.nx + c.cx;
                for &i in &self.order[self.starts[b] as usize..self.starts[b + 1] as usize] {
                    let i = i as usize;
                    if Some(i) == skip {
                        continue;
                    }
                    let d2 = (self.points[i] - q).norm_sqr();
                    if d2 < best_d2 || (d2 == best_d2 && i < best_i) {
                        best_d2 = d2;
                        best_i = i;
                    }
                }
                continue;
            }
            let child = &self.levels[c.level - 1];
            for dy in 0..2 {
                for dx in 0..2 {
                    let (x, y) = (2 * c.cx + dx, 2 * c.cy + dy);
                    if x < child.nx && y < child.ny && child.occupied[y * child.nx + x] {
                        heap.push(Candidate {
                            bound: self.bound(q, c.level - 1, x, y),
                            level: c.level - 1,
                            cx: x,
                            cy: y,
                        });
                    }
                }
            }
        }
        (best_i != usize::MAX).then(|| (best_i, best_d2.sqrt()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parallel::substream;
    use rand::Rng;

    #[test]
    fn matches_exhaustive_scan() {
        let mut rng = substream(3, 0);
        let pts: Vec<Complex64> = (0..2000)
            .map(|_| {
                let t: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                Complex64::from_polar(1.0 + 0.01 * rng.random::<f64>(), t)
            })
            .collect();
        let idx = NearestIndex::build(pts, 0.0);
        for _ in 0..1000 {
            let q = Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            assert_eq!(idx.nearest(q), idx.nearest_exhaustive(q));
        }
    }

    #[test]
    fn ties_resolve_to_smallest_index() {
        let pts = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(1.0, 0.0),
        ];
        let idx = NearestIndex::build(pts, 0.0);
        assert_eq!(idx.nearest(Complex64::new(0.0, 0.0)), Some((0, 1.0)));
        assert_eq!(idx.nearest_excluding(Complex64::new(1.0, 0.0), 0), Some((2, 0.0)));
    }

    #[test]
    fn degenerate_sets() {
        let idx = NearestIndex::build(Vec::new(), 0.1);
        assert_eq!(idx.nearest(Complex64::new(0.0, 0.0)), None);
        let idx = NearestIndex::build(vec![Complex64::new(2.0, 2.0); 3], 0.1);
        assert_eq!(idx.nearest(Complex64::new(2.0, 3.0)), Some((0, 1.0)));
        assert!(idx.bucket_side() >= 0.1);
    }
}
