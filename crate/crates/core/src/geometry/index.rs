//! Uniform bucket grid over the edges of a closed polyline.

use super::point::{Point, Segment};

#[derive(Debug, Clone)]
pub(crate) struct SegmentGrid {
    origin: Point,
    cell: f64,
    nx: usize,
    ny: usize,
    starts: Vec<u32>,
    items: Vec<u32>,
}

impl SegmentGrid {
    pub fn build(segments: &[Segment], pad: f64) -> Self {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for s in segments {
            let (a, b) = s.bbox();
            lo = Point::new(lo.x.min(a.x), lo.y.min(a.y));
            hi = Point::new(hi.x.max(b.x), hi.y.max(b.y));
        }
        lo = lo - Point::new(pad, pad);
        hi = hi + Point::new(pad, pad);
        let w = (hi.x - lo.x).max(f64::MIN_POSITIVE);
        let h = (hi.y - lo.y).max(f64::MIN_POSITIVE);
        // roughly one segment per cell
        let target = (segments.len() as f64).max(1.0);
        let cell = ((w * h) / target).sqrt().max(w.max(h) / 4096.0);
        let nx = ((w / cell).ceil() as usize).clamp(1, 4096);
        let ny = ((h / cell).ceil() as usize).clamp(1, 4096);

        let mut counts = vec![0u32; nx * ny + 1];
        let mut grid = SegmentGrid { origin: lo, cell, nx, ny, starts: Vec::new(), items: Vec::new() };
        for s in segments {
            let (a, b) = s.bbox();
            let (i0, j0) = grid.cell_of(a);
            let (i1, j1) = grid.cell_of(b);
            for j in j0..=j1 {
                for i in i0..=i1 {
                    counts[j * nx + i] += 1;
                }
            }
        }
        let mut starts = vec![0u32; nx * ny + 1];
        for k in 0..nx * ny {
            starts[k + 1] = starts[k] + counts[k];
        }
        let mut fill = starts.clone();
        let mut items = vec![0u32; starts[nx * ny] as usize];
        for (idx, s) in segments.iter().enumerate() {
            let (a, b) = s.bbox();
            let (i0, j0) = grid.cell_of(a);
            let (i1, j1) = grid.cell_of(b);
            for j in j0..=j1 {
                for i in i0..=i1 {
                    let k = j * nx + i;
                    items[fill[k] as usize] = idx as u32;
                    fill[k] += 1;
                }
            }
        }
        grid.starts = starts;
        grid.items = items;
        grid
    }

    #[inline]
    fn col(&self, x: f64) -> usize {
        let c = ((x - self.origin.x) / self.cell).floor();
        if c <= 0.0 {
            0
        } else {
            (c as usize).min(self.nx - 1)
        }
    }

    #[inline]
    fn row(&self, y: f64) -> usize {
        let c = ((y - self.origin.y) / self.cell).floor();
        if c <= 0.0 {
            0
        } else {
            (c as usize).min(self.ny - 1)
        }
    }

    #[inline]
    fn cell_of(&self, p: Point) -> (usize, usize) {
        (self.col(p.x), self.row(p.y))
    }

    #[inline]
    fn bucket(&self, i: usize, j: usize) -> &[u32] {
        let k = j * self.nx + i;
        &self.items[self.starts[k] as usize..self.starts[k + 1] as usize]
    }

    /// Sorted, de-duplicated ids of segments whose bounding box may meet `[lo, hi]`.
    pub fn query_box(&self, lo: Point, hi: Point, out: &mut Vec<u32>) {
        out.clear();
        let (i0, j0) = self.cell_of(lo);
        let (i1, j1) = self.cell_of(hi);
        for j in j0..=j1 {
            for i in i0..=i1 {
                out.extend_from_slice(self.bucket(i, j));
            }
        }
        out.sort_unstable();
        out.dedup();
    }

    /// Like [`query_box`](Self::query_box) for a circle, skipping cells that lie
    /// strictly inside the open disk (their segments cannot meet the circle).
    pub fn query_circle(&self, c: Point, r: f64, out: &mut Vec<u32>) {
        out.clear();
        let (i0, j0) = self.cell_of(c - Point::new(r, r));
        let (i1, j1) = self.cell_of(c + Point::new(r, r));
        let r2 = r * r;
        for j in j0..=j1 {
            let y0 = self.origin.y + j as f64 * self.cell;
            let y1 = y0 + self.cell;
            let dy_far = (c.y - y0).abs().max((c.y - y1).abs());
            for i in i0..=i1 {
                let x0 = self.origin.x + i as f64 * self.cell;
                let x1 = x0 + self.cell;
                let interior = i > 0 && j > 0 && i + 1 < self.nx && j + 1 < self.ny;
                if interior {
                    let dx_far = (c.x - x0).abs().max((c.x - x1).abs());
                    if dx_far * dx_far + dy_far * dy_far < r2 * (1.0 - 1e-9) {
                        continue;
                    }
                }
                out.extend_from_slice(self.bucket(i, j));
            }
        }
        out.sort_unstable();
        out.dedup();
    }

    /// Parity of crossings of the ray `{p + t e_x : t > 0}` with the segments.
    pub fn ray_parity(&self, p: Point, segments: &[Segment]) -> bool {
        let j = self.row(p.y);
        let i_start = self.col(p.x);
        let mut inside = false;
        for i in i_start..self.nx {
            for &idx in self.bucket(i, j) {
                let s = segments[idx as usize];
                let (a, b) = (s.a, s.b);
                if (a.y > p.y) != (b.y > p.y) {
                    let xc = (a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y))
                        .clamp(a.x.min(b.x), a.x.max(b.x));
                    if xc > p.x && self.col(xc) == i {
                        inside = !inside;
                    }
                }
            }
        }
        inside
    }

    /// All ids, bucket by bucket, for pairwise checks.
    pub fn buckets(&self) -> impl Iterator<Item = &[u32]> {
        (0..self.ny).flat_map(move |j| (0..self.nx).map(move |i| self.bucket(i, j)))
    }
}
