//! Maximal dyadic intervals of the horizontal axis with `ℓ(I) < D(I)/20`.

use serde::Serialize;

use super::stopping::LineFunction;

/// Selection ratio: `ℓ(I) < D(I) / WHITNEY_RATIO`.
pub const WHITNEY_RATIO: f64 = 20.0;
/// Dilation of the intervals used by the property checks.
pub const CHECK_DILATION: f64 = 15.0;
/// Samples of `D` per dilated interval in the property checks.
const CHECK_SAMPLES: usize = 61;
/// Frozen bound on the number of dilated intervals meeting a given one.
pub const OVERLAP_BOUND: usize = 64;
/// Neighbour length ratio bound implied by property (a).
pub const NEIGHBOR_RATIO_BOUND: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WhitneyInterval {
    pub lo: f64,
    pub len: f64,
    /// Meets `(−10R, 10R)`.
    pub central: bool,
}

impl WhitneyInterval {
    pub fn hi(&self) -> f64 {
        self.lo + self.len
    }

    pub fn center(&self) -> f64 {
        self.lo + 0.5 * self.len
    }

    /// `[c − kℓ/2, c + kℓ/2]`.
    pub fn dilate(&self, k: f64) -> (f64, f64) {
        let c = self.center();
        (c - 0.5 * k * self.len, c + 0.5 * k * self.len)
    }

    pub fn dist_to(&self, p: f64) -> f64 {
        (self.lo - p).max(p - self.hi()).max(0.0)
    }
}

/// Outcome of the post-hoc property checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WhitneyChecks {
    pub disjoint: bool,
    /// Worst `D(x)/ℓ` over sampled `x ∈ 15R_i`, both ends.
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub comparable: bool,
    pub max_neighbor_ratio: f64,
    pub max_overlap: usize,
    /// Uncovered samples all satisfy `D ≤ 21·floor`.
    pub covers: bool,
    pub max_uncovered_d: f64,
}

impl WhitneyChecks {
    pub fn property_a(&self) -> bool {
        self.min_ratio >= 5.0 && self.max_ratio <= 50.0
    }

    pub fn all_pass(&self) -> bool {
        self.disjoint && self.property_a() && self.comparable && self.max_overlap <= OVERLAP_BOUND && self.covers
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WhitneyCover {
    pub root: (f64, f64),
    pub floor: f64,
    /// Sorted by left endpoint, interiors disjoint.
    pub intervals: Vec<WhitneyInterval>,
    /// Intervals at the floor length that were not selected.
    pub clipped: usize,
    /// For each interval, the others whose 15-fold dilations meet its own.
    pub neighbors: Vec<Vec<usize>>,
}

/// Top-down dyadic descent over `[root_lo, root_lo + root_len)`, stopping at `floor`.
/// `central` marks intervals meeting `(−central_radius, central_radius)`.
pub fn whitney_cover(d: &impl LineFunction, root_lo: f64, root_len: f64, floor: f64, central_radius: f64) -> WhitneyCover {
    let mut intervals = Vec::new();
    let mut clipped = 0;
    let mut stack = vec![(root_lo, root_len)];
    while let Some((lo, len)) = stack.pop() {
        if len < WHITNEY_RATIO.recip() * d.inf_on(lo, lo + len) {
            let central = lo < central_radius && lo + len > -central_radius;
            intervals.push(WhitneyInterval { lo, len, central });
        } else if 0.5 * len >= floor {
            // right child first so that the left one is processed next
            stack.push((lo + 0.5 * len, 0.5 * len));
            stack.push((lo, 0.5 * len));
        } else {
            clipped += 1;
        }
    }
    let neighbors = dilated_neighbors(&intervals, CHECK_DILATION);
    WhitneyCover { root: (root_lo, root_len), floor, intervals, clipped, neighbors }
}

fn dilated_neighbors(intervals: &[WhitneyInterval], k: f64) -> Vec<Vec<usize>> {
    let spans: Vec<(f64, f64)> = intervals.iter().map(|w| w.dilate(k)).collect();
    let mut order: Vec<usize> = (0..spans.len()).collect();
    order.sort_by(|&a, &b| spans[a].0.total_cmp(&spans[b].0));
    let mut out = vec![Vec::new(); spans.len()];
    let mut active: Vec<usize> = Vec::new();
    for &i in &order {
        active.retain(|&j| spans[j].1 > spans[i].0);
        for &j in &active {
            out[i].push(j);
            out[j].push(i);
        }
        active.push(i);
    }
    for v in &mut out {
        v.sort_unstable();
    }
    out
}

impl WhitneyCover {
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Index of the interval containing `p`, if any.
    pub fn containing(&self, p: f64) -> Option<usize> {
        let k = self.intervals.partition_point(|w| w.lo <= p);
        (k > 0 && p < self.intervals[k - 1].hi()).then(|| k - 1)
    }

    pub fn max_len(&self) -> f64 {
        self.intervals.iter().map(|w| w.len).fold(0.0, f64::max)
    }

    /// Evaluates the four structural properties on samples of `d`.
    pub fn check(&self, d: &impl LineFunction) -> WhitneyChecks {
        let disjoint = self.intervals.windows(2).all(|w| w[0].hi() <= w[1].lo);
        let mut min_ratio = f64::INFINITY;
        let mut max_ratio: f64 = 0.0;
        for w in &self.intervals {
            let (a, b) = w.dilate(CHECK_DILATION);
            for k in 0..CHECK_SAMPLES {
                let x = a + (b - a) * k as f64 / (CHECK_SAMPLES - 1) as f64;
                let r = d.value(x) / w.len;
                min_ratio = min_ratio.min(r);
                max_ratio = max_ratio.max(r);
            }
        }
        let mut max_neighbor_ratio: f64 = 1.0;
        let mut max_overlap = 0;
        for (i, nb) in self.neighbors.iter().enumerate() {
            max_overlap = max_overlap.max(nb.len());
            for &j in nb {
                max_neighbor_ratio = max_neighbor_ratio.max(self.intervals[i].len / self.intervals[j].len);
            }
        }
        let (lo, len) = self.root;
        let samples = ((len / self.floor).ceil() as usize).clamp(1024, 1 << 16);
        let mut max_uncovered_d: f64 = 0.0;
        for k in 0..samples {
            let p = lo + len * (k as f64 + 0.5) / samples as f64;
            if self.containing(p).is_none() {
                max_uncovered_d = max_uncovered_d.max(d.value(p));
            }
        }
        if self.intervals.is_empty() {
            min_ratio = 5.0;
        }
        WhitneyChecks {
            disjoint,
            min_ratio,
            max_ratio,
            comparable: max_neighbor_ratio <= NEIGHBOR_RATIO_BOUND,
            max_neighbor_ratio,
            max_overlap,
            covers: max_uncovered_d <= (WHITNEY_RATIO + 1.0) * self.floor,
            max_uncovered_d,
        }
    }
}

/// Sampled stand-in for a line function given by a closure.
pub struct SampledLineFunction<F> {
    pub f: F,
    /// Samples per unit interval in `inf_on`.
    pub samples: usize,
}

impl<F: Fn(f64) -> f64> LineFunction for SampledLineFunction<F> {
    fn value(&self, p: f64) -> f64 {
        (self.f)(p)
    }

    fn inf_on(&self, a: f64, b: f64) -> f64 {
        (0..=self.samples).map(|k| (self.f)(a + (b - a) * k as f64 / self.samples as f64)).fold(f64::INFINITY, f64::min)
    }
}
