//! Finite weighted point sets standing in for `μ`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Frame, Point};

/// Atoms of a discrete measure, kept sorted by abscissa for ball queries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedPointSet {
    points: Vec<Point>,
    weights: Vec<f64>,
}

impl WeightedPointSet {
    pub fn new(points: Vec<Point>, weights: Vec<f64>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::InvalidInput(format!("{} points but {} weights", points.len(), weights.len())));
        }
        if points.is_empty() {
            return Err(Error::InvalidInput("empty point set".into()));
        }
        for (i, (p, w)) in points.iter().zip(&weights).enumerate() {
            if !p.is_finite() {
                return Err(Error::InvalidInput(format!("point {i} is not finite")));
            }
            if !(*w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidInput(format!("weight {i} must be positive, got {w}")));
            }
        }
        let mut idx: Vec<usize> = (0..points.len()).collect();
        idx.sort_by(|&a, &b| points[a].x.total_cmp(&points[b].x).then(points[a].y.total_cmp(&points[b].y)));
        Ok(WeightedPointSet {
            points: idx.iter().map(|&i| points[i]).collect(),
            weights: idx.iter().map(|&i| weights[i]).collect(),
        })
    }

    /// Equal weights `mass / n`.
    pub fn uniform(points: Vec<Point>, mass: f64) -> Result<Self> {
        let w = mass / points.len().max(1) as f64;
        let n = points.len();
        Self::new(points, vec![w; n])
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_mass(&self) -> f64 {
        crate::quad::pairwise_sum(&self.weights)
    }

    /// Indices of atoms in the closed ball, ascending.
    pub fn ball_indices(&self, c: Point, r: f64, out: &mut Vec<usize>) {
        out.clear();
        let lo = self.points.partition_point(|p| p.x < c.x - r);
        let r2 = r * r;
        for i in lo..self.points.len() {
            let p = self.points[i];
            if p.x > c.x + r {
                break;
            }
            if (p - c).norm2() <= r2 {
                out.push(i);
            }
        }
    }

    pub fn mass_in_ball(&self, c: Point, r: f64) -> f64 {
        let mut ids = Vec::new();
        self.ball_indices(c, r, &mut ids);
        ids.iter().map(|&i| self.weights[i]).sum()
    }

    /// `sup μ(B(x, r)) / r` over atoms `x` and the given radii.
    pub fn growth_constant(&self, radii: &[f64]) -> f64 {
        let mut best: f64 = 0.0;
        for &x in &self.points {
            for &r in radii {
                best = best.max(self.mass_in_ball(x, r) / r);
            }
        }
        best
    }

    pub fn map(&self, f: impl Fn(Point) -> Point) -> Result<Self> {
        Self::new(self.points.iter().map(|&p| f(p)).collect(), self.weights.clone())
    }

    pub fn to_local(&self, frame: &Frame) -> Result<Self> {
        self.map(|p| frame.to_local(p))
    }

    /// CSV with header `x,y,w`; `#` lines are comments.
    pub fn to_csv(&self, header: &[String]) -> String {
        let mut s = String::new();
        for h in header {
            let _ = writeln!(s, "# {h}");
        }
        s.push_str("x,y,w\n");
        for (p, w) in self.points.iter().zip(&self.weights) {
            let _ = writeln!(s, "{},{},{}", p.x, p.y, w);
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rows = text.lines().enumerate().filter(|(_, l)| !l.trim_start().starts_with('#') && !l.trim().is_empty());
        let (hl, header) = rows.next().ok_or_else(|| Error::Parse("empty measure file".into()))?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        if cols != ["x", "y", "w"] {
            return Err(Error::Parse(format!("line {}: expected header `x,y,w`, found `{}`", hl + 1, header.trim())));
        }
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for (ln, line) in rows {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(Error::Parse(format!("line {}: expected 3 fields, found {}", ln + 1, fields.len())));
            }
            let mut v = [0.0; 3];
            for (k, (f, name)) in fields.iter().zip(["x", "y", "w"]).enumerate() {
                v[k] = f
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("line {}: field `{name}` is not a number: `{f}`", ln + 1)))?;
            }
            points.push(Point::new(v[0], v[1]));
            weights.push(v[2]);
        }
        Self::new(points, weights).map_err(|e| match e {
            Error::InvalidInput(m) => Error::Parse(m),
            other => other,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_roundtrip_and_errors() {
        let m = WeightedPointSet::new(vec![Point::new(0.5, 0.0), Point::new(-0.25, 0.125)], vec![1.0, 2.0]).unwrap();
        let text = m.to_csv(&["demo".to_string()]);
        assert!(text.starts_with("# demo\nx,y,w\n"));
        assert_eq!(WeightedPointSet::from_csv(&text).unwrap(), m);
        let bad = "x,y,w\n1,2\n";
        assert!(matches!(WeightedPointSet::from_csv(bad), Err(Error::Parse(s)) if s.contains("line 2")));
        assert!(WeightedPointSet::from_csv("a,b\n").is_err());
        assert!(WeightedPointSet::from_csv("x,y,w\n1,2,-1\n").is_err());
    }

    #[test]
    fn ball_mass() {
        let pts = (0..11).map(|k| Point::new(k as f64 * 0.1 - 0.5, 0.0)).collect();
        let m = WeightedPointSet::uniform(pts, 1.1).unwrap();
        assert!((m.mass_in_ball(Point::new(0.0, 0.0), 0.25) - 0.5).abs() < 1e-12);
        assert!((m.total_mass() - 1.1).abs() < 1e-12);
    }
}
