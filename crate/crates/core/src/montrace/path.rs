use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{invalid, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Segment {
    /// Angles in turns; `end < start` runs clockwise.
    Arc {
        center: Complex64,
        radius: f64,
        start: f64,
        end: f64,
    },
    Line { from: Complex64, to: Complex64 },
}

impl Segment {
    pub fn start_point(&self) -> Complex64 {
        self.point_and_derivative(0.0).0
    }

    pub fn end_point(&self) -> Complex64 {
        self.point_and_derivative(1.0).0
    }

    /// `z(t)` and `z'(t)` for `t ∈ [0, 1]`.
    pub fn point_and_derivative(&self, t: f64) -> (Complex64, Complex64) {
        match *self {
            Segment::Arc {
                center,
                radius,
                start,
                end,
            } => {
                let span = end - start;
                let w = Complex64::from_polar(radius, TAU * (start + span * t));
                (center + w, w * Complex64::new(0.0, TAU * span))
            }
            Segment::Line { from, to } => (from + (to - from) * t, to - from),
        }
    }

    pub fn distance_to(&self, p: Complex64) -> f64 {
        match *self {
            Segment::Arc {
                center,
                radius,
                start,
                end,
            } => {
                let rel = p - center;
                let (lo, hi) = if start <= end { (start, end) } else { (end, start) };
                let ends = (self.start_point() - p).norm().min((self.end_point() - p).norm());
                if rel.norm() == 0.0 {
                    return radius;
                }
                if hi - lo >= 1.0 {
                    return (rel.norm() - radius).abs();
                }
                let ang = rel.arg() / TAU;
                let shift = (lo - ang).ceil();
                let inside = ang + shift <= hi;
                if inside {
                    (rel.norm() - radius).abs()
                } else {
                    ends
                }
            }
            Segment::Line { from, to } => {
                let d = to - from;
                let len2 = d.norm_sqr();
                let t = if len2 == 0.0 {
                    0.0
                } else {
                    (((p - from) * d.conj()).re / len2).clamp(0.0, 1.0)
                };
                (from + d * t - p).norm()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Path {
    segments: Vec<Segment>,
}

const JOIN_TOL: f64 = 1e-12;

impl Path {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return invalid("path needs at least one segment");
        }
        for w in segments.windows(2) {
            let gap = (w[0].end_point() - w[1].start_point()).norm();
            if gap > JOIN_TOL * w[0].end_point().norm().max(1.0) {
                return invalid("path segments are not connected");
            }
        }
        for s in &segments {
            if let Segment::Arc { radius, .. } = s {
                if !(*radius > 0.0) {
                    return invalid("arc radius must be positive");
                }
            }
        }
        Ok(Path { segments })
    }

    pub fn arc(center: Complex64, radius: f64, start: f64, end: f64) -> Self {
        Path {
            segments: vec![Segment::Arc {
                center,
                radius,
                start,
                end,
            }],
        }
    }

    /// `turns` full loops around `0` from `z = radius`; negative is clockwise.
    pub fn circle(radius: f64, turns: f64) -> Self {
        Self::arc(Complex64::new(0.0, 0.0), radius, 0.0, turns)
    }

    pub fn line(from: Complex64, to: Complex64) -> Self {
        Path {
            segments: vec![Segment::Line { from, to }],
        }
    }

    /// Concatenation; fails when the endpoints do not meet.
    pub fn then(&self, next: &Path) -> Result<Path> {
        let mut s = self.segments.clone();
        s.extend(next.segments.iter().cloned());
        Path::new(s)
    }

    pub fn reversed(&self) -> Path {
        let segments = self
            .segments
            .iter()
            .rev()
            .map(|s| match *s {
                Segment::Arc {
                    center,
                    radius,
                    start,
                    end,
                } => Segment::Arc {
                    center,
                    radius,
                    start: end,
                    end: start,
                },
                Segment::Line { from, to } => Segment::Line { from: to, to: from },
            })
            .collect();
        Path { segments }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn base_point(&self) -> Complex64 {
        self.segments[0].start_point()
    }

    pub fn end_point(&self) -> Complex64 {
        self.segments.last().expect("nonempty").end_point()
    }

    /// Distance from `p` to the path.
    pub fn distance_to(&self, p: Complex64) -> f64 {
        self.segments
            .iter()
            .map(|s| s.distance_to(p))
            .fold(f64::INFINITY, f64::min)
    }
}
