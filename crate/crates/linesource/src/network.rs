//! Geometry of the one-dimensional source set: oriented line segments with
//! affine intensities, distance queries and the network CSV format.
//!
//! The CSV format is one segment per line with eight comma-separated decimal
//! fields `ax,ay,az,bx,by,bz,base,slope`. Lines starting with `#` are
//! comments. Two-dimensional runs use the same format with `az = bz = 0`.

use std::io::BufRead;

use crate::geometry::{is_finite, Point};

#[derive(Debug, thiserror::Error)]
pub enum NetworkError {
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("degenerate segment at line {line}")]
    DegenerateSegment { line: usize },
    #[error("degenerate segment: endpoints coincide")]
    DegenerateEndpoints,
    #[error("non-finite segment data")]
    NonFinite,
    #[error("empty network")]
    EmptyNetwork,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// An oriented line segment carrying an affine source intensity
/// `base + slope * tau . (x - a)` along its tangent `tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    a: Point,
    b: Point,
    intensity_base: f64,
    intensity_slope: f64,
}

impl Segment {
    pub fn new(a: Point, b: Point, base: f64, slope: f64) -> Result<Self, NetworkError> {
        if !is_finite(&a) || !is_finite(&b) || !base.is_finite() || !slope.is_finite() {
            return Err(NetworkError::NonFinite);
        }
        if (b - a).norm() == 0.0 {
            return Err(NetworkError::DegenerateEndpoints);
        }
        Ok(Self { a, b, intensity_base: base, intensity_slope: slope })
    }

    pub fn start(&self) -> Point {
        self.a
    }

    pub fn end(&self) -> Point {
        self.b
    }

    pub fn length(&self) -> f64 {
        (self.b - self.a).norm()
    }

    /// Unit tangent from `a` to `b`.
    pub fn tangent(&self) -> Point {
        (self.b - self.a) / self.length()
    }

    /// Point on the segment at arc length `s` from `a`.
    pub fn point_at(&self, s: f64) -> Point {
        self.a + self.tangent() * s
    }

    pub fn intensity_base(&self) -> f64 {
        self.intensity_base
    }

    pub fn intensity_slope(&self) -> f64 {
        self.intensity_slope
    }

    /// Source intensity `base + slope * tau . (x - a)`.
    pub fn intensity_at(&self, x: Point) -> f64 {
        self.intensity_base + self.intensity_slope * self.tangent().dot(&(x - self.a))
    }

    /// Exact distance from `x` to the segment (projection clamped to [0, L]).
    pub fn distance_to(&self, x: Point) -> f64 {
        (x - self.closest_point(x)).norm()
    }

    /// Closest point of the segment to `x`.
    pub fn closest_point(&self, x: Point) -> Point {
        let s = self.tangent().dot(&(x - self.a)).clamp(0.0, self.length());
        self.point_at(s)
    }
}

/// A non-empty collection of segments. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct LineNetwork {
    segments: Vec<Segment>,
}

impl LineNetwork {
    pub fn new(segments: Vec<Segment>) -> Result<Self, NetworkError> {
        if segments.is_empty() {
            return Err(NetworkError::EmptyNetwork);
        }
        Ok(Self { segments })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Minimum over segments of the point-to-segment distance.
    pub fn distance_to(&self, x: Point) -> f64 {
        self.segments
            .iter()
            .map(|s| s.distance_to(x))
            .fold(f64::INFINITY, f64::min)
    }

    /// Closest point of the network to `x`.
    pub fn closest_point(&self, x: Point) -> Point {
        let mut best = self.segments[0].closest_point(x);
        let mut best_d = (x - best).norm();
        for s in &self.segments[1..] {
            let p = s.closest_point(x);
            let d = (x - p).norm();
            if d < best_d {
                best = p;
                best_d = d;
            }
        }
        best
    }

    /// Parse the network CSV format from a reader.
    pub fn parse<R: BufRead>(reader: R) -> Result<Self, NetworkError> {
        let mut segments = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
            if fields.len() != 8 {
                return Err(NetworkError::Parse {
                    line: line_no,
                    reason: format!("expected 8 fields, got {}", fields.len()),
                });
            }
            let mut values = [0.0f64; 8];
            for (k, field) in fields.iter().enumerate() {
                values[k] = field.parse().map_err(|_| NetworkError::Parse {
                    line: line_no,
                    reason: format!("invalid number `{field}`"),
                })?;
            }
            let a = Point::new(values[0], values[1], values[2]);
            let b = Point::new(values[3], values[4], values[5]);
            let segment = Segment::new(a, b, values[6], values[7]).map_err(|e| match e {
                NetworkError::DegenerateEndpoints => {
                    NetworkError::DegenerateSegment { line: line_no }
                }
                NetworkError::NonFinite => NetworkError::Parse {
                    line: line_no,
                    reason: "non-finite value".to_string(),
                },
                other => other,
            })?;
            segments.push(segment);
        }
        Self::new(segments)
    }

    pub fn parse_str(text: &str) -> Result<Self, NetworkError> {
        Self::parse(text.as_bytes())
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self, NetworkError> {
        let file = std::fs::File::open(path)?;
        Self::parse(std::io::BufReader::new(file))
    }

    /// Render to the CSV format. Floats use the shortest round-trip
    /// representation, so `parse(render(net))` reproduces the network exactly.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("# ax,ay,az,bx,by,bz,base,slope\n");
        for s in &self.segments {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                s.a.x, s.a.y, s.a.z, s.b.x, s.b.y, s.b.z, s.intensity_base, s.intensity_slope
            ));
        }
        out
    }
}
