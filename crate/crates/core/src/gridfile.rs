//! Text format for per-cell value grids (optimality ratings and cost-to-go
//! value fields).
//!
//! ```text
//! height H
//! width W
//! m M
//! source ground_truth|learned|hvalue
//! <H rows, top row first, of W space-separated values with 4 decimals>
//! ```
//!
//! Value grids carry `m 0`.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GridSource {
    GroundTruth,
    Learned,
    HValue,
}

impl GridSource {
    pub fn name(self) -> &'static str {
        match self {
            GridSource::GroundTruth => "ground_truth",
            GridSource::Learned => "learned",
            GridSource::HValue => "hvalue",
        }
    }
}

impl fmt::Display for GridSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GridSource {
    type Err = GridFileError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ground_truth" => Ok(GridSource::GroundTruth),
            "learned" => Ok(GridSource::Learned),
            "hvalue" => Ok(GridSource::HValue),
            other => Err(GridFileError::Syntax {
                line: 4,
                message: format!("unknown source `{other}`"),
            }),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("value {value} at ({x}, {y}) is outside {range}")]
    OutOfRange {
        x: u32,
        y: u32,
        value: f64,
        range: &'static str,
    },
    #[error("grid is {actual} but {expected} was expected")]
    Dimensions { expected: String, actual: String },
    #[error("expected a `{expected}` grid, found `{found}`")]
    WrongSource {
        expected: GridSource,
        found: GridSource,
    },
}

/// A parsed grid file. `values` is row-major with the bottom row first,
/// matching [`crate::GridMap`] indexing.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFile {
    pub width: u32,
    pub height: u32,
    pub m: u32,
    pub source: GridSource,
    pub values: Vec<f64>,
}

fn header(line_no: usize, line: Option<&str>, key: &str) -> Result<String, GridFileError> {
    let line = line.ok_or_else(|| GridFileError::Syntax {
        line: line_no,
        message: format!("missing `{key}` line"),
    })?;
    let mut parts = line.split_whitespace();
    match (parts.next(), parts.next(), parts.next()) {
        (Some(k), Some(v), None) if k == key => Ok(v.to_string()),
        _ => Err(GridFileError::Syntax {
            line: line_no,
            message: format!("expected `{key} <value>`, got `{line}`"),
        }),
    }
}

fn number<T: FromStr>(line: usize, key: &str, raw: &str) -> Result<T, GridFileError> {
    raw.parse().map_err(|_| GridFileError::Syntax {
        line,
        message: format!("invalid {key} `{raw}`"),
    })
}

impl GridFile {
    pub fn parse(text: &str) -> Result<GridFile, GridFileError> {
        let mut lines = text.lines().map(|l| l.trim_end_matches('\r'));
        let height: u32 = number(1, "height", &header(1, lines.next(), "height")?)?;
        let width: u32 = number(2, "width", &header(2, lines.next(), "width")?)?;
        let m: u32 = number(3, "m", &header(3, lines.next(), "m")?)?;
        let source: GridSource = header(4, lines.next(), "source")?.parse()?;

        let mut values = vec![0.0; width as usize * height as usize];
        for row in 0..height as usize {
            let line_no = 5 + row;
            let line = lines.next().ok_or_else(|| GridFileError::Syntax {
                line: line_no,
                message: format!("expected {height} rows, found {row}"),
            })?;
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != width as usize {
                return Err(GridFileError::Syntax {
                    line: line_no,
                    message: format!("expected {width} values, found {}", tokens.len()),
                });
            }
            let y = height as usize - 1 - row;
            for (x, raw) in tokens.into_iter().enumerate() {
                let v: f64 = number(line_no, "value", raw)?;
                if !v.is_finite() {
                    return Err(GridFileError::Syntax {
                        line: line_no,
                        message: format!("non-finite value `{raw}`"),
                    });
                }
                values[y * width as usize + x] = v;
            }
        }
        if let Some((extra, _)) = lines.enumerate().find(|(_, l)| !l.trim().is_empty()) {
            return Err(GridFileError::Syntax {
                line: 5 + height as usize + extra,
                message: "unexpected trailing content".into(),
            });
        }
        let file = GridFile {
            width,
            height,
            m,
            source,
            values,
        };
        file.check_range()?;
        Ok(file)
    }

    fn check_range(&self) -> Result<(), GridFileError> {
        let (lo, hi, range) = match self.source {
            GridSource::HValue => (0.0, f64::INFINITY, "[0, inf)"),
            _ => (0.0, 1.0, "[0, 1]"),
        };
        for (i, &v) in self.values.iter().enumerate() {
            if !(lo..=hi).contains(&v) {
                return Err(GridFileError::OutOfRange {
                    x: (i % self.width as usize) as u32,
                    y: (i / self.width as usize) as u32,
                    value: v,
                    range,
                });
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.values.len() * 7 + 64);
        let _ = writeln!(out, "height {}", self.height);
        let _ = writeln!(out, "width {}", self.width);
        let _ = writeln!(out, "m {}", self.m);
        let _ = writeln!(out, "source {}", self.source);
        let w = self.width as usize;
        for y in (0..self.height as usize).rev() {
            for (x, v) in self.values[y * w..(y + 1) * w].iter().enumerate() {
                if x > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{v:.4}");
            }
            out.push('\n');
        }
        out
    }

    pub fn expect_dims(&self, width: u32, height: u32) -> Result<(), GridFileError> {
        if (self.width, self.height) != (width, height) {
            return Err(GridFileError::Dimensions {
                expected: format!("{width}x{height}"),
                actual: format!("{}x{}", self.width, self.height),
            });
        }
        Ok(())
    }
}
