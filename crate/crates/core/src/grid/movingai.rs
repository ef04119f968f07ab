//! MovingAI-style `.map` text format.
//!
//! ```text
//! type octile
//! height H
//! width W
//! map
//! <H rows of W characters, top row first>
//! start X Y      (optional)
//! goal X Y       (optional)
//! ```
//!
//! `.`, `G` and `S` are passable; every other map character is an obstacle.
//! Without `start`/`goal` lines the endpoints default to the lower-left and
//! upper-right corners.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Cell, GridError, GridMap};

#[derive(Debug, Error)]
pub enum MapFormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Grid(#[from] GridError),
}

fn syntax(line: usize, message: impl Into<String>) -> MapFormatError {
    MapFormatError::Syntax {
        line,
        message: message.into(),
    }
}

fn header_value(line_no: usize, line: Option<&str>, key: &str) -> Result<u32, MapFormatError> {
    let line = line.ok_or_else(|| syntax(line_no, format!("missing `{key}` line")))?;
    let mut parts = line.split_whitespace();
    match (parts.next(), parts.next(), parts.next()) {
        (Some(k), Some(v), None) if k == key => v
            .parse()
            .map_err(|_| syntax(line_no, format!("invalid {key} `{v}`"))),
        _ => Err(syntax(
            line_no,
            format!("expected `{key} <n>`, got `{line}`"),
        )),
    }
}

fn parse_cell(
    line_no: usize,
    rest: &mut std::str::SplitWhitespace<'_>,
) -> Result<Cell, MapFormatError> {
    let mut coord = || -> Result<u32, MapFormatError> {
        rest.next()
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| syntax(line_no, "expected two non-negative integer coordinates"))
    };
    let x = coord()?;
    let y = coord()?;
    Ok(Cell::new(x, y))
}

pub fn parse_map(id: &str, text: &str) -> Result<GridMap, MapFormatError> {
    let mut lines = text.lines().map(|l| l.trim_end_matches('\r'));
    let first = lines.next();
    match first
        .map(str::split_whitespace)
        .map(|mut p| (p.next(), p.next()))
    {
        Some((Some("type"), Some(_))) => {}
        _ => return Err(syntax(1, "expected `type <kind>` header")),
    }
    let height = header_value(2, lines.next(), "height")?;
    let width = header_value(3, lines.next(), "width")?;
    if lines.next().map(str::trim) != Some("map") {
        return Err(syntax(4, "expected `map`"));
    }

    let mut obstacles = vec![false; width as usize * height as usize];
    for row in 0..height as usize {
        let line_no = 5 + row;
        let line = lines
            .next()
            .ok_or_else(|| syntax(line_no, format!("expected {height} map rows, found {row}")))?;
        let chars: Vec<char> = line.chars().collect();
        if chars.len() != width as usize {
            return Err(syntax(
                line_no,
                format!("row has {} characters, expected {width}", chars.len()),
            ));
        }
        let y = height as usize - 1 - row;
        for (x, ch) in chars.into_iter().enumerate() {
            obstacles[y * width as usize + x] = !matches!(ch, '.' | 'G' | 'S');
        }
    }

    let mut start = Cell::new(0, 0);
    let mut goal = Cell::new(width.saturating_sub(1), height.saturating_sub(1));
    for (offset, line) in lines.enumerate() {
        let line_no = 5 + height as usize + offset;
        let mut parts = line.split_whitespace();
        match parts.next() {
            None => continue,
            Some("start") => start = parse_cell(line_no, &mut parts)?,
            Some("goal") => goal = parse_cell(line_no, &mut parts)?,
            Some(other) => {
                return Err(syntax(
                    line_no,
                    format!("unexpected trailing line `{other}`"),
                ))
            }
        }
        if parts.next().is_some() {
            return Err(syntax(line_no, "too many fields"));
        }
    }
    Ok(GridMap::new(id, width, height, obstacles, start, goal)?)
}

/// Serialises a map. Endpoint lines are only written when they differ from the
/// default corners, so default maps stay plain MovingAI files.
pub fn write_map(map: &GridMap) -> String {
    let mut out = String::with_capacity(map.cell_count() + map.height() as usize + 64);
    let _ = writeln!(out, "type octile");
    let _ = writeln!(out, "height {}", map.height());
    let _ = writeln!(out, "width {}", map.width());
    let _ = writeln!(out, "map");
    for y in (0..map.height()).rev() {
        for x in 0..map.width() {
            out.push(if map.is_obstacle(Cell::new(x, y)) {
                '@'
            } else {
                '.'
            });
        }
        out.push('\n');
    }
    if map.start() != Cell::new(0, 0) || map.goal() != Cell::new(map.width() - 1, map.height() - 1)
    {
        let _ = writeln!(out, "start {} {}", map.start().x, map.start().y);
        let _ = writeln!(out, "goal {} {}", map.goal().x, map.goal().y);
    }
    out
}
