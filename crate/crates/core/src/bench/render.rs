//! Binary PPM (P6) rendering of maps with rating and search overlays.

use std::fmt;

use crate::error::{Error, Result};
use crate::grid::{Cell, GridMap};
use crate::oracle::RatingGrid;

type Rgb = [u8; 3];

const OBSTACLE: Rgb = [0, 0, 0];
const FREE: Rgb = [255, 255, 255];
const EXPANDED: Rgb = [110, 150, 230];
const PATH: Rgb = [220, 30, 40];
const START: Rgb = [250, 160, 0];
const GOAL: Rgb = [150, 0, 180];

#[derive(Debug, Clone, Copy, Default)]
pub struct Layers<'a> {
    pub ratings: Option<&'a RatingGrid>,
    pub expanded: Option<&'a [Cell]>,
    pub path: Option<&'a [Cell]>,
    /// Mark the start and goal cells.
    pub endpoints: bool,
}

/// An RGB image stored top row first.
#[derive(Clone, PartialEq)]
pub struct Image {
    pub width: u32,
    pub height: u32,
    pub pixels: Vec<u8>,
}

impl fmt::Debug for Image {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Image({}x{})", self.width, self.height)
    }
}

impl Image {
    pub fn pixel(&self, x: u32, y: u32) -> Rgb {
        let i = 3 * (y as usize * self.width as usize + x as usize);
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }
}

/// Green ramp: white at rating 0, pure green at 1.
pub fn rating_color(r: f64) -> Rgb {
    let fade = (255.0 * (1.0 - r.clamp(0.0, 1.0))).round() as u8;
    [fade, 255, fade]
}

/// Renders `map` with each cell drawn as a `scale`×`scale` block. Later
/// layers paint over earlier ones: ratings, expansions, path, endpoints.
pub fn render(map: &GridMap, layers: &Layers, scale: u32) -> Result<Image> {
    if scale == 0 {
        return Err(Error::Config("scale must be at least 1".into()));
    }
    let mut cells: Vec<Rgb> = map
        .cells()
        .map(|c| if map.is_obstacle(c) { OBSTACLE } else { FREE })
        .collect();
    if let Some(grid) = layers.ratings {
        if (grid.width(), grid.height()) != (map.width(), map.height()) {
            return Err(Error::Config(format!(
                "rating grid is {}x{}, map `{}` is {}x{}",
                grid.width(),
                grid.height(),
                map.id(),
                map.width(),
                map.height()
            )));
        }
        for c in map.free_cells() {
            cells[map.index(c)] = rating_color(grid.rating(c).unwrap_or(0.0));
        }
    }
    let mut paint = |list: Option<&[Cell]>, color: Rgb| -> Result<()> {
        for &c in list.unwrap_or(&[]) {
            if !map.in_bounds(c) {
                return Err(Error::Config(format!(
                    "overlay cell ({}, {}) outside the map",
                    c.x, c.y
                )));
            }
            cells[map.index(c)] = color;
        }
        Ok(())
    };
    paint(layers.expanded, EXPANDED)?;
    paint(layers.path, PATH)?;
    if layers.endpoints {
        paint(Some(&[map.start()]), START)?;
        paint(Some(&[map.goal()]), GOAL)?;
    }

    let (w, h) = (map.width() * scale, map.height() * scale);
    let mut pixels = Vec::with_capacity(3 * w as usize * h as usize);
    for py in 0..h {
        let y = map.height() - 1 - py / scale;
        for px in 0..w {
            pixels.extend_from_slice(&cells[map.index(Cell::new(px / scale, y))]);
        }
    }
    Ok(Image {
        width: w,
        height: h,
        pixels,
    })
}
