//! Obstacle primitives shared by the world generators.

use rand::Rng;

/// Mutable obstacle raster, bottom row first like [`crate::GridMap`].
pub(crate) struct Canvas {
    pub width: u32,
    pub height: u32,
    pub obstacles: Vec<bool>,
}

impl Canvas {
    pub fn new(width: u32, height: u32) -> Self {
        Canvas {
            width,
            height,
            obstacles: vec![false; width as usize * height as usize],
        }
    }

    pub fn set(&mut self, x: u32, y: u32, blocked: bool) {
        if x < self.width && y < self.height {
            self.obstacles[(y * self.width + x) as usize] = blocked;
        }
    }

    pub fn hline(&mut self, x0: u32, x1: u32, y: u32) {
        for x in x0..=x1 {
            self.set(x, y, true);
        }
    }

    pub fn vline(&mut self, x: u32, y0: u32, y1: u32) {
        for y in y0..=y1 {
            self.set(x, y, true);
        }
    }

    /// Independent per-cell obstacles with probability `density`.
    pub fn scatter<R: Rng>(&mut self, rng: &mut R, density: f64) {
        for cell in self.obstacles.iter_mut() {
            if rng.gen_bool(density) {
                *cell = true;
            }
        }
    }

    pub fn clear_corners(&mut self) {
        self.set(0, 0, false);
        self.set(self.width - 1, self.height - 1, false);
    }
}

/// Full-height wall at column `x`, open on rows `gap_lo..=gap_hi`.
pub(crate) fn wall_with_gap(canvas: &mut Canvas, x: u32, gap_lo: u32, gap_hi: u32) {
    for y in 0..canvas.height {
        canvas.set(x, y, !(gap_lo..=gap_hi).contains(&y));
    }
}

/// Side of a C-shaped trap that is left open.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Opening {
    Left,
    Right,
    Down,
    Up,
}

impl Opening {
    pub const ALL: [Opening; 4] = [Opening::Left, Opening::Right, Opening::Down, Opening::Up];
}

/// Square C-shape with corners `(x0, y0)`..`(x0+size-1, y0+size-1)` and one open side.
pub(crate) fn c_trap(canvas: &mut Canvas, x0: u32, y0: u32, size: u32, opening: Opening) {
    let (x1, y1) = (x0 + size - 1, y0 + size - 1);
    if opening != Opening::Down {
        canvas.hline(x0, x1, y0);
    }
    if opening != Opening::Up {
        canvas.hline(x0, x1, y1);
    }
    if opening != Opening::Left {
        canvas.vline(x0, y0, y1);
    }
    if opening != Opening::Right {
        canvas.vline(x1, y0, y1);
    }
}

/// Cup whose mouth faces the lower-left corner: closed top and right walls,
/// with short inward lips hanging from the far ends. A goal-directed search
/// coming from the lower left walks into it and has to back out.
pub(crate) fn corner_trap(canvas: &mut Canvas, x0: u32, y0: u32, size: u32) {
    let (x1, y1) = (x0 + size - 1, y0 + size - 1);
    let lip = (size / 3).max(1);
    canvas.hline(x0, x1, y1);
    canvas.vline(x1, y0, y1);
    canvas.vline(x0, y1 - lip, y1);
    canvas.hline(x1 - lip, x1, y0);
}

/// Recursive-division maze with `corridor`-wide passages and 1-cell walls.
///
/// The maze is built on a lattice of rooms; the last room in each direction
/// absorbs leftover cells so any size works.
pub(crate) fn division_maze<R: Rng>(canvas: &mut Canvas, rng: &mut R, corridor: u32) {
    let pitch = corridor + 1;
    let nx = ((canvas.width + 1) / pitch).max(1) as usize;
    let ny = ((canvas.height + 1) / pitch).max(1) as usize;
    // east[i][j]: wall between room (i, j) and (i + 1, j); north likewise upwards
    let mut east = vec![vec![false; ny]; nx];
    let mut north = vec![vec![false; ny]; nx];
    divide(rng, &mut east, &mut north, 0, 0, nx, ny);

    let span = |i: usize, n: usize, limit: u32| -> (u32, u32) {
        let lo = i as u32 * pitch;
        let hi = if i + 1 == n {
            limit - 1
        } else {
            lo + corridor - 1
        };
        (lo, hi)
    };

    canvas.obstacles.iter_mut().for_each(|c| *c = true);
    for i in 0..nx {
        let (xl, xh) = span(i, nx, canvas.width);
        for j in 0..ny {
            let (yl, yh) = span(j, ny, canvas.height);
            for x in xl..=xh {
                for y in yl..=yh {
                    canvas.set(x, y, false);
                }
            }
            if i + 1 < nx && !east[i][j] {
                for y in yl..=yh {
                    canvas.set(xh + 1, y, false);
                }
            }
            if j + 1 < ny && !north[i][j] {
                for x in xl..=xh {
                    canvas.set(x, yh + 1, false);
                }
            }
        }
    }
}

fn divide<R: Rng>(
    rng: &mut R,
    east: &mut [Vec<bool>],
    north: &mut [Vec<bool>],
    x0: usize,
    y0: usize,
    x1: usize,
    y1: usize,
) {
    let (w, h) = (x1 - x0, y1 - y0);
    if w < 2 && h < 2 {
        return;
    }
    let horizontal = if w < 2 {
        true
    } else if h < 2 {
        false
    } else if w != h {
        h > w
    } else {
        rng.gen_bool(0.5)
    };
    if horizontal {
        let row = rng.gen_range(y0..y1 - 1);
        let door = rng.gen_range(x0..x1);
        for i in x0..x1 {
            if i != door {
                north[i][row] = true;
            }
        }
        divide(rng, east, north, x0, y0, x1, row + 1);
        divide(rng, east, north, x0, row + 1, x1, y1);
    } else {
        let col = rng.gen_range(x0..x1 - 1);
        let door = rng.gen_range(y0..y1);
        for j in y0..y1 {
            if j != door {
                east[col][j] = true;
            }
        }
        divide(rng, east, north, x0, y0, col + 1, y1);
        divide(rng, east, north, col + 1, y0, x1, y1);
    }
}
