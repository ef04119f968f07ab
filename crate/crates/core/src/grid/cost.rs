use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

/// Path cost of the form `cardinal + diagonal·√2`, kept as an exact integer pair.
///
/// Because √2 is irrational, two costs are numerically equal only when both
/// components match, so the derived `Eq` is also numeric equality. `Ord` is
/// implemented numerically (not lexicographically) with integer arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct ExactCost {
    pub cardinal: u64,
    pub diagonal: u64,
}

impl ExactCost {
    pub const ZERO: ExactCost = ExactCost {
        cardinal: 0,
        diagonal: 0,
    };
    pub const CARDINAL_STEP: ExactCost = ExactCost {
        cardinal: 1,
        diagonal: 0,
    };
    pub const DIAGONAL_STEP: ExactCost = ExactCost {
        cardinal: 0,
        diagonal: 1,
    };

    pub const fn new(cardinal: u64, diagonal: u64) -> Self {
        ExactCost { cardinal, diagonal }
    }

    pub fn is_zero(&self) -> bool {
        self.cardinal == 0 && self.diagonal == 0
    }

    /// Floating-point value `cardinal + diagonal·√2`.
    pub fn value(&self) -> f64 {
        self.cardinal as f64 + self.diagonal as f64 * std::f64::consts::SQRT_2
    }

    /// Number of moves the cost is made of.
    pub fn steps(&self) -> u64 {
        self.cardinal + self.diagonal
    }
}

/// Compares `a` and `b` by numeric value using integer arithmetic only.
///
/// The sign of `(a.c - b.c) + (a.d - b.d)·√2` is decided directly when both
/// deltas agree in sign; otherwise the squared magnitudes `Δc²` and `2·Δd²`
/// are compared.
pub fn compare_cost(a: ExactCost, b: ExactCost) -> Ordering {
    let dc = a.cardinal as i128 - b.cardinal as i128;
    let dd = a.diagonal as i128 - b.diagonal as i128;
    match (dc.signum(), dd.signum()) {
        (0, 0) => Ordering::Equal,
        (c, d) if c >= 0 && d >= 0 => Ordering::Greater,
        (c, d) if c <= 0 && d <= 0 => Ordering::Less,
        (1, _) => {
            // dc > 0 > dd
            (dc * dc).cmp(&(2 * dd * dd))
        }
        _ => {
            // dd > 0 > dc
            (2 * dd * dd).cmp(&(dc * dc))
        }
    }
}

impl Ord for ExactCost {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_cost(*self, *other)
    }
}

impl PartialOrd for ExactCost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for ExactCost {
    type Output = ExactCost;

    fn add(self, rhs: ExactCost) -> ExactCost {
        ExactCost {
            cardinal: self.cardinal + rhs.cardinal,
            diagonal: self.diagonal + rhs.diagonal,
        }
    }
}

impl AddAssign for ExactCost {
    fn add_assign(&mut self, rhs: ExactCost) {
        *self = *self + rhs;
    }
}

impl std::iter::Sum for ExactCost {
    fn sum<I: Iterator<Item = ExactCost>>(iter: I) -> ExactCost {
        iter.fold(ExactCost::ZERO, Add::add)
    }
}

impl fmt::Display for ExactCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}*sqrt2", self.cardinal, self.diagonal)
    }
}
