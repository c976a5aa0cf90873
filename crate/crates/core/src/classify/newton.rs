use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::field::Case;
use crate::ore::OreOp;

use super::ClassifyError;

/// A slope num/den (den > 0, reduced) of horizontal length `multiplicity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Slope {
    pub num: i64,
    pub den: i64,
    pub multiplicity: i64,
}

impl Slope {
    pub fn is_integer(&self) -> bool {
        self.den == 1
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{} (×{})", self.num, self.multiplicity)
        } else {
            write!(f, "{}/{} (×{})", self.num, self.den, self.multiplicity)
        }
    }
}

/// Points (i, ord₀ a_i), the vertices of their lower convex hull, and its slopes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewtonPolygon {
    pub points: Vec<(i64, i64)>,
    pub hull: Vec<(i64, i64)>,
    pub slopes: Vec<Slope>,
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Newton polygon at z = 0 of a q-difference operator.
pub fn newton_polygon(l: &OreOp) -> Result<NewtonPolygon, ClassifyError> {
    if l.spec().case != Case::Q {
        return Err(ClassifyError::UnsupportedCase);
    }
    let points: Vec<(i64, i64)> = l
        .coeff_vec()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i as i64, c.val0()))
        .collect();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &p in &points {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    let slopes = hull
        .windows(2)
        .map(|w| {
            let (dx, dy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
            let g = dy.gcd(&dx);
            Slope {
                num: dy / g,
                den: dx / g,
                multiplicity: dx,
            }
        })
        .collect();
    Ok(NewtonPolygon { points, hull, slopes })
}

/// False when the polygon rules out an imprimitive group: its slopes are permuted
/// transitively, so an imprimitive system has a single slope.
pub fn imprimitivity_prescreen(np: &NewtonPolygon) -> bool {
    np.slopes.len() <= 1
}

/// Whether the slopes exclude an SO₃ group for an order-3 operator:
/// Some(true) when excluded, Some(false) when compatible, None for non-integral slopes.
pub fn theta_obstruction(np: &NewtonPolygon) -> Option<bool> {
    if np.slopes.iter().any(|s| !s.is_integer()) {
        return None;
    }
    let s: Vec<i64> = np.slopes.iter().map(|s| s.num).collect();
    Some(match s.len() {
        0 | 1 => false,
        2 => true,
        _ => s[1] - s[0] != s[2] - s[1],
    })
}
