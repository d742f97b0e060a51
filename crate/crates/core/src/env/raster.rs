//! Supercover traversal of a real-valued segment over the unit pixel grid.
//!
//! Pixel `(i, j)` owns the half-open square `[i, i+1) x [j, j+1)`, the same
//! convention as flooring a point. The traversal visits every pixel owning a
//! point of the segment, plus both side neighbours whenever the segment
//! passes exactly through a pixel corner.

/// Visits the supercover of `p0 -> p1`. `visit` returns `false` to stop
/// early; the function returns `false` iff it was stopped.
pub fn supercover(p0: (f64, f64), p1: (f64, f64), mut visit: impl FnMut(i64, i64) -> bool) -> bool {
    // canonical direction so a->b and b->a give identical pixel sets
    let (p0, p1) = if (p1.0, p1.1) < (p0.0, p0.1) {
        (p1, p0)
    } else {
        (p0, p1)
    };
    let (x0, y0) = p0;
    let (dx, dy) = (p1.0 - x0, p1.1 - y0);
    let mut x = x0.floor() as i64;
    let mut y = y0.floor() as i64;
    let (end_x, end_y) = (p1.0.floor() as i64, p1.1.floor() as i64);
    let step_x = sign(dx);
    let step_y = sign(dy);

    if !visit(x, y) {
        return false;
    }
    let max_steps = (end_x - x).unsigned_abs() + (end_y - y).unsigned_abs() + 2;
    for _ in 0..max_steps {
        let tx = crossing(x0, dx, x, step_x);
        let ty = crossing(y0, dy, y, step_y);
        let ok_x = reaches(tx, step_x);
        let ok_y = reaches(ty, step_y);
        if tx < ty {
            if !ok_x {
                break;
            }
            x += step_x;
        } else if ty < tx {
            if !ok_y {
                break;
            }
            y += step_y;
        } else if ok_x && ok_y {
            // exact corner: both side pixels touch the segment
            if !visit(x + step_x, y) || !visit(x, y + step_y) {
                return false;
            }
            x += step_x;
            y += step_y;
        } else {
            break;
        }
        if !visit(x, y) {
            return false;
        }
    }
    if (x, y) != (end_x, end_y) {
        return visit(end_x, end_y);
    }
    true
}

fn sign(d: f64) -> i64 {
    if d > 0.0 {
        1
    } else if d < 0.0 {
        -1
    } else {
        0
    }
}

/// Segment parameter at which the traversal leaves cell `c` along one axis.
fn crossing(p0: f64, d: f64, c: i64, step: i64) -> f64 {
    match step {
        1 => ((c + 1) as f64 - p0) / d,
        -1 => (c as f64 - p0) / d,
        _ => f64::INFINITY,
    }
}

/// Moving up, the boundary point belongs to the next cell, so reaching it
/// at t = 1 still enters it. Moving down it belongs to the current cell.
fn reaches(t: f64, step: i64) -> bool {
    if step > 0 {
        t <= 1.0
    } else {
        t < 1.0
    }
}

/// Collects the supercover into a vector in traversal order.
pub fn supercover_cells(p0: (f64, f64), p1: (f64, f64)) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    supercover(p0, p1, |x, y| {
        out.push((x, y));
        true
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    #[test]
    fn single_cell() {
        assert_eq!(supercover_cells((0.2, 0.3), (0.8, 0.9)), vec![(0, 0)]);
        assert_eq!(supercover_cells((3.5, 3.5), (3.5, 3.5)), vec![(3, 3)]);
    }

    #[test]
    fn horizontal_row() {
        let cells = supercover_cells((60.0, 50.0), (70.0, 50.0));
        let expect: Vec<_> = (60..=70).map(|x| (x, 50)).collect();
        assert_eq!(cells, expect);
    }

    #[test]
    fn exact_diagonal_includes_corner_neighbours() {
        let cells: HashSet<_> = supercover_cells((0.5, 0.5), (2.5, 2.5)).into_iter().collect();
        // diagonal through (1,1) and (2,2) corners
        let expect: HashSet<_> = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (2, 2)]
            .into_iter()
            .collect();
        assert_eq!(cells, expect);
    }

    #[test]
    fn negative_direction_stops_on_owned_boundary() {
        // endpoint exactly on x=2 belongs to pixel 2, never reaches pixel 1
        let cells: HashSet<_> = supercover_cells((4.5, 0.5), (2.0, 0.5)).into_iter().collect();
        assert_eq!(cells, [(2, 0), (3, 0), (4, 0)].into_iter().collect());
    }

    #[test]
    fn early_stop() {
        let mut seen = 0;
        let done = supercover((0.5, 0.5), (9.5, 0.5), |x, _| {
            seen += 1;
            x < 3
        });
        assert!(!done);
        assert_eq!(seen, 4);
    }

    /// Closed segment vs closed unit square test (Liang-Barsky clipping).
    fn touches_closed(p0: (f64, f64), p1: (f64, f64), cx: i64, cy: i64, slack: f64) -> bool {
        let (mut t0, mut t1) = (0.0f64, 1.0f64);
        let d = (p1.0 - p0.0, p1.1 - p0.1);
        let lims = [
            (-d.0, p0.0 - (cx as f64 - slack)),
            (d.0, (cx as f64 + 1.0 + slack) - p0.0),
            (-d.1, p0.1 - (cy as f64 - slack)),
            (d.1, (cy as f64 + 1.0 + slack) - p0.1),
        ];
        for (p, q) in lims {
            if p == 0.0 {
                if q < 0.0 {
                    return false;
                }
            } else {
                let r = q / p;
                if p < 0.0 {
                    t0 = t0.max(r);
                } else {
                    t1 = t1.min(r);
                }
            }
        }
        t0 <= t1
    }

    proptest! {
        /// Dense floor-sampling is a subset of the supercover, and every
        /// supercover pixel touches the segment.
        #[test]
        fn matches_brute_force(x0 in -5.0..25.0f64, y0 in -5.0..25.0f64, x1 in -5.0..25.0f64, y1 in -5.0..25.0f64) {
            let cells: HashSet<_> = supercover_cells((x0, y0), (x1, y1)).into_iter().collect();
            let n = 4000;
            for k in 0..=n {
                let t = k as f64 / n as f64;
                let px = (x0 + t * (x1 - x0)).floor() as i64;
                let py = (y0 + t * (y1 - y0)).floor() as i64;
                prop_assert!(cells.contains(&(px, py)), "missing ({}, {})", px, py);
            }
            for &(cx, cy) in &cells {
                prop_assert!(touches_closed((x0, y0), (x1, y1), cx, cy, 1e-9));
            }
        }

        #[test]
        fn direction_independent(x0 in 0.0..30.0f64, y0 in 0.0..30.0f64, x1 in 0.0..30.0f64, y1 in 0.0..30.0f64) {
            let a: HashSet<_> = supercover_cells((x0, y0), (x1, y1)).into_iter().collect();
            let b: HashSet<_> = supercover_cells((x1, y1), (x0, y0)).into_iter().collect();
            prop_assert_eq!(a, b);
        }
    }
}
