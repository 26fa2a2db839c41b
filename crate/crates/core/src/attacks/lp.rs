//! `min t  s.t.  a·u ≤ b (polygon),  |u_j − x_j| ≤ t`  over `(u₁, u₂, t)`.
//!
//! Three variables and a handful of constraints: enumerate every basic
//! solution (three tight constraints), keep the feasible one with least `t`.
//! The feasible region contains no line, so the optimum is attained at one.

const SINGULAR: f64 = 1e-12;

/// Least ℓ∞ distance from `x` to the polygon `{u : a·u ≤ b}` given as rows
/// `[a₀, a₁, b]`, with a minimizer. `None` if the polygon is empty.
///
/// The ℓ∞ minimizer is often not unique; among the minimizers the one
/// closest to `x` in ℓ2 is returned.
pub fn min_linf_in_polygon(x: [f64; 2], halfplanes: &[[f64; 3]]) -> Option<([f64; 2], f64)> {
    let scale = 1.0 + x[0].abs().max(x[1].abs());
    let feas_tol = 1e-9 * scale;

    // rows g·(u₀, u₁, t) ≤ h
    let mut rows: Vec<([f64; 3], f64)> = Vec::with_capacity(halfplanes.len() + 4);
    rows.push(([1.0, 0.0, -1.0], x[0]));
    rows.push(([-1.0, 0.0, -1.0], -x[0]));
    rows.push(([0.0, 1.0, -1.0], x[1]));
    rows.push(([0.0, -1.0, -1.0], -x[1]));
    for h in halfplanes {
        let norm = h[0].hypot(h[1]);
        if norm == 0.0 {
            if h[2] < 0.0 {
                return None;
            }
            continue;
        }
        rows.push(([h[0] / norm, h[1] / norm, 0.0], h[2] / norm));
    }

    let m = rows.len();
    let mut best: Option<([f64; 2], f64)> = None;
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let Some(p) = solve3([rows[i].0, rows[j].0, rows[k].0], [rows[i].1, rows[j].1, rows[k].1]) else {
                    continue;
                };
                if best.is_some_and(|(_, t)| p[2] >= t) {
                    continue;
                }
                let feasible = rows
                    .iter()
                    .all(|(g, h)| g[0] * p[0] + g[1] * p[1] + g[2] * p[2] <= h + feas_tol);
                if feasible {
                    best = Some(([p[0], p[1]], p[2].max(0.0)));
                }
            }
        }
    }
    best.map(|(u, t)| (central_minimizer(x, halfplanes, t).unwrap_or(u), t))
}

/// ℓ2-closest point to `x` of the polygon intersected with the box of
/// half-width `t` around `x`.
fn central_minimizer(x: [f64; 2], halfplanes: &[[f64; 3]], t: f64) -> Option<[f64; 2]> {
    let t = t + 1e-12 * (1.0 + t + x[0].abs().max(x[1].abs()));
    let mut poly = vec![
        [x[0] - t, x[1] - t],
        [x[0] + t, x[1] - t],
        [x[0] + t, x[1] + t],
        [x[0] - t, x[1] + t],
    ];
    for h in halfplanes {
        poly = clip(&poly, [h[0], h[1]], h[2]);
        if poly.is_empty() {
            return None;
        }
    }
    let inside = (0..poly.len()).all(|k| {
        let (p, q) = (poly[k], poly[(k + 1) % poly.len()]);
        (q[0] - p[0]) * (x[1] - p[1]) - (q[1] - p[1]) * (x[0] - p[0]) >= 0.0
    });
    if inside && poly.len() >= 3 {
        return Some(x);
    }
    let mut best = (f64::INFINITY, poly[0]);
    for k in 0..poly.len() {
        let (p, q) = (poly[k], poly[(k + 1) % poly.len()]);
        let e = [q[0] - p[0], q[1] - p[1]];
        let len2 = e[0] * e[0] + e[1] * e[1];
        let s = if len2 > 0.0 {
            (((x[0] - p[0]) * e[0] + (x[1] - p[1]) * e[1]) / len2).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let c = [p[0] + s * e[0], p[1] + s * e[1]];
        let d = (c[0] - x[0]).powi(2) + (c[1] - x[1]).powi(2);
        if d < best.0 {
            best = (d, c);
        }
    }
    Some(best.1)
}

/// Sutherland–Hodgman against the half-plane `a·u ≤ b`. Keeps orientation.
pub(crate) fn clip(poly: &[[f64; 2]], a: [f64; 2], b: f64) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    let side = |v: &[f64; 2]| a[0] * v[0] + a[1] * v[1] - b;
    for k in 0..poly.len() {
        let cur = poly[k];
        let nxt = poly[(k + 1) % poly.len()];
        let (sc, sn) = (side(&cur), side(&nxt));
        if sc <= 0.0 {
            out.push(cur);
        }
        if (sc <= 0.0) != (sn <= 0.0) {
            let t = sc / (sc - sn);
            out.push([cur[0] + t * (nxt[0] - cur[0]), cur[1] + t * (nxt[1] - cur[1])]);
        }
    }
    out
}

fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(&a);
    if d.abs() < SINGULAR {
        return None;
    }
    let mut out = [0.0; 3];
    for (c, o) in out.iter_mut().enumerate() {
        let mut m = a;
        for r in 0..3 {
            m[r][c] = b[r];
        }
        *o = det(&m) / d;
    }
    Some(out)
}
