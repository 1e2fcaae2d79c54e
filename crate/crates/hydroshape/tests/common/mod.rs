//! Brute-force reference integrators for cross-checking the library's
//! quadrature. Deliberately primitive: composite midpoint with smoothstep
//! grading toward segment ends (which tames endpoint log singularities),
//! independent of everything under src/.

/// ∫ₐᵇ f dx with the interval split at `breakpoints` and ~`total_points`
/// midpoint evaluations distributed over the segments.
pub fn graded_midpoint<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    total_points: usize,
) -> f64 {
    let mut edges = vec![a];
    edges.extend(breakpoints.iter().copied().filter(|&x| x > a && x < b));
    edges.push(b);
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    let per_segment = (total_points / (edges.len() - 1)).max(64);
    let mut total = 0.0;
    for pair in edges.windows(2) {
        let (lo, width) = (pair[0], pair[1] - pair[0]);
        let h = 1.0 / per_segment as f64;
        let mut acc = 0.0;
        for i in 0..per_segment {
            let u = (i as f64 + 0.5) * h;
            // smoothstep grading: x = lo + w(3u² − 2u³), dx = w·6u(1−u) du
            let x = lo + width * u * u * (3.0 - 2.0 * u);
            let jac = width * 6.0 * u * (1.0 - u);
            let v = f(x) * jac;
            if v.is_finite() {
                acc += v;
            }
        }
        total += acc * h;
    }
    total
}

/// ∫₀^∞ f dx through x = scale·t/(1−t), breakpoints given in x.
pub fn half_line_midpoint<F: Fn(f64) -> f64>(
    f: &F,
    scale: f64,
    breakpoints: &[f64],
    total_points: usize,
) -> f64 {
    let mapped: Vec<f64> = breakpoints.iter().map(|&x| x / (x + scale)).collect();
    graded_midpoint(
        &|t: f64| {
            let u = 1.0 - t;
            let x = scale * t / u;
            if !x.is_finite() {
                return 0.0;
            }
            f(x) * scale / (u * u)
        },
        0.0,
        1.0,
        &mapped,
        total_points,
    )
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}
