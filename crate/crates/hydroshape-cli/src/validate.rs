//! The validation battery behind `hydroshape validate`: route agreement,
//! Z-invariance, normalization, the n = 1 circular reduction, and the
//! ground-state anchors, each with a pinned tolerance and a reported
//! worst residual.

use serde::Serialize;

use hydroshape::closedform::{circular_report, ground_report};
use hydroshape::measures::{
    disequilibrium_position_with_k1_power, normalization, oracle_report, pipeline_report,
};
use hydroshape::{ComplexityReport, QuantumState};

use crate::output::F17;

#[derive(Serialize)]
pub struct Check {
    pub name: &'static str,
    pub tolerance: F17,
    pub max_residual: F17,
    pub pass: bool,
    pub detail: String,
}

#[derive(Serialize)]
pub struct Summary {
    pub command: &'static str,
    pub rel_tol: F17,
    pub checks: Vec<Check>,
    pub pass: bool,
}

pub struct Options {
    pub rel_tol: f64,
    pub z_list: Vec<f64>,
    pub inject_k1_exponent_bug: bool,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

fn measures_of(r: &ComplexityReport) -> [(&'static str, f64); 6] {
    [
        ("position disequilibrium", r.disequilibrium_pos.value),
        ("position shannon", r.shannon_pos.value),
        ("position complexity", r.complexity_pos.value),
        ("momentum disequilibrium", r.disequilibrium_mom.value),
        ("momentum shannon", r.shannon_mom.value),
        ("momentum complexity", r.complexity_mom.value),
    ]
}

fn towers(d: usize, n: u32) -> Vec<Vec<i32>> {
    let lmax = n as i32 - 1;
    if d == 2 {
        return (-lmax..=lmax).map(|m| vec![m]).collect();
    }
    let mut out = Vec::new();
    let mut body = vec![0i32; d - 2];
    fn rec(body: &mut Vec<i32>, idx: usize, cap: i32, out: &mut Vec<Vec<i32>>) {
        if idx == body.len() {
            let top = body[body.len() - 1];
            for m in -top..=top {
                let mut t = body.clone();
                t.push(m);
                out.push(t);
            }
            return;
        }
        let hi = if idx == 0 { cap } else { body[idx - 1] };
        for v in 0..=hi {
            body[idx] = v;
            rec(body, idx + 1, cap, out);
        }
    }
    rec(&mut body, 0, lmax, &mut out);
    out
}

fn check(name: &'static str, tolerance: f64, max_residual: f64, detail: String) -> Check {
    Check {
        name,
        tolerance: F17(tolerance),
        max_residual: F17(max_residual),
        pass: max_residual <= tolerance,
        detail,
    }
}

fn ground_position_anchor() -> Check {
    let mut worst = 0.0f64;
    for d in 2..=8usize {
        let r = ground_report(d, 1.0).unwrap();
        worst = worst.max(rel(r.complexity_pos.value, (std::f64::consts::E / 2.0).powi(d as i32)));
    }
    check("ground-position-anchor", 1e-14, worst, "closed C[rho] = (e/2)^D for D=2..8".into())
}

fn ground_momentum_anchor() -> Check {
    let mut worst = 0.0f64;
    for (d, reference) in [(2usize, 1.7926), (3, 2.3545), (4, 3.0799)] {
        let r = ground_report(d, 1.0).unwrap();
        worst = worst.max((r.complexity_mom.value - reference).abs());
    }
    check(
        "ground-momentum-anchor",
        1e-4,
        worst,
        "closed C[gamma] vs the four-decimal reference values at D=2,3,4".into(),
    )
}

fn route_agreement(opts: &Options) -> Check {
    let mut worst = 0.0f64;
    let mut detail = String::from("pipeline vs oracle (vs closed where applicable)");
    let mut states = 0usize;
    'outer: for d in 2..=4usize {
        for n in 1..=3u32 {
            for mu in towers(d, n) {
                let state = QuantumState::new(d, n, mu.clone()).unwrap();
                let mut pipe = match pipeline_report(&state, 1.0, opts.rel_tol) {
                    Ok(r) => r,
                    Err(e) => {
                        worst = f64::INFINITY;
                        detail = format!("pipeline failed for D={d} n={n} mu={mu:?}: {e}");
                        break 'outer;
                    }
                };
                if opts.inject_k1_exponent_bug {
                    match disequilibrium_position_with_k1_power(
                        &state,
                        1.0,
                        -(d as f64) - 5.0,
                    ) {
                        Ok(bugged) => pipe.disequilibrium_pos = bugged,
                        Err(e) => {
                            worst = f64::INFINITY;
                            detail = format!(
                                "route-disagreement: injected exponent is not integrable for \
                                 D={d} n={n} mu={mu:?} ({e})"
                            );
                            break 'outer;
                        }
                    }
                }
                let orac = oracle_report(&state, 1.0, opts.rel_tol).unwrap();
                for ((name, a), (_, b)) in measures_of(&pipe).into_iter().zip(measures_of(&orac)) {
                    let r = rel(a, b);
                    if r > worst {
                        worst = r;
                        if r > 1e-6 {
                            detail = format!("route-disagreement: {name} for D={d} n={n} mu={mu:?}");
                        }
                    }
                }
                if state.is_circular() {
                    let closed = circular_report(d, n, 1.0).unwrap();
                    for ((name, a), (_, b)) in
                        measures_of(&closed).into_iter().zip(measures_of(&orac))
                    {
                        let r = rel(a, b);
                        if r > worst {
                            worst = r;
                            if r > 1e-6 {
                                detail =
                                    format!("route-disagreement: closed {name} for D={d} n={n}");
                            }
                        }
                    }
                }
                states += 1;
            }
        }
    }
    if worst <= 1e-6 {
        detail = format!("{detail}; {states} states");
    }
    check("route-agreement", 1e-6, worst, detail)
}

fn z_invariance(opts: &Options) -> Check {
    let mut worst = 0.0f64;
    for d in 2..=4usize {
        for n in 1..=3u32 {
            let state = QuantumState::circular(d, n).unwrap();
            let base = pipeline_report(&state, 1.0, opts.rel_tol).unwrap();
            for &z in &opts.z_list {
                let rep = pipeline_report(&state, z, opts.rel_tol).unwrap();
                worst = worst.max(rel(rep.complexity_pos.value, base.complexity_pos.value));
                worst = worst.max(rel(rep.complexity_mom.value, base.complexity_mom.value));
            }
        }
    }
    check(
        "z-invariance",
        1e-9,
        worst,
        format!("complexities through Z-dependent intermediates, Z in {:?}", opts.z_list),
    )
}

fn normalization_check(opts: &Options) -> Check {
    let mut worst = 0.0f64;
    let mut states = 0usize;
    for d in 2..=5usize {
        for n in 1..=3u32 {
            for mu in towers(d, n) {
                let state = QuantumState::new(d, n, mu).unwrap();
                let (np, nm) = normalization(&state, 1.0, opts.rel_tol).unwrap();
                worst = worst.max((np - 1.0).abs()).max((nm - 1.0).abs());
                states += 1;
            }
        }
    }
    check("normalization", 1e-9, worst, format!("|∫ρ−1| and |∫γ−1| over {states} states"))
}

fn circular_reduction() -> Check {
    let mut worst = 0.0f64;
    for d in 2..=10usize {
        let g = ground_report(d, 1.0).unwrap();
        let c = circular_report(d, 1, 1.0).unwrap();
        for ((_, a), (_, b)) in measures_of(&g).into_iter().zip(measures_of(&c)) {
            worst = worst.max((a - b).abs() / a.abs().max(1.0));
        }
    }
    check("circular-n1-reduction", 1e-12, worst, "circular(n=1) vs ground, D=2..10".into())
}

pub fn run(opts: &Options) -> Summary {
    let checks = vec![
        ground_position_anchor(),
        ground_momentum_anchor(),
        route_agreement(opts),
        z_invariance(opts),
        normalization_check(opts),
        circular_reduction(),
    ];
    let pass = checks.iter().all(|c| c.pass);
    Summary { command: "validate", rel_tol: F17(opts.rel_tol), checks, pass }
}
