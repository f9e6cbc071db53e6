//! Nelder-Mead simplex minimization for small fixed dimensions.

const ALPHA: f64 = 1.0;
const GAMMA: f64 = 2.0;
const RHO: f64 = 0.5;
const SIGMA: f64 = 0.5;

#[derive(Debug, Clone, Copy)]
pub(crate) struct NelderMeadOptions {
    pub max_iterations: usize,
    /// Stop once `f_worst - f_best` drops below this.
    pub f_tolerance: f64,
    /// Number of times the simplex is rebuilt around the incumbent after it collapses.
    pub rebuilds: usize,
}

#[derive(Debug, Clone, Copy)]
#[allow(dead_code)]
pub(crate) struct Minimum<const N: usize> {
    pub x: [f64; N],
    pub f: f64,
    pub iterations: usize,
    pub collapsed: bool,
}

fn lerp<const N: usize>(a: &[f64; N], b: &[f64; N], t: f64) -> [f64; N] {
    std::array::from_fn(|k| a[k] + t * (b[k] - a[k]))
}

/// Minimizes `f` from `start`, with the initial simplex spanned by `steps` along each axis.
pub(crate) fn nelder_mead<const N: usize>(
    f: impl Fn(&[f64; N]) -> f64,
    start: [f64; N],
    steps: [f64; N],
    opts: NelderMeadOptions,
) -> Minimum<N> {
    let build = |x0: [f64; N], scale: f64| -> Vec<([f64; N], f64)> {
        let mut s = Vec::with_capacity(N + 1);
        s.push((x0, f(&x0)));
        for k in 0..N {
            let mut v = x0;
            v[k] += steps[k] * scale;
            s.push((v, f(&v)));
        }
        s
    };

    let mut simplex = build(start, 1.0);
    let mut iterations = 0;
    let mut rebuilds_left = opts.rebuilds;
    let mut scale = 1.0;
    let mut collapsed = false;

    while iterations < opts.max_iterations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (best, worst) = (simplex[0].1, simplex[N].1);
        if worst - best <= opts.f_tolerance {
            if rebuilds_left == 0 {
                collapsed = true;
                break;
            }
            rebuilds_left -= 1;
            scale *= 0.1;
            simplex = build(simplex[0].0, scale);
            continue;
        }
        iterations += 1;

        let mut centroid = [0.0; N];
        for (v, _) in &simplex[..N] {
            for k in 0..N {
                centroid[k] += v[k] / N as f64;
            }
        }
        let worst_x = simplex[N].0;

        let reflected = lerp(&centroid, &worst_x, -ALPHA);
        let f_reflected = f(&reflected);
        if f_reflected < simplex[0].1 {
            let expanded = lerp(&centroid, &worst_x, -GAMMA);
            let f_expanded = f(&expanded);
            simplex[N] = if f_expanded < f_reflected {
                (expanded, f_expanded)
            } else {
                (reflected, f_reflected)
            };
            continue;
        }
        if f_reflected < simplex[N - 1].1 {
            simplex[N] = (reflected, f_reflected);
            continue;
        }
        let (contracted, f_contracted) = if f_reflected < simplex[N].1 {
            let c = lerp(&centroid, &reflected, RHO);
            (c, f(&c))
        } else {
            let c = lerp(&centroid, &worst_x, RHO);
            (c, f(&c))
        };
        if f_contracted < simplex[N].1.min(f_reflected) {
            simplex[N] = (contracted, f_contracted);
            continue;
        }
        let best_x = simplex[0].0;
        for vertex in simplex.iter_mut().skip(1) {
            let x = lerp(&best_x, &vertex.0, SIGMA);
            *vertex = (x, f(&x));
        }
    }

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    Minimum { x: simplex[0].0, f: simplex[0].1, iterations, collapsed }
}
