//! Adaptive Gauss-Legendre quadrature.

// Ten-point rule on [-1, 1]: positive nodes and their weights.
const NODES: [f64; 5] = [
    0.148_874_338_981_631_22,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const WEIGHTS: [f64; 5] = [
    0.295_524_224_714_753,
    0.269_266_719_309_996_5,
    0.219_086_362_515_982,
    0.149_451_349_150_580_36,
    0.066_671_344_308_688_07,
];

const MAX_DEPTH: u32 = 40;

fn gauss<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut sum = 0.0;
    for (x, w) in NODES.iter().zip(WEIGHTS.iter()) {
        sum += w * (f(mid - half * x) + f(mid + half * x));
    }
    sum * half
}

fn refine<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let mid = 0.5 * (a + b);
    let left = gauss(f, a, mid);
    let right = gauss(f, mid, b);
    let split = left + right;
    if depth >= MAX_DEPTH || (split - whole).abs() <= tol {
        return split;
    }
    refine(f, a, mid, left, 0.5 * tol, depth + 1) + refine(f, mid, b, right, 0.5 * tol, depth + 1)
}

/// Integrates `f` over each `[breaks[i], breaks[i+1]]` and sums. The
/// breakpoints should bracket the pieces on which `f` is smooth.
pub(crate) fn integrate_pieces<F: Fn(f64) -> f64>(f: &F, breaks: &[f64], rel_tol: f64) -> f64 {
    let coarse: f64 = breaks.windows(2).map(|w| gauss(f, w[0], w[1]).abs()).sum();
    let span = breaks.last().copied().unwrap_or(0.0) - breaks.first().copied().unwrap_or(0.0);
    let tol = (rel_tol * coarse).max(f64::MIN_POSITIVE);
    breaks
        .windows(2)
        .map(|w| {
            let share = if span > 0.0 {
                (w[1] - w[0]) / span
            } else {
                1.0
            };
            let whole = gauss(f, w[0], w[1]);
            refine(f, w[0], w[1], whole, tol * share, 0)
        })
        .sum()
}
