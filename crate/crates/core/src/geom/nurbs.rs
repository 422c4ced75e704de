use alloc::vec;
use alloc::vec::Vec;

use super::{all_finite, GeomError, Point3};

/// Non-uniform rational B-spline curve.
#[derive(Debug, Clone, PartialEq)]
pub struct NurbsSpline {
    pub degree: usize,
    pub knots: Vec<f64>,
    pub control_points: Vec<Point3>,
    pub weights: Vec<f64>,
}

impl NurbsSpline {
    pub fn validate(&self) -> Result<(), GeomError> {
        let invalid = |rule| Err(GeomError::Invalid { rule });
        let p = self.degree;
        let n = self.control_points.len();
        if p < 1 {
            return invalid("nurbs.degree_at_least_one");
        }
        if n < p + 1 {
            return invalid("nurbs.control_point_count");
        }
        if self.knots.len() != n + p + 1 {
            return invalid("nurbs.knot_count");
        }
        if self.weights.len() != n {
            return invalid("nurbs.weight_count");
        }
        if !self.knots.iter().all(|k| k.is_finite()) {
            return invalid("nurbs.knots_finite");
        }
        if self.knots.windows(2).any(|w| w[1] < w[0]) {
            return invalid("nurbs.knots_nondecreasing");
        }
        if !self.weights.iter().all(|w| w.is_finite() && *w > 0.0) {
            return invalid("nurbs.weights_positive");
        }
        if !all_finite(&self.control_points) {
            return invalid("nurbs.control_points_finite");
        }
        if !(self.knots[p] < self.knots[n]) {
            return invalid("nurbs.nonempty_domain");
        }
        Ok(())
    }

    /// Native parameter domain `[u_p, u_n]`.
    pub fn domain(&self) -> (f64, f64) {
        (
            self.knots[self.degree],
            self.knots[self.control_points.len()],
        )
    }

    pub(crate) fn native_param(&self, t: f64) -> f64 {
        let (lo, hi) = self.domain();
        lo + t * (hi - lo)
    }

    /// Distinct knot values inside the domain, as normalized parameters.
    pub(crate) fn breakpoints(&self) -> Vec<f64> {
        let (lo, hi) = self.domain();
        let mut out = vec![0.0];
        for &k in &self.knots {
            if k > lo && k < hi {
                let t = (k - lo) / (hi - lo);
                if out.last().is_some_and(|&last| t > last) {
                    out.push(t);
                }
            }
        }
        out.push(1.0);
        out
    }

    fn span(&self, u: f64) -> usize {
        find_span(self.control_points.len(), self.degree, u, &self.knots)
    }

    /// Point at native parameter `u` (clamped into the domain).
    pub(crate) fn point_at(&self, u: f64) -> Point3 {
        let p = self.degree;
        let span = self.span(u);
        let basis = basis_funs(span, u, p, &self.knots);
        let mut num = Point3::ORIGIN;
        let mut den = 0.0;
        for (j, b) in basis.iter().enumerate() {
            let i = span - p + j;
            let w = b * self.weights[i];
            num = num + self.control_points[i] * w;
            den += w;
        }
        num * (1.0 / den)
    }

    /// Point and first derivative with respect to native parameter `u`.
    pub(crate) fn point_and_tangent_at(&self, u: f64) -> (Point3, Point3) {
        let p = self.degree;
        let span = self.span(u);
        let basis = basis_funs(span, u, p, &self.knots);
        let lower = basis_funs(span, u, p - 1, &self.knots);
        let k = &self.knots;
        let pf = p as f64;

        let (mut a, mut da) = (Point3::ORIGIN, Point3::ORIGIN);
        let (mut w, mut dw) = (0.0, 0.0);
        for j in 0..=p {
            let i = span - p + j;
            let mut d = 0.0;
            if j > 0 {
                let den = k[i + p] - k[i];
                if den > 0.0 {
                    d += pf * lower[j - 1] / den;
                }
            }
            if j < p {
                let den = k[i + p + 1] - k[i + 1];
                if den > 0.0 {
                    d -= pf * lower[j] / den;
                }
            }
            let wi = self.weights[i];
            a = a + self.control_points[i] * (basis[j] * wi);
            da = da + self.control_points[i] * (d * wi);
            w += basis[j] * wi;
            dw += d * wi;
        }
        let point = a * (1.0 / w);
        let tangent = (da - point * dw) * (1.0 / w);
        (point, tangent)
    }

    pub(crate) fn map_points(&self, f: impl Fn(Point3) -> Point3) -> NurbsSpline {
        NurbsSpline {
            control_points: self.control_points.iter().map(|&p| f(p)).collect(),
            ..self.clone()
        }
    }
}

/// Knot span index `s` in `[p, n-1]` with `U[s] <= u < U[s+1]`; the right
/// end of the domain maps onto the last non-empty span.
fn find_span(n: usize, p: usize, u: f64, knots: &[f64]) -> usize {
    if u >= knots[n] {
        let mut s = n - 1;
        while s > p && knots[s] >= knots[s + 1] {
            s -= 1;
        }
        return s;
    }
    if u <= knots[p] {
        let mut s = p;
        while s < n - 1 && knots[s + 1] <= u {
            s += 1;
        }
        return s;
    }
    let (mut lo, mut hi) = (p, n);
    let mut mid = (lo + hi) / 2;
    while u < knots[mid] || u >= knots[mid + 1] {
        if u < knots[mid] {
            hi = mid;
        } else {
            lo = mid;
        }
        mid = (lo + hi) / 2;
    }
    mid
}

/// The `p + 1` non-vanishing basis functions `N_{span-p..=span, p}(u)`.
fn basis_funs(span: usize, u: f64, p: usize, knots: &[f64]) -> Vec<f64> {
    let mut n = vec![0.0; p + 1];
    let mut left = vec![0.0; p + 1];
    let mut right = vec![0.0; p + 1];
    n[0] = 1.0;
    for j in 1..=p {
        left[j] = u - knots[span + 1 - j];
        right[j] = knots[span + j] - u;
        let mut saved = 0.0;
        for r in 0..j {
            let den = right[r + 1] + left[j - r];
            let temp = if den != 0.0 { n[r] / den } else { 0.0 };
            n[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        n[j] = saved;
    }
    n
}

/// Cox-de Boor basis value `N_{i,degree}(u)` for a single index.
pub fn nurbs_basis(degree: usize, knots: &[f64], i: usize, u: f64) -> Result<f64, GeomError> {
    let m = knots.len();
    if m < degree + 2 || knots.windows(2).any(|w| w[1] < w[0]) {
        return Err(GeomError::Invalid {
            rule: "nurbs.knot_vector",
        });
    }
    if i + degree + 1 >= m {
        return Err(GeomError::Domain {
            what: "basis index",
            value: i as f64,
        });
    }
    let (first, last) = (knots[0], knots[m - 1]);
    if !(u >= first && u <= last) {
        return Err(GeomError::Domain {
            what: "knot parameter",
            value: u,
        });
    }
    let p = degree;
    // The right end of the knot vector closes the last non-empty span.
    if u == last {
        let mut last_span = m - 2;
        while last_span > 0 && knots[last_span] >= knots[last_span + 1] {
            last_span -= 1;
        }
        let mut n: Vec<f64> = (0..=p)
            .map(|j| if i + j == last_span { 1.0 } else { 0.0 })
            .collect();
        return Ok(raise_degree(&mut n, knots, i, u, p));
    }
    if u < knots[i] || u >= knots[i + p + 1] {
        return Ok(0.0);
    }
    let mut n: Vec<f64> = (0..=p)
        .map(|j| {
            if u >= knots[i + j] && u < knots[i + j + 1] {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    Ok(raise_degree(&mut n, knots, i, u, p))
}

/// Triangular Cox-de Boor recurrence from degree 0 up to `p`.
fn raise_degree(n: &mut [f64], knots: &[f64], i: usize, u: f64, p: usize) -> f64 {
    for k in 1..=p {
        let mut saved = if n[0] == 0.0 {
            0.0
        } else {
            (u - knots[i]) * n[0] / (knots[i + k] - knots[i])
        };
        for j in 0..=(p - k) {
            let u_left = knots[i + j + 1];
            let u_right = knots[i + j + k + 1];
            if n[j + 1] == 0.0 {
                n[j] = saved;
                saved = 0.0;
            } else {
                let temp = n[j + 1] / (u_right - u_left);
                n[j] = saved + (u_right - u) * temp;
                saved = (u - u_left) * temp;
            }
        }
    }
    n[0]
}
