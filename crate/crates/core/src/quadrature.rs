//! Fixed-rule quadrature used for cell averages.

/// 4-point Gauss–Legendre nodes on `[-1, 1]`.
const GL4_NODES: [f64; 4] = [
    -0.861_136_311_594_052_6,
    -0.339_981_043_584_856_26,
    0.339_981_043_584_856_26,
    0.861_136_311_594_052_6,
];
const GL4_WEIGHTS: [f64; 4] = [
    0.347_854_845_137_453_85,
    0.652_145_154_862_546_2,
    0.652_145_154_862_546_2,
    0.347_854_845_137_453_85,
];

/// Average of `f` over `[center - width/2, center + width/2]` by 4-point
/// Gauss–Legendre (exact for polynomials up to degree 7).
pub fn cell_average(center: f64, width: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    let half = 0.5 * width;
    GL4_NODES
        .iter()
        .zip(GL4_WEIGHTS.iter())
        .map(|(&node, &w)| w * f(center + half * node))
        .sum::<f64>()
        * 0.5
}

/// Gauss–Legendre nodes relative to the cell center, scaled to `width`.
pub(crate) fn cell_nodes(width: f64) -> impl Iterator<Item = (f64, f64)> {
    let half = 0.5 * width;
    GL4_NODES
        .into_iter()
        .zip(GL4_WEIGHTS)
        .map(move |(node, w)| (half * node, 0.5 * w))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_degree_seven() {
        // mean of x^7 + x^6 over [0, 2] = (2^8/8 + 2^7/7) / 2
        let avg = cell_average(1.0, 2.0, |x| x.powi(7) + x.powi(6));
        let exact = (256.0 / 8.0 + 128.0 / 7.0) / 2.0;
        assert!((avg - exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn weights_sum_to_one() {
        let s: f64 = cell_nodes(3.0).map(|(_, w)| w).sum();
        assert!((s - 1.0).abs() < 1e-15);
    }
}
