//! Projection of a sorted layout onto the spacing and bounds constraints.
//!
//! Writing `y_k = x_k − kΔ` turns "consecutive gaps ≥ Δ" into "y
//! non-decreasing", and the bounds into `0 ≤ y ≤ D_w − (M−1)Δ`. The nearest
//! feasible layout in the L2 sense is the isotonic regression of `y`
//! (pool-adjacent-violators) clipped to that box: violating neighbours are
//! pushed apart symmetrically about their mean.

/// Repairs `xs` (sorted ascending) in place. Returns one flag per
/// component telling whether it moved. Components that were already
/// feasible are left bit-for-bit untouched.
pub fn repair_spacing(xs: &mut [f64], min_spacing: f64, length: f64) -> Vec<bool> {
    let m = xs.len();
    let mut moved = vec![false; m];
    if m == 0 {
        return moved;
    }
    debug_assert!(xs.windows(2).all(|w| w[0] <= w[1]), "layout must be sorted");
    let upper = (length - (m - 1) as f64 * min_spacing).max(0.0);
    let y: Vec<f64> = xs
        .iter()
        .enumerate()
        .map(|(k, &x)| x - k as f64 * min_spacing)
        .collect();

    let already_ok =
        xs.windows(2).all(|w| w[1] - w[0] >= min_spacing) && xs[0] >= 0.0 && xs[m - 1] <= length;
    if already_ok {
        return moved;
    }

    // Pool adjacent violators: blocks of (sum, count).
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(m);
    for &v in &y {
        blocks.push((v, 1));
        while blocks.len() >= 2 {
            let (s1, n1) = blocks[blocks.len() - 1];
            let (s0, n0) = blocks[blocks.len() - 2];
            if s0 / n0 as f64 > s1 / n1 as f64 {
                blocks.pop();
                let last = blocks.len() - 1;
                blocks[last] = (s0 + s1, n0 + n1);
            } else {
                break;
            }
        }
    }

    let mut k = 0;
    for (sum, n) in blocks {
        let mean = (sum / n as f64).clamp(0.0, upper);
        for _ in 0..n {
            let target = if n == 1 && mean == y[k] {
                xs[k]
            } else {
                (mean + k as f64 * min_spacing).clamp(0.0, length)
            };
            if target != xs[k] {
                xs[k] = target;
                moved[k] = true;
            }
            k += 1;
        }
    }
    moved
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaps_ok(xs: &[f64], d: f64) -> bool {
        xs.windows(2).all(|w| w[1] - w[0] >= d - 1e-12)
    }

    #[test]
    fn feasible_layout_untouched() {
        let mut xs = vec![0.1, 1.0, 2.5];
        let moved = repair_spacing(&mut xs, 0.5, 3.0);
        assert_eq!(xs, vec![0.1, 1.0, 2.5]);
        assert!(moved.iter().all(|m| !m));
    }

    #[test]
    fn close_pair_pushed_apart_about_center() {
        let mut xs = vec![1.0, 1.2, 5.0];
        let moved = repair_spacing(&mut xs, 1.0, 10.0);
        assert!((xs[0] - 0.6).abs() < 1e-12 && (xs[1] - 1.6).abs() < 1e-12);
        assert_eq!(xs[2], 5.0);
        assert_eq!(moved, vec![true, true, false]);
    }

    #[test]
    fn pileup_at_boundary() {
        let mut xs = vec![9.9, 10.0, 10.0];
        repair_spacing(&mut xs, 1.0, 10.0);
        assert!(gaps_ok(&xs, 1.0));
        assert!(xs.iter().all(|&x| (0.0..=10.0).contains(&x)));
        assert!((xs[2] - 10.0).abs() < 1e-12);
    }

    #[test]
    fn tight_fit_spans_whole_waveguide() {
        let mut xs = vec![5.0, 5.0, 5.0];
        repair_spacing(&mut xs, 5.0, 10.0);
        assert!(
            (xs[0] - 0.0).abs() < 1e-12
                && (xs[1] - 5.0).abs() < 1e-12
                && (xs[2] - 10.0).abs() < 1e-12
        );
    }
}
