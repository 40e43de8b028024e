//! Gauss–Hermite rule for `∫ e^{-x²} f(x) dx` over the real line.

use std::f64::consts::PI;

use crate::error::{domain, Result};

/// Nodes and weights of an `n`-point Gauss–Hermite rule, exact for
/// polynomials of degree `≤ 2n − 1` against the weight `e^{-x²}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    /// Newton iteration on the orthonormal Hermite recurrence, seeded with
    /// the usual asymptotic guesses and refined until the step is below
    /// machine precision. Nodes come out in ascending order.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(domain("Gauss-Hermite rule needs at least one node"));
        }
        if n > 200 {
            return Err(domain(format!("Gauss-Hermite order {n} not supported (max 200)")));
        }
        let pim4 = PI.powf(-0.25);
        let nf = n as f64;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let half = n.div_ceil(2);
        let mut z = 0.0;
        for i in 0..half {
            z = match i {
                0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
                1 => z - 1.14 * nf.powf(0.426) / z,
                2 => 1.86 * z - 0.86 * nodes[n - 1],
                3 => 1.91 * z - 0.91 * nodes[n - 2],
                _ => 2.0 * z - nodes[n + 1 - i],
            };
            let mut pp = 0.0;
            for _ in 0..100 {
                let (p, dp) = orthonormal_hermite(n, z, pim4);
                pp = dp;
                let step = p / dp;
                z -= step;
                if step.abs() <= 1e-15 * z.abs().max(1.0) {
                    break;
                }
            }
            // final derivative at the converged node
            let (_, dp) = orthonormal_hermite(n, z, pim4);
            if dp.is_finite() {
                pp = dp;
            }
            nodes[n - 1 - i] = z;
            nodes[i] = -z;
            let w = 2.0 / (pp * pp);
            weights[n - 1 - i] = w;
            weights[i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Value of the degree-`n` orthonormal Hermite function polynomial and the
/// derivative scaled as in the Newton update.
fn orthonormal_hermite(n: usize, z: f64, pim4: f64) -> (f64, f64) {
    let mut p1 = pim4;
    let mut p2 = 0.0;
    for j in 1..=n {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
    }
    (p1, (2.0 * n as f64).sqrt() * p2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, SymmetricEigen};

    // Golub–Welsch: nodes are eigenvalues of the Jacobi matrix with
    // off-diagonal √(k/2), weights √π·(first eigenvector component)²
    fn golub_welsch(n: usize) -> (Vec<f64>, Vec<f64>) {
        let jac = DMatrix::from_fn(n, n, |i, j| if i.abs_diff(j) == 1 { (i.max(j) as f64 / 2.0).sqrt() } else { 0.0 });
        let eig = SymmetricEigen::new(jac);
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| (eig.eigenvalues[i], PI.sqrt() * eig.eigenvectors[(0, i)].powi(2)))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        pairs.into_iter().unzip()
    }

    #[test]
    fn agrees_with_golub_welsch() {
        for n in [2, 5, 9, 16, 33] {
            let rule = GaussHermite::new(n).unwrap();
            let (nodes, weights) = golub_welsch(n);
            for i in 0..n {
                assert!((rule.nodes()[i] - nodes[i]).abs() < 1e-12, "n={n} node {i}");
                assert!((rule.weights()[i] - weights[i]).abs() < 1e-12 * weights[i].max(1e-300) + 1e-15, "n={n} weight {i}");
            }
        }
    }

    // ∫ x^{2j} e^{-x²} dx = Γ(j + 1/2) = (2j − 1)!! √π / 2^j
    fn even_moment(j: u32) -> f64 {
        let mut v = PI.sqrt();
        for i in 0..j {
            v *= (2 * i + 1) as f64 / 2.0;
        }
        v
    }

    // physicists' Hermite H_k normalized against e^{-x²}
    fn normalized_hermite(k: usize, x: f64) -> f64 {
        let (mut h0, mut h1) = (1.0, 2.0 * x);
        if k == 0 {
            return h0 / PI.sqrt().sqrt();
        }
        for j in 1..k {
            let h2 = 2.0 * x * h1 - 2.0 * j as f64 * h0;
            h0 = h1;
            h1 = h2;
        }
        let mut norm = PI.sqrt() * 2f64.powi(k as i32);
        for j in 1..=k {
            norm *= j as f64;
        }
        h1 / norm.sqrt()
    }

    #[test]
    fn small_rules() {
        let r1 = GaussHermite::new(1).unwrap();
        assert_eq!(r1.nodes(), &[0.0]);
        assert!((r1.weights()[0] - PI.sqrt()).abs() < 1e-15);
        let r2 = GaussHermite::new(2).unwrap();
        assert!((r2.nodes()[1] - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((r2.weights()[0] - PI.sqrt() / 2.0).abs() < 1e-15);
        assert!(GaussHermite::new(0).is_err());
    }

    #[test]
    fn moments_exact_up_to_degree() {
        for n in [3usize, 8, 16, 24, 34] {
            let rule = GaussHermite::new(n).unwrap();
            for j in 0..n as u32 {
                let got = rule.integrate(|x| x.powi(2 * j as i32));
                let want = even_moment(j);
                assert!(
                    ((got - want) / want).abs() < 1e-12,
                    "n={n} j={j}: {got} vs {want}"
                );
                let odd = rule.integrate(|x| x.powi(2 * j as i32 + 1));
                assert!(odd.abs() < 1e-12 * want.max(1.0));
            }
        }
    }

    #[test]
    fn orthonormality_sums() {
        let n = 16;
        let rule = GaussHermite::new(n).unwrap();
        for a in 0..n {
            for b in 0..n {
                let s = rule.integrate(|x| normalized_hermite(a, x) * normalized_hermite(b, x));
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((s - want).abs() < 1e-13, "({a},{b}) -> {s}");
            }
        }
    }

    #[test]
    fn nodes_sorted_and_symmetric() {
        let rule = GaussHermite::new(15).unwrap();
        assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
        for i in 0..15 {
            assert_eq!(rule.nodes()[i], -rule.nodes()[14 - i]);
            assert_eq!(rule.weights()[i], rule.weights()[14 - i]);
        }
    }
}
