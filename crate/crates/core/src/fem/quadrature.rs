//! Symmetric Gauss quadrature on the reference triangle
//! with vertices (0,0), (1,0), (0,1).
//!
//! Rules are stored in barycentric form and exposed as reference coordinates
//! `(x, y) = (λ₁, λ₂)`. All rules have positive weights, which keeps
//! assembled weighted stiffness matrices positive semidefinite; degrees 3 and
//! 7 are served by the next rule up because the classical rules of those
//! degrees carry a negative centroid weight.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Quadrature points and weights on the reference triangle.
///
/// Weights include the reference measure: they sum to 1/2.
#[derive(Debug, Clone)]
pub struct QuadratureRule<T> {
    pub points: Vec<[T; 2]>,
    pub weights: Vec<T>,
    /// Highest total polynomial degree integrated exactly.
    pub exactness: usize,
}

impl<T: Real> QuadratureRule<T> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Rule groups in barycentric coordinates (weights on the measure-1 triangle).
enum Orbit {
    /// Centroid (1/3, 1/3, 1/3), multiplicity 1.
    Centroid(f64),
    /// (a, b, b) and its 3 permutations.
    Three(f64, f64, f64),
    /// All 6 permutations of (a, b, c).
    Six(f64, f64, f64, f64),
}

fn push_orbit<T: Real>(points: &mut Vec<[T; 2]>, weights: &mut Vec<T>, orbit: &Orbit) {
    // Reference coordinates are (λ1, λ2); weights are scaled by the
    // reference area 1/2.
    let mut push = |l: [f64; 3], w: f64| {
        points.push([T::of(l[1]), T::of(l[2])]);
        weights.push(T::of(0.5 * w));
    };
    match *orbit {
        Orbit::Centroid(w) => {
            let third = 1.0 / 3.0;
            push([third, third, third], w);
        }
        Orbit::Three(w, a, b) => {
            push([a, b, b], w);
            push([b, a, b], w);
            push([b, b, a], w);
        }
        Orbit::Six(w, a, b, c) => {
            for l in [
                [a, b, c],
                [a, c, b],
                [b, a, c],
                [b, c, a],
                [c, a, b],
                [c, b, a],
            ] {
                push(l, w);
            }
        }
    }
}

/// Construct the smallest stored symmetric rule exact to `exactness_degree`.
///
/// Supported degrees are 1 through 8.
pub fn quadrature_rule<T: Real>(exactness_degree: usize) -> Result<QuadratureRule<T>> {
    let (orbits, exactness): (&[Orbit], usize) = match exactness_degree {
        1 => (&[Orbit::Centroid(1.0)], 1),
        2 => (&[Orbit::Three(1.0 / 3.0, 2.0 / 3.0, 1.0 / 6.0)], 2),
        3 | 4 => (
            &[
                Orbit::Three(0.223381589678011, 0.108103018168070, 0.445948490915965),
                Orbit::Three(0.109951743655322, 0.816847572980459, 0.091576213509771),
            ],
            4,
        ),
        5 => (
            &[
                Orbit::Centroid(0.225),
                Orbit::Three(0.132394152788506, 0.059715871789770, 0.470142064105115),
                Orbit::Three(0.125939180544827, 0.797426985353087, 0.101286507323456),
            ],
            5,
        ),
        6 => (
            &[
                Orbit::Three(0.116786275726379, 0.501426509658179, 0.249286745170910),
                Orbit::Three(0.050844906370207, 0.873821971016996, 0.063089014491502),
                Orbit::Six(
                    0.082851075618374,
                    0.053145049844816,
                    0.310352451033785,
                    0.636502499121399,
                ),
            ],
            6,
        ),
        7 | 8 => (
            &[
                Orbit::Centroid(0.144315607677787),
                Orbit::Three(0.095091634413463, 0.081414823414554, 0.459292588292723),
                Orbit::Three(0.103217370534718, 0.658861384496480, 0.170569307751760),
                Orbit::Three(0.032458497623198, 0.898905543365938, 0.050547228317031),
                Orbit::Six(
                    0.027230314174435,
                    0.008394777409958,
                    0.263112829634638,
                    0.728492392955404,
                ),
            ],
            8,
        ),
        d => {
            return Err(Error::invalid(format!(
                "quadrature exactness degree {d} unsupported (supported: 1..=8)"
            )))
        }
    };
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for orbit in orbits {
        push_orbit(&mut points, &mut weights, orbit);
    }
    Ok(QuadratureRule {
        points,
        weights,
        exactness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// ∫∫ x^p y^q over the reference triangle = p! q! / (p+q+2)!.
    fn monomial_integral(p: u32, q: u32) -> f64 {
        fn fact(k: u32) -> f64 {
            (1..=k).map(|i| i as f64).product()
        }
        fact(p) * fact(q) / fact(p + q + 2)
    }

    #[test]
    fn weights_sum_to_half() {
        for deg in 1..=8 {
            let rule = quadrature_rule::<f64>(deg).unwrap();
            let sum: f64 = rule.weights.iter().sum();
            assert!((sum - 0.5).abs() < 1e-14, "degree {deg}: sum {sum}");
        }
    }

    #[test]
    fn unsupported_degrees_rejected() {
        assert!(quadrature_rule::<f64>(0).is_err());
        assert!(quadrature_rule::<f64>(9).is_err());
    }

    #[test]
    fn degree_2_integrates_x() {
        let rule = quadrature_rule::<f64>(2).unwrap();
        let got: f64 = rule
            .points
            .iter()
            .zip(&rule.weights)
            .map(|(p, w)| w * p[0])
            .sum();
        assert!((got - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn degree_4_integrates_x2y2() {
        let rule = quadrature_rule::<f64>(4).unwrap();
        let got: f64 = rule
            .points
            .iter()
            .zip(&rule.weights)
            .map(|(p, w)| w * p[0] * p[0] * p[1] * p[1])
            .sum();
        assert!((got - 1.0 / 180.0).abs() < 1e-15, "got {got}");
    }

    #[test]
    fn rules_exact_for_stated_degree() {
        for deg in 1..=8usize {
            let rule = quadrature_rule::<f64>(deg).unwrap();
            for total in 0..=rule.exactness {
                for p in 0..=total {
                    let q = total - p;
                    let got: f64 = rule
                        .points
                        .iter()
                        .zip(&rule.weights)
                        .map(|(pt, w)| w * pt[0].powi(p as i32) * pt[1].powi(q as i32))
                        .sum();
                    let want = monomial_integral(p as u32, q as u32);
                    assert!(
                        (got - want).abs() <= 1e-12 * want.abs().max(1.0),
                        "degree {deg}, monomial x^{p} y^{q}: got {got}, want {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn all_weights_positive_and_points_inside() {
        for deg in 1..=8 {
            let rule = quadrature_rule::<f64>(deg).unwrap();
            for (p, w) in rule.points.iter().zip(&rule.weights) {
                assert!(*w > 0.0);
                assert!(p[0] >= 0.0 && p[1] >= 0.0 && p[0] + p[1] <= 1.0 + 1e-15);
            }
        }
    }
}
