//! Cardinal cubic-spline bases on uniform knots.
//!
//! Two flavors back the curvature parameterization: a natural spline basis on
//! [0, 1] (zero second derivative at both ends) for the shape modes, and a
//! periodic basis on [0, 1) for the gait, C2 across the period seam. Both are
//! cardinal: basis function `j` interpolates 1 at knot `j` and 0 at the
//! others, so control points are simply knot values.

use crate::{Error, Result};
use nalgebra::DMatrix;

/// Piecewise-cubic interpolant stored as knot values plus knot second
/// derivatives (the classic moment form).
#[derive(Clone, Debug)]
struct Card {
    values: Vec<f64>,
    moments: Vec<f64>,
}

impl Card {
    // Evaluate on segment [x_i, x_i + h] at local offset u in [0, h].
    fn eval_segment(&self, i: usize, j: usize, u: f64, h: f64) -> f64 {
        let a = (h - u) / h;
        let b = u / h;
        a * self.values[i]
            + b * self.values[j]
            + ((a * a * a - a) * self.moments[i] + (b * b * b - b) * self.moments[j]) * h * h / 6.0
    }

    fn deriv_segment(&self, i: usize, j: usize, u: f64, h: f64) -> f64 {
        let a = (h - u) / h;
        let b = u / h;
        (self.values[j] - self.values[i]) / h
            + ((1.0 - 3.0 * a * a) * self.moments[i] + (3.0 * b * b - 1.0) * self.moments[j]) * h
                / 6.0
    }

    fn second_deriv_segment(&self, i: usize, j: usize, u: f64, h: f64) -> f64 {
        let a = (h - u) / h;
        let b = u / h;
        a * self.moments[i] + b * self.moments[j]
    }
}

/// Cardinal natural cubic-spline basis on `n` uniform knots over [0, 1].
#[derive(Clone, Debug)]
pub struct NaturalSplineBasis {
    cards: Vec<Card>,
    h: f64,
    n: usize,
}

impl NaturalSplineBasis {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "natural spline basis needs at least 2 knots, got {n}"
            )));
        }
        let h = 1.0 / (n - 1) as f64;
        let interior = n - 2;
        // Tridiagonal system for interior moments; natural ends are zero.
        let mut system = DMatrix::<f64>::zeros(interior, interior);
        for i in 0..interior {
            system[(i, i)] = 4.0;
            if i > 0 {
                system[(i, i - 1)] = 1.0;
            }
            if i + 1 < interior {
                system[(i, i + 1)] = 1.0;
            }
        }
        let lu = system.lu();
        let mut cards = Vec::with_capacity(n);
        for k in 0..n {
            let values: Vec<f64> = (0..n).map(|j| if j == k { 1.0 } else { 0.0 }).collect();
            let mut moments = vec![0.0; n];
            if interior > 0 {
                let mut rhs = DMatrix::<f64>::zeros(interior, 1);
                for i in 0..interior {
                    let j = i + 1;
                    rhs[(i, 0)] =
                        6.0 * (values[j - 1] - 2.0 * values[j] + values[j + 1]) / (h * h);
                }
                let sol = lu.solve(&rhs).expect("tridiagonal system is nonsingular");
                for i in 0..interior {
                    moments[i + 1] = sol[(i, 0)];
                }
            }
            cards.push(Card { values, moments });
        }
        Ok(Self { cards, h, n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn knot(&self, j: usize) -> f64 {
        j as f64 * self.h
    }

    fn locate(&self, s: f64) -> (usize, usize, f64) {
        let s = s.clamp(0.0, 1.0);
        let mut i = ((s / self.h).floor() as usize).min(self.n - 2);
        if s < i as f64 * self.h {
            i = i.saturating_sub(1);
        }
        (i, i + 1, s - i as f64 * self.h)
    }

    pub fn eval(&self, j: usize, s: f64) -> f64 {
        let (i, k, u) = self.locate(s);
        self.cards[j].eval_segment(i, k, u, self.h)
    }

    pub fn deriv(&self, j: usize, s: f64) -> f64 {
        let (i, k, u) = self.locate(s);
        self.cards[j].deriv_segment(i, k, u, self.h)
    }

    pub fn second_deriv(&self, j: usize, s: f64) -> f64 {
        let (i, k, u) = self.locate(s);
        self.cards[j].second_deriv_segment(i, k, u, self.h)
    }
}

/// Cardinal periodic cubic-spline basis on `n` uniform knots over [0, 1),
/// period 1. Value and first two derivatives are continuous across the seam.
#[derive(Clone, Debug)]
pub struct PeriodicSplineBasis {
    cards: Vec<Card>,
    h: f64,
    n: usize,
}

impl PeriodicSplineBasis {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!(
                "periodic spline basis needs at least 3 knots, got {n}"
            )));
        }
        let h = 1.0 / n as f64;
        // Cyclic tridiagonal system for the moments.
        let mut system = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            system[(i, i)] = 4.0;
            system[(i, (i + 1) % n)] += 1.0;
            system[(i, (i + n - 1) % n)] += 1.0;
        }
        let lu = system.lu();
        let mut cards = Vec::with_capacity(n);
        for k in 0..n {
            let values: Vec<f64> = (0..n).map(|j| if j == k { 1.0 } else { 0.0 }).collect();
            let mut rhs = DMatrix::<f64>::zeros(n, 1);
            for j in 0..n {
                let prev = values[(j + n - 1) % n];
                let next = values[(j + 1) % n];
                rhs[(j, 0)] = 6.0 * (prev - 2.0 * values[j] + next) / (h * h);
            }
            let sol = lu.solve(&rhs).expect("cyclic system is nonsingular");
            let moments: Vec<f64> = (0..n).map(|j| sol[(j, 0)]).collect();
            cards.push(Card { values, moments });
        }
        Ok(Self { cards, h, n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn knot(&self, j: usize) -> f64 {
        j as f64 * self.h
    }

    fn locate(&self, t: f64) -> (usize, usize, f64) {
        let t = t.rem_euclid(1.0);
        let i = ((t / self.h).floor() as usize).min(self.n - 1);
        (i, (i + 1) % self.n, t - i as f64 * self.h)
    }

    pub fn eval(&self, j: usize, t: f64) -> f64 {
        let (i, k, u) = self.locate(t);
        self.cards[j].eval_segment(i, k, u, self.h)
    }

    pub fn deriv(&self, j: usize, t: f64) -> f64 {
        let (i, k, u) = self.locate(t);
        self.cards[j].deriv_segment(i, k, u, self.h)
    }

    pub fn second_deriv(&self, j: usize, t: f64) -> f64 {
        let (i, k, u) = self.locate(t);
        self.cards[j].second_deriv_segment(i, k, u, self.h)
    }
}
