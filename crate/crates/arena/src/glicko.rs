//! Glicko-2 ratings (Glickman's recipe).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const SCALE: f64 = 173.7178;
const EPSILON: f64 = 1e-6;
const MAX_ITERATIONS: usize = 100;

pub const DEFAULT_TAU: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rating {
    pub r: f64,
    pub rd: f64,
    pub sigma: f64,
}

impl Default for Rating {
    fn default() -> Self {
        Rating {
            r: 1500.0,
            rd: 350.0,
            sigma: 0.06,
        }
    }
}

/// One game against an opponent rated at the start of the period.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GameResult {
    pub opponent: Rating,
    /// 1 win, 0.5 draw, 0 loss.
    pub score: f64,
}

impl GameResult {
    pub fn new(opponent_r: f64, opponent_rd: f64, score: f64) -> Self {
        GameResult {
            opponent: Rating {
                r: opponent_r,
                rd: opponent_rd,
                sigma: 0.06,
            },
            score,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GlickoError {
    #[error("tau must be positive, got {0}")]
    Tau(f64),
    #[error("scores must lie in [0, 1], got {0}")]
    Score(f64),
    #[error("invalid rating: {0:?}")]
    Rating(Rating),
    #[error("volatility iteration did not converge in {MAX_ITERATIONS} steps")]
    NoConvergence,
}

fn g(phi: f64) -> f64 {
    1.0 / (1.0 + 3.0 * phi * phi / (PI * PI)).sqrt()
}

fn expected(mu: f64, mu_j: f64, phi_j: f64) -> f64 {
    1.0 / (1.0 + (-g(phi_j) * (mu - mu_j)).exp())
}

/// Rates one period. With no games only the deviation grows.
pub fn glicko2_update(
    rating: Rating,
    results: &[GameResult],
    tau: f64,
) -> Result<Rating, GlickoError> {
    if !(tau > 0.0) {
        return Err(GlickoError::Tau(tau));
    }
    let valid = |x: &Rating| x.r.is_finite() && x.rd > 0.0 && x.sigma > 0.0;
    if !valid(&rating) {
        return Err(GlickoError::Rating(rating));
    }
    for res in results {
        if !(0.0..=1.0).contains(&res.score) {
            return Err(GlickoError::Score(res.score));
        }
        if !valid(&res.opponent) {
            return Err(GlickoError::Rating(res.opponent));
        }
    }

    let mu = (rating.r - 1500.0) / SCALE;
    let phi = rating.rd / SCALE;
    let sigma = rating.sigma;

    if results.is_empty() {
        let phi_star = (phi * phi + sigma * sigma).sqrt();
        return Ok(Rating {
            rd: phi_star * SCALE,
            ..rating
        });
    }

    let mut v_inv = 0.0;
    let mut delta_sum = 0.0;
    for res in results {
        let mu_j = (res.opponent.r - 1500.0) / SCALE;
        let phi_j = res.opponent.rd / SCALE;
        let e = expected(mu, mu_j, phi_j);
        let gj = g(phi_j);
        v_inv += gj * gj * e * (1.0 - e);
        delta_sum += gj * (res.score - e);
    }
    let v = 1.0 / v_inv;
    let delta = v * delta_sum;

    let sigma = new_volatility(phi, sigma, v, delta, tau)?;
    let phi_star = (phi * phi + sigma * sigma).sqrt();
    let phi_new = 1.0 / (1.0 / (phi_star * phi_star) + 1.0 / v).sqrt();
    let mu_new = mu + phi_new * phi_new * delta_sum;
    Ok(Rating {
        r: mu_new * SCALE + 1500.0,
        rd: phi_new * SCALE,
        sigma,
    })
}

// Illinois regula falsi on f(x) with x = ln(sigma^2).
fn new_volatility(phi: f64, sigma: f64, v: f64, delta: f64, tau: f64) -> Result<f64, GlickoError> {
    let a = (sigma * sigma).ln();
    let d2 = delta * delta;
    let p2 = phi * phi;
    let f = |x: f64| {
        let ex = x.exp();
        ex * (d2 - p2 - v - ex) / (2.0 * (p2 + v + ex).powi(2)) - (x - a) / (tau * tau)
    };

    let mut big_a = a;
    let mut big_b = if d2 > p2 + v {
        (d2 - p2 - v).ln()
    } else {
        let mut k = 1.0;
        let mut steps = 0;
        while f(a - k * tau) < 0.0 {
            k += 1.0;
            steps += 1;
            if steps > MAX_ITERATIONS {
                return Err(GlickoError::NoConvergence);
            }
        }
        a - k * tau
    };
    let mut fa = f(big_a);
    let mut fb = f(big_b);
    let mut steps = 0;
    while (big_b - big_a).abs() > EPSILON {
        steps += 1;
        if steps > MAX_ITERATIONS {
            return Err(GlickoError::NoConvergence);
        }
        let c = big_a + (big_a - big_b) * fa / (fb - fa);
        let fc = f(c);
        if fc * fb <= 0.0 {
            big_a = big_b;
            fa = fb;
        } else {
            fa /= 2.0;
        }
        big_b = c;
        fb = fc;
    }
    Ok((big_a / 2.0).exp())
}
