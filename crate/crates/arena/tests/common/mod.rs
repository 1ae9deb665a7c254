#![allow(dead_code)]

/// Straight transcription of the rating-period steps, solving for the new
/// volatility by plain bisection rather than the library's regula falsi.
pub fn glicko_oracle(
    r: f64,
    rd: f64,
    sigma: f64,
    tau: f64,
    games: &[(f64, f64, f64)],
) -> (f64, f64, f64) {
    let q = 173.7178;
    let mu = (r - 1500.0) / q;
    let phi = rd / q;
    let g = |p: f64| 1.0 / (1.0 + 3.0 * p * p / std::f64::consts::PI.powi(2)).sqrt();
    let mut v_inv = 0.0;
    let mut sum = 0.0;
    for &(rj, rdj, s) in games {
        let (mj, pj) = ((rj - 1500.0) / q, rdj / q);
        let e = 1.0 / (1.0 + (-g(pj) * (mu - mj)).exp());
        v_inv += g(pj).powi(2) * e * (1.0 - e);
        sum += g(pj) * (s - e);
    }
    let v = 1.0 / v_inv;
    let delta = v * sum;
    let a = (sigma * sigma).ln();
    let f = |x: f64| {
        let ex = x.exp();
        ex * (delta * delta - phi * phi - v - ex) / (2.0 * (phi * phi + v + ex).powi(2))
            - (x - a) / (tau * tau)
    };
    // f is decreasing; bracket the root generously.
    let (mut lo, mut hi) = (a - 20.0, a + 20.0);
    assert!(f(lo) > 0.0 && f(hi) < 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let sigma2 = (0.5 * (lo + hi) / 2.0).exp();
    let phi_star = (phi * phi + sigma2 * sigma2).sqrt();
    let phi2 = 1.0 / (1.0 / phi_star.powi(2) + 1.0 / v).sqrt();
    let mu2 = mu + phi2 * phi2 * sum;
    (q * mu2 + 1500.0, q * phi2, sigma2)
}
