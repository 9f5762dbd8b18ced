//! Sequence acceleration for limit nets with geometrically shrinking steps.
//!
//! Each net produces a sequence `v_k = g(t0 · 2^-k)`. Richardson
//! extrapolation assumes an expansion in integer powers of the step and is
//! used for difference quotients; Wynn's epsilon algorithm handles sums of
//! geometric error terms (`√t`, `t ln t`, `1/t` tails) and is used for
//! general limits.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Acceleration {
    None,
    Richardson,
    Epsilon,
}

const MAX_RICHARDSON_ORDER: usize = 6;
const EPSILON_WINDOW: usize = 12;
/// A stalled sequence: this many steps past the best one with an error
/// estimate grown by `STALL_FACTOR`.
const STALL_STEPS: usize = 4;
const STALL_FACTOR: f64 = 1e3;

/// Wynn's epsilon algorithm: the deepest even-column entry on the last
/// diagonal of the epsilon table built from `seq`.
pub fn wynn_epsilon(seq: &[f64]) -> f64 {
    let n = seq.len();
    assert!(n > 0, "empty sequence");
    let mut best = seq[n - 1];
    let mut prev = vec![0.0; n + 1];
    let mut cur = seq.to_vec();
    let mut col = 0usize;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            let even = col.is_multiple_of(2);
            let tiny = even && d.abs() <= 4.0 * f64::EPSILON * cur[i].abs().max(cur[i + 1].abs());
            if d == 0.0 || tiny || !d.is_finite() {
                return best;
            }
            next.push(prev[i + 1] + 1.0 / d);
        }
        prev = cur;
        cur = next;
        col += 1;
        if col.is_multiple_of(2) {
            match cur.last() {
                Some(v) if v.is_finite() => best = *v,
                _ => return best,
            }
        }
    }
    best
}

/// Incremental limit estimate of one sequence with error tracking.
#[derive(Debug, Clone)]
pub struct SequenceLimit {
    mode: Acceleration,
    raw: Vec<f64>,
    row: Vec<f64>,
    estimates: Vec<f64>,
    errors: Vec<f64>,
    best: Option<usize>,
}

impl SequenceLimit {
    pub fn new(mode: Acceleration) -> Self {
        SequenceLimit {
            mode,
            raw: Vec::new(),
            row: Vec::new(),
            estimates: Vec::new(),
            errors: Vec::new(),
            best: None,
        }
    }

    /// Feed the next term and its absolute rounding noise. Returns the
    /// current accelerated estimate.
    pub fn push(&mut self, value: f64, noise: f64) -> f64 {
        self.raw.push(value);
        let k = self.raw.len() - 1;
        let (estimate, err) = match self.mode {
            Acceleration::None => {
                let err = if k == 0 { f64::INFINITY } else { (value - self.raw[k - 1]).abs() };
                (value, err)
            }
            Acceleration::Richardson => {
                let mut row = Vec::with_capacity(MAX_RICHARDSON_ORDER + 1);
                row.push(value);
                for j in 1..=k.min(MAX_RICHARDSON_ORDER) {
                    let factor = f64::powi(2.0, j as i32) - 1.0;
                    let next = row[j - 1] + (row[j - 1] - self.row[j - 1]) / factor;
                    row.push(next);
                }
                let err = if k == 0 {
                    f64::INFINITY
                } else {
                    let last = row.len() - 1;
                    let up = (row[last] - row[last - 1]).abs();
                    let prev = (row[last] - self.row[self.row.len() - 1]).abs();
                    up.max(prev)
                };
                let estimate = *row.last().expect("row nonempty");
                self.row = row;
                // Richardson weights amplify rounding noise by a bounded factor.
                (estimate, err.max(4.0 * noise))
            }
            Acceleration::Epsilon => {
                let start = self.raw.len().saturating_sub(EPSILON_WINDOW);
                let estimate = wynn_epsilon(&self.raw[start..]);
                let n = self.estimates.len();
                let err = if n < 2 {
                    f64::INFINITY
                } else {
                    (estimate - self.estimates[n - 1])
                        .abs()
                        .max((estimate - self.estimates[n - 2]).abs())
                };
                (estimate, err.max(noise))
            }
        };
        let err = err.max(4.0 * f64::EPSILON * estimate.abs());
        self.estimates.push(estimate);
        self.errors.push(err);
        match self.best {
            Some(b) if self.errors[b] <= err => {}
            _ => self.best = Some(k),
        }
        estimate
    }

    pub fn len(&self) -> usize {
        self.raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }

    pub fn estimates(&self) -> &[f64] {
        &self.estimates
    }

    pub fn raw(&self) -> &[f64] {
        &self.raw
    }

    /// Index, estimate and error estimate of the most trustworthy step.
    pub fn best(&self) -> Option<(usize, f64, f64)> {
        self.best.map(|b| (b, self.estimates[b], self.errors[b]))
    }

    /// The error estimate has grown well past its minimum: further steps are
    /// dominated by rounding.
    pub fn stalled(&self) -> bool {
        if self.mode == Acceleration::None {
            return false;
        }
        match self.best {
            Some(b) => {
                let k = self.raw.len() - 1;
                k >= b + STALL_STEPS && self.errors[k] > STALL_FACTOR * self.errors[b].max(f64::MIN_POSITIVE)
            }
            None => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(mode: Acceleration, steps: usize, f: impl Fn(f64) -> f64) -> (f64, f64) {
        let mut s = SequenceLimit::new(mode);
        for k in 0..steps {
            s.push(f(0.125 * 0.5f64.powi(k as i32)), 0.0);
            if s.stalled() {
                break;
            }
        }
        let (_, v, e) = s.best().unwrap();
        (v, e)
    }

    #[test]
    fn epsilon_sums_geometric_terms() {
        // 0.7 + 2^-k + 3 * 2^{-k/2}
        let seq: Vec<f64> = (0..12)
            .map(|k| 0.7 + 0.5f64.powi(k) + 3.0 * 0.5f64.powf(k as f64 / 2.0))
            .collect();
        assert!((wynn_epsilon(&seq) - 0.7).abs() < 1e-10);
    }

    #[test]
    fn epsilon_handles_t_log_t() {
        let (v, e) = run(Acceleration::Epsilon, 40, |t| 2.0 * t * (2.0 * t).ln());
        assert!(v.abs() < 1e-10, "{v}");
        assert!(e < 1e-8);
    }

    #[test]
    fn richardson_on_difference_quotient() {
        let f = |x: f64| x.sin();
        let (v, e) = run(Acceleration::Richardson, 30, |t| (f(0.3 + t) - f(0.3)) / t);
        assert!((v - 0.3f64.cos()).abs() < 1e-10, "{v}");
        assert!(e < 1e-8);
    }

    #[test]
    fn constant_sequence_converges_immediately() {
        let (v, e) = run(Acceleration::Epsilon, 10, |_| 2.5);
        assert_eq!(v, 2.5);
        assert!(e < 1e-14);
    }
}
