//! Reference implementations used by the integration tests. Each one is
//! written independently of the library code it checks.
#![allow(dead_code)]

use thz_relay::{AbsorptionModel, ChannelParams, Point2D, RelayCandidateSet};

pub const C: f64 = 299_792_458.0;

/// Minimum distance from `center` to the segment `[a, b]`: a coarse scan of
/// `samples` evenly spaced points, then golden-section refinement of the
/// (convex) distance around the best sample.
pub fn sampled_segment_distance(a: Point2D, b: Point2D, center: Point2D, samples: usize) -> f64 {
    let at = |t: f64| {
        let x = a.x + t * (b.x - a.x) - center.x;
        let y = a.y + t * (b.y - a.y) - center.y;
        (x * x + y * y).sqrt()
    };
    let step = 1.0 / (samples - 1) as f64;
    let (mut best_t, mut best) = (0.0, f64::INFINITY);
    for i in 0..samples {
        let t = i as f64 * step;
        let dist = at(t);
        if dist < best {
            best = dist;
            best_t = t;
        }
    }
    let (mut lo, mut hi) = ((best_t - step).max(0.0), (best_t + step).min(1.0));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let m1 = hi - g * (hi - lo);
        let m2 = lo + g * (hi - lo);
        if at(m1) < at(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    best.min(at(0.5 * (lo + hi)))
}

/// Absorption coefficient by direct linear interpolation over the model's
/// table entries.
pub fn absorption(model: &AbsorptionModel, f: f64) -> f64 {
    match model {
        AbsorptionModel::Constant(k) => *k,
        AbsorptionModel::Table(table) => {
            let knots: Vec<(f64, f64)> = table.entries().collect();
            for w in knots.windows(2) {
                let ((f0, k0), (f1, k1)) = (w[0], w[1]);
                if f >= f0 && f <= f1 {
                    return k0 + (k1 - k0) * (f - f0) / (f1 - f0);
                }
            }
            panic!("{f} Hz outside table");
        }
    }
}

/// Capacity by the composite trapezoid rule with `panels` panels.
pub fn trapezoid_capacity(params: &ChannelParams, d: f64, h_phi: f64, panels: usize) -> f64 {
    let lo = params.center_frequency - 0.5 * params.bandwidth;
    let hi = params.center_frequency + 0.5 * params.bandwidth;
    let knots: Option<Vec<(f64, f64)>> = match &params.absorption {
        AbsorptionModel::Table(t) => Some(t.entries().collect()),
        AbsorptionModel::Constant(_) => None,
    };
    // the table has a uniform grid, so the bracketing knot is found by index
    let k_at = |f: f64| match &knots {
        None => absorption(&params.absorption, f),
        Some(knots) => {
            let (f0, step) = (knots[0].0, knots[1].0 - knots[0].0);
            let i = (((f - f0) / step).floor() as usize).min(knots.len() - 2);
            let ((fa, ka), (fb, kb)) = (knots[i], knots[i + 1]);
            ka + (kb - ka) * (f - fa) / (fb - fa)
        }
    };
    let integrand = |f: f64| {
        let spread = C / (4.0 * std::f64::consts::PI * f * d);
        let snr = params.gain_budget * spread * spread * (-k_at(f) * d).exp() * h_phi * h_phi;
        (1.0 + snr).log2()
    };
    let h = (hi - lo) / panels as f64;
    let mut sum = 0.5 * (integrand(lo) + integrand(hi));
    for i in 1..panels {
        sum += integrand(lo + i as f64 * h);
    }
    sum * h
}

/// Exhaustive argmax of the min-leg capacity; the lowest relay index wins
/// ties. `None` for an empty set.
pub fn exhaustive_best(set: &RelayCandidateSet) -> Option<(usize, f64)> {
    let best_value = set
        .candidates
        .iter()
        .map(|c| if c.c_sr < c.c_rd { c.c_sr } else { c.c_rd })
        .fold(f64::NEG_INFINITY, f64::max);
    set.candidates
        .iter()
        .filter(|c| c.c_sr.min(c.c_rd) == best_value)
        .map(|c| c.relay)
        .min()
        .map(|r| (r, best_value))
}

/// Kolmogorov-Smirnov statistic of `samples` against `cdf`.
pub fn ks_statistic(mut samples: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}
