//! Causal edges and extrema ridges of space-time fields.
//!
//! An edge is the first time `t*(R)` at which `|f(R, t)|` reaches a
//! fraction `ε` of the global maximum of `|f|`; it is fitted by
//! `t* = a R^β` in log-log space, or by `R = V t + b` for ballistic fronts.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Observable, SpaceTimeField};
use crate::scalar::Real;

/// Minimum number of crossings or points for a fit.
pub const MIN_POINTS: usize = 6;
/// Fits below this coefficient of determination are flagged.
pub const LOW_QUALITY_R2: f64 = 0.98;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgePoint<T> {
    pub r: T,
    pub t: T,
}

/// Inclusive distance window used by fits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window<T> {
    pub r_min: T,
    pub r_max: T,
}

impl<T: Real> Window<T> {
    pub fn new(r_min: T, r_max: T) -> Result<Self> {
        if !(r_min >= T::zero() && r_min <= r_max) {
            return Err(Error::invalid("window", format!("need 0 <= r_min <= r_max, got [{r_min}, {r_max}]")));
        }
        Ok(Window { r_min, r_max })
    }

    /// Everything with positive distance.
    pub fn all() -> Self {
        Window { r_min: T::zero(), r_max: T::infinity() }
    }

    /// `[8, 0.8 R_max]`, dropping the short-distance transient and the
    /// far edge of the grid.
    pub fn default_for(field: &SpaceTimeField<T>) -> Self {
        let r_max = field.r_grid.last().map_or(T::zero(), |&r| T::from_usize_lossy(r));
        Window { r_min: T::lit(8.0), r_max: T::lit(0.8) * r_max }
    }

    pub fn contains(&self, r: T) -> bool {
        r >= self.r_min && r <= self.r_max
    }
}

/// `R = V t + b` by least squares.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit<T> {
    pub velocity: T,
    pub intercept: T,
    pub stderr_velocity: T,
    pub r2: T,
}

/// `t = a R^β` fitted to arrival or ridge points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeFit<T> {
    pub epsilon: Option<T>,
    pub points: Vec<EdgePoint<T>>,
    pub a: T,
    pub beta: T,
    pub stderr_beta: T,
    pub r2: T,
    pub window: Window<T>,
    pub low_quality: bool,
    /// Ballistic reading of the same points.
    pub linear: LinearFit<T>,
}

struct Regression<T> {
    slope: T,
    intercept: T,
    stderr: T,
    r2: T,
}

fn regress<T: Real>(x: &[T], y: &[T]) -> Regression<T> {
    let n = T::from_usize_lossy(x.len());
    let mx = x.iter().copied().sum::<T>() / n;
    let my = y.iter().copied().sum::<T>() / n;
    let sxx: T = x.iter().map(|&v| (v - mx) * (v - mx)).sum();
    let sxy: T = x.iter().zip(y).map(|(&u, &v)| (u - mx) * (v - my)).sum();
    let syy: T = y.iter().map(|&v| (v - my) * (v - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: T = x.iter().zip(y).map(|(&u, &v)| (v - intercept - slope * u).powi(2)).sum();
    let dof = T::from_usize_lossy(x.len().saturating_sub(2).max(1));
    let stderr = (ssr / dof / sxx).sqrt();
    let r2 = if syy > T::zero() { T::one() - ssr / syy } else { T::one() };
    Regression { slope, intercept, stderr, r2 }
}

fn in_window<T: Real>(points: &[EdgePoint<T>], window: &Window<T>) -> Vec<EdgePoint<T>> {
    points.iter().copied().filter(|p| p.r > T::zero() && p.t > T::zero() && window.contains(p.r)).collect()
}

/// Ordinary least squares of `log t` on `log R` inside `window`.
pub fn fit_power_law<T: Real>(points: &[EdgePoint<T>], window: Window<T>) -> Result<EdgeFit<T>> {
    let pts = in_window(points, &window);
    if pts.len() < MIN_POINTS {
        return Err(Error::InsufficientPoints { found: pts.len(), needed: MIN_POINTS });
    }
    let x: Vec<T> = pts.iter().map(|p| p.r.ln()).collect();
    let y: Vec<T> = pts.iter().map(|p| p.t.ln()).collect();
    let fit = regress(&x, &y);
    let linear = fit_linear(&pts, window)?;
    Ok(EdgeFit {
        epsilon: None,
        a: fit.intercept.exp(),
        beta: fit.slope,
        stderr_beta: fit.stderr,
        r2: fit.r2,
        window,
        low_quality: fit.r2 < T::lit(LOW_QUALITY_R2),
        points: pts,
        linear,
    })
}

/// Least squares of `R` on `t` inside `window`.
pub fn fit_linear<T: Real>(points: &[EdgePoint<T>], window: Window<T>) -> Result<LinearFit<T>> {
    let pts = in_window(points, &window);
    if pts.len() < MIN_POINTS {
        return Err(Error::InsufficientPoints { found: pts.len(), needed: MIN_POINTS });
    }
    let t: Vec<T> = pts.iter().map(|p| p.t).collect();
    let r: Vec<T> = pts.iter().map(|p| p.r).collect();
    let fit = regress(&t, &r);
    Ok(LinearFit { velocity: fit.slope, intercept: fit.intercept, stderr_velocity: fit.stderr, r2: fit.r2 })
}

/// First-crossing times of `ε max|f|`, linearly interpolated between
/// samples. Distances that never cross, or cross at `t ≤ 0`, are omitted.
pub fn edge_points<T: Real>(field: &SpaceTimeField<T>, epsilon: T) -> Result<Vec<EdgePoint<T>>> {
    if !(epsilon > T::zero() && epsilon < T::one()) {
        return Err(Error::invalid("epsilon", format!("must lie in (0, 1), got {epsilon}")));
    }
    let level = epsilon * field.max_abs();
    let mut points = Vec::new();
    if level > T::zero() {
        for (ir, &r) in field.r_grid.iter().enumerate() {
            let col = field.column(ir);
            let Some(i) = col.iter().position(|v| v.abs() >= level) else { continue };
            let t = if i == 0 {
                field.t_grid[0]
            } else {
                let (f0, f1) = (col[i - 1].abs(), col[i].abs());
                let (t0, t1) = (field.t_grid[i - 1], field.t_grid[i]);
                t0 + (level - f0) / (f1 - f0) * (t1 - t0)
            };
            if t > T::zero() {
                points.push(EdgePoint { r: T::from_usize_lossy(r), t });
            }
        }
    }
    if points.len() < MIN_POINTS {
        return Err(Error::EmptyEdge { found: points.len(), needed: MIN_POINTS });
    }
    Ok(points)
}

/// Edge extraction and power-law fit at one threshold.
pub fn fit_edge<T: Real>(field: &SpaceTimeField<T>, epsilon: T, window: Window<T>) -> Result<EdgeFit<T>> {
    let points = edge_points(field, epsilon)?;
    let mut fit = fit_power_law(&points, window)?;
    fit.epsilon = Some(epsilon);
    Ok(fit)
}

/// One fit per threshold; thresholds without a usable edge are skipped.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpsilonScan<T> {
    pub fits: Vec<EdgeFit<T>>,
    pub skipped: Vec<T>,
    pub beta_mean: T,
    /// `max β - min β` over the fitted thresholds.
    pub beta_spread: T,
}

impl<T: Real> EpsilonScan<T> {
    pub fn velocity_mean(&self) -> T {
        let n = T::from_usize_lossy(self.fits.len());
        self.fits.iter().map(|f| f.linear.velocity).sum::<T>() / n
    }

    pub fn velocity_spread(&self) -> T {
        spread(self.fits.iter().map(|f| f.linear.velocity))
    }
}

fn spread<T: Real>(values: impl Iterator<Item = T>) -> T {
    let (lo, hi) = values.fold((T::infinity(), T::neg_infinity()), |(lo, hi), v| (lo.min(v), hi.max(v)));
    hi - lo
}

pub fn epsilon_scan<T: Real>(field: &SpaceTimeField<T>, eps_list: &[T], window: Window<T>) -> Result<EpsilonScan<T>> {
    let mut fits = Vec::new();
    let mut skipped = Vec::new();
    let mut last_err = None;
    for &eps in eps_list {
        match fit_edge(field, eps, window) {
            Ok(fit) => fits.push(fit),
            Err(e @ (Error::EmptyEdge { .. } | Error::InsufficientPoints { .. })) => {
                log::warn!("epsilon = {eps}: {e}; skipped");
                skipped.push(eps);
                last_err = Some(e);
            }
            Err(e) => return Err(e),
        }
    }
    if fits.is_empty() {
        return Err(last_err.unwrap_or(Error::EmptyEdge { found: 0, needed: MIN_POINTS }));
    }
    let n = T::from_usize_lossy(fits.len());
    let beta_mean = fits.iter().map(|f| f.beta).sum::<T>() / n;
    let beta_spread = spread(fits.iter().map(|f| f.beta));
    Ok(EpsilonScan { fits, skipped, beta_mean, beta_spread })
}

/// `n` evenly spaced thresholds covering `[lo, hi]`.
pub fn epsilon_range<T: Real>(lo: T, hi: T, n: usize) -> Result<Vec<T>> {
    if n == 0 || !(lo > T::zero() && hi < T::one() && lo <= hi) {
        return Err(Error::invalid("epsilon", format!("need 0 < lo <= hi < 1 and n >= 1, got {lo}:{hi}:{n}")));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi - lo) / T::from_usize_lossy(n - 1);
    Ok((0..n).map(|i| lo + step * T::from_usize_lossy(i)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RidgePoint<T> {
    pub r: T,
    pub t: T,
    pub value: T,
}

/// A chain of per-distance time maxima.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ridge<T> {
    pub points: Vec<RidgePoint<T>>,
    pub power: Option<EdgeFit<T>>,
    pub linear: Option<LinearFit<T>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RidgeSet<T> {
    pub ridges: Vec<Ridge<T>>,
}

impl<T: Real> RidgeSet<T> {
    /// Length-weighted mean exponent over ridges with a power-law fit.
    pub fn beta_mean(&self) -> Option<T> {
        let mut num = T::zero();
        let mut den = T::zero();
        for ridge in &self.ridges {
            if let Some(fit) = &ridge.power {
                let w = T::from_usize_lossy(ridge.points.len());
                num = num + w * fit.beta;
                den = den + w;
            }
        }
        (den > T::zero()).then(|| num / den)
    }

    /// Length-weighted mean velocity over ridges with a linear fit.
    pub fn velocity_mean(&self) -> Option<T> {
        let mut num = T::zero();
        let mut den = T::zero();
        for ridge in &self.ridges {
            if let Some(fit) = &ridge.linear {
                let w = T::from_usize_lossy(ridge.points.len());
                num = num + w * fit.velocity;
                den = den + w;
            }
        }
        (den > T::zero()).then(|| num / den)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RidgeOptions<T> {
    /// Maxima below `floor · max|f|` are ignored.
    pub floor: T,
    /// Largest time-index jump when linking adjacent distances.
    pub jump_cap: usize,
    pub min_len: usize,
    /// Distances considered for ridge points.
    pub window: Window<T>,
}

impl<T: Real> Default for RidgeOptions<T> {
    fn default() -> Self {
        RidgeOptions { floor: T::lit(1e-4), jump_cap: 3, min_len: 8, window: Window::all() }
    }
}

/// Ridges of `|f|` with the default options.
pub fn extrema_ridges<T: Real>(field: &SpaceTimeField<T>) -> Result<RidgeSet<T>> {
    extrema_ridges_with(field, &RidgeOptions::default())
}

struct Open {
    /// Indices into the maxima list of each linked distance.
    members: Vec<(usize, usize)>,
    last_it: usize,
}

/// Links time maxima of `|f(R, ·)|` across adjacent distances.
///
/// Pairs are matched greedily by smallest time-index jump; ties go to the
/// earlier maximum, so the result is deterministic.
pub fn extrema_ridges_with<T: Real>(field: &SpaceTimeField<T>, opts: &RidgeOptions<T>) -> Result<RidgeSet<T>> {
    let floor = opts.floor * field.max_abs();
    let cols: Vec<usize> =
        (0..field.r_grid.len()).filter(|&ir| opts.window.contains(T::from_usize_lossy(field.r_grid[ir]))).collect();
    let maxima: Vec<Vec<usize>> = cols
        .iter()
        .map(|&ir| {
            let col = field.column(ir);
            (1..col.len().saturating_sub(1))
                .filter(|&i| {
                    let (a, b, c) = (col[i - 1].abs(), col[i].abs(), col[i + 1].abs());
                    b > a && b >= c && b > floor
                })
                .collect()
        })
        .collect();

    let mut open: Vec<Open> = Vec::new();
    let mut done: Vec<Open> = Vec::new();
    for (c, list) in maxima.iter().enumerate() {
        let adjacent = c > 0 && field.r_grid[cols[c]] == field.r_grid[cols[c - 1]] + 1;
        if !adjacent {
            done.append(&mut open);
        }
        let mut pairs: Vec<(usize, usize, usize)> = Vec::new();
        for (o, ridge) in open.iter().enumerate() {
            for &it in list {
                let jump = it.abs_diff(ridge.last_it);
                if jump <= opts.jump_cap {
                    pairs.push((jump, it, o));
                }
            }
        }
        pairs.sort_by_key(|&(jump, it, o)| (jump, it, open[o].last_it));
        let mut ridge_taken = vec![false; open.len()];
        let mut max_taken = vec![false; list.len()];
        for (_, it, o) in pairs {
            let m = list.iter().position(|&x| x == it).expect("candidate comes from the list");
            if ridge_taken[o] || max_taken[m] {
                continue;
            }
            ridge_taken[o] = true;
            max_taken[m] = true;
            open[o].members.push((c, it));
            open[o].last_it = it;
        }
        let mut still_open = Vec::new();
        for (o, ridge) in open.into_iter().enumerate() {
            if ridge_taken[o] {
                still_open.push(ridge);
            } else {
                done.push(ridge);
            }
        }
        for (m, &it) in list.iter().enumerate() {
            if !max_taken[m] {
                still_open.push(Open { members: vec![(c, it)], last_it: it });
            }
        }
        open = still_open;
    }
    done.append(&mut open);

    let mut ridges: Vec<Ridge<T>> = done
        .into_iter()
        .filter(|r| r.members.len() >= opts.min_len)
        .map(|r| {
            let points: Vec<RidgePoint<T>> = r
                .members
                .iter()
                .map(|&(c, it)| {
                    let ir = cols[c];
                    let (t, value) = refine_peak(field, ir, it);
                    RidgePoint { r: T::from_usize_lossy(field.r_grid[ir]), t, value }
                })
                .collect();
            let as_edge: Vec<EdgePoint<T>> = points.iter().map(|p| EdgePoint { r: p.r, t: p.t }).collect();
            Ridge { power: fit_power_law(&as_edge, Window::all()).ok(), linear: fit_linear(&as_edge, Window::all()).ok(), points }
        })
        .collect();
    if ridges.is_empty() {
        return Err(Error::NoRidges);
    }
    ridges.sort_by(|a, b| {
        let key = |r: &Ridge<T>| (r.points[0].r, r.points[0].t);
        key(a).partial_cmp(&key(b)).unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(RidgeSet { ridges })
}

/// Parabolic refinement of a sampled maximum of `|f|`.
fn refine_peak<T: Real>(field: &SpaceTimeField<T>, ir: usize, it: usize) -> (T, T) {
    let col = field.column(ir);
    let (a, b, c) = (col[it - 1].abs(), col[it].abs(), col[it + 1].abs());
    let denom = a - T::lit(2.0) * b + c;
    if !(denom < T::zero()) {
        return (field.t_grid[it], b);
    }
    let delta = (T::lit(0.5) * (a - c) / denom).max(-T::lit(0.5)).min(T::lit(0.5));
    let (t0, t1) = (field.t_grid[it], if delta >= T::zero() { field.t_grid[it + 1] } else { field.t_grid[it - 1] });
    let t = t0 + delta.abs() * (t1 - t0);
    (t, b - T::lit(0.25) * (a - c) * delta)
}

/// Two readings of a staggered field.
#[derive(Debug, Clone, PartialEq)]
pub struct Destaggered<T> {
    /// `|f(R, t)|` on every distance.
    pub magnitude: SpaceTimeField<T>,
    /// `f(R, t)` restricted to even `R`, where a `(-1)^R` pattern is
    /// invisible.
    pub even: SpaceTimeField<T>,
}

pub fn destagger<T: Real>(field: &SpaceTimeField<T>) -> Destaggered<T> {
    let magnitude = field.map(field.observable, |v| v.abs()).with_meta("channel", "magnitude");
    let even = field.select_distances(|r| r % 2 == 0).with_meta("channel", "even_sublattice");
    Destaggered { magnitude, even }
}

impl<T: Real> Destaggered<T> {
    pub fn observable(&self) -> Observable {
        self.magnitude.observable
    }
}
