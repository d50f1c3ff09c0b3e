//! Compounded return projections over a horizon of trading days.
//!
//! Each of `alpha` winning days multiplies capital by `1 + k*s` and each of
//! the remaining `horizon - alpha` losing days by `1 - k*s`, where `s` is the
//! average daily spread as a fraction and `k = margin / 100` is the leverage.
//! The result is terminal wealth as a percent of starting capital:
//!
//! ```text
//! value = (1 + k*s)^alpha * (1 - k*s)^(horizon - alpha) * 100
//! ```
//!
//! `margin = 100` is unleveraged, `200` is 2:1 buying power and `400` is the
//! 4:1 intraday buying power available to pattern day traders. Wins and
//! losses are symmetric in magnitude, and the order in which they occur does
//! not affect the result.

use crate::error::{Error, Result};

pub const DEFAULT_HORIZON: u32 = 30;
pub const UNLEVERAGED: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionParams {
    /// Average daily spread in percent.
    pub spread: f64,
    /// Number of winning days.
    pub alpha: u32,
    /// Number of trading days.
    pub horizon: u32,
    /// Margin in percent; 100 means no leverage.
    pub margin: f64,
}

impl ProjectionParams {
    pub fn new(spread: f64, alpha: u32, horizon: u32, margin: f64) -> Result<Self> {
        let params = Self {
            spread,
            alpha,
            horizon,
            margin,
        };
        params.validate()?;
        Ok(params)
    }

    /// Unleveraged parameters over the default 30-day horizon.
    pub fn unleveraged(spread: f64, alpha: u32) -> Result<Self> {
        Self::new(spread, alpha, DEFAULT_HORIZON, UNLEVERAGED)
    }

    pub fn validate(&self) -> Result<()> {
        check_horizon(self.horizon)?;
        if self.alpha > self.horizon {
            return Err(Error::argument(format!(
                "alpha {} exceeds horizon {}",
                self.alpha, self.horizon
            )));
        }
        daily_move(self.spread, self.margin).map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionResult {
    /// Terminal wealth in percent of starting capital; 100 is break-even.
    pub value: f64,
    pub params: ProjectionParams,
}

pub fn project(params: &ProjectionParams) -> Result<ProjectionResult> {
    params.validate()?;
    let step = daily_move(params.spread, params.margin)?;
    Ok(ProjectionResult {
        value: compound(step, params.alpha, params.horizon),
        params: *params,
    })
}

/// Leveraged per-day move `k*s` as a fraction. Errors when a losing day
/// would leave nothing (`k*s >= 1`).
pub fn daily_move(spread: f64, margin: f64) -> Result<f64> {
    if !spread.is_finite() || spread < 0.0 {
        return Err(Error::argument(format!(
            "spread must be a finite, non-negative percent (got {spread})"
        )));
    }
    if !margin.is_finite() || margin < 0.0 {
        return Err(Error::argument(format!(
            "margin must be a finite, non-negative percent (got {margin})"
        )));
    }
    let step = spread / 100.0 * (margin / 100.0);
    if step >= 1.0 {
        return Err(Error::Ruin {
            spread,
            margin,
            loss_factor: 1.0 - step,
        });
    }
    Ok(step)
}

fn check_horizon(horizon: u32) -> Result<()> {
    if horizon == 0 {
        return Err(Error::argument("horizon must be at least one day"));
    }
    if horizon > i32::MAX as u32 {
        return Err(Error::argument(format!("horizon {horizon} is too large")));
    }
    Ok(())
}

fn compound(step: f64, alpha: u32, horizon: u32) -> f64 {
    // horizon <= i32::MAX is checked by validation.
    (1.0 + step).powi(alpha as i32) * (1.0 - step).powi((horizon - alpha) as i32) * 100.0
}

fn compound_fractional(step: f64, alpha: f64, horizon: u32) -> f64 {
    (1.0 + step).powf(alpha) * (1.0 - step).powf(f64::from(horizon) - alpha) * 100.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BreakEven {
    /// Smallest win count whose projection is at least 100.
    At(u32),
    /// Not even a winning streak over the whole horizon reaches 100.
    Never,
}

/// Minimum number of winning days out of `horizon` needed to end at or above
/// starting capital.
///
/// Starts from the real-valued root of `value(alpha) = 100` and settles the
/// integer answer against [`project`] itself, so the result is consistent
/// with the projection's own rounding.
pub fn break_even_alpha(spread: f64, horizon: u32, margin: f64) -> Result<BreakEven> {
    check_horizon(horizon)?;
    let step = daily_move(spread, margin)?;
    if step == 0.0 {
        return Ok(BreakEven::At(0));
    }
    let up = step.ln_1p();
    let down = (-step).ln_1p();
    let root = -f64::from(horizon) * down / (up - down);
    let mut alpha = root.ceil().clamp(0.0, f64::from(horizon)) as u32;

    let reaches = |a: u32| compound(step, a, horizon) >= 100.0;
    while alpha > 0 && reaches(alpha - 1) {
        alpha -= 1;
    }
    while alpha <= horizon && !reaches(alpha) {
        alpha += 1;
    }
    Ok(if alpha > horizon {
        BreakEven::Never
    } else {
        BreakEven::At(alpha)
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub margin: f64,
    pub value: f64,
    /// True for rows at a fractional `alpha`, which are curve interpolation
    /// rather than attainable outcomes.
    pub interpolated: bool,
}

/// Projection for every integer `alpha` in `0..=horizon` and every margin,
/// ordered by alpha, then by margin in the order given.
pub fn alpha_sweep(spread: f64, horizon: u32, margins: &[f64]) -> Result<Vec<SweepRow>> {
    alpha_sweep_interpolated(spread, horizon, margins, 1)
}

/// Like [`alpha_sweep`], with `substeps` points per unit of alpha. Rows
/// between integers are flagged as interpolated.
pub fn alpha_sweep_interpolated(
    spread: f64,
    horizon: u32,
    margins: &[f64],
    substeps: u32,
) -> Result<Vec<SweepRow>> {
    check_horizon(horizon)?;
    if substeps == 0 {
        return Err(Error::argument("substeps must be at least 1"));
    }
    let steps = margins
        .iter()
        .map(|&m| daily_move(spread, m).map(|s| (m, s)))
        .collect::<Result<Vec<_>>>()?;

    let points = u64::from(horizon) * u64::from(substeps);
    let mut rows = Vec::with_capacity((points as usize + 1) * steps.len());
    for j in 0..=points {
        let whole = j % u64::from(substeps) == 0;
        let alpha = j as f64 / f64::from(substeps);
        for &(margin, step) in &steps {
            let value = if whole {
                compound(step, (j / u64::from(substeps)) as u32, horizon)
            } else {
                compound_fractional(step, alpha, horizon)
            };
            rows.push(SweepRow {
                alpha,
                margin,
                value,
                interpolated: !whole,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    const S_AV: f64 = 0.706059344;
    const Q_AV: f64 = 1.57655549;

    fn value(spread: f64, alpha: u32, horizon: u32, margin: f64) -> f64 {
        project(&ProjectionParams::new(spread, alpha, horizon, margin).unwrap())
            .unwrap()
            .value
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn zero_spread_and_zero_margin_are_flat() {
        for alpha in 0..=30 {
            assert_eq!(value(0.0, alpha, 30, 100.0), 100.0);
            assert_eq!(value(3.7, alpha, 30, 0.0), 100.0);
        }
    }

    // Exact rational values, see tests/oracles/projection_anchors.py.
    #[test]
    fn anchors() {
        assert!(rel(value(S_AV, 30, 30, 100.0), 123.500_315_510_214_18) < 1e-13);
        assert!(rel(value(S_AV, 15, 30, 100.0), 99.925_248_119_585_02) < 1e-13);
        assert!(rel(value(S_AV, 30, 30, 200.0), 152.298_519_281_390_72) < 1e-13);
        assert!(rel(value(S_AV, 0, 30, 100.0), 80.850_442_936_194_83) < 1e-13);
    }

    #[test]
    fn ruin_is_an_error() {
        let err = ProjectionParams::new(60.0, 10, 30, 200.0).unwrap_err();
        assert!(matches!(err, Error::Ruin { .. }));
        assert!(matches!(
            ProjectionParams::new(50.0, 10, 30, 200.0),
            Err(Error::Ruin { .. })
        ));
        assert!(ProjectionParams::new(49.99, 10, 30, 200.0).is_ok());
    }

    #[test]
    fn argument_errors() {
        assert!(matches!(
            ProjectionParams::new(1.0, 31, 30, 100.0),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            ProjectionParams::new(1.0, 0, 0, 100.0),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            ProjectionParams::new(-1.0, 0, 30, 100.0),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            ProjectionParams::new(1.0, 0, 30, -5.0),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            ProjectionParams::new(f64::NAN, 0, 30, 100.0),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn margin_100_is_the_unleveraged_formula() {
        for alpha in 0..=30 {
            let s = S_AV / 100.0;
            let plain = (1.0 + s).powi(alpha as i32) * (1.0 - s).powi(30 - alpha as i32) * 100.0;
            assert_eq!(value(S_AV, alpha, 30, 100.0).to_bits(), plain.to_bits());
        }
    }

    #[test]
    fn break_even_examples() {
        assert_eq!(
            break_even_alpha(S_AV, 30, 100.0).unwrap(),
            BreakEven::At(16)
        );
        assert_eq!(
            break_even_alpha(Q_AV, 30, 100.0).unwrap(),
            BreakEven::At(16)
        );
        assert_eq!(break_even_alpha(0.5, 1, 100.0).unwrap(), BreakEven::At(1));
        assert_eq!(break_even_alpha(S_AV, 30, 0.0).unwrap(), BreakEven::At(0));
        assert!(matches!(
            break_even_alpha(60.0, 30, 200.0),
            Err(Error::Ruin { .. })
        ));
    }

    #[test]
    fn sweep_shapes() {
        let rows = alpha_sweep(S_AV, 30, &[100.0, 200.0]).unwrap();
        assert_eq!(rows.len(), 62);
        assert_eq!((rows[0].alpha, rows[0].margin), (0.0, 100.0));
        assert_eq!((rows[1].alpha, rows[1].margin), (0.0, 200.0));
        let last = rows.iter().rfind(|r| r.margin == 100.0).unwrap();
        assert_eq!(last.alpha, 30.0);
        assert_eq!(last.value, value(S_AV, 30, 30, 100.0));
        assert!(rows.iter().all(|r| !r.interpolated));

        assert!(alpha_sweep(0.0, 30, &[100.0])
            .unwrap()
            .iter()
            .all(|r| r.value == 100.0));
        assert!(alpha_sweep(S_AV, 30, &[0.0])
            .unwrap()
            .iter()
            .all(|r| r.value == 100.0));
    }

    #[test]
    fn sweep_names_the_ruinous_margin() {
        let err = alpha_sweep(40.0, 30, &[100.0, 250.0, 300.0]).unwrap_err();
        match err {
            Error::Ruin { margin, .. } => assert_eq!(margin, 250.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn interpolated_sweep() {
        let rows = alpha_sweep_interpolated(S_AV, 30, &[100.0], 4).unwrap();
        assert_eq!(rows.len(), 121);
        assert!(!rows[0].interpolated && rows[1].interpolated && !rows[4].interpolated);
        assert_eq!(rows[4].value, value(S_AV, 1, 30, 100.0));
        assert!(rows[1].value > rows[0].value && rows[1].value < rows[4].value);
        assert!(alpha_sweep_interpolated(S_AV, 30, &[100.0], 0).is_err());
    }
}
