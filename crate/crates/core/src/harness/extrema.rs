//! Turning-point counting for oscillatory series.
//!
//! A crest (trough) is counted only after the series has moved away from
//! the running maximum (minimum) by at least `eps`, so wiggles smaller
//! than `eps` are ignored and flat plateaus count once. Boundary points
//! are never counted: an extremum must be confirmed by motion on both
//! sides inside the series.

/// Rejected inputs of [`count_extrema`].
#[derive(Debug, PartialEq, thiserror::Error)]
pub enum ExtremaError {
    #[error("need at least 3 samples to identify an interior extremum, got {0}")]
    TooShort(usize),
    #[error("hysteresis width eps must be positive and finite, got {0}")]
    BadEps(f64),
}

/// Count `(crests, troughs)` of `series` with hysteresis width `eps`.
///
/// The counter walks the series with a three-state machine: direction
/// unknown, seeking a crest (last confirmed motion was upward), seeking a
/// trough. A reversal of size `eps` against the running extremum confirms
/// one turning point and flips the direction. Only the first confirmed
/// extremum can sit on the left boundary, so its index is tracked during
/// the unknown phase; a candidate still pending when the series ends is a
/// right-boundary extremum and is dropped.
pub fn count_extrema(series: &[f64], eps: f64) -> Result<(usize, usize), ExtremaError> {
    if series.len() < 3 {
        return Err(ExtremaError::TooShort(series.len()));
    }
    if eps <= 0.0 || !eps.is_finite() {
        return Err(ExtremaError::BadEps(eps));
    }

    enum Seek {
        Unknown,
        Crest,
        Trough,
    }

    let mut crests = 0usize;
    let mut troughs = 0usize;
    let mut run_max = series[0];
    let mut run_min = series[0];
    let mut imax = 0usize;
    let mut imin = 0usize;
    let mut mode = Seek::Unknown;

    for (i, &v) in series.iter().enumerate().skip(1) {
        match mode {
            Seek::Unknown => {
                if v > run_max {
                    run_max = v;
                    imax = i;
                }
                if v < run_min {
                    run_min = v;
                    imin = i;
                }
                if v <= run_max - eps {
                    if imax > 0 {
                        crests += 1;
                    }
                    mode = Seek::Trough;
                    run_min = v;
                } else if v >= run_min + eps {
                    if imin > 0 {
                        troughs += 1;
                    }
                    mode = Seek::Crest;
                    run_max = v;
                }
            }
            Seek::Crest => {
                if v > run_max {
                    run_max = v;
                } else if v <= run_max - eps {
                    crests += 1;
                    mode = Seek::Trough;
                    run_min = v;
                }
            }
            Seek::Trough => {
                if v < run_min {
                    run_min = v;
                } else if v >= run_min + eps {
                    troughs += 1;
                    mode = Seek::Crest;
                    run_max = v;
                }
            }
        }
    }
    Ok((crests, troughs))
}
