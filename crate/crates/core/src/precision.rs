use crate::error::{Error, Result};

/// Name of the environment variable that overrides the refinement cap.
pub const PRECISION_CAP_ENV: &str = "LF_PRECISION_CAP";

/// Hard ceiling on working precision, whatever the doubling cap says.
pub const MAX_BITS: u64 = 1 << 20;

/// Adaptive refinement schedule: start at `start_bits` and double until the
/// caller is satisfied, at most `max_doublings` times.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precision {
    pub start_bits: u64,
    pub max_doublings: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            start_bits: 64,
            max_doublings: 64,
        }
    }
}

impl Precision {
    pub fn with_start(self, start_bits: u64) -> Self {
        Precision {
            start_bits: start_bits.max(8),
            ..self
        }
    }

    /// Default schedule, with the doubling cap taken from `LF_PRECISION_CAP`
    /// when it is set to a valid integer.
    pub fn from_env() -> Result<Self> {
        let mut p = Precision::default();
        if let Ok(v) = std::env::var(PRECISION_CAP_ENV) {
            p.max_doublings = v.trim().parse().map_err(|_| {
                Error::Parse(format!(
                    "{PRECISION_CAP_ENV}={v:?} is not a non-negative integer"
                ))
            })?;
        }
        Ok(p)
    }

    /// Iterator over the precision levels of this schedule.
    pub fn levels(&self) -> impl Iterator<Item = u64> {
        let start = self.start_bits.max(8);
        (0..=self.max_doublings)
            .map(move |k| start.saturating_mul(1u64 << k.min(62)))
            .take_while(|&b| b <= MAX_BITS)
    }

    /// Runs `step` at increasing precision until it yields a value.
    ///
    /// `step` returns `Ok(None)` to ask for more bits. When `refinable` is
    /// false a single attempt is made, since more bits cannot change the
    /// answer.
    pub fn refine<T>(
        &self,
        refinable: bool,
        what: &str,
        mut step: impl FnMut(u64) -> Result<Option<T>>,
    ) -> Result<T> {
        for bits in self.levels() {
            if let Some(v) = step(bits)? {
                return Ok(v);
            }
            if !refinable {
                break;
            }
        }
        Err(Error::PrecisionExhausted(what.to_string()))
    }
}
