/// Monotonic time source in seconds. Only differences are meaningful.
pub type Clock = fn() -> f64;

/// Clock that never advances; used when no time source is available.
pub fn null_clock() -> f64 {
    0.0
}

/// Wall clock backed by [`std::time::Instant`].
#[cfg(feature = "std")]
pub fn std_clock() -> f64 {
    use std::sync::OnceLock;
    use std::time::Instant;

    static START: OnceLock<Instant> = OnceLock::new();
    START.get_or_init(Instant::now).elapsed().as_secs_f64()
}

#[cfg(feature = "std")]
pub(crate) const DEFAULT_CLOCK: Clock = std_clock;
#[cfg(not(feature = "std"))]
pub(crate) const DEFAULT_CLOCK: Clock = null_clock;
