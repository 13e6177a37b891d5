//! Cumulative production driven by a geometric random walk.
//!
//! `Z_t = Σ_{j≤t} e^{g·j + a_1 + … + a_j}` with i.i.d. shocks `a_i`. The density
//! of `z_t = log Z_t` obeys `z_{t+1} ≍ softplus(g + a + z_t)`, and the auxiliary
//! `y_t = log(Z_t/Q_t)` obeys `y_{t+1} = softplus(y_t − g − a)`; the increment
//! `Δz_t` is `−ln(1 − e^{−y_t})`.

mod closed;
mod model;
mod noise;
mod recursion;
mod simulate;

pub use closed::{
    delta_cumulants, depreciation_volatility, depreciation_volatility_small_d, memoryless_slope,
    memoryless_variance, model_moments, production_moments, saddle_moments, stationary_variance, tanh_law,
    DeltaCumulants, ProductionMoments, SaddleMoments,
};
pub use model::ProductionModelSpec;
pub use noise::{NoiseSpec, GAUSSIAN_CUTOFF, LORENTZIAN_CUTOFF};
pub use recursion::{
    evolve_pdf, evolve_to, narrow_limit_check, narrow_limit_check_with, volatility_cdf, volatility_moments, volatility_pdf,
    volatility_pdf_on, EvolveOptions, PdfState, VolatilityMoments, LEAK_LIMIT,
};
pub use simulate::{sample_path, simulate_memoryless, simulate_paths, PathSamples};
