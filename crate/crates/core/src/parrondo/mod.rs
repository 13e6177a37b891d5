//! Master equations on chains and ladders, transfer matrices, growth rates,
//! exact and asymptotic distributions, history-dependent walks and the
//! two-envelope game.

mod asymptotic;
mod envelope;
mod exact;
mod game;
mod history;
mod lattice;
mod rates;
mod transfer;

pub use asymptotic::{asymptotic_profile, binary_entropy_rate, rate_function, AsymptoticProfile, ProfilePoint, RatePoint};
pub use envelope::{
    envelope_evolve, envelope_moments, AmountLaw, CapitalPmf, EnvelopeMoments, EnvelopeSpec, SwitchingFunction,
};
pub use exact::exact_pmf;
pub use game::{mix_strategies, GameSpec, HistoryGameSpec, ParityClass};
pub use history::{history_rate_variance, simulate_history, HistoryDrift};
pub use lattice::{chain_step, iterate, ladder_step, LatticeDistribution};
pub use rates::{perron_derivatives, rate_formulas, rate_variance, rate_variance_stencil, PerronDerivatives, RateFormulas, RateVariance};
pub use transfer::{q_matrix, TransferSystem};
