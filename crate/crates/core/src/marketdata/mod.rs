//! Daily OHLC data: session returns and intraday/overnight volatility asymmetry.

mod asymmetry;
mod ohlc;
mod returns;
mod synthetic;

pub use asymmetry::{asymmetry, AsymmetryMethod, AsymmetryReport, MethodAsymmetry, DEFAULT_K, MIN_DAYS};
pub use ohlc::{load_ohlc, read_ohlc, ColumnMap, LoadOptions, LoadReport, OhlcRecord, OhlcSeries};
pub use returns::{
    lead_lag_correlation, rolling_volatility, sentiment_score, session_returns, Anomaly, Session, SessionReturns,
    MIN_OVERLAP, TRADING_DAYS,
};
pub use synthetic::{business_days, synthetic_ohlc, Coupling};
