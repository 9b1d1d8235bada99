//! Reproducible Monte Carlo sweeps over the ensemble, finite-size fits and
//! the state-design obstruction checks.

mod design;
mod fit;
mod norm;
mod store;
mod sweep;

pub use design::{
    design_obstruction_check, haar_symmetric_control, offdiagonal_prediction, DesignReport,
    DESIGN_MAX_SPINS,
};
pub use fit::{finite_size_fit, FitPoint, QuadraticFit, BAND_LEVEL};
pub use norm::{norm_fluctuation, norm_fluctuation_statistic, NormFluctuation};
pub use store::{RawRow, ResultsStore};
pub use sweep::{
    map_samples, run_sweep, ColumnStats, NamedSchedule, Quantity, SubregionSchedule, SweepConfig,
    SweepPoint, SweepRecord, DEFAULT_BUDGET,
};
