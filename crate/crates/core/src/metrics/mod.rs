//! Approximation coefficients Theta_n, the map F, the limiting densities and the Monte Carlo experiments.

mod density;
mod experiments;
mod lenstra;
mod sim;
mod theta;

pub use density::{density_d_alpha, GammaDensity};
pub use experiments::{
    equidistribution, fit_slope, lenstra_experiment, theta_distribution_experiment, CellStat, EquidistributionReport,
    LenstraPoint, LenstraReport, ThetaHistogram,
};
pub use lenstra::lenstra_constant;
pub use sim::{run_sharded, Accumulator, SimConfig, BURN_IN};
pub use theta::{f_inverse, f_map, theta_from_orbit, ThetaPair};
