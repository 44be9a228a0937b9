//! Built-in domains, the counterexample family D_n and its experiments.

pub mod counterexample;
mod experiments;
mod shapes;

pub use counterexample::{scale, CounterexampleSpec, Family, GeometryReport, Label, NamedSlit, Region};
pub use shapes::{make_domain, GalleryId, Params};
pub use experiments::{
    divergence_csv, divergence_experiment, level_graph, predicted_ratio, separation_spotcheck, sigma_upper_bound,
    DivergenceOptions, DivergenceRow,
};
