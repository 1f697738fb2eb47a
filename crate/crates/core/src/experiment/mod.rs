//! Experiment configuration and orchestration:
//! assemble, optionally augment and romanize, train, evaluate.

mod config;
mod run;

pub use config::{expand_grid, ConfigError, DevSource, ExperimentConfig};
pub use run::{
    eval_split_for, load_suite_dir, run_experiment, run_experiment_with, run_suite, train_stage, Trained, ErrorKind, ExperimentError,
    ExperimentResult, Stage, SuiteOptions, SuiteResult,
};
