//! Configuration files, single runs, seeded benchmarks and SVG output.

mod config;
mod run;
mod svg;

pub use config::{
    load_config, parse_config, BenchmarkSpec, ConfigDoc, EnvSpec, PlanConfig, Scenario, DEFAULT_SAMPLER, DEFAULT_SEED,
};
pub use run::{
    build_env, execute, load_map, median, read_csv, run_benchmark, run_single, summarize, write_csv, write_summary,
    BenchmarkOutput, Execution, PlanOutput, RunRecord, Summary,
};
pub use svg::{render_calls, render_svg, RASTER_THRESHOLD};
