//! Instance files and reports.

mod instance;
mod report;

pub use instance::{
    matrix_json, parse_instance, parse_instance_str, render_instance, scalar_from_json, scalar_json, vector_json,
    Instance, InstanceBody,
};
pub use report::{from_json, parse_machine, render_machine, render_text, to_json, Body, DirectionRow, GeneratorRow, Report};
