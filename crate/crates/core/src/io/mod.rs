//! File formats: DIMACS input, JSON documents, SVG output.

pub mod dimacs;
pub mod document;
pub mod svg;

pub use dimacs::{parse_dimacs, write_dimacs, DimacsError};
pub use document::{
    from_json, read_instance, read_layout, read_trace, to_json, write_instance, write_trace, DocumentError,
    InstanceDocument, Layout, TraceDocument, FORMAT_VERSION,
};
pub use svg::{render_svg, SvgOptions};
