//! Linear solution operators on the half-line.

mod boundary;
mod extend;
mod faddeeva;
mod kernel;
mod line;
mod solve;
mod symbol;

pub use boundary::{BoundaryOperator, BoundaryOperatorOptions};
pub use extend::{extend, extend_odd_on, extend_on, REFLECTION};
pub use faddeeva::faddeeva;
pub use kernel::{kernel_kt, kernel_kt_contour, kernel_sup, KernelBox};
pub use line::{
    edge_mass_fraction, free_field_line, free_propagator_line, line_duhamel_field, TruncatedLine,
    TRUNCATION_WARN_FRACTION,
};
pub use solve::{solve_linear_halfline, ExtensionKind, HalfLineOptions, HalfLineWorkspace};
pub use symbol::{
    default_symbol, laplace_symbol, wb1, wb2, BetaGridSpec, LaplaceBoundarySymbol, DEFAULT_BANDWIDTH_TOL,
};
