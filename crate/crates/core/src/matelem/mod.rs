//! Matrix elements: Airy product integrals, exact moment recursion,
//! oscillator recursions, closed forms and a quadrature oracle.

mod closed;
mod gordon;
mod moments;
mod quad;
mod recursion;

pub use closed::{
    dipole_half_sho, dipole_half_sho_squared, dipole_linear, dipole_linear_from, even_even_z2,
    even_even_z2_from, half_sho_y2, half_sho_y3, odd_odd_z2,
};
pub use gordon::{derivative_integral, gordon_integral, AiryProductIntegral, COINCIDENT_SHIFT_TOL};
pub use moments::{moment_recursion_airy, moment_table, MomentExpression, MomentTerm};
pub use quad::{quad_abs_moment, quad_half_line, quad_kinetic, quad_matrix_element, DECAY_MARGIN};
pub use recursion::{airy_offdiagonal, ladder_element, oscillator_recursion, SurfaceData};
