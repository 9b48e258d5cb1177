//! Dense polynomials: univariate, binary forms, ternary forms, pencils of
//! cubics, the characteristic-2 Hessian and Sylvester resultants.

mod forms;
mod hessian;
mod plane;
mod resultant;
mod univariate;

pub use forms::{root_orders, ternary_index, ternary_len, BinaryForm, TernaryCubicT, TernaryForm, P1};
pub use hessian::{
    cubic_monomial, derive_char2_hessian, hessian_on_line, render_formula, GenericHessianFormula,
    LineTerm, MonoKey, ZPoly,
};
pub use plane::{conic_is_degenerate, plane_singular_points, PlaneSingularLocus};
pub use resultant::{linear_resultant_closed_form, sylvester_resultant, FormPoly, ResultantError};
pub use univariate::{interpolate, InterpolationError, Poly};
