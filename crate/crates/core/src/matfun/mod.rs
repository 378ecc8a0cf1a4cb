//! Matrix functions: `e^M`, `φ_j(M)` and their Krylov actions.
//!
//! `φ_0(z) = e^z` and `φ_{j+1}(z) = (φ_j(z) - 1/j!)/z`, `φ_{j+1}(0) = 1/(j+1)!`.

mod expm;
mod krylov;
mod phi;

pub use expm::expm_dense;
pub use krylov::{krylov_phi_apply, KrylovConfig, KrylovPropagator};
pub use phi::{phi_dense, phi_scalar, PhiTable, TOL_PHI};
