//! Conformal deformation laboratory. Placeholder.
