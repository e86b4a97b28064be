//! Acceptance criteria runners. Placeholder.
