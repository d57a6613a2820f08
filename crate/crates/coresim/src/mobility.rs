//! Activity-based mobility model.
