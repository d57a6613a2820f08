//! Scenario configuration.
