//! Network data analytics function.
