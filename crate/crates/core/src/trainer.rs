//! Trainer stub.
