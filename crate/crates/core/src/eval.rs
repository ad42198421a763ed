//! Eval stub.
