//! IO stub.
