//! Config stub.
