//! Shared plumbing for the `peaceful` command-line tool and its HTTP service.

pub mod api;
pub mod service;
