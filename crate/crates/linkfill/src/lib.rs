//! Std front end for `linkfill-core`: JSON schemas, parallel drivers and
//! text rendering shared by the `linkfill` binary and its tests.

pub mod json;
pub mod parallel;
pub mod render;

pub use linkfill_core as core;

use linkfill_core::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_STRUCTURE: u8 = 3;
pub const EXIT_FAILED: u8 = 4;

/// Exit code for a library error: bad input is a usage error, anything the
/// mathematics rejects is structural.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. }
        | Error::InvalidArgument(_)
        | Error::InvalidLink(_)
        | Error::DimensionMismatch(..)
        | Error::NotInCommutatorSubgroup
        | Error::NotInLowerCentral { .. }
        | Error::DegenerateCommutator => EXIT_USAGE,
        _ => EXIT_STRUCTURE,
    }
}
