//! Library half of the command-line driver: seeded term generation and the
//! benchmark runner, reusable from tests.

pub mod bench;
pub mod gen;

pub use bench::{run_bench, to_csv, BenchError, BenchRow, CSV_HEADER, DEFAULT_REPS, RESAMPLE_CAP};
pub use gen::{gen_term, GenError, GenSpec, SymbolMix, TermGen};
