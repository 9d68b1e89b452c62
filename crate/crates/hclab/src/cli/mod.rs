//! Command-line interface behind the `hclab` binary.

pub fn run() -> i32 {
    0
}
