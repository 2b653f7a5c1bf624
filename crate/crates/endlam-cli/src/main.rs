// SPDX-License-Identifier: MIT OR Apache-2.0
//! The `endlam` binary: see [`endlam_cli::run`].

fn main() {
    std::process::exit(endlam_cli::run(std::env::args_os()));
}
