// Copyright 2026 The relatherm Authors
// SPDX-License-Identifier: Apache-2.0

fn main() {
    env_logger::init();
    std::process::exit(relatherm::cli::main_with_args(std::env::args_os()));
}
