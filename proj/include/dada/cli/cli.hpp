// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>

namespace dada::cli {

// Exit codes of `run`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;  // data, config, checkpoint and mode errors
inline constexpr int kExitNumeric = 3;

// Entry point of the `dada` executable. Subcommands: gen, transform,
// train-backbone, train-adapter, train-fusion, eval, analyze, pipeline.
// Relative output paths resolve against $DADA_RUN_DIR when it is set.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dada::cli
