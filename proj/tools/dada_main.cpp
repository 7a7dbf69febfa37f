// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "dada/cli/cli.hpp"

int main(int argc, char** argv) { return dada::cli::run(argc, argv, std::cout, std::cerr); }
