// Copyright 2026 The piou Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

int main(int argc, char** argv) { return piou::cli::run(argc, argv); }
