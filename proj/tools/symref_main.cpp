// Copyright (c) 2026 The symref authors
// SPDX-License-Identifier: Apache-2.0

#include "symref/instances.hpp"

int main(int argc, char** argv) { return symref::run_cli(argc, argv); }
