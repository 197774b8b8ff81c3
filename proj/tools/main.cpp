// Copyright 2026 The SqueezeLab Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "squeezelab/cli.hpp"

int main(int argc, char** argv) { return squeezelab::run_cli(argc, argv, std::cout, std::cerr); }
