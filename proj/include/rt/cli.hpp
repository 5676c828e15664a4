// Batch front end: build-dataset, synth, and analyze subcommands. Every run
// is reproducible byte-for-byte from (inputs, flags, seed).
#pragma once

#include <string>
#include <vector>

namespace rt::cli {

// Exit codes: 0 success, 2 configuration error, 3 data error.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace rt::cli
