#include "rt/cli.hpp"

int main(int argc, char** argv) { return rt::cli::run(argc, argv); }
