#include "semiwave/cli.hpp"

int main(int argc, char** argv) { return semiwave::cli::run(argc, argv); }
