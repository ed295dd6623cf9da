#include "latstab_cli/cli.hpp"

int main(int argc, char** argv) { return latstab::cli::run(argc, argv); }
