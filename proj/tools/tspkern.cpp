#include "tspk/cli.hpp"

int main(int argc, char** argv) { return tspk::cli::run(argc, argv); }
