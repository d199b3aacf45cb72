#include "arc/cli.hpp"

int main(int argc, char** argv) { return arc::cli::run(argc, argv); }
