#include "cfprod/cli.hpp"

int main(int argc, char** argv) { return cfprod::cli::run(argc, argv); }
