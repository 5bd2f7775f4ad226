#include "much/cli.hpp"

int main(int argc, char** argv) { return much::cli::main(argc, argv); }
