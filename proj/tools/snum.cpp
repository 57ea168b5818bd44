#include "snum/cli.hpp"

int main(int argc, char** argv) { return snum::cli::run(argc, argv); }
