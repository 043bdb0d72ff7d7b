#include "cli.hpp"

int main(int argc, char** argv) { return bntr::cli::run(argc, argv); }
