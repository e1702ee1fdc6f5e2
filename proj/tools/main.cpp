#include <iostream>

#include "nfkp/cli.hpp"

int main(int argc, char** argv) { return nfkp::cli::run(argc, argv, std::cout, std::cerr); }
