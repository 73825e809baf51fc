#include <iostream>

#include "lrw/cli.hpp"

int main(int argc, char** argv) { return lrw::cli::run(argc, argv, std::cout, std::cerr); }
