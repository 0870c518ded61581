#include <iostream>

#include "catdec/cli.hpp"

int main(int argc, char** argv) { return catdec::cli::run(argc, argv, std::cout, std::cerr); }
