#include <iostream>

#include "homlab/cli.hpp"

int main(int argc, char** argv) { return homlab::cli::run(argc, argv, std::cout, std::cerr); }
