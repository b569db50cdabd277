#include <iostream>

#include "resopt/cli.hpp"

int main(int argc, char** argv) { return resopt::cli::run(argc, argv, std::cout, std::cerr); }
