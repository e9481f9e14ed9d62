#include <iostream>

#include "goldbach_lab/cli.hpp"

int main(int argc, char** argv) { return goldbach_lab::run_cli(argc, argv, std::cout, std::cerr); }
