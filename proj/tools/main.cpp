#include <iostream>

#include "wright/cli.hpp"

int main(int argc, char** argv) { return wright::run_cli(argc, argv, std::cout, std::cerr); }
