#include <iostream>

#include "rigor/cli.hpp"

int main(int argc, char** argv) { return rigor::run_cli({argv + 1, argv + argc}, std::cout, std::cerr); }
