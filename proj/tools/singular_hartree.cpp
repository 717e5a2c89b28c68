#include <iostream>

#include "shartree/runner.hpp"

int main(int argc, char** argv) { return sh::cli_main(argc, argv, std::cout, std::cerr); }
