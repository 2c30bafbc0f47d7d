#include <iostream>

#include "relent/harness.hpp"

int main(int argc, char** argv) { return relent::cli_main(argc, argv, std::cout, std::cerr); }
