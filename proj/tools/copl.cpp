#include <iostream>

#include "copl/cli/driver.hpp"

int main(int argc, char** argv) { return copl::cli::main(argc, argv, std::cout, std::cerr); }
