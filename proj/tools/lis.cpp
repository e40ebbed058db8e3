#include <iostream>

#include "lis/commands.hpp"

int main(int argc, char** argv) { return lis::run_command(argc, argv, std::cout, std::cerr); }
