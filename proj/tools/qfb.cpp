#include <iostream>

#include "qfb/commands.hpp"

int main(int argc, char** argv) { return qfb::run_cli(argc, argv, std::cout, std::cerr); }
