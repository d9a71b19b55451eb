#include <iostream>

#include "kida/cli.hpp"

int main(int argc, char** argv) { return kida::main_entry(argc, argv, std::cout, std::cerr); }
