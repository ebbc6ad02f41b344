#include "gl3twist/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return gl3twist::run(argc, argv, std::cout, std::cerr); }
