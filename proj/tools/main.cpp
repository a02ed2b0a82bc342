#include <iostream>

#include "vipdist/commands.hpp"

int main(int argc, char** argv) { return vipdist::cli::run(argc, argv, std::cout, std::cerr); }
