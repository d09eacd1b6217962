#include <iostream>

#include "vcsim/commands.hpp"

int main(int argc, char** argv) { return vcsim::run_cli(argc, argv, std::cout, std::cerr); }
