#include <iostream>

#include "vfg/cli.hpp"

int main(int argc, char** argv) { return vfg::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr); }
