#include <iostream>

#include "copulacpd/cli.hpp"

int main(int argc, char** argv) { return copulacpd::run_cli(argc, argv, std::cout, std::cerr); }
