#include <iostream>

#include "hsvol/cli.hpp"

int main(int argc, char** argv) { return hsvol::cli::run(argc, argv, std::cout, std::cerr); }
