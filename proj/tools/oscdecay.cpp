#include "oscdecay/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return oscdecay::run_cli(argc, argv, std::clog, std::cerr); }
