#include <iostream>

#include "wscat/runner.hpp"

int main(int argc, char** argv) { return wscat::run_cli(argc, argv, std::cout, std::cerr); }
