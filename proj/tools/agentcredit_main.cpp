#include <iostream>

#include "agentcredit/cli.hpp"

int main(int argc, char** argv) { return agentcredit::cli::run(argc, argv, std::cout, std::cerr); }
