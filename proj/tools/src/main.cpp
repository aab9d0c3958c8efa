#include <iostream>

#include "qcqp_cli/commands.hpp"

int main(int argc, char** argv) { return qcqp::cli::run(argc, argv, std::cout, std::cerr); }
