#include "cli.hpp"

int main(int argc, char** argv) { return trip::cli::run(argc, argv, std::cout, std::cerr); }
