#include <iostream>

#include "run.hpp"

int main(int argc, char** argv) { return spectrakit::cli::main_entry(argc, argv, std::cout, std::cerr); }
