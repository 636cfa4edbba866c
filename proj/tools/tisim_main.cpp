#include <iostream>

#include "tisim/app.hpp"

int main(int argc, char** argv) { return tisim::run_cli(argc, argv, std::cout, std::cerr); }
