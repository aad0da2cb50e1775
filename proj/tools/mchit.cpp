#include <iostream>

#include "mchit/cli.hpp"

int main(int argc, char** argv) { return mchit::run(argc, argv, std::cout, std::cerr); }
