#include <iostream>

#include "kptau/commands.hpp"

int main(int argc, char** argv) { return kptau::run_cli(argc, argv, std::cout, std::cerr); }
