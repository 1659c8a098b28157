#include <iostream>

#include "usctopo/commands.hpp"

int main(int argc, char** argv) { return usctopo::main_entry(argc, argv, std::cout, std::cerr); }
