#include "dipiir_app/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return dipiir::app::run_cli(argc, argv, std::cout, std::cerr); }
