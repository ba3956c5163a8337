#include "intermed/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return intermed::cli::run(argc, argv, std::cout, std::cerr);
}
