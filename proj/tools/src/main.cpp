#include <iostream>

#include "sedgkit/cli.hpp"

int main(int argc, char** argv) {
    return sedgkit::cli::run(argc, argv, std::cout, std::cerr);
}
