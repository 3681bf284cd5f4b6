#include <iostream>

#include "ivstab/cli.hpp"

int main(int argc, char** argv) {
    return ivstab::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
