#include <iostream>

#include "verdalca/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return verdalca::run_cli(args, std::cout, std::cerr);
}
