#include <iostream>
#include <string>
#include <vector>

#include "evfin/cli.hpp"

int main(int argc, char* argv[]) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return evfin::run_cli(args, std::cout, std::cerr);
}
