#include <iostream>
#include <string>
#include <vector>

#include "hedra/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return hedra::run_cli(args, std::cout, std::cerr);
}
