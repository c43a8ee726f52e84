#include <iostream>
#include <string>
#include <vector>

#include "vidmetrics/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return vidmetrics::run_command(args, std::cout, std::cerr);
}
