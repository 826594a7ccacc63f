#include <iostream>
#include <string>
#include <vector>

#include "qsvm/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return qsvm::run_cli(args, std::cout, std::cerr);
}
