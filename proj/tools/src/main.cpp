#include <iostream>

#include "csign_cli/app.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return csign::cli::run(args, std::cout, std::cerr);
}
