#include <iostream>
#include <string>
#include <vector>

#include "pathamp/cli/app.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return pathamp::cli::run(std::move(args), std::cout, std::cerr);
}
