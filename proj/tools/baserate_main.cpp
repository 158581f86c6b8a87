#include <iostream>
#include <string>
#include <vector>

#include "baserate/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return baserate::cli::run(args, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return baserate::cli::kExitInternal;
    }
}
