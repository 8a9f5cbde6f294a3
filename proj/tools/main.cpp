#include "vcm/cli.hpp"

#include <vector>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return vcm::cli::run(args);
}
