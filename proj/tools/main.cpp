#include <vector>
#include <string>

#include "mizo/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return mizo::cli_main(args);
}
