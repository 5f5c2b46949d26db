#include <string>
#include <vector>

#include "cutplane/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return cutplane::cli::dispatch(args);
}
