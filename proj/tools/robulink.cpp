#include <string>
#include <vector>

#include "robulink/cli/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return robulink::run_cli(args, {});
}
