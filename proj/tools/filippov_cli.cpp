#include <iostream>

#include "filippov/cli.hpp"

int main(int argc, char **argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return filippov::run_cli(args, std::cout, std::cerr);
}
