#include <iostream>
#include <string>
#include <vector>

#include "symhom/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return symhom::cli::run(args, std::cout, std::cerr);
}
