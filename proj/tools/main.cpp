#include <iostream>
#include <string>
#include <vector>

#include "tdl/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return tdl::dispatch(args, std::cout, std::cerr);
}
