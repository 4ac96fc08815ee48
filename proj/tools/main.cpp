#include "polyserendip/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return polyserendip::run_cli(argc, argv, std::cout, std::cerr);
}
