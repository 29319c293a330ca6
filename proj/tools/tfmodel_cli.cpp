#include <iostream>

#include "tfmodel/cli.hpp"

int main(int argc, char** argv)
{
    return tfmodel::run_cli(argc, argv, std::cout, std::cerr);
}
