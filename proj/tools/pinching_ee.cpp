// SPDX-License-Identifier: Apache-2.0

#include "pinching/cli_io.hpp"

#include <iostream>

int main(int argc, char **argv)
{
    return pinching::run_cli(argc, argv, std::cout, std::cerr);
}
