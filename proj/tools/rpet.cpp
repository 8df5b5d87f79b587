#include <iostream>
#include <string>
#include <vector>

#include "rpet/cli.hpp"

int main(int argc, char** argv) {
    return rpet::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
