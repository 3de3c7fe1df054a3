#include <iostream>

#include <varmetrics/cli.hpp>

int main(int argc, char** argv) {
    return varmetrics::run_cli(argc, argv, std::cout, std::cerr);
}
