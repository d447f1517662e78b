#include <iostream>

#include <lexconn/cli.hpp>

int main(int argc, char** argv) { return lexconn::cli::run(argc, argv, std::cout, std::cerr); }
