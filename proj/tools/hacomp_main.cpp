#include "hacomp/cli.hpp"

int main(int argc, char** argv) { return hacomp::cli::run(argc, argv); }
