#include "cli.hpp"

int main(int argc, char** argv) { return boltzmap::cli::run(argc, argv); }
