#include "reclab/cli.hpp"

int main(int argc, char** argv) { return reclab::cli::run(argc, argv); }
