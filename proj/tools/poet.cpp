#include "poet/cli.hpp"

int main(int argc, char** argv) { return poet::cli::run(argc, argv); }
