#include "cifc/cli.hpp"

int main(int argc, char** argv) { return cifc::cli::run(argc, argv); }
