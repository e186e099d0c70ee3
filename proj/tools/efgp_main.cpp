#include "efgp/cli.hpp"

int main(int argc, char** argv) { return efgp::cli_main(argc, argv); }
