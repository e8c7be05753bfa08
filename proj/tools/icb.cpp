#include "icb/cli.hpp"

int main(int argc, char** argv) { return icb::cli_main(argc, argv); }
