#include "lowcolor/cli.hpp"

int main(int argc, char** argv) { return lowcolor::run_cli(argc, argv); }
