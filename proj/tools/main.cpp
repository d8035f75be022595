#include "cellprobe/cli.hpp"

int main(int argc, char** argv) { return cellprobe::run_cli(argc, argv); }
