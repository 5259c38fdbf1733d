#include "cychom/cli.hpp"

int main(int argc, char** argv) { return cychom::run_cli(argc, argv); }
