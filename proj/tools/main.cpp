#include "tropinit/cli.hpp"

int main(int argc, char** argv) { return tropinit::run_cli(argc, argv); }
