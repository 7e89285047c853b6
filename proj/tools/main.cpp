#include "dou/cli.hpp"

int main(int argc, char** argv) { return dou::cli_main(argc, argv); }
