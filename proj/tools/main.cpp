#include "logshift/cli.hpp"

int main(int argc, char** argv) { return logshift::run_cli(argc, argv); }
