#include "seleq/cli.hpp"

int main(int argc, char** argv) { return seleq::run_cli(argc, argv); }
