#include "uscg/cli.hpp"

int main(int argc, char** argv) { return uscg::cli(argc, argv); }
