#include "spinsqueeze/runner.hpp"

int main(int argc, char** argv) { return sqz::cli_main(argc, argv); }
