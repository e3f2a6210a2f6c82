#include "ess_cli.hpp"

int main(int argc, char** argv) { return ess::cli::main_entry(argc, argv); }
