#include "biortho_cli/cli.hpp"

int main(int argc, char** argv) { return biortho::cli::main_entry(argc, argv); }
