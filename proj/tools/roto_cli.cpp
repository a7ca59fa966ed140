#include "cli_commands.hpp"

int main(int argc, char** argv) { return roto::cli::run(argc, argv); }
