#include "cli/commands.hpp"

int main(int argc, char** argv) { return subtag::cli::run(argc, argv); }
