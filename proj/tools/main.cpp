#include "commands.hpp"

int main(int argc, char** argv) { return frames::cli::run_command(argc, argv); }
