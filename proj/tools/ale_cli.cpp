#include "commands.hpp"

int main(int argc, char** argv) { return ale::cli::run(argc, argv); }
