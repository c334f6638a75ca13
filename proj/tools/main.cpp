#include "commands.hpp"

int main(int argc, char** argv) { return volcast::cli::run(argc, argv); }
