#include "matsim/cli.hpp"

int main(int argc, char** argv) { return matsim::cli::run(argc, argv); }
