#include "congra/cli.hpp"

int main(int argc, char** argv) { return congra::cli::main(argc, argv); }
