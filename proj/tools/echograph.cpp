#include "echograph/cli.hpp"

int main(int argc, char** argv) { return echograph::cli::run(argc, argv); }
