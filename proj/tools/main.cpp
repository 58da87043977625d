#include "liouville/cli.hpp"

int main(int argc, char** argv) { return liouville::cli::run(argc, argv); }
