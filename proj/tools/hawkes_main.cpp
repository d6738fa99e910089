#include "hawkes/cli_app.hpp"

int main(int argc, char** argv) { return hawkes::cli::run(argc, argv); }
