#include "fiscale/cli.hpp"

int main(int argc, char** argv) { return fiscale::cli::run(argc, argv); }
