#include "derham/cli.hpp"

int main(int argc, char **argv) { return derham::cli::run(argc, argv); }
