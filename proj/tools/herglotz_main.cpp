#include "herglotz/cli.hpp"

int main(int argc, char** argv) { return herglotz::cli_main(argc, argv); }
